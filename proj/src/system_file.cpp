#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "binoether/errors.hpp"
#include "binoether/system.hpp"

namespace binoether {

namespace {

struct Entry {
  std::size_t line = 0;
  std::string key;
  std::size_t key_column = 0;
  std::string value;
  std::size_t value_column = 0;
};

struct Section {
  std::size_t line = 0;
  std::vector<Entry> entries;
};

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r'; }

// Trimmed view of s[begin, end) together with its start offset.
std::pair<std::string, std::size_t> trimmed(std::string_view s, std::size_t begin, std::size_t end) {
  while (begin < end && is_space(s[begin])) ++begin;
  while (end > begin && is_space(s[end - 1])) --end;
  return {std::string(s.substr(begin, end - begin)), begin};
}

const std::set<std::string, std::less<>> kSections = {"system", "poisson", "hamiltonian", "symmetry"};

std::map<std::string, Section, std::less<>> split_sections(std::string_view text, std::size_t& line_count) {
  std::map<std::string, Section, std::less<>> sections;
  Section* current = nullptr;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, nl - pos);
    ++line_no;
    pos = nl + 1;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);

    auto [content, start] = trimmed(line, 0, line.size());
    if (content.empty()) continue;

    if (content.front() == '[') {
      if (content.back() != ']')
        throw SystemFileError(line_no, start + content.size() + 1, "expected ']' to close section header");
      auto [name, name_start] = trimmed(content, 1, content.size() - 1);
      if (!kSections.contains(name))
        throw SystemFileError(line_no, start + name_start + 1,
                              "unknown section [" + name + "]; expected system, poisson, hamiltonian or symmetry");
      if (sections.contains(name)) throw SystemFileError(line_no, start + 1, "duplicate section [" + name + "]");
      current = &sections[name];
      current->line = line_no;
      continue;
    }

    if (!current) throw SystemFileError(line_no, start + 1, "entry outside of any section");
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) throw SystemFileError(line_no, start + 1, "expected 'key = value'");
    Entry e;
    e.line = line_no;
    std::tie(e.key, e.key_column) = trimmed(line, 0, eq);
    std::tie(e.value, e.value_column) = trimmed(line, eq + 1, line.size());
    ++e.key_column;
    ++e.value_column;
    if (e.key.empty()) throw SystemFileError(line_no, start + 1, "missing key before '='");
    if (e.value.empty()) throw SystemFileError(line_no, eq + 2, "missing value after '='");
    current->entries.push_back(std::move(e));
  }
  line_count = line_no;
  return sections;
}

struct Coordinate {
  int index;
  std::string name;
};

// Parses "F(a)" or "F(a,b)" and resolves the coordinate names.
std::vector<Coordinate> component_key(const Entry& e, char letter, std::size_t arity, const PhaseSpace& space) {
  const std::string& k = e.key;
  const std::string form = arity == 1 ? std::string(1, letter) + "(coord)" : std::string(1, letter) + "(coord,coord)";
  if (k.size() < 3 || k[0] != letter || k[1] != '(' || k.back() != ')')
    throw SystemFileError(e.line, e.key_column, "expected a key of the form " + form);
  std::vector<Coordinate> out;
  std::size_t begin = 2;
  while (true) {
    const std::size_t comma = std::min(k.find(',', begin), k.size() - 1);
    auto [name, offset] = trimmed(k, begin, comma);
    const std::size_t column = e.key_column + offset;
    const auto index = space.index_of(name);
    if (name.empty()) throw SystemFileError(e.line, column, "missing coordinate name");
    if (!index) throw SystemFileError(e.line, column, "unknown coordinate '" + name + "'");
    out.push_back({*index, name});
    if (comma == k.size() - 1) break;
    begin = comma + 1;
  }
  if (out.size() != arity) throw SystemFileError(e.line, e.key_column, "expected a key of the form " + form);
  return out;
}

ScalarExpr expression(const Entry& e, const PhaseSpace& space) {
  try {
    return parse(e.value, space);
  } catch (const ParseError& err) {
    throw SystemFileError(e.line, e.value_column + err.position(), err.what());
  }
}

}  // namespace

SystemSpec parse_system(std::string_view text) {
  std::size_t line_count = 0;
  const auto sections = split_sections(text, line_count);
  for (const auto& name : kSections)
    if (!sections.contains(name))
      throw SystemFileError(line_count, 1, "missing mandatory section [" + name + "]");

  std::string name = "system";
  std::optional<int> dof;
  {
    std::set<std::string> seen;
    for (const auto& e : sections.find("system")->second.entries) {
      if (!seen.insert(e.key).second) throw SystemFileError(e.line, e.key_column, "duplicate key '" + e.key + "'");
      if (e.key == "name") {
        name = e.value;
        if (name.size() >= 2 && name.front() == '"' && name.back() == '"') name = name.substr(1, name.size() - 2);
      } else if (e.key == "dof") {
        int n = 0;
        const auto [ptr, ec] = std::from_chars(e.value.data(), e.value.data() + e.value.size(), n);
        if (ec != std::errc() || ptr != e.value.data() + e.value.size())
          throw SystemFileError(e.line, e.value_column, "dof must be an integer");
        if (n < 1 || n > kMaxDof)
          throw SystemFileError(e.line, e.value_column, "dof must be between 1 and " + std::to_string(kMaxDof));
        dof = n;
      } else {
        throw SystemFileError(e.line, e.key_column, "unknown key '" + e.key + "' in [system]; expected name or dof");
      }
    }
    if (!dof) throw SystemFileError(sections.find("system")->second.line, 1, "[system] must set dof");
  }

  const PhaseSpace space(*dof);
  SystemSpec spec{name, space, MultiVectorField(space, 2), ScalarExpr(), MultiVectorField(space, 1)};

  const Section& poisson = sections.find("poisson")->second;
  if (poisson.entries.empty()) throw SystemFileError(poisson.line, 1, "bivector W required");
  std::set<std::pair<int, int>> seen_pairs;
  for (const auto& e : poisson.entries) {
    const auto c = component_key(e, 'W', 2, space);
    if (c[0].index == c[1].index)
      throw SystemFileError(e.line, e.key_column, "diagonal component " + e.key + " of an antisymmetric bivector");
    if (c[0].index > c[1].index)
      throw SystemFileError(e.line, e.key_column,
                            e.key + " is not in increasing coordinate order; write W(" + c[1].name + "," + c[0].name +
                                ") = -(" + e.value + ") instead");
    if (!seen_pairs.insert({c[0].index, c[1].index}).second)
      throw SystemFileError(e.line, e.key_column, "duplicate key '" + e.key + "'");
    spec.W.set(c[0].index, c[1].index, expression(e, space));
  }

  const Section& hamiltonian = sections.find("hamiltonian")->second;
  if (hamiltonian.entries.empty()) throw SystemFileError(hamiltonian.line, 1, "hamiltonian h required");
  for (std::size_t i = 0; i < hamiltonian.entries.size(); ++i) {
    const Entry& e = hamiltonian.entries[i];
    if (e.key != "h") throw SystemFileError(e.line, e.key_column, "expected 'h = <expr>'");
    if (i > 0) throw SystemFileError(e.line, e.key_column, "duplicate key 'h'");
    spec.h = expression(e, space);
  }

  const Section& symmetry = sections.find("symmetry")->second;
  if (symmetry.entries.empty()) throw SystemFileError(symmetry.line, 1, "generator E required");
  std::set<int> seen_coords;
  for (const auto& e : symmetry.entries) {
    const auto c = component_key(e, 'E', 1, space);
    if (!seen_coords.insert(c[0].index).second)
      throw SystemFileError(e.line, e.key_column, "duplicate key '" + e.key + "'");
    spec.E.set(c[0].index, expression(e, space));
  }
  return spec;
}

SystemSpec load_system(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open system file '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_system(buffer.str());
  } catch (const SystemFileError& e) {
    throw SystemFileError(e.line(), e.column(), e.message(), path.string());
  }
}

}  // namespace binoether

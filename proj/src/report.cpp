#include "binoether/report.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <optional>

#include "binoether/errors.hpp"
#include "json.hpp"

namespace binoether {

namespace {

using json = nlohmann::ordered_json;

CheckRecord failed(std::string id, std::string anchor, const std::exception& e) {
  CheckRecord r;
  r.id = std::move(id);
  r.anchor = std::move(anchor);
  r.residual = std::numeric_limits<double>::infinity();
  r.pass = false;
  r.notes = e.what();
  return r;
}

CheckRecord vacuous(std::string id, std::string anchor) {
  CheckRecord r;
  r.id = std::move(id);
  r.anchor = std::move(anchor);
  r.pass = true;
  r.notes = "vacuous: What = 0 for a Noether generator, every invariant vanishes";
  return r;
}

// Runs a check that yields `ids.size()` records; on error every slot fails.
void guarded(std::vector<CheckRecord>& out, const std::vector<std::pair<std::string, std::string>>& ids,
             const std::function<std::vector<CheckRecord>()>& fn) {
  try {
    for (auto& r : fn()) out.push_back(std::move(r));
  } catch (const std::exception& e) {
    for (const auto& [id, anchor] : ids) out.push_back(failed(id, anchor, e));
  }
}

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }
double number_from(const json& j) {
  return j.is_null() ? std::numeric_limits<double>::infinity() : j.get<double>();
}

json numbers(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(number(x));
  return a;
}
std::vector<double> numbers_from(const json& j) {
  std::vector<double> v;
  for (const auto& x : j) v.push_back(number_from(x));
  return v;
}

}  // namespace

CheckReport run_report(const SystemSpec& spec, const CheckConfig& cfg) {
  cfg.validate();
  CheckReport report;
  report.name = spec.name;
  report.dof = spec.space.dof();
  report.config = cfg;
  auto& out = report.checks;
  const auto one = [](CheckRecord r) { return std::vector<CheckRecord>{std::move(r)}; };

  guarded(out, {{"jacobi", "[W, W] = 0"}}, [&] { return one(check_jacobi(spec.W, cfg)); });
  guarded(out, {{"regularity", "W^n != 0"}}, [&] { return one(check_regularity(spec.W, cfg)); });
  guarded(out, {{"symmetry", "[E, W(h)] = 0"}}, [&] { return one(check_symmetry(spec.E, spec.W, spec.h, cfg)); });
  guarded(out, {{"non_noether", "[E, W] != 0"}}, [&] { return one(check_non_noether(spec.E, spec.W, cfg)); });
  const bool noether = is_noether(out.back());
  guarded(out, {{"yang_baxter", "[[E, [E, W]], W] = 0"}}, [&] { return one(check_yang_baxter(spec.E, spec.W, cfg)); });

  std::optional<MultiVectorField> what;
  try {
    what = lie_derivative_mv(spec.E, spec.W);
  } catch (const std::exception&) {
  }
  guarded(out, {{"compatibility", "[What, W] = 0"}, {"what_poisson", "[What, What] = 0"}}, [&] {
    if (!what) throw Error("L_E W could not be formed");
    return check_compatibility(spec.W, *what, cfg);
  });

  const std::string spectrum_anchor = "Y(l) = e_l(c_1..c_n) / C(n,l)";
  const std::string drift_anchor = "d/dt Y(l) = 0 and d/dt c_i = 0 along W(h)";
  if (noether) {
    out.push_back(vacuous("spectrum", spectrum_anchor));
    out.push_back(vacuous("conservation", drift_anchor));
    out.push_back(vacuous("involution", "{Y(k), Y(l)} = 0"));
    out.push_back(vacuous("involution_what", "{Y(k), Y(l)}_What = 0"));
  } else {
    guarded(out, {{"spectrum", spectrum_anchor}}, [&] {
      if (!what) throw Error("L_E W could not be formed");
      return one(check_spectrum(spec.W, *what, cfg, &report.spectrum_samples));
    });
    guarded(out, {{"conservation", drift_anchor}}, [&] {
      const PhasePoint start = cfg.start ? *cfg.start : sample_regular_points(spec.W, cfg).front();
      return one(conservation_drift(spec.W, spec.E, spec.h, start, cfg).record);
    });
    guarded(out, {{"involution", "{Y(k), Y(l)} = 0"}, {"involution_what", "{Y(k), Y(l)}_What = 0"}},
            [&] { return check_involution(spec.W, spec.E, cfg); });
  }

  report.verdict = true;
  for (const auto& r : out)
    if (r.mandatory && !r.pass) report.verdict = false;
  return report;
}

std::string to_json(const CheckReport& report) {
  json j;
  j["name"] = report.name;
  j["dof"] = report.dof;
  const CheckConfig& c = report.config;
  j["config"] = {{"samples", c.samples},
                 {"box", c.box},
                 {"seed", c.seed},
                 {"tolerance", c.tolerance},
                 {"horizon", c.horizon},
                 {"dt", c.dt},
                 {"drift_tolerance", c.drift_tolerance},
                 {"flow_error_bound", c.flow_error_bound},
                 {"start", c.start ? numbers(std::vector<double>(c.start->coords().begin(), c.start->coords().end()))
                                   : json(nullptr)},
                 {"policy", to_string(c.policy)}};
  j["checks"] = json::array();
  for (const auto& r : report.checks) {
    j["checks"].push_back({{"id", r.id},
                           {"paper_anchor", r.anchor},
                           {"residual", number(r.residual)},
                           {"scale", number(r.scale)},
                           {"pass", r.pass},
                           {"mandatory", r.mandatory},
                           {"points", r.points},
                           {"notes", r.notes}});
  }
  j["spectrum_samples"] = json::array();
  for (const auto& s : report.spectrum_samples) {
    json o = {{"point", numbers(s.point)},
              {"roots", numbers(s.roots)},
              {"y_wedge", numbers(s.y_wedge)},
              {"y_roots", numbers(s.y_roots)}};
    if (!s.error.empty()) o["error"] = s.error;
    j["spectrum_samples"].push_back(std::move(o));
  }
  j["verdict"] = report.verdict ? "pass" : "fail";
  return j.dump(2) + "\n";
}

CheckReport report_from_json(const std::string& text) {
  const json j = json::parse(text);
  CheckReport r;
  r.name = j.at("name").get<std::string>();
  r.dof = j.at("dof").get<int>();
  const json& c = j.at("config");
  r.config.samples = c.at("samples").get<int>();
  r.config.box = c.at("box").get<double>();
  r.config.seed = c.at("seed").get<std::uint64_t>();
  r.config.tolerance = c.at("tolerance").get<double>();
  r.config.horizon = c.at("horizon").get<double>();
  r.config.dt = c.at("dt").get<double>();
  r.config.drift_tolerance = c.at("drift_tolerance").get<double>();
  r.config.flow_error_bound = c.at("flow_error_bound").get<double>();
  if (!c.at("start").is_null()) r.config.start = PhasePoint(numbers_from(c.at("start")));
  r.config.policy = c.at("policy").get<std::string>() == "serial" ? ExecutionPolicy::Serial : ExecutionPolicy::OpenMP;
  for (const auto& o : j.at("checks")) {
    CheckRecord rec;
    rec.id = o.at("id").get<std::string>();
    rec.anchor = o.at("paper_anchor").get<std::string>();
    rec.residual = number_from(o.at("residual"));
    rec.scale = number_from(o.at("scale"));
    rec.pass = o.at("pass").get<bool>();
    rec.mandatory = o.at("mandatory").get<bool>();
    rec.points = o.at("points").get<int>();
    rec.notes = o.at("notes").get<std::string>();
    r.checks.push_back(std::move(rec));
  }
  for (const auto& o : j.at("spectrum_samples")) {
    SpectrumSample s;
    s.point = numbers_from(o.at("point"));
    s.roots = numbers_from(o.at("roots"));
    s.y_wedge = numbers_from(o.at("y_wedge"));
    s.y_roots = numbers_from(o.at("y_roots"));
    if (o.contains("error")) s.error = o.at("error").get<std::string>();
    r.spectrum_samples.push_back(std::move(s));
  }
  r.verdict = j.at("verdict").get<std::string>() == "pass";
  return r;
}

std::string to_text(const CheckReport& report) {
  std::string out = "system " + report.name + " (n = " + std::to_string(report.dof) + ")\n";
  char buf[160];
  for (const auto& r : report.checks) {
    const char* status = r.pass ? (r.mandatory ? "pass" : "info") : "FAIL";
    std::snprintf(buf, sizeof buf, "  %-16s %-4s  residual %-10.3e  %s\n", r.id.c_str(), status, r.residual,
                  r.anchor.c_str());
    out += buf;
    if (!r.notes.empty()) out += "  " + std::string(16, ' ') + "       " + r.notes + "\n";
  }
  out += std::string("verdict: ") + (report.verdict ? "pass" : "fail") + "\n";
  return out;
}

}  // namespace binoether

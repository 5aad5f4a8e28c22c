// Command-line front end: load a system, run checks, print or save reports.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "binoether/errors.hpp"
#include "binoether/report.hpp"
#include "binoether/spectral.hpp"
#include "binoether/system.hpp"
#include "binoether/verify.hpp"

using namespace binoether;

namespace {

struct SystemArgs {
  std::string file;
  std::string builtin_name;
  int n = 1;

  void add(CLI::App* app) {
    app->add_option("system", file, "System file");
    app->add_option("--builtin", builtin_name, "Built-in system: dissipative, canonical-noether, broken-generator");
    app->add_option("--n", n, "Degrees of freedom of the built-in system")->check(CLI::Range(1, kMaxDof));
  }

  SystemSpec load() const {
    if (!file.empty() && !builtin_name.empty()) throw CLI::ValidationError("give either a system file or --builtin");
    if (!builtin_name.empty()) return builtin(builtin_name, n);
    if (file.empty()) throw CLI::ValidationError("a system file or --builtin NAME is required");
    return load_system(file);
  }
};

struct ConfigArgs {
  CheckConfig cfg;
  std::string from;
  bool serial = false;

  void add(CLI::App* app) {
    app->add_option("--points", cfg.samples, "Sample points per check")->capture_default_str();
    app->add_option("--seed", cfg.seed, "Sampling seed")->capture_default_str();
    app->add_option("--tol", cfg.tolerance, "Relative residual tolerance")->capture_default_str();
    app->add_option("--box", cfg.box, "Sampling box half-width")->capture_default_str();
    app->add_option("--drift-tol", cfg.drift_tolerance, "Relative drift tolerance")->capture_default_str();
    app->add_option("--flow-error", cfg.flow_error_bound, "Bound on the flow error estimate per unit time")
        ->capture_default_str();
    app->add_option("--t-end", cfg.horizon, "Flow horizon")->capture_default_str();
    app->add_option("--dt", cfg.dt, "Flow step")->capture_default_str();
    app->add_option("--from", from, "Start of the conservation run, e.g. q1=0.5,p1=1");
    app->add_flag("--serial", serial, "Evaluate sample points on one thread");
  }

  CheckConfig resolve(const PhaseSpace& space) {
    CheckConfig out = cfg;
    out.policy = serial ? ExecutionPolicy::Serial : ExecutionPolicy::OpenMP;
    if (!from.empty()) out.start = parse_point(from, space);
    out.validate();
    return out;
  }

  static PhasePoint parse_point(const std::string& text, const PhaseSpace& space) {
    std::vector<std::optional<double>> coords(static_cast<std::size_t>(space.dim()));
    std::size_t begin = 0;
    while (begin <= text.size()) {
      const std::size_t comma = std::min(text.find(',', begin), text.size());
      const std::string item = text.substr(begin, comma - begin);
      const std::size_t eq = item.find('=');
      if (eq == std::string::npos) throw CLI::ValidationError("expected coord=value, got '" + item + "'");
      const auto index = space.index_of(CLI::detail::trim_copy(item.substr(0, eq)));
      if (!index) throw CLI::ValidationError("unknown coordinate in '" + item + "'");
      double value = 0.0;
      if (!CLI::detail::lexical_cast(CLI::detail::trim_copy(item.substr(eq + 1)), value))
        throw CLI::ValidationError("not a number in '" + item + "'");
      if (coords[static_cast<std::size_t>(*index)])
        throw CLI::ValidationError("coordinate given twice in '" + text + "'");
      coords[static_cast<std::size_t>(*index)] = value;
      begin = comma + 1;
    }
    std::vector<double> out;
    for (std::size_t i = 0; i < coords.size(); ++i) {
      if (!coords[i]) throw CLI::ValidationError("missing coordinate " + space.name(static_cast<int>(i)));
      out.push_back(*coords[i]);
    }
    return PhasePoint(std::move(out));
  }
};

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << content;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

int run_check(const SystemArgs& sys, ConfigArgs& args, const std::string& json_path) {
  const SystemSpec spec = sys.load();
  const CheckReport report = run_report(spec, args.resolve(spec.space));
  std::cout << to_text(report);
  if (!json_path.empty()) write_file(json_path, to_json(report));
  return report.verdict ? 0 : 1;
}

int run_invariants(const SystemArgs& sys, const std::string& at) {
  const SystemSpec spec = sys.load();
  const PhasePoint x = ConfigArgs::parse_point(at, spec.space);
  const MultiVectorField what = lie_derivative_mv(spec.E, spec.W);
  const InvariantVector y = mixed_wedge_ratios(spec.W, what, x);
  for (std::size_t l = 0; l < y.values.size(); ++l) std::cout << "Y(" << l + 1 << ") = " << fmt(y.values[l]) << "\n";
  const SecularSpectrum s = secular_roots(spec.W, what, x);
  for (std::size_t i = 0; i < s.roots.size(); ++i)
    std::cout << "c" << i + 1 << " = " << fmt(s.roots[i]) << (s.multiple[i] ? "  (multiple)" : "") << "\n";
  return 0;
}

int run_flow(const SystemArgs& sys, ConfigArgs& args, int rows) {
  const SystemSpec spec = sys.load();
  const CheckConfig cfg = args.resolve(spec.space);
  const PhasePoint start = cfg.start ? *cfg.start : sample_regular_points(spec.W, cfg).front();
  const DriftReport drift = conservation_drift(spec.W, spec.E, spec.h, start, cfg);
  const auto& samples = drift.trajectory.samples;
  if (!samples.empty()) {
    std::cout << "t";
    for (const auto& name : spec.space.names()) std::cout << "\t" << name;
    std::cout << "\n";
    const std::size_t last = samples.size() - 1;
    std::size_t previous = last + 1;
    for (int r = 0; r <= rows; ++r) {
      const std::size_t k = last * static_cast<std::size_t>(r) / static_cast<std::size_t>(rows);
      if (k == previous) continue;
      previous = k;
      std::cout << fmt(samples[k].t);
      for (double v : samples[k].x.coords()) std::cout << "\t" << fmt(v);
      std::cout << "\n";
    }
  }
  for (std::size_t i = 0; i < drift.root_drift.size(); ++i)
    std::cout << "drift c" << i + 1 << " = " << fmt(drift.root_drift[i]) << "\n";
  for (std::size_t l = 0; l < drift.invariant_drift.size(); ++l)
    std::cout << "drift Y(" << l + 1 << ") = " << fmt(drift.invariant_drift[l]) << "\n";
  std::cout << "conservation " << (drift.record.pass ? "pass" : "FAIL") << ": " << drift.record.notes << "\n";
  return drift.record.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Checks non-Noether symmetries of Hamiltonian systems and their conserved quantities"};
  app.require_subcommand(1);

  SystemArgs check_sys, inv_sys, flow_sys, report_sys;
  ConfigArgs check_cfg, flow_cfg, report_cfg;
  std::string check_json, report_json, at;
  int rows = 10;

  auto* check = app.add_subcommand("check", "Run every check and print a summary");
  check_sys.add(check);
  check_cfg.add(check);
  check->add_option("--json", check_json, "Also write the JSON report here");

  auto* invariants = app.add_subcommand("invariants", "Print c_i and Y(l) at a point");
  inv_sys.add(invariants);
  invariants->add_option("--at", at, "Point, e.g. q1=1,p1=2")->required();

  auto* flow = app.add_subcommand("flow", "Integrate the flow and report conservation drift");
  flow_sys.add(flow);
  flow_cfg.add(flow);
  flow->add_option("--rows", rows, "Trajectory rows to print")->check(CLI::PositiveNumber)->capture_default_str();

  auto* report = app.add_subcommand("report", "Run the full pipeline and write the JSON report");
  report_sys.add(report);
  report_cfg.add(report);
  report->add_option("--json", report_json, "Output path")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (check->parsed()) return run_check(check_sys, check_cfg, check_json);
    if (invariants->parsed()) return run_invariants(inv_sys, at);
    if (flow->parsed()) return run_flow(flow_sys, flow_cfg, rows);
    if (report->parsed()) return run_check(report_sys, report_cfg, report_json);
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

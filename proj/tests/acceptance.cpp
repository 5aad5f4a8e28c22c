// Acceptance run: one PASS/FAIL line per criterion. With arguments, only the
// named criteria run (e.g. `acceptance 1 7a`). Exit status is nonzero if any
// selected criterion fails.

#include <Eigen/Dense>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "binoether/report.hpp"
#include "binoether/spectral.hpp"
#include "binoether/system.hpp"
#include "binoether/verify.hpp"
#include "support.hpp"

using namespace binoether;
using testing::rel_diff;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
};

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

CheckConfig defaults() { return CheckConfig{}; }

// 1. Identity checks on the worked example for n = 1, 2, 3.
Outcome example_identities() {
  Outcome o;
  double worst = 0.0, worst_time = 0.0;
  for (int n = 1; n <= 3; ++n) {
    const auto t0 = std::chrono::steady_clock::now();
    const SystemSpec s = builtin("dissipative", n);
    const CheckConfig cfg = defaults();
    const CheckRecord jacobi = check_jacobi(s.W, cfg);
    const CheckRecord symmetry = check_symmetry(s.E, s.W, s.h, cfg);
    const CheckRecord yb = check_yang_baxter(s.E, s.W, cfg);
    const auto compat = check_compatibility(s.W, lie_derivative_mv(s.E, s.W), cfg);
    const double elapsed = seconds_since(t0);
    const std::string tag = "n=" + std::to_string(n) + " ";
    for (const CheckRecord* r : {&jacobi, &symmetry, &yb, &compat[0], &compat[1]}) {
      o.require(r->pass && r->points == 32, tag + r->id + " residual " + sci(r->residual));
      worst = std::max(worst, r->residual);
    }
    o.require(symmetry.residual <= 1e-12, tag + "symmetry residual " + sci(symmetry.residual) + " > 1e-12");
    o.require(elapsed <= 5.0, tag + "took " + sci(elapsed) + " s");
    worst_time = std::max(worst_time, elapsed);
  }
  if (o.pass) o.detail = "max residual " + sci(worst) + ", slowest n " + sci(worst_time) + " s";
  return o;
}

// 2. Roots proportional to p_i + q_i, conservation along the flow, closed-form trajectory.
Outcome conserved_quantities() {
  Outcome o;
  double spread_max = 0.0, kappa = 0.0, drift_max = 0.0;
  int skipped = 0;
  for (int n = 1; n <= 3; ++n) {
    const SystemSpec s = builtin("dissipative", n);
    const MultiVectorField what = lie_derivative_mv(s.E, s.W);
    std::vector<double> up, down;  // ratios for the two possible sign pairings
    for (const auto& x : sample_regular_points(s.W, defaults())) {
      std::vector<double> sums;
      for (int i = 0; i < n; ++i) sums.push_back(x[static_cast<std::size_t>(i)] + x[static_cast<std::size_t>(n + i)]);
      if (std::any_of(sums.begin(), sums.end(), [](double v) { return std::abs(v) < 1e-3; })) {
        ++skipped;
        continue;
      }
      const auto c = secular_roots(s.W, what, x).roots;
      std::sort(sums.begin(), sums.end());
      for (int i = 0; i < n; ++i) {
        up.push_back(c[static_cast<std::size_t>(i)] / sums[static_cast<std::size_t>(i)]);
        down.push_back(c[static_cast<std::size_t>(i)] / sums[static_cast<std::size_t>(n - 1 - i)]);
      }
    }
    auto spread = [](const std::vector<double>& r) {
      const auto [lo, hi] = std::minmax_element(r.begin(), r.end());
      return std::pair{(*hi - *lo) / std::max(std::abs(*hi), std::abs(*lo)), 0.5 * (*hi + *lo)};
    };
    const auto a = spread(up), b = spread(down);
    const auto best = a.first <= b.first ? a : b;
    o.require(best.first <= 1e-8, "n=" + std::to_string(n) + " ratio spread " + sci(best.first));
    spread_max = std::max(spread_max, best.first);
    kappa = best.second;

    std::mt19937_64 rng(100 + static_cast<std::uint64_t>(n));
    const PhasePoint start(testing::random_point(rng, 2 * n, 1.5));
    const DriftReport drift = conservation_drift(s.W, s.E, s.h, start, defaults());
    o.require(drift.record.pass, "n=" + std::to_string(n) + " drift " + sci(drift.record.residual) + " " + drift.record.notes);
    drift_max = std::max(drift_max, drift.record.residual);
  }
  const SystemSpec one = builtin("dissipative", 1);
  CheckConfig cfg = defaults();
  cfg.horizon = 1.0;
  const double q0 = 0.4, p0 = -1.1;
  const PhasePoint end = integrate_flow(one.W, one.h, PhasePoint({q0, p0}), cfg).samples.back().x;
  const double err = std::max(std::abs(end[0] - (q0 + p0 * (1 - std::exp(-1.0)))), std::abs(end[1] - p0 * std::exp(-1.0)));
  o.require(err <= 1e-8, "closed-form error " + sci(err));
  if (o.pass)
    o.detail = "kappa " + sci(kappa) + ", ratio spread " + sci(spread_max) + ", max drift " + sci(drift_max) +
               ", RK4 vs closed form " + sci(err) + " (" + std::to_string(skipped) + " points with |p+q| < 1e-3 skipped)";
  return o;
}

// 3. Involution under both brackets.
Outcome involution() {
  Outcome o;
  double worst = 0.0;
  for (int n = 2; n <= 3; ++n) {
    const SystemSpec s = builtin("dissipative", n);
    CheckConfig cfg = defaults();
    cfg.tolerance = 1e-8;
    for (const auto& r : check_involution(s.W, s.E, cfg)) {
      o.require(r.pass && r.points == 32, "n=" + std::to_string(n) + " " + r.id + " residual " + sci(r.residual));
      worst = std::max(worst, r.residual);
    }
  }
  if (o.pass) o.detail = "max residual " + sci(worst);
  return o;
}

// 4. Wedge ratios against elementary symmetric functions of the roots.
Outcome route_equivalence() {
  Outcome o;
  double worst = 0.0;
  auto compare = [&](const MultiVectorField& W, const MultiVectorField& What, const std::string& tag) {
    std::vector<SpectrumSample> samples;
    const CheckRecord r = check_spectrum(W, What, defaults(), &samples);
    o.require(r.pass && r.points == 32, tag + " residual " + sci(r.residual) + " " + r.notes);
    worst = std::max(worst, r.residual);
  };
  for (int n = 1; n <= 4; ++n) {
    const SystemSpec s = builtin("dissipative", n);
    compare(s.W, lie_derivative_mv(s.E, s.W), "example n=" + std::to_string(n));
  }
  std::mt19937_64 rng(4242);
  for (int k = 0; k < 10; ++k) {
    const int n = 1 + k % 4;
    const testing::RandomPair pair = testing::random_pair(rng, n);
    compare(pair.W, pair.What, "random pair " + std::to_string(k) + " n=" + std::to_string(n));
  }
  if (o.pass) o.detail = "max relative difference " + sci(worst) + " over the example (n=1..4) and 10 random pairs";
  return o;
}

// 5. Pfaffian against determinants and closed forms.
Outcome pfaffian_correctness() {
  Outcome o;
  std::mt19937_64 rng(5);
  double worst = 0.0;
  for (int dim = 2; dim <= 12; dim += 2) {
    for (int trial = 0; trial < 100; ++trial) {
      Matrix m(dim);
      Eigen::MatrixXd e = Eigen::MatrixXd::Zero(dim, dim);
      for (int i = 0; i < dim; ++i)
        for (int j = i + 1; j < dim; ++j) {
          m(i, j) = testing::uniform(rng, -1, 1);
          m(j, i) = -m(i, j);
          e(i, j) = m(i, j);
          e(j, i) = m(j, i);
        }
      const double pf = pfaffian(m);
      worst = std::max(worst, rel_diff(pf * pf, e.determinant()));
    }
  }
  o.require(worst <= 1e-9, "Pf^2 vs det " + sci(worst));

  double closed = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const double a = testing::uniform(rng, -3, 3);
    Matrix two(2);
    two(0, 1) = a;
    two(1, 0) = -a;
    closed = std::max(closed, rel_diff(pfaffian(two), a));
    const int blocks = 1 + trial % 6;
    Matrix m(2 * blocks);
    double product = 1.0;
    for (int b = 0; b < blocks; ++b) {
      const double v = testing::uniform(rng, -3, 3);
      m(2 * b, 2 * b + 1) = v;
      m(2 * b + 1, 2 * b) = -v;
      product *= v;
    }
    closed = std::max(closed, rel_diff(pfaffian(m), product));
  }
  o.require(closed <= 1e-12, "closed forms " + sci(closed));
  if (o.pass) o.detail = "Pf^2 vs det " + sci(worst) + " (600 matrices, dim 2..12), closed forms " + sci(closed);
  return o;
}

// 6. Jacobi identity and [V,V] = 0 agree on pass or fail.
Outcome jacobi_equivalence() {
  Outcome o;
  std::mt19937_64 rng(66);
  int poisson = 0;
  const auto cases = testing::jacobi_calibration_set(rng);
  for (const auto& [name, V] : cases) {
    const auto [jac, bracket] = testing::jacobi_residuals(rng, V);
    o.require((jac <= 1e-9) == (bracket <= 1e-9), name + ": jacobiator " + sci(jac) + " vs [V,V] " + sci(bracket));
    poisson += bracket <= 1e-9 ? 1 : 0;
  }
  if (o.pass)
    o.detail = std::to_string(cases.size()) + " bivectors, " + std::to_string(poisson) + " Poisson, " +
               std::to_string(cases.size() - static_cast<std::size_t>(poisson)) + " not";
  return o;
}

// 7a. The generator (p_i + q_i) d/dq_i must fail the symmetry check.
Outcome broken_generator() {
  Outcome o;
  for (int n = 1; n <= 2; ++n) {
    const SystemSpec s = builtin("broken-generator", n);
    const CheckRecord r = check_symmetry(s.E, s.W, s.h, defaults());
    o.require(!r.pass, "n=" + std::to_string(n) + " symmetry residual " + sci(r.residual) + " passes");
  }
  if (!o.pass) o.detail += " (f(p+q) d/dq commutes with p (d/dq - d/dp) for every f)";
  return o;
}

// 7b. Noether control: What vanishes and invariant checks are vacuous.
Outcome noether_control() {
  Outcome o;
  const CheckReport r = run_report(builtin("canonical-noether", 2), defaults());
  for (const auto& c : r.checks) {
    if (c.id == "non_noether") {
      o.require(c.notes == "Noether", "classified as " + c.notes);
      o.require(c.residual <= 1e-12, "What residual " + sci(c.residual));
    }
    if (c.id == "symmetry") o.require(c.pass, "symmetry fails");
    if (c.id == "spectrum" || c.id == "conservation" || c.id == "involution" || c.id == "involution_what")
      o.require(c.pass && c.notes.find("vacuous") != std::string::npos, c.id + " not vacuous");
  }
  o.require(r.verdict, "verdict fail");
  if (o.pass) o.detail = "What residual 0, invariant checks vacuous";
  return o;
}

// 7c. A bivector violating the Jacobi identity fails check_jacobi.
Outcome non_jacobi() {
  Outcome o;
  const PhaseSpace space(2);
  MultiVectorField w(space, 2);
  w.set(0, 2, parse("q1*p1", space));
  w.set(1, 3, parse("1", space));
  w.set(0, 1, parse("p1", space));
  const CheckRecord r = check_jacobi(w, defaults());
  o.require(!r.pass, "residual " + sci(r.residual) + " passes");
  if (o.pass) o.detail = "residual " + sci(r.residual);
  return o;
}

// 8. Fourth-order convergence of the flow integrator.
Outcome flow_order() {
  Outcome o;
  const SystemSpec s = builtin("dissipative", 1);
  auto error_at_one = [&](double dt) {
    CheckConfig cfg = defaults();
    cfg.horizon = 1.0;
    cfg.dt = dt;
    cfg.flow_error_bound = 1.0;
    const double q0 = 0.2, p0 = 1.3;
    const PhasePoint x = integrate_flow(s.W, s.h, PhasePoint({q0, p0}), cfg).samples.back().x;
    return std::hypot(x[0] - (q0 + p0 * (1 - std::exp(-1.0))), x[1] - p0 * std::exp(-1.0));
  };
  const double coarse = error_at_one(0.1), fine = error_at_one(0.05);
  const double ratio = coarse / fine;
  o.require(ratio >= 12 && ratio <= 20, "ratio " + sci(ratio));
  o.detail = "error(dt=0.1) / error(dt=0.05) = " + std::to_string(ratio);
  return o;
}

// 9. Identical configuration, identical JSON.
Outcome determinism() {
  Outcome o;
  const SystemSpec s = builtin("dissipative", 2);
  const std::string a = to_json(run_report(s, defaults()));
  const std::string b = to_json(run_report(s, defaults()));
  o.require(a == b, "reports differ");
  o.require(report_from_json(a) == report_from_json(b), "parsed reports differ");
  if (o.pass) o.detail = std::to_string(a.size()) + " bytes, identical";
  return o;
}

struct Criterion {
  std::string id;
  std::string title;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria = {
      {"1", "worked example identities, n = 1..3", example_identities},
      {"2", "conserved quantities of the example", conserved_quantities},
      {"3", "involution under both brackets, n = 2, 3", involution},
      {"4", "wedge ratios vs secular roots", route_equivalence},
      {"5", "Pfaffian correctness", pfaffian_correctness},
      {"6", "Jacobi identity vs [V,V] = 0", jacobi_equivalence},
      {"7a", "broken generator (p_i+q_i) d/dq_i fails symmetry", broken_generator},
      {"7b", "Noether control", noether_control},
      {"7c", "non-Jacobi bivector fails check_jacobi", non_jacobi},
      {"8", "RK4 order of accuracy", flow_order},
      {"9", "byte-identical reports", determinism},
  };
  std::set<std::string> selected(argv + 1, argv + argc);
  const auto t0 = std::chrono::steady_clock::now();
  int failures = 0;
  for (const auto& c : criteria) {
    if (!selected.empty() && !selected.contains(c.id)) continue;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("error: ") + e.what();
    }
    failures += o.pass ? 0 : 1;
    std::printf("[%s] %-3s %s: %s\n", o.pass ? "PASS" : "FAIL", c.id.c_str(), c.title.c_str(), o.detail.c_str());
  }
  std::printf("wall time %.2f s\n", seconds_since(t0));
  return failures == 0 ? 0 : 1;
}

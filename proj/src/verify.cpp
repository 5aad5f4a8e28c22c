#include "binoether/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

#include "binoether/errors.hpp"

namespace binoether {

void CheckConfig::validate() const {
  if (samples < 8) throw std::invalid_argument("sample count must be at least 8");
  if (!(box > 0.0)) throw std::invalid_argument("sampling box half-width must be positive");
  if (!(tolerance > 0.0)) throw std::invalid_argument("residual tolerance must be positive");
  if (!(horizon > 0.0)) throw std::invalid_argument("flow horizon must be positive");
  if (!(dt > 0.0)) throw std::invalid_argument("step size must be positive");
  if (!(drift_tolerance > 0.0)) throw std::invalid_argument("drift tolerance must be positive");
  if (!(flow_error_bound > 0.0)) throw std::invalid_argument("flow error bound must be positive");
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

PhasePoint draw(std::mt19937_64& rng, int dim, double box) {
  std::vector<double> c(static_cast<std::size_t>(dim));
  for (auto& v : c) v = box * (2.0 * unit_uniform(rng) - 1.0);
  return PhasePoint(std::move(c));
}

struct Sampling {
  std::vector<PhasePoint> points;
  int draws = 0;
  double min_ratio = kInf;
};

Sampling sample_with_stats(const MultiVectorField& W, const CheckConfig& cfg) {
  cfg.validate();
  Sampling s;
  std::mt19937_64 rng(cfg.seed);
  const int max_draws = 64 * cfg.samples;
  while (static_cast<int>(s.points.size()) < cfg.samples && s.draws < max_draws) {
    PhasePoint x = draw(rng, W.dim(), cfg.box);
    ++s.draws;
    double ratio = 0.0;
    try {
      ratio = regularity_ratio(bivector_matrix(evaluate_mv(W, x)));
    } catch (const DomainError&) {
      continue;
    }
    if (ratio > kRegularityThreshold) {
      s.min_ratio = std::min(s.min_ratio, ratio);
      s.points.push_back(std::move(x));
    }
  }
  if (static_cast<int>(s.points.size()) < cfg.samples) {
    throw Error("sampling found only " + std::to_string(s.points.size()) + " regular points in " +
                std::to_string(s.draws) + " draws");
  }
  return s;
}

double relative(double value, double scale) { return std::abs(value) / std::max(1.0, scale); }

struct PointResidual {
  double residual = 0.0;
  double scale = 1.0;
};

PointResidual from_bracket(const PointwiseBracket& b) {
  return {relative(b.max_abs(), b.term_scale), std::max(1.0, b.term_scale)};
}

CheckRecord summarize(std::string id, std::string anchor, const std::vector<PointResidual>& per_point, double tol) {
  CheckRecord r;
  r.id = std::move(id);
  r.anchor = std::move(anchor);
  r.points = static_cast<int>(per_point.size());
  for (const auto& p : per_point) {
    if (p.residual > r.residual || (std::isnan(p.residual))) {
      r.residual = p.residual;
      r.scale = p.scale;
    }
  }
  r.pass = r.residual <= tol;
  return r;
}

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(3);
  os << v;
  return os.str();
}

}  // namespace

std::vector<PhasePoint> sample_box(int dim, int count, double box, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<PhasePoint> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) out.push_back(draw(rng, dim, box));
  return out;
}

std::vector<PhasePoint> sample_regular_points(const MultiVectorField& W, const CheckConfig& cfg) {
  return sample_with_stats(W, cfg).points;
}

CheckRecord check_jacobi(const MultiVectorField& W, const CheckConfig& cfg) {
  const auto points = sample_regular_points(W, cfg);
  const auto per_point = map_points(
      points,
      [&](const PhasePoint& x) {
        const FieldJets w(W, x);
        return from_bracket(schouten_bb_at(w, w));
      },
      cfg.policy);
  return summarize("jacobi", "[W, W] = 0", per_point, cfg.tolerance);
}

CheckRecord check_regularity(const MultiVectorField& W, const CheckConfig& cfg) {
  const Sampling s = sample_with_stats(W, cfg);
  CheckRecord r;
  r.id = "regularity";
  r.anchor = "W^n != 0";
  r.residual = s.min_ratio;
  r.scale = kRegularityThreshold;
  r.points = static_cast<int>(s.points.size());
  r.pass = true;
  r.notes = "min |Pf(W)|/max|W|^n = " + format_double(s.min_ratio) + "; " +
            std::to_string(s.draws - static_cast<int>(s.points.size())) + " of " + std::to_string(s.draws) +
            " draws rejected";
  return r;
}

CheckRecord check_symmetry(const MultiVectorField& E, const MultiVectorField& W, const ScalarExpr& h,
                           const CheckConfig& cfg) {
  const MultiVectorField X = hamiltonian_vf(W, h);
  const auto points = sample_regular_points(W, cfg);
  const auto per_point = map_points(
      points, [&](const PhasePoint& x) { return from_bracket(lie_derivative_at(FieldJets(E, x), FieldJets(X, x))); },
      cfg.policy);
  return summarize("symmetry", "[E, W(h)] = 0", per_point, cfg.tolerance);
}

CheckRecord check_non_noether(const MultiVectorField& E, const MultiVectorField& W, const CheckConfig& cfg) {
  const auto points = sample_regular_points(W, cfg);
  const auto per_point = map_points(
      points, [&](const PhasePoint& x) { return from_bracket(lie_derivative_at(FieldJets(E, x), FieldJets(W, x))); },
      cfg.policy);
  CheckRecord r = summarize("non_noether", "[E, W] != 0", per_point, cfg.tolerance);
  r.notes = r.pass ? "Noether" : "non-Noether";
  r.pass = true;
  r.mandatory = false;
  return r;
}

bool is_noether(const CheckRecord& r) { return r.id == "non_noether" && r.notes == "Noether"; }

CheckRecord check_yang_baxter(const MultiVectorField& E, const MultiVectorField& W, const CheckConfig& cfg) {
  const MultiVectorField what = lie_derivative_mv(E, W);
  const MultiVectorField what2 = lie_derivative_mv(E, what);
  const auto points = sample_regular_points(W, cfg);
  const auto per_point = map_points(
      points, [&](const PhasePoint& x) { return from_bracket(schouten_bb_at(FieldJets(what2, x), FieldJets(W, x))); },
      cfg.policy);
  return summarize("yang_baxter", "[[E, [E, W]], W] = 0", per_point, cfg.tolerance);
}

std::vector<CheckRecord> check_compatibility(const MultiVectorField& W, const MultiVectorField& What,
                                             const CheckConfig& cfg) {
  const auto points = sample_regular_points(W, cfg);
  const auto per_point = map_points(
      points,
      [&](const PhasePoint& x) {
        const FieldJets w(W, x);
        const FieldJets wh(What, x);
        return std::pair{from_bracket(schouten_bb_at(wh, w)), from_bracket(schouten_bb_at(wh, wh))};
      },
      cfg.policy);
  std::vector<PointResidual> mixed;
  std::vector<PointResidual> self;
  for (const auto& [a, b] : per_point) {
    mixed.push_back(a);
    self.push_back(b);
  }
  return {summarize("compatibility", "[What, W] = 0", mixed, cfg.tolerance),
          summarize("what_poisson", "[What, What] = 0", self, cfg.tolerance)};
}

CheckRecord check_spectrum(const MultiVectorField& W, const MultiVectorField& What, const CheckConfig& cfg,
                           std::vector<SpectrumSample>* samples) {
  const auto points = sample_regular_points(W, cfg);
  struct Outcome {
    SpectrumSample sample;
    PointResidual residual;
  };
  const auto per_point = map_points(
      points,
      [&](const PhasePoint& x) {
        Outcome o;
        o.sample.point.assign(x.coords().begin(), x.coords().end());
        try {
          o.sample.y_wedge = mixed_wedge_ratios(W, What, x).values;
          const SecularSpectrum spectrum = secular_roots(W, What, x);
          o.sample.roots = spectrum.roots;
          o.sample.y_roots = y_from_roots(spectrum).values;
          for (std::size_t l = 0; l < o.sample.y_wedge.size(); ++l) {
            const double ref = std::max(1.0, std::abs(o.sample.y_wedge[l]));
            const double r = relative(o.sample.y_wedge[l] - o.sample.y_roots[l], ref);
            if (r > o.residual.residual) o.residual = {r, ref};
          }
        } catch (const Error& e) {
          o.sample.error = e.what();
          o.residual = {kInf, 1.0};
        }
        return o;
      },
      cfg.policy);

  std::vector<PointResidual> residuals;
  std::string first_error;
  for (const auto& o : per_point) {
    residuals.push_back(o.residual);
    if (first_error.empty() && !o.sample.error.empty()) first_error = o.sample.error;
    if (samples) samples->push_back(o.sample);
  }
  CheckRecord r = summarize("spectrum", "Y(l) = e_l(c_1..c_n) / C(n,l)", residuals, cfg.tolerance);
  if (!first_error.empty()) r.notes = first_error;
  return r;
}

// ---------------------------------------------------------------------------

namespace {

using State = std::vector<double>;

State rk4_step(const std::vector<ScalarExpr>& field, const State& x, double h) {
  const std::size_t n = x.size();
  auto f = [&](const State& y) {
    State d(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = eval(field[i], y);
    return d;
  };
  auto axpy = [&](const State& y, const State& k, double a) {
    State r(n);
    for (std::size_t i = 0; i < n; ++i) r[i] = y[i] + a * k[i];
    return r;
  };
  const State k1 = f(x);
  const State k2 = f(axpy(x, k1, 0.5 * h));
  const State k3 = f(axpy(x, k2, 0.5 * h));
  const State k4 = f(axpy(x, k3, h));
  State out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = x[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  return out;
}

}  // namespace

Trajectory integrate_flow(const MultiVectorField& W, const ScalarExpr& h, const PhasePoint& x0,
                          const CheckConfig& cfg) {
  if (!(cfg.horizon > 0.0) || !(cfg.dt > 0.0)) throw std::invalid_argument("flow horizon and step must be positive");
  if (static_cast<int>(x0.size()) != W.dim()) throw std::invalid_argument("start point dimension mismatch");
  const MultiVectorField X = hamiltonian_vf(W, h);
  std::vector<ScalarExpr> field;
  for (int i = 0; i < W.dim(); ++i) field.push_back(X(i));

  const auto steps = static_cast<long>(std::ceil(cfg.horizon / cfg.dt - 1e-9));
  const double step = cfg.horizon / static_cast<double>(steps);

  auto check_regular = [&](const State& x, double t) {
    const double ratio = regularity_ratio(bivector_matrix(evaluate_mv(W, PhasePoint(x))));
    if (!(ratio > kRegularityThreshold))
      throw FlowError("Poisson bivector lost regularity at t = " + std::to_string(t));
  };

  Trajectory traj;
  traj.dt = step;
  traj.samples.reserve(static_cast<std::size_t>(steps + 1));
  State x(x0.coords().begin(), x0.coords().end());
  check_regular(x, 0.0);
  traj.samples.push_back({0.0, x0});
  double error_sum = 0.0;
  for (long k = 1; k <= steps; ++k) {
    const State full = rk4_step(field, x, step);
    const State half = rk4_step(field, rk4_step(field, x, 0.5 * step), 0.5 * step);
    double local = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) local = std::max(local, std::abs(half[i] - full[i]));
    error_sum += local / 15.0;
    x = full;
    const double t = static_cast<double>(k) * step;
    check_regular(x, t);
    traj.samples.push_back({t, PhasePoint(x)});
  }
  traj.error_estimate = error_sum / cfg.horizon;
  if (traj.error_estimate > cfg.flow_error_bound)
    throw FlowError("step-halving error estimate " + format_double(traj.error_estimate) +
                    " per unit time exceeds bound " + format_double(cfg.flow_error_bound));
  return traj;
}

DriftReport conservation_drift(const MultiVectorField& W, const MultiVectorField& E, const ScalarExpr& h,
                               const PhasePoint& x0, const CheckConfig& cfg) {
  DriftReport out;
  out.record.id = "conservation";
  out.record.anchor = "d/dt Y(l) = 0 and d/dt c_i = 0 along W(h)";
  try {
    const MultiVectorField what = lie_derivative_mv(E, W);
    out.trajectory = integrate_flow(W, h, x0, cfg);
    struct Quantities {
      std::vector<double> y;
      std::vector<double> c;
    };
    std::vector<PhasePoint> states;
    states.reserve(out.trajectory.samples.size());
    for (const auto& s : out.trajectory.samples) states.push_back(s.x);
    const auto q = map_points(
        states,
        [&](const PhasePoint& x) {
          return Quantities{mixed_wedge_ratios(W, what, x).values, secular_roots(W, what, x).roots};
        },
        cfg.policy);

    const std::size_t n = q.front().y.size();
    out.invariant_drift.assign(n, 0.0);
    out.root_drift.assign(n, 0.0);
    for (const auto& s : q) {
      for (std::size_t l = 0; l < n; ++l) {
        out.invariant_drift[l] = std::max(out.invariant_drift[l], relative(s.y[l] - q.front().y[l], std::abs(q.front().y[l])));
        out.root_drift[l] = std::max(out.root_drift[l], relative(s.c[l] - q.front().c[l], std::abs(q.front().c[l])));
      }
    }
    double worst = 0.0;
    for (double d : out.invariant_drift) worst = std::max(worst, d);
    for (double d : out.root_drift) worst = std::max(worst, d);
    out.record.residual = worst;
    out.record.scale = 1.0;
    out.record.points = static_cast<int>(q.size());
    out.record.pass = worst <= cfg.drift_tolerance;
    out.record.notes = "T = " + format_double(cfg.horizon) + ", dt = " + format_double(out.trajectory.dt) +
                       ", flow error estimate " + format_double(out.trajectory.error_estimate) + " per unit time";
  } catch (const std::exception& e) {
    out.record.residual = kInf;
    out.record.pass = false;
    out.record.notes = e.what();
  }
  return out;
}

std::vector<CheckRecord> check_involution(const MultiVectorField& W, const MultiVectorField& E,
                                          const CheckConfig& cfg) {
  const MultiVectorField what = lie_derivative_mv(E, W);
  const int n = W.space().dof();
  std::vector<CheckRecord> records(2);
  records[0].id = "involution";
  records[0].anchor = "{Y(k), Y(l)} = 0";
  records[1].id = "involution_what";
  records[1].anchor = "{Y(k), Y(l)}_What = 0";
  if (n == 1) {
    for (auto& r : records) {
      r.pass = true;
      r.notes = "vacuous: a single invariant";
    }
    return records;
  }
  const auto points = sample_regular_points(W, cfg);
  const int dim = W.dim();

  struct Outcome {
    PointResidual on_w;
    PointResidual on_what;
    bool roots_tested = false;
  };

  auto bracket = [dim](const MultiVectorValue& v, const std::vector<double>& a, const std::vector<double>& b) {
    double sum = 0.0;
    double scale = 0.0;
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) {
        const double t = v(i, j) * a[static_cast<std::size_t>(i)] * b[static_cast<std::size_t>(j)];
        sum += t;
        scale += std::abs(t);
      }
    return PointResidual{relative(sum, scale), std::max(1.0, scale)};
  };
  auto worse = [](PointResidual& acc, const PointResidual& r) {
    if (r.residual > acc.residual) acc = r;
  };

  const auto per_point = map_points(
      points,
      [&](const PhasePoint& x) {
        Outcome o;
        const MultiVectorValue w = evaluate_mv(W, x);
        const MultiVectorValue wh = evaluate_mv(what, x);
        auto audit = [&](const std::vector<std::vector<double>>& grads) {
          for (std::size_t k = 0; k < grads.size(); ++k)
            for (std::size_t l = k; l < grads.size(); ++l) {
              worse(o.on_w, bracket(w, grads[k], grads[l]));
              worse(o.on_what, bracket(wh, grads[k], grads[l]));
            }
        };
        audit(invariant_gradients(W, what, x));
        SecularSpectrum spectrum;
        try {
          spectrum = secular_roots(W, what, x);
        } catch (const SpectrumError&) {
          return o;  // complex roots: only the Y(l) pairs apply here
        }
        bool separated = spectrum.scale > 0.0;
        for (std::size_t i = 1; i < spectrum.roots.size(); ++i)
          separated = separated && spectrum.roots[i] - spectrum.roots[i - 1] >= kRootSeparation * spectrum.scale;
        if (separated) {
          audit(root_gradients(W, what, x));
          o.roots_tested = true;
        }
        return o;
      },
      cfg.policy);

  std::vector<PointResidual> on_w;
  std::vector<PointResidual> on_what;
  int root_points = 0;
  for (const auto& o : per_point) {
    on_w.push_back(o.on_w);
    on_what.push_back(o.on_what);
    root_points += o.roots_tested ? 1 : 0;
  }
  const std::string note = "secular-root pairs tested at " + std::to_string(root_points) + " of " +
                           std::to_string(points.size()) + " points (skipped where roots are complex or not separated)";
  records[0] = summarize("involution", records[0].anchor, on_w, cfg.tolerance);
  records[1] = summarize("involution_what", records[1].anchor, on_what, cfg.tolerance);
  for (auto& r : records) r.notes = note;
  return records;
}

}  // namespace binoether

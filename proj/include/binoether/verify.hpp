#pragma once

// Executable checks for the identities around a non-Noether symmetry generator
// E of a Hamiltonian system (W, h), with What = L_E W:
//
//   [W, W] = 0                  Poisson condition
//   L_E W(h) = 0                E is a symmetry of the flow
//   [What, W] = 0, [What, What] = 0
//   [L_E What, W] = 0           Yang-Baxter type condition
//   d/dt Y(l) = 0, d/dt c_i = 0 along the flow
//   {Y(k), Y(l)} = {Y(k), Y(l)}_What = 0
//
// Identity checks are pointwise and numeric. A residual at a point is the
// largest bracket component divided by the largest individual term that went
// into the bracket at that point, floored at 1.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "binoether/expr.hpp"
#include "binoether/geometry.hpp"
#include "binoether/parallel.hpp"
#include "binoether/spectral.hpp"

namespace binoether {

struct CheckConfig {
  int samples = 32;
  double box = 2.0;  // points drawn uniformly from [-box, box]^2n
  std::uint64_t seed = 1;
  double tolerance = 1e-9;
  double horizon = 10.0;
  double dt = 1e-3;
  double drift_tolerance = 1e-6;
  /// Bound on the step-halving error estimate of the flow, per unit time.
  double flow_error_bound = 1e-8;
  /// Start of the conservation run; the first sample point when unset.
  std::optional<PhasePoint> start;
  ExecutionPolicy policy = ExecutionPolicy::OpenMP;

  /// Throws std::invalid_argument on non-positive settings or samples < 8.
  void validate() const;

  bool operator==(const CheckConfig&) const = default;
};

struct CheckRecord {
  std::string id;
  std::string anchor;  // the identity being checked
  double residual = 0.0;
  double scale = 1.0;
  bool pass = false;
  bool mandatory = true;
  int points = 0;
  std::string notes;

  bool operator==(const CheckRecord&) const = default;
};

/// Reproducible sample of points where W is regular. Throws Error when fewer
/// than cfg.samples regular points turn up in 64 * cfg.samples draws.
std::vector<PhasePoint> sample_regular_points(const MultiVectorField& W, const CheckConfig& cfg);

/// Uniform doubles in [-box, box]^dim from a seeded 64-bit Mersenne twister,
/// mapped without std::uniform_real_distribution so that sequences are
/// identical across standard libraries.
std::vector<PhasePoint> sample_box(int dim, int count, double box, std::uint64_t seed);

CheckRecord check_jacobi(const MultiVectorField& W, const CheckConfig& cfg);
CheckRecord check_regularity(const MultiVectorField& W, const CheckConfig& cfg);
CheckRecord check_symmetry(const MultiVectorField& E, const MultiVectorField& W, const ScalarExpr& h,
                           const CheckConfig& cfg);

/// Classification record: `notes` is "non-Noether" or "Noether". Never
/// mandatory; always passes unless evaluation fails.
CheckRecord check_non_noether(const MultiVectorField& E, const MultiVectorField& W, const CheckConfig& cfg);
bool is_noether(const CheckRecord& non_noether_record);

CheckRecord check_yang_baxter(const MultiVectorField& E, const MultiVectorField& W, const CheckConfig& cfg);

/// Two records: [What, W] = 0 and [What, What] = 0.
std::vector<CheckRecord> check_compatibility(const MultiVectorField& W, const MultiVectorField& What,
                                             const CheckConfig& cfg);

struct SpectrumSample {
  std::vector<double> point;
  std::vector<double> roots;
  std::vector<double> y_wedge;
  std::vector<double> y_roots;
  std::string error;

  bool operator==(const SpectrumSample&) const = default;
};

/// Route equivalence of mixed_wedge_ratios and y_from_roots(secular_roots)
/// at the sample points. Per-point outcomes go to `samples` when non-null.
CheckRecord check_spectrum(const MultiVectorField& W, const MultiVectorField& What, const CheckConfig& cfg,
                           std::vector<SpectrumSample>* samples = nullptr);

struct TrajectorySample {
  double t = 0.0;
  PhasePoint x;
};

struct Trajectory {
  std::vector<TrajectorySample> samples;  // uniform step, strictly increasing
  double dt = 0.0;
  /// Accumulated |full step - two half steps| / 15 per unit time.
  double error_estimate = 0.0;
};

/// Classical RK4 for dx/dt = W(h) from x0 over [0, cfg.horizon] with a step
/// no larger than cfg.dt. Throws FlowError if W loses regularity along the way
/// or the step-halving error estimate exceeds cfg.flow_error_bound.
Trajectory integrate_flow(const MultiVectorField& W, const ScalarExpr& h, const PhasePoint& x0,
                          const CheckConfig& cfg);

struct DriftReport {
  CheckRecord record;
  std::vector<double> root_drift;       // per c_i, ascending order
  std::vector<double> invariant_drift;  // per Y(l)
  Trajectory trajectory;
};

DriftReport conservation_drift(const MultiVectorField& W, const MultiVectorField& E, const ScalarExpr& h,
                               const PhasePoint& x0, const CheckConfig& cfg);

/// Two records, one per Poisson structure (W, then What). Root-level pairs are
/// included where the spectrum is well separated.
std::vector<CheckRecord> check_involution(const MultiVectorField& W, const MultiVectorField& E,
                                          const CheckConfig& cfg);

/// Gap, relative to spectrum scale, that root-level involution tests require.
inline constexpr double kRootSeparation = 1e-3;

}  // namespace binoether

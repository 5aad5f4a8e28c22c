#pragma once

// Secular roots c_1..c_n and wedge-ratio invariants Y(1)..Y(n) of a pair of
// bivectors (W, What) at a phase-space point.
//
// Both quantities come from one polynomial,
//
//   P(t) = Pf(What + t W) / Pf(W) = sum_l C(n,l) Y(l) t^(n-l) = prod_i (t + c_i),
//
// since A^n = n! Pf(A) vol for a bivector A in 2n dimensions. P is sampled at
// n+1 Chebyshev nodes and interpolated, and Y(l) is read off the coefficients.
// The c_i are computed separately as the eigenvalues of W^-1 What, which come
// in equal pairs; rebuilding Y from them through elementary symmetric
// functions is the independent second route. Companion-matrix roots of P are
// available too but lose accuracy near repeated roots.

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "binoether/expr.hpp"
#include "binoether/geometry.hpp"
#include "binoether/jet.hpp"

namespace binoether {

template <class T>
class SquareMatrix {
 public:
  SquareMatrix() = default;
  explicit SquareMatrix(int n) : n_(n), a_(static_cast<std::size_t>(n * n), T(0.0)) {}

  int size() const noexcept { return n_; }
  T& operator()(int i, int j) { return a_[static_cast<std::size_t>(i * n_ + j)]; }
  const T& operator()(int i, int j) const { return a_[static_cast<std::size_t>(i * n_ + j)]; }

 private:
  int n_ = 0;
  std::vector<T> a_;
};

using Matrix = SquareMatrix<double>;
using JetMatrix = SquareMatrix<Jet>;

/// Regularity threshold: |Pf(W)| must exceed this times max|W_ij|^n.
inline constexpr double kRegularityThreshold = 1e-6;
/// Relative gap below which neighbouring roots are flagged as multiple.
inline constexpr double kMultipleRootGap = 1e-6;
/// Relative imaginary part above which a root is reported as non-real.
inline constexpr double kImaginaryTolerance = 1e-8;
/// Largest supported number of degrees of freedom.
inline constexpr int kMaxSpectralDof = kMaxDof;

Matrix bivector_matrix(const MultiVectorValue& v);
JetMatrix bivector_matrix(const FieldJets& v);

/// Pfaffian by recursive expansion along the first row, memoized over index
/// subsets. Throws std::invalid_argument for odd dimension or when M is not
/// antisymmetric to within 1e-12 relative to its largest entry.
double pfaffian(const Matrix& m);
Jet pfaffian(const JetMatrix& m);

double max_abs_entry(const Matrix& m);

/// |Pf(W)| / max|W_ij|^n; zero for the zero matrix.
double regularity_ratio(const Matrix& w);

/// Coefficients a_0..a_n of P(t) = Pf(What + t W) / Pf(W) in ascending powers.
/// Throws RegularityError when W is singular by the regularity criterion.
std::vector<double> secular_polynomial(const Matrix& w, const Matrix& what);
std::vector<Jet> secular_polynomial(const JetMatrix& w, const JetMatrix& what);

struct InvariantVector {
  PhasePoint point;
  std::vector<double> values;  // Y(1)..Y(n)
};

struct SecularSpectrum {
  PhasePoint point;
  std::vector<double> roots;  // ascending, with multiplicity
  std::vector<bool> multiple;
  double scale = 0.0;

  bool all_simple() const;
};

/// Y(l) = (coefficient of t^(n-l)) / C(n,l).
std::vector<double> wedge_ratios_from_polynomial(const std::vector<double>& coeffs);
std::vector<Jet> wedge_ratios_from_polynomial(const std::vector<Jet>& coeffs);

/// Roots c_i of P(-c) = 0, ascending. Throws SpectrumError on non-real roots.
SecularSpectrum roots_from_polynomial(const std::vector<double>& coeffs);

InvariantVector mixed_wedge_ratios(const MultiVectorField& W, const MultiVectorField& What, const PhasePoint& x);
SecularSpectrum secular_roots(const MultiVectorField& W, const MultiVectorField& What, const PhasePoint& x);

/// Y(l) = e_l(c) / C(n,l).
InvariantVector y_from_roots(const SecularSpectrum& spectrum);

/// Gradients of all Y(l) at x, with What = L_E W precomputed by the caller.
std::vector<std::vector<double>> invariant_gradients(const MultiVectorField& W, const MultiVectorField& What,
                                                     const PhasePoint& x);

/// Gradient of x -> Y(l)(x) for What = L_E W, 1 <= l <= n.
std::vector<double> invariant_gradient(const MultiVectorField& W, const MultiVectorField& E, int l,
                                       const PhasePoint& x);

/// Gradients of the secular roots (ascending order) by implicit
/// differentiation of P. Requires every root to be simple.
std::vector<std::vector<double>> root_gradients(const MultiVectorField& W, const MultiVectorField& What,
                                                const PhasePoint& x);

double binomial(int n, int k);

}  // namespace binoether

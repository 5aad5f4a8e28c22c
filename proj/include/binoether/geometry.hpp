#pragma once

// Multivector fields in a single global chart and the bracket calculus on them.
//
// Sign conventions (all indices follow the canonical order q1..qn, p1..pn):
//   {f, g}       = V^{ij} d_i f d_j g                       (full sum)
//   V(f)^j       = V^{ij} d_i f,  so that {f, g} = V(f)^j d_j g
//   [E, A]       = L_E A  (Lie derivative along the vector field E)
//   [A, B]^{ijk} = sum over cyclic (i,j,k) of A^{li} d_l B^{jk} + B^{li} d_l A^{jk}
//
// With these, {f,{g,h}} + {g,{h,f}} + {h,{f,g}} = -1/2 [V,V]^{ijk} d_i f d_j g d_k h.

#include <map>
#include <span>
#include <vector>

#include "binoether/expr.hpp"
#include "binoether/jet.hpp"

namespace binoether {

using IndexTuple = std::vector<int>;

/// All strictly increasing k-tuples drawn from 0..dim-1, in lexicographic order.
std::vector<IndexTuple> increasing_tuples(int dim, int degree);

/// Sorts `tuple` in place and returns the sign of the sorting permutation,
/// or 0 if an index repeats.
int sort_with_sign(IndexTuple& tuple);

/// Degree-k antisymmetric contravariant tensor field with expression components.
/// Only strictly increasing index tuples are stored; every other ordering is
/// derived by permutation sign, and absent tuples read as zero.
class MultiVectorField {
 public:
  MultiVectorField(PhaseSpace space, int degree);

  static MultiVectorField scalar(PhaseSpace space, ScalarExpr value);

  const PhaseSpace& space() const noexcept { return space_; }
  int degree() const noexcept { return degree_; }
  int dim() const noexcept { return space_.dim(); }

  /// Component for an arbitrary ordering of indices.
  ScalarExpr component(std::span<const int> indices) const;
  ScalarExpr operator()(int i) const { return component(std::span<const int>(&i, 1)); }
  ScalarExpr operator()(int i, int j) const {
    const int ij[2] = {i, j};
    return component(ij);
  }

  /// Sets the component for `indices` in any order; the stored increasing
  /// component is adjusted by the permutation sign.
  void set(std::span<const int> indices, const ScalarExpr& value);
  void set(int i, const ScalarExpr& value) { set(std::span<const int>(&i, 1), value); }
  void set(int i, int j, const ScalarExpr& value) {
    const int ij[2] = {i, j};
    set(ij, value);
  }

  /// Nonzero components keyed by increasing tuples.
  const std::map<IndexTuple, ScalarExpr>& components() const noexcept { return components_; }
  bool is_zero() const noexcept { return components_.empty(); }

 private:
  void check_indices(std::span<const int> indices) const;

  PhaseSpace space_;
  int degree_;
  std::map<IndexTuple, ScalarExpr> components_;
};

MultiVectorField operator+(const MultiVectorField& a, const MultiVectorField& b);
MultiVectorField operator*(double s, const MultiVectorField& a);

/// L_E A: E^m d_m A^{I} - sum_s A^{i1..m..ik} d_m E^{i_s}.
MultiVectorField lie_derivative_mv(const MultiVectorField& E, const MultiVectorField& A);

/// Schouten-Nijenhuis bracket of two bivectors (a trivector).
MultiVectorField schouten_bb(const MultiVectorField& A, const MultiVectorField& B);

/// The vector field W(f) with {f, g} = W(f)^i d_i g.
MultiVectorField hamiltonian_vf(const MultiVectorField& W, const ScalarExpr& f);

/// {f, g} = sum_{i<j} V^{ij} (d_i f d_j g - d_j f d_i g).
ScalarExpr poisson_bracket(const MultiVectorField& V, const ScalarExpr& f, const ScalarExpr& g);

/// Pointwise values of a multivector field, indexable by any index ordering.
class MultiVectorValue {
 public:
  MultiVectorValue(int dim, int degree) : dim_(dim), degree_(degree) {}

  int dim() const noexcept { return dim_; }
  int degree() const noexcept { return degree_; }
  double at(std::span<const int> indices) const;
  double operator()(int i) const { return at(std::span<const int>(&i, 1)); }
  double operator()(int i, int j) const {
    const int ij[2] = {i, j};
    return at(ij);
  }
  double operator()(int i, int j, int k) const {
    const int ijk[3] = {i, j, k};
    return at(ijk);
  }
  void set_increasing(const IndexTuple& tuple, double v) { values_[tuple] = v; }
  double max_abs() const;

 private:
  int dim_;
  int degree_;
  std::map<IndexTuple, double> values_;
};

MultiVectorValue evaluate_mv(const MultiVectorField& A, const PhasePoint& x);

// ---------------------------------------------------------------------------
// Pointwise kernels. These evaluate bracket formulas numerically from the
// values and first derivatives of the component functions at one point, and
// report the largest individual term so that residuals can be relativized.

/// Dense jets of a degree-1 or degree-2 field at a point.
class FieldJets {
 public:
  FieldJets(const MultiVectorField& field, const PhasePoint& x);

  int dim() const noexcept { return dim_; }
  int degree() const noexcept { return degree_; }
  const Jet& operator()(int i) const { return dense_[static_cast<std::size_t>(i)]; }
  const Jet& operator()(int i, int j) const { return dense_[static_cast<std::size_t>(i * dim_ + j)]; }

 private:
  int dim_;
  int degree_;
  std::vector<Jet> dense_;
};

/// Bracket values on increasing tuples (lexicographic order) plus the largest
/// absolute term that entered any of them.
struct PointwiseBracket {
  std::vector<double> values;
  double term_scale = 0.0;

  double max_abs() const;
};

/// L_E A at a point, for A of degree 1 or 2.
PointwiseBracket lie_derivative_at(const FieldJets& E, const FieldJets& A);

/// [A, B] at a point for bivectors A and B.
PointwiseBracket schouten_bb_at(const FieldJets& A, const FieldJets& B);

}  // namespace binoether

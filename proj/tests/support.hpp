#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "binoether/expr.hpp"
#include "binoether/geometry.hpp"

namespace testing {

using namespace binoether;

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)}); }

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline int uniform_int(std::mt19937_64& rng, int lo, int hi) {
  return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

inline std::vector<double> random_point(std::mt19937_64& rng, int dim, double box = 2.0) {
  std::vector<double> x(static_cast<std::size_t>(dim));
  for (auto& v : x) v = uniform(rng, -box, box);
  return x;
}

/// Sum of `terms` monomials of total degree <= max_degree with small integer
/// coefficients.
inline ScalarExpr random_polynomial(std::mt19937_64& rng, int dim, int terms = 3, int max_degree = 2) {
  ScalarExpr out;
  for (int t = 0; t < terms; ++t) {
    int c = uniform_int(rng, -3, 3);
    if (c == 0) c = 1;
    ScalarExpr mono = ScalarExpr::constant(c);
    const int degree = uniform_int(rng, 0, max_degree);
    for (int d = 0; d < degree; ++d) mono = mono * ScalarExpr::variable(uniform_int(rng, 0, dim - 1));
    out += mono;
  }
  return out;
}

inline MultiVectorField random_bivector(std::mt19937_64& rng, const PhaseSpace& space, int max_degree = 2) {
  MultiVectorField v(space, 2);
  for (int i = 0; i < space.dim(); ++i)
    for (int j = i + 1; j < space.dim(); ++j) v.set(i, j, random_polynomial(rng, space.dim(), 2, max_degree));
  return v;
}

/// The dissipative example with n degrees of freedom.
struct Dissipative {
  PhaseSpace space;
  MultiVectorField W;
  ScalarExpr h;
  MultiVectorField E;

  explicit Dissipative(int n) : space(n), W(space, 2), E(space, 1) {
    for (int i = 0; i < n; ++i) {
      const ScalarExpr q = ScalarExpr::variable(i);
      const ScalarExpr p = ScalarExpr::variable(n + i);
      W.set(n + i, i, p);  // p_i d/dp_i ^ d/dq_i
      h += p + q;
      E.set(i, pow(p + q, 2));
    }
  }
};

/// sum d/dp_i ^ d/dq_i, so that W(h) gives dq/dt = dh/dp, dp/dt = -dh/dq.
inline MultiVectorField canonical_bivector(const PhaseSpace& space) {
  MultiVectorField w(space, 2);
  for (int i = 0; i < space.dof(); ++i) w.set(space.dof() + i, i, ScalarExpr::constant(1.0));
  return w;
}

/// Jacobiator of three functions through nested symbolic brackets.
inline ScalarExpr jacobiator(const MultiVectorField& V, const ScalarExpr& f, const ScalarExpr& g, const ScalarExpr& h) {
  return poisson_bracket(V, f, poisson_bracket(V, g, h)) + poisson_bracket(V, g, poisson_bracket(V, h, f)) +
         poisson_bracket(V, h, poisson_bracket(V, f, g));
}

/// Max |Jacobiator| over 20 random polynomial triples and max |[V,V]| over
/// the same 32 random points.
inline std::pair<double, double> jacobi_residuals(std::mt19937_64& rng, const MultiVectorField& V) {
  const int dim = V.dim();
  const MultiVectorField T = schouten_bb(V, V);
  std::vector<ScalarExpr> jacs;
  for (int t = 0; t < 20; ++t) {
    const ScalarExpr f = random_polynomial(rng, dim, 3, 2);
    const ScalarExpr g = random_polynomial(rng, dim, 3, 2);
    const ScalarExpr h = random_polynomial(rng, dim, 3, 2);
    jacs.push_back(jacobiator(V, f, g, h));
  }
  double jac = 0.0, bracket = 0.0;
  for (int k = 0; k < 32; ++k) {
    const PhasePoint x(random_point(rng, dim));
    bracket = std::max(bracket, evaluate_mv(T, x).max_abs());
    for (const auto& j : jacs) jac = std::max(jac, std::abs(eval(j, x)));
  }
  return {jac, bracket};
}

/// Ten bivectors on a 4-dimensional phase space, five Poisson by
/// construction and five that are not.
inline std::vector<std::pair<std::string, MultiVectorField>> jacobi_calibration_set(std::mt19937_64& rng) {
  const PhaseSpace four(2);
  std::vector<std::pair<std::string, MultiVectorField>> cases;
  cases.emplace_back("canonical", canonical_bivector(four));
  {
    MultiVectorField v(four, 2);  // block-local: V^{q_i p_i} = f_i(q_i, p_i)
    v.set(0, 2, parse("1 + q1^2 + 3*p1^2", four));
    v.set(1, 3, parse("q2*p2 - 2", four));
    cases.emplace_back("block-local", v);
  }
  {
    MultiVectorField v(four, 2);  // so(3) plus a Casimir direction
    v.set(0, 1, ScalarExpr::variable(2));
    v.set(1, 2, ScalarExpr::variable(0));
    v.set(0, 2, -ScalarExpr::variable(1));
    cases.emplace_back("lie-poisson", v);
  }
  {
    MultiVectorField v(four, 2);  // linear, from [x0, xj] = xj
    v.set(0, 1, ScalarExpr::variable(1));
    v.set(0, 2, ScalarExpr::variable(2));
    v.set(0, 3, ScalarExpr::variable(3));
    cases.emplace_back("solvable", v);
  }
  {
    MultiVectorField v(four, 2);  // quadratic on a plane times a Casimir
    v.set(0, 1, parse("(1 + p2^2) * (q1^2 + q2^2)", four));
    cases.emplace_back("rank-two", v);
  }
  {
    MultiVectorField v(four, 2);
    v.set(0, 2, parse("q1*p1", four));
    v.set(1, 3, parse("1", four));
    v.set(0, 1, parse("p1", four));
    cases.emplace_back("non-jacobi", v);
  }
  for (int k = 0; k < 4; ++k) cases.emplace_back("random-" + std::to_string(k), random_bivector(rng, four));
  return cases;
}

/// A pair (W, What) with a real spectrum: a block-local bivector with
/// nonvanishing blocks, What = lambda W + L_E W for a block-local E, both
/// pulled back through a random linear change of coordinates x = A y.
struct RandomPair {
  MultiVectorField W;
  MultiVectorField What;
  MultiVectorField E;  // generator in the new coordinates, What = lambda W + L_E W
  double lambda;
};

inline ScalarExpr block_polynomial(std::mt19937_64& rng, int q, int p, int max_degree) {
  ScalarExpr out;
  for (int t = 0; t < 3; ++t) {
    ScalarExpr mono = ScalarExpr::constant(uniform(rng, -1, 1));
    const int degree = uniform_int(rng, 0, max_degree);
    for (int d = 0; d < degree; ++d) mono = mono * ScalarExpr::variable(uniform_int(rng, 0, 1) ? q : p);
    out += mono;
  }
  return out;
}

inline MultiVectorField pull_back(const MultiVectorField& V, const std::vector<ScalarExpr>& x_of_y,
                                  const Eigen::MatrixXd& inv) {
  const int dim = V.dim();
  MultiVectorField out(V.space(), V.degree());
  if (V.degree() == 1) {
    for (int a = 0; a < dim; ++a) {
      ScalarExpr c;
      for (int i = 0; i < dim; ++i) c += ScalarExpr::constant(inv(a, i)) * substitute(V(i), x_of_y);
      out.set(a, c);
    }
    return out;
  }
  std::vector<std::vector<ScalarExpr>> sub(static_cast<std::size_t>(dim), std::vector<ScalarExpr>(static_cast<std::size_t>(dim)));
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) sub[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = substitute(V(i, j), x_of_y);
  for (int a = 0; a < dim; ++a)
    for (int b = a + 1; b < dim; ++b) {
      ScalarExpr c;
      for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
          if (!sub[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].is_zero())
            c += ScalarExpr::constant(inv(a, i) * inv(b, j)) * sub[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      out.set(a, b, c);
    }
  return out;
}

inline RandomPair random_pair(std::mt19937_64& rng, int n) {
  const PhaseSpace space(n);
  const int dim = 2 * n;
  MultiVectorField W(space, 2);
  MultiVectorField E(space, 1);
  for (int i = 0; i < n; ++i) {
    const ScalarExpr q = ScalarExpr::variable(i), p = ScalarExpr::variable(n + i);
    const double sign = uniform_int(rng, 0, 1) ? 1.0 : -1.0;
    W.set(i, n + i,
          ScalarExpr::constant(sign) * (ScalarExpr::constant(uniform(rng, 0.5, 1.5)) +
                                        ScalarExpr::constant(uniform(rng, 0, 1)) * pow(q, 2) +
                                        ScalarExpr::constant(uniform(rng, 0, 1)) * pow(p, 2)));
    E.set(i, block_polynomial(rng, i, n + i, 2));
    E.set(n + i, block_polynomial(rng, i, n + i, 2));
  }
  const double lambda = uniform(rng, -1, 1);

  Eigen::MatrixXd A = Eigen::MatrixXd::Identity(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) A(i, j) += 0.3 * uniform(rng, -1, 1);
  const Eigen::MatrixXd inv = A.inverse();
  std::vector<ScalarExpr> x_of_y(static_cast<std::size_t>(dim));
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) x_of_y[static_cast<std::size_t>(i)] += ScalarExpr::constant(A(i, j)) * ScalarExpr::variable(j);

  const MultiVectorField Wy = pull_back(W, x_of_y, inv);
  const MultiVectorField Ey = pull_back(E, x_of_y, inv);
  return {Wy, lambda * Wy + lie_derivative_mv(Ey, Wy), Ey, lambda};
}

}  // namespace testing

#include "binoether/spectral.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <string>

#include "binoether/errors.hpp"

namespace binoether {

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

Matrix bivector_matrix(const MultiVectorValue& v) {
  if (v.degree() != 2) throw std::invalid_argument("bivector_matrix needs a degree-2 value");
  Matrix m(v.dim());
  for (int i = 0; i < v.dim(); ++i)
    for (int j = 0; j < v.dim(); ++j) m(i, j) = v(i, j);
  return m;
}

JetMatrix bivector_matrix(const FieldJets& v) {
  if (v.degree() != 2) throw std::invalid_argument("bivector_matrix needs degree-2 jets");
  JetMatrix m(v.dim());
  for (int i = 0; i < v.dim(); ++i)
    for (int j = 0; j < v.dim(); ++j) m(i, j) = v(i, j);
  return m;
}

double max_abs_entry(const Matrix& m) {
  double r = 0.0;
  for (int i = 0; i < m.size(); ++i)
    for (int j = 0; j < m.size(); ++j) r = std::max(r, std::abs(m(i, j)));
  return r;
}

namespace {

template <class T>
void check_pfaffian_input(const SquareMatrix<T>& m) {
  const int n = m.size();
  if (n % 2 != 0) throw std::invalid_argument("Pfaffian needs an even dimension, got " + std::to_string(n));
  if (n > kMaxJetDim) throw std::invalid_argument("Pfaffian dimension above supported maximum");
  double scale = 0.0;
  double asym = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      scale = std::max(scale, std::abs(value_of(m(i, j))));
      asym = std::max(asym, std::abs(value_of(m(i, j)) + value_of(m(j, i))));
    }
  }
  if (asym > 1e-12 * std::max(1.0, scale)) throw std::invalid_argument("Pfaffian input is not antisymmetric");
}

template <class T>
class PfaffianExpansion {
 public:
  explicit PfaffianExpansion(const SquareMatrix<T>& m)
      : m_(m), memo_(std::size_t{1} << m.size()), known_(std::size_t{1} << m.size(), 0) {}

  T run() { return eval((1u << m_.size()) - 1u); }

 private:
  // Pf of the principal submatrix on the index set `mask`, expanded along its
  // smallest index.
  T eval(unsigned mask) {
    if (mask == 0) return T(1.0);
    if (known_[mask]) return memo_[mask];
    const int first = std::countr_zero(mask);
    const unsigned rest = mask & ~(1u << first);
    T acc(0.0);
    int position = 0;
    for (unsigned r = rest; r != 0; r &= r - 1) {
      const int j = std::countr_zero(r);
      ++position;
      const T& a = m_(first, j);
      if (value_of(a) == 0.0 && is_exact_zero(a)) continue;
      T sub = eval(rest & ~(1u << j));
      if (position % 2 == 1) {
        acc += a * sub;
      } else {
        acc -= a * sub;
      }
    }
    known_[mask] = 1;
    memo_[mask] = acc;
    return acc;
  }

  static bool is_exact_zero(double) { return true; }
  static bool is_exact_zero(const Jet& j) {
    for (double g : j.d)
      if (g != 0.0) return false;
    return true;
  }

  const SquareMatrix<T>& m_;
  std::vector<T> memo_;
  std::vector<char> known_;
};

template <class T>
T pfaffian_impl(const SquareMatrix<T>& m) {
  check_pfaffian_input(m);
  if (m.size() == 0) return T(1.0);
  return PfaffianExpansion<T>(m).run();
}

double max_abs_value(const JetMatrix& m) {
  double r = 0.0;
  for (int i = 0; i < m.size(); ++i)
    for (int j = 0; j < m.size(); ++j) r = std::max(r, std::abs(m(i, j).v));
  return r;
}

double max_abs_value(const Matrix& m) { return max_abs_entry(m); }

// Inverse of the Vandermonde matrix V_kj = u_k^j.
Eigen::MatrixXd vandermonde_inverse(const std::vector<double>& u) {
  const int m = static_cast<int>(u.size());
  Eigen::MatrixXd v(m, m);
  for (int k = 0; k < m; ++k)
    for (int j = 0; j < m; ++j) v(k, j) = ipow(u[static_cast<std::size_t>(k)], j);
  return v.fullPivLu().inverse();
}

template <class T>
std::vector<T> secular_polynomial_impl(const SquareMatrix<T>& w, const SquareMatrix<T>& what) {
  if (w.size() != what.size()) throw std::invalid_argument("bivector matrices differ in size");
  check_pfaffian_input(w);
  check_pfaffian_input(what);
  const int dim = w.size();
  const int n = dim / 2;
  if (n < 1 || n > kMaxSpectralDof) throw std::invalid_argument("unsupported number of degrees of freedom");

  const T pf_w = pfaffian_impl(w);
  const double w_scale = max_abs_value(w);
  if (w_scale == 0.0 || std::abs(value_of(pf_w)) <= kRegularityThreshold * ipow(w_scale, n))
    throw RegularityError("Poisson bivector is not of maximal rank at this point");

  const double what_scale = max_abs_value(what);
  const double base_spread = what_scale > 0.0 ? what_scale / w_scale : 1.0;

  auto ratio_at = [&](double t) {
    SquareMatrix<T> a(dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) a(i, j) = what(i, j) + T(t) * w(i, j);
    return PfaffianExpansion<T>(a).run() / pf_w;
  };

  std::vector<double> u(static_cast<std::size_t>(n + 1));
  for (int k = 0; k <= n; ++k) u[static_cast<std::size_t>(k)] = std::cos((2 * k + 1) * std::numbers::pi / (2 * (n + 1)));
  const Eigen::MatrixXd vinv = vandermonde_inverse(u);
  const double u_check = 0.5 * (u[0] + u[1]);

  for (double spread_factor : {1.0, 4.0, 0.25, 16.0, 0.0625}) {
    const double spread = base_spread * spread_factor;
    std::vector<T> samples;
    samples.reserve(u.size());
    double sample_scale = 0.0;
    for (double uk : u) {
      samples.push_back(ratio_at(spread * uk));
      sample_scale = std::max(sample_scale, std::abs(value_of(samples.back())));
    }
    std::vector<T> coeffs(static_cast<std::size_t>(n + 1), T(0.0));
    for (int j = 0; j <= n; ++j) {
      T acc(0.0);
      for (int k = 0; k <= n; ++k) acc += T(vinv(j, k)) * samples[static_cast<std::size_t>(k)];
      coeffs[static_cast<std::size_t>(j)] = acc / T(ipow(spread, j));
    }
    // Validate against a direct evaluation between the first two nodes.
    const double t_check = spread * u_check;
    double interpolated = 0.0;
    for (int j = n; j >= 0; --j) interpolated = interpolated * t_check + value_of(coeffs[static_cast<std::size_t>(j)]);
    const double direct = value_of(ratio_at(t_check));
    if (std::abs(interpolated - direct) <= 1e-8 * std::max({sample_scale, std::abs(direct), 1e-300})) return coeffs;
  }
  throw Error("ill-conditioned interpolation of the secular polynomial");
}

template <class T>
std::vector<T> wedge_ratios_impl(const std::vector<T>& coeffs) {
  const int n = static_cast<int>(coeffs.size()) - 1;
  std::vector<T> y;
  y.reserve(static_cast<std::size_t>(n));
  for (int l = 1; l <= n; ++l) y.push_back(coeffs[static_cast<std::size_t>(n - l)] / T(binomial(n, l)));
  return y;
}

InvariantVector make_invariants(const PhasePoint& x, std::vector<double> values) {
  return InvariantVector{x, std::move(values)};
}

}  // namespace

double pfaffian(const Matrix& m) { return pfaffian_impl(m); }
Jet pfaffian(const JetMatrix& m) { return pfaffian_impl(m); }

double regularity_ratio(const Matrix& w) {
  const double s = max_abs_entry(w);
  if (s == 0.0) return 0.0;
  return std::abs(pfaffian(w)) / ipow(s, w.size() / 2);
}

std::vector<double> secular_polynomial(const Matrix& w, const Matrix& what) { return secular_polynomial_impl(w, what); }
std::vector<Jet> secular_polynomial(const JetMatrix& w, const JetMatrix& what) {
  return secular_polynomial_impl(w, what);
}

std::vector<double> wedge_ratios_from_polynomial(const std::vector<double>& coeffs) { return wedge_ratios_impl(coeffs); }
std::vector<Jet> wedge_ratios_from_polynomial(const std::vector<Jet>& coeffs) { return wedge_ratios_impl(coeffs); }

bool SecularSpectrum::all_simple() const {
  return std::none_of(multiple.begin(), multiple.end(), [](bool b) { return b; });
}

namespace {

void flag_multiple(SecularSpectrum& s) {
  s.multiple.assign(s.roots.size(), false);
  for (std::size_t i = 1; i < s.roots.size(); ++i) {
    if (s.roots[i] - s.roots[i - 1] <= kMultipleRootGap * s.scale) {
      s.multiple[i] = true;
      s.multiple[i - 1] = true;
    }
  }
}

}  // namespace

SecularSpectrum roots_from_polynomial(const std::vector<double>& coeffs) {
  const int n = static_cast<int>(coeffs.size()) - 1;
  if (n < 1) throw std::invalid_argument("polynomial must have degree at least 1");
  const double lead = coeffs.back();
  if (lead == 0.0) throw std::invalid_argument("leading coefficient vanishes");
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) companion(i, n - 1) = -coeffs[static_cast<std::size_t>(i)] / lead;
  const Eigen::VectorXcd t = companion.eigenvalues();
  SecularSpectrum s;
  for (int i = 0; i < n; ++i) s.scale = std::max(s.scale, std::abs(t(i)));
  for (int i = 0; i < n; ++i) {
    if (std::abs(t(i).imag()) > kImaginaryTolerance * s.scale) throw SpectrumError("non-real spectrum");
    s.roots.push_back(-t(i).real());
  }
  std::sort(s.roots.begin(), s.roots.end());
  flag_multiple(s);
  return s;
}

InvariantVector mixed_wedge_ratios(const MultiVectorField& W, const MultiVectorField& What, const PhasePoint& x) {
  const Matrix w = bivector_matrix(evaluate_mv(W, x));
  const Matrix what = bivector_matrix(evaluate_mv(What, x));
  return make_invariants(x, wedge_ratios_from_polynomial(secular_polynomial(w, what)));
}

SecularSpectrum secular_roots(const MultiVectorField& W, const MultiVectorField& What, const PhasePoint& x) {
  const Matrix w = bivector_matrix(evaluate_mv(W, x));
  const Matrix what = bivector_matrix(evaluate_mv(What, x));
  const int dim = w.size();
  const int n = dim / 2;
  if (n < 1 || n > kMaxSpectralDof) throw std::invalid_argument("unsupported number of degrees of freedom");
  const double w_scale = max_abs_entry(w);
  if (w_scale == 0.0 || regularity_ratio(w) <= kRegularityThreshold)
    throw RegularityError("Poisson bivector is not of maximal rank at this point");

  // det(What - c W) = Pf(What - c W)^2, so the eigenvalues of W^{-1} What are
  // the secular roots, each exactly twice.
  Eigen::MatrixXd we(dim, dim);
  Eigen::MatrixXd whe(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      we(i, j) = w(i, j);
      whe(i, j) = what(i, j);
    }
  const Eigen::MatrixXd recursion = we.partialPivLu().solve(whe);
  const Eigen::VectorXcd ev = recursion.eigenvalues();

  SecularSpectrum s;
  s.point = x;
  s.scale = max_abs_entry(what) / w_scale;
  for (int i = 0; i < dim; ++i) s.scale = std::max(s.scale, std::abs(ev(i)));
  std::vector<double> re(static_cast<std::size_t>(dim));
  for (int i = 0; i < dim; ++i) {
    if (std::abs(ev(i).imag()) > kImaginaryTolerance * s.scale)
      throw SpectrumError("non-real spectrum: eigenvalue with imaginary part " + std::to_string(ev(i).imag()));
    re[static_cast<std::size_t>(i)] = ev(i).real();
  }
  std::sort(re.begin(), re.end());
  for (int k = 0; k < n; ++k) s.roots.push_back(0.5 * (re[static_cast<std::size_t>(2 * k)] + re[static_cast<std::size_t>(2 * k + 1)]));
  flag_multiple(s);
  return s;
}

InvariantVector y_from_roots(const SecularSpectrum& spectrum) {
  const int n = static_cast<int>(spectrum.roots.size());
  std::vector<double> e(static_cast<std::size_t>(n + 1), 0.0);
  e[0] = 1.0;
  for (int k = 0; k < n; ++k) {
    const double c = spectrum.roots[static_cast<std::size_t>(k)];
    for (int l = k + 1; l >= 1; --l) e[static_cast<std::size_t>(l)] += c * e[static_cast<std::size_t>(l - 1)];
  }
  std::vector<double> y;
  for (int l = 1; l <= n; ++l) y.push_back(e[static_cast<std::size_t>(l)] / binomial(n, l));
  return make_invariants(spectrum.point, std::move(y));
}

namespace {

std::vector<Jet> polynomial_jets(const MultiVectorField& W, const MultiVectorField& What, const PhasePoint& x) {
  const JetMatrix w = bivector_matrix(FieldJets(W, x));
  const JetMatrix what = bivector_matrix(FieldJets(What, x));
  return secular_polynomial(w, what);
}

std::vector<double> gradient_of(const Jet& j, int dim) { return std::vector<double>(j.d.begin(), j.d.begin() + dim); }

}  // namespace

std::vector<std::vector<double>> invariant_gradients(const MultiVectorField& W, const MultiVectorField& What,
                                                     const PhasePoint& x) {
  const auto y = wedge_ratios_from_polynomial(polynomial_jets(W, What, x));
  std::vector<std::vector<double>> out;
  for (const Jet& j : y) out.push_back(gradient_of(j, W.dim()));
  return out;
}

std::vector<double> invariant_gradient(const MultiVectorField& W, const MultiVectorField& E, int l,
                                       const PhasePoint& x) {
  const int n = W.space().dof();
  if (l < 1 || l > n) throw std::out_of_range("invariant index out of range");
  return invariant_gradients(W, lie_derivative_mv(E, W), x)[static_cast<std::size_t>(l - 1)];
}

std::vector<std::vector<double>> root_gradients(const MultiVectorField& W, const MultiVectorField& What,
                                                const PhasePoint& x) {
  const auto coeffs = polynomial_jets(W, What, x);
  const SecularSpectrum spectrum = secular_roots(W, What, x);
  if (!spectrum.all_simple()) throw SpectrumError("root gradients need a simple spectrum");
  const int dim = W.dim();
  const int n = static_cast<int>(coeffs.size()) - 1;
  std::vector<std::vector<double>> out;
  for (double c : spectrum.roots) {
    // P(t; x) = 0 at t = -c; dt/dx = -(dP/dx)/(dP/dt), and dc/dx = -dt/dx.
    const double t = -c;
    Jet p;
    double dp_dt = 0.0;
    for (int k = n; k >= 0; --k) {
      p = p * Jet(t) + coeffs[static_cast<std::size_t>(k)];
      if (k >= 1) dp_dt = dp_dt * t + k * coeffs[static_cast<std::size_t>(k)].v;
    }
    std::vector<double> g(static_cast<std::size_t>(dim));
    for (int i = 0; i < dim; ++i) g[static_cast<std::size_t>(i)] = p.d[static_cast<std::size_t>(i)] / dp_dt;
    out.push_back(std::move(g));
  }
  return out;
}

}  // namespace binoether

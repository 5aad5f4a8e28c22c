#pragma once

// First-order forward-mode jets over a phase space of dimension at most
// kMaxJetDim. Gradients live in a fixed-size array so that jets can be
// created in tight loops without allocation.

#include <array>
#include <cmath>
#include <cstddef>

namespace binoether {

inline constexpr int kMaxDof = 6;
inline constexpr int kMaxJetDim = 2 * kMaxDof;

struct Jet {
  double v = 0.0;
  std::array<double, kMaxJetDim> d{};

  Jet() = default;
  Jet(double value) : v(value) {}  // NOLINT: implicit lift of constants

  static Jet variable(double value, int index) {
    Jet j(value);
    j.d[static_cast<std::size_t>(index)] = 1.0;
    return j;
  }

  Jet& operator+=(const Jet& o) {
    v += o.v;
    for (int i = 0; i < kMaxJetDim; ++i) d[i] += o.d[i];
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    v -= o.v;
    for (int i = 0; i < kMaxJetDim; ++i) d[i] -= o.d[i];
    return *this;
  }
  Jet& operator*=(const Jet& o) {
    for (int i = 0; i < kMaxJetDim; ++i) d[i] = d[i] * o.v + v * o.d[i];
    v *= o.v;
    return *this;
  }
  Jet& operator/=(const Jet& o) {
    const double inv = 1.0 / o.v;
    const double q = v * inv;
    for (int i = 0; i < kMaxJetDim; ++i) d[i] = (d[i] - q * o.d[i]) * inv;
    v = q;
    return *this;
  }
};

inline Jet operator+(Jet a, const Jet& b) { return a += b; }
inline Jet operator-(Jet a, const Jet& b) { return a -= b; }
inline Jet operator*(Jet a, const Jet& b) { return a *= b; }
inline Jet operator/(Jet a, const Jet& b) { return a /= b; }
inline Jet operator-(Jet a) {
  a.v = -a.v;
  for (auto& g : a.d) g = -g;
  return a;
}

namespace detail {
inline Jet chain(const Jet& a, double value, double slope) {
  Jet r(value);
  for (int i = 0; i < kMaxJetDim; ++i) r.d[i] = slope * a.d[i];
  return r;
}
}  // namespace detail

inline Jet sin(const Jet& a) { return detail::chain(a, std::sin(a.v), std::cos(a.v)); }
inline Jet cos(const Jet& a) { return detail::chain(a, std::cos(a.v), -std::sin(a.v)); }
inline Jet exp(const Jet& a) {
  const double e = std::exp(a.v);
  return detail::chain(a, e, e);
}
inline Jet log(const Jet& a) { return detail::chain(a, std::log(a.v), 1.0 / a.v); }

// Integer power by repeated squaring; exponent must be non-negative.
template <class T>
T ipow(T base, int k) {
  T result(1.0);
  while (k > 0) {
    if (k & 1) result *= base;
    k >>= 1;
    if (k > 0) base *= base;
  }
  return result;
}

inline double value_of(double x) { return x; }
inline double value_of(const Jet& x) { return x.v; }

}  // namespace binoether

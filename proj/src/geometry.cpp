#include "binoether/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace binoether {

std::vector<IndexTuple> increasing_tuples(int dim, int degree) {
  std::vector<IndexTuple> out;
  if (degree < 0 || degree > dim) return out;
  IndexTuple t(static_cast<std::size_t>(degree));
  for (int i = 0; i < degree; ++i) t[static_cast<std::size_t>(i)] = i;
  for (;;) {
    out.push_back(t);
    int pos = degree - 1;
    while (pos >= 0 && t[static_cast<std::size_t>(pos)] == dim - degree + pos) --pos;
    if (pos < 0) break;
    ++t[static_cast<std::size_t>(pos)];
    for (int k = pos + 1; k < degree; ++k) t[static_cast<std::size_t>(k)] = t[static_cast<std::size_t>(k - 1)] + 1;
  }
  return out;
}

int sort_with_sign(IndexTuple& t) {
  int sign = 1;
  // Insertion sort; tuples are short.
  for (std::size_t i = 1; i < t.size(); ++i) {
    for (std::size_t j = i; j > 0 && t[j - 1] > t[j]; --j) {
      std::swap(t[j - 1], t[j]);
      sign = -sign;
    }
  }
  for (std::size_t i = 1; i < t.size(); ++i)
    if (t[i - 1] == t[i]) return 0;
  return sign;
}

// ---------------------------------------------------------------------------

MultiVectorField::MultiVectorField(PhaseSpace space, int degree) : space_(std::move(space)), degree_(degree) {
  // Degrees above the dimension are allowed; such fields are identically zero.
  if (degree < 0) throw std::invalid_argument("multivector degree must be non-negative");
}

MultiVectorField MultiVectorField::scalar(PhaseSpace space, ScalarExpr value) {
  MultiVectorField f(std::move(space), 0);
  f.set(std::span<const int>(), value);
  return f;
}

void MultiVectorField::check_indices(std::span<const int> indices) const {
  if (static_cast<int>(indices.size()) != degree_)
    throw std::invalid_argument("index tuple length " + std::to_string(indices.size()) + " does not match degree " +
                                std::to_string(degree_));
  for (int i : indices)
    if (i < 0 || i >= dim()) throw std::out_of_range("multivector index out of range");
}

ScalarExpr MultiVectorField::component(std::span<const int> indices) const {
  check_indices(indices);
  IndexTuple t(indices.begin(), indices.end());
  const int sign = sort_with_sign(t);
  if (sign == 0) return {};
  const auto it = components_.find(t);
  if (it == components_.end()) return {};
  return sign > 0 ? it->second : -it->second;
}

void MultiVectorField::set(std::span<const int> indices, const ScalarExpr& value) {
  check_indices(indices);
  IndexTuple t(indices.begin(), indices.end());
  const int sign = sort_with_sign(t);
  if (sign == 0) {
    if (!value.is_zero()) throw std::invalid_argument("repeated index on an antisymmetric field");
    return;
  }
  if (value.is_zero()) {
    components_.erase(t);
    return;
  }
  components_[t] = sign > 0 ? value : -value;
}

MultiVectorField operator+(const MultiVectorField& a, const MultiVectorField& b) {
  if (a.degree() != b.degree() || a.space() != b.space())
    throw std::invalid_argument("cannot add multivectors of different degree or space");
  MultiVectorField out = a;
  for (const auto& [t, e] : b.components()) out.set(t, out.component(t) + e);
  return out;
}

MultiVectorField operator*(double s, const MultiVectorField& a) {
  MultiVectorField out(a.space(), a.degree());
  for (const auto& [t, e] : a.components()) out.set(t, ScalarExpr::constant(s) * e);
  return out;
}

MultiVectorField lie_derivative_mv(const MultiVectorField& E, const MultiVectorField& A) {
  if (E.degree() != 1) throw std::invalid_argument("Lie derivative needs a vector field (degree 1)");
  if (E.space() != A.space()) throw std::invalid_argument("fields live on different phase spaces");
  const int dim = A.dim();
  MultiVectorField out(A.space(), A.degree());
  for (const IndexTuple& I : increasing_tuples(dim, A.degree())) {
    ScalarExpr acc;
    const ScalarExpr a_I = A.component(I);
    for (int m = 0; m < dim; ++m) {
      const ScalarExpr e_m = E(m);
      if (!e_m.is_zero()) acc += e_m * diff(a_I, m);
    }
    for (std::size_t s = 0; s < I.size(); ++s) {
      const ScalarExpr e_s = E(I[s]);
      for (int m = 0; m < dim; ++m) {
        const ScalarExpr de = diff(e_s, m);
        if (de.is_zero()) continue;
        IndexTuple J = I;
        J[s] = m;
        acc -= A.component(J) * de;
      }
    }
    out.set(I, acc);
  }
  return out;
}

MultiVectorField schouten_bb(const MultiVectorField& A, const MultiVectorField& B) {
  if (A.degree() != 2 || B.degree() != 2) throw std::invalid_argument("schouten_bb needs two bivectors");
  if (A.space() != B.space()) throw std::invalid_argument("fields live on different phase spaces");
  const int dim = A.dim();
  MultiVectorField out(A.space(), 3);
  for (const IndexTuple& I : increasing_tuples(dim, 3)) {
    ScalarExpr acc;
    for (int c = 0; c < 3; ++c) {
      const int i = I[static_cast<std::size_t>(c)];
      const int j = I[static_cast<std::size_t>((c + 1) % 3)];
      const int k = I[static_cast<std::size_t>((c + 2) % 3)];
      const ScalarExpr a_jk = A(j, k);
      const ScalarExpr b_jk = B(j, k);
      for (int l = 0; l < dim; ++l) {
        acc += A(l, i) * diff(b_jk, l);
        acc += B(l, i) * diff(a_jk, l);
      }
    }
    out.set(I, acc);
  }
  return out;
}

MultiVectorField hamiltonian_vf(const MultiVectorField& W, const ScalarExpr& f) {
  if (W.degree() != 2) throw std::invalid_argument("hamiltonian_vf needs a bivector");
  const int dim = W.dim();
  MultiVectorField out(W.space(), 1);
  std::vector<ScalarExpr> df(static_cast<std::size_t>(dim));
  for (int i = 0; i < dim; ++i) df[static_cast<std::size_t>(i)] = diff(f, i);
  for (int j = 0; j < dim; ++j) {
    ScalarExpr acc;
    for (int i = 0; i < dim; ++i) acc += W(i, j) * df[static_cast<std::size_t>(i)];
    out.set(j, acc);
  }
  return out;
}

ScalarExpr poisson_bracket(const MultiVectorField& V, const ScalarExpr& f, const ScalarExpr& g) {
  if (V.degree() != 2) throw std::invalid_argument("poisson_bracket needs a bivector");
  ScalarExpr acc;
  for (const auto& [t, v] : V.components()) {
    const int i = t[0];
    const int j = t[1];
    acc += v * (diff(f, i) * diff(g, j) - diff(f, j) * diff(g, i));
  }
  return acc;
}

// ---------------------------------------------------------------------------

double MultiVectorValue::at(std::span<const int> indices) const {
  if (static_cast<int>(indices.size()) != degree_) throw std::invalid_argument("index tuple does not match degree");
  IndexTuple t(indices.begin(), indices.end());
  const int sign = sort_with_sign(t);
  if (sign == 0) return 0.0;
  const auto it = values_.find(t);
  if (it == values_.end()) return 0.0;
  return sign * it->second;
}

double MultiVectorValue::max_abs() const {
  double m = 0.0;
  for (const auto& [t, v] : values_) m = std::max(m, std::abs(v));
  return m;
}

MultiVectorValue evaluate_mv(const MultiVectorField& A, const PhasePoint& x) {
  if (static_cast<int>(x.size()) != A.dim()) throw std::invalid_argument("phase point dimension mismatch");
  MultiVectorValue out(A.dim(), A.degree());
  for (const auto& [t, e] : A.components()) out.set_increasing(t, eval(e, x));
  return out;
}

// ---------------------------------------------------------------------------

FieldJets::FieldJets(const MultiVectorField& field, const PhasePoint& x) : dim_(field.dim()), degree_(field.degree()) {
  if (degree_ != 1 && degree_ != 2) throw std::invalid_argument("FieldJets supports degree 1 and 2");
  if (static_cast<int>(x.size()) != dim_) throw std::invalid_argument("phase point dimension mismatch");
  dense_.assign(static_cast<std::size_t>(degree_ == 1 ? dim_ : dim_ * dim_), Jet());
  for (const auto& [t, e] : field.components()) {
    const Jet j = eval_jet(e, x);
    if (degree_ == 1) {
      dense_[static_cast<std::size_t>(t[0])] = j;
    } else {
      dense_[static_cast<std::size_t>(t[0] * dim_ + t[1])] = j;
      dense_[static_cast<std::size_t>(t[1] * dim_ + t[0])] = -j;
    }
  }
}

double PointwiseBracket::max_abs() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

PointwiseBracket lie_derivative_at(const FieldJets& E, const FieldJets& A) {
  if (E.degree() != 1) throw std::invalid_argument("Lie derivative needs a vector field");
  if (E.dim() != A.dim()) throw std::invalid_argument("dimension mismatch");
  const int dim = A.dim();
  PointwiseBracket out;
  auto term = [&](double t) {
    out.term_scale = std::max(out.term_scale, std::abs(t));
    return t;
  };
  if (A.degree() == 1) {
    out.values.resize(static_cast<std::size_t>(dim));
    for (int i = 0; i < dim; ++i) {
      double acc = 0.0;
      for (int m = 0; m < dim; ++m) {
        acc += term(E(m).v * A(i).d[m]);
        acc -= term(A(m).v * E(i).d[m]);
      }
      out.values[static_cast<std::size_t>(i)] = acc;
    }
    return out;
  }
  for (int i = 0; i < dim; ++i) {
    for (int j = i + 1; j < dim; ++j) {
      double acc = 0.0;
      for (int m = 0; m < dim; ++m) {
        acc += term(E(m).v * A(i, j).d[m]);
        acc -= term(A(m, j).v * E(i).d[m]);
        acc -= term(A(i, m).v * E(j).d[m]);
      }
      out.values.push_back(acc);
    }
  }
  return out;
}

PointwiseBracket schouten_bb_at(const FieldJets& A, const FieldJets& B) {
  if (A.degree() != 2 || B.degree() != 2) throw std::invalid_argument("schouten_bb_at needs two bivectors");
  if (A.dim() != B.dim()) throw std::invalid_argument("dimension mismatch");
  const int dim = A.dim();
  PointwiseBracket out;
  for (int i0 = 0; i0 < dim; ++i0) {
    for (int j0 = i0 + 1; j0 < dim; ++j0) {
      for (int k0 = j0 + 1; k0 < dim; ++k0) {
        const int idx[3] = {i0, j0, k0};
        double acc = 0.0;
        for (int c = 0; c < 3; ++c) {
          const int i = idx[c];
          const int j = idx[(c + 1) % 3];
          const int k = idx[(c + 2) % 3];
          for (int l = 0; l < dim; ++l) {
            const double t1 = A(l, i).v * B(j, k).d[l];
            const double t2 = B(l, i).v * A(j, k).d[l];
            out.term_scale = std::max({out.term_scale, std::abs(t1), std::abs(t2)});
            acc += t1 + t2;
          }
        }
        out.values.push_back(acc);
      }
    }
  }
  return out;
}

}  // namespace binoether

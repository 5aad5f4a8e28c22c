#include "binoether/expr.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "binoether/errors.hpp"

namespace binoether {

using Kind = ScalarExpr::Kind;

struct ScalarExpr::Node {
  Kind kind = Kind::Constant;
  double value = 0.0;
  int index = 0;  // coordinate index for Variable, exponent for Pow
  std::shared_ptr<const Node> a;
  std::shared_ptr<const Node> b;
};

namespace detail {

struct ExprAccess {
  using Node = ScalarExpr::Node;
  using NodePtr = std::shared_ptr<const Node>;

  static const Node& node(const ScalarExpr& e) { return *e.node_; }
  static ScalarExpr wrap(NodePtr p) { return ScalarExpr(std::move(p)); }
  static NodePtr ptr(const ScalarExpr& e) { return e.node_; }

  static ScalarExpr make(Kind kind, const ScalarExpr& a, const ScalarExpr& b = {}) {
    auto n = std::make_shared<Node>();
    n->kind = kind;
    n->a = a.node_;
    if (kind <= Kind::Div && kind >= Kind::Add) n->b = b.node_;
    return ScalarExpr(std::move(n));
  }
};

}  // namespace detail

using detail::ExprAccess;
using Node = ExprAccess::Node;

namespace {

const std::shared_ptr<const Node>& zero_node() {
  static const auto zero = std::make_shared<const ExprAccess::Node>();
  return zero;
}

bool is_binary(Kind k) { return k == Kind::Add || k == Kind::Sub || k == Kind::Mul || k == Kind::Div; }

}  // namespace

// ---------------------------------------------------------------------------
// PhaseSpace / PhasePoint

PhaseSpace::PhaseSpace(int dof) : dof_(dof) {
  if (dof < 1) throw std::invalid_argument("phase space needs at least one degree of freedom");
  names_.reserve(static_cast<std::size_t>(2 * dof));
  for (int i = 1; i <= dof; ++i) names_.push_back("q" + std::to_string(i));
  for (int i = 1; i <= dof; ++i) names_.push_back("p" + std::to_string(i));
}

PhaseSpace::PhaseSpace(int dof, std::vector<std::string> names) : dof_(dof), names_(std::move(names)) {
  if (dof < 1) throw std::invalid_argument("phase space needs at least one degree of freedom");
  if (names_.size() != static_cast<std::size_t>(2 * dof))
    throw std::invalid_argument("phase space needs exactly 2n coordinate names");
  auto sorted = names_;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw std::invalid_argument("coordinate names must be distinct");
}

std::optional<int> PhaseSpace::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return static_cast<int>(i);
  return std::nullopt;
}

PhasePoint::PhasePoint(std::vector<double> coords) : coords_(std::move(coords)) {
  for (double c : coords_)
    if (!std::isfinite(c)) throw std::invalid_argument("phase point coordinates must be finite");
}

// ---------------------------------------------------------------------------
// Construction. Constant folding and the trivial identities (0+x, 1*x, 0*x,
// x^1, x^0) keep derivative trees from growing without bound; no other
// simplification is attempted.

ScalarExpr::ScalarExpr() : node_(zero_node()) {}

ScalarExpr ScalarExpr::constant(double value) {
  if (value == 0.0) return ScalarExpr();
  auto n = std::make_shared<Node>();
  n->value = value;
  return ScalarExpr(std::move(n));
}

ScalarExpr ScalarExpr::variable(int index) {
  if (index < 0 || index >= kMaxJetDim) throw std::out_of_range("coordinate index out of range");
  auto n = std::make_shared<Node>();
  n->kind = Kind::Variable;
  n->index = index;
  return ScalarExpr(std::move(n));
}

Kind ScalarExpr::kind() const noexcept { return node_->kind; }

double ScalarExpr::constant_value() const {
  if (node_->kind != Kind::Constant) throw std::logic_error("not a constant");
  return node_->value;
}

int ScalarExpr::variable_index() const {
  if (node_->kind != Kind::Variable) throw std::logic_error("not a variable");
  return node_->index;
}

int ScalarExpr::exponent() const {
  if (node_->kind != Kind::Pow) throw std::logic_error("not a power");
  return node_->index;
}

ScalarExpr ScalarExpr::lhs() const {
  if (!node_->a) throw std::logic_error("leaf has no operands");
  return ScalarExpr(node_->a);
}

ScalarExpr ScalarExpr::rhs() const {
  if (!node_->b) throw std::logic_error("node has no second operand");
  return ScalarExpr(node_->b);
}

bool ScalarExpr::is_zero() const noexcept { return node_->kind == Kind::Constant && node_->value == 0.0; }
bool ScalarExpr::is_one() const noexcept { return node_->kind == Kind::Constant && node_->value == 1.0; }

int ScalarExpr::max_variable_index() const {
  const Node& n = *node_;
  switch (n.kind) {
    case Kind::Constant: return -1;
    case Kind::Variable: return n.index;
    default: break;
  }
  int m = ScalarExpr(n.a).max_variable_index();
  if (n.b) m = std::max(m, ScalarExpr(n.b).max_variable_index());
  return m;
}

ScalarExpr operator+(const ScalarExpr& a, const ScalarExpr& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (a.is_constant() && b.is_constant()) return ScalarExpr::constant(a.constant_value() + b.constant_value());
  if (b.kind() == Kind::Neg) return a - b.lhs();
  return ExprAccess::make(Kind::Add, a, b);
}

ScalarExpr operator-(const ScalarExpr& a, const ScalarExpr& b) {
  if (b.is_zero()) return a;
  if (a.is_zero()) return -b;
  if (a.is_constant() && b.is_constant()) return ScalarExpr::constant(a.constant_value() - b.constant_value());
  if (b.kind() == Kind::Neg) return a + b.lhs();
  return ExprAccess::make(Kind::Sub, a, b);
}

ScalarExpr operator*(const ScalarExpr& a, const ScalarExpr& b) {
  if (a.is_zero() || b.is_zero()) return ScalarExpr();
  if (a.is_one()) return b;
  if (b.is_one()) return a;
  if (a.is_constant() && b.is_constant()) return ScalarExpr::constant(a.constant_value() * b.constant_value());
  if (a.kind() == Kind::Neg) return -(a.lhs() * b);
  if (b.kind() == Kind::Neg) return -(a * b.lhs());
  return ExprAccess::make(Kind::Mul, a, b);
}

ScalarExpr operator/(const ScalarExpr& a, const ScalarExpr& b) {
  if (b.is_one()) return a;
  // 0/b is kept symbolic only when b could vanish; a literal zero numerator
  // folds because evaluation of 0/b is 0 wherever it is defined.
  if (a.is_zero() && !b.is_zero()) return ScalarExpr();
  if (a.is_constant() && b.is_constant() && !b.is_zero())
    return ScalarExpr::constant(a.constant_value() / b.constant_value());
  return ExprAccess::make(Kind::Div, a, b);
}

ScalarExpr operator-(const ScalarExpr& a) {
  if (a.is_constant()) return ScalarExpr::constant(-a.constant_value());
  if (a.kind() == Kind::Neg) return a.lhs();
  return ExprAccess::make(Kind::Neg, a);
}

ScalarExpr pow(const ScalarExpr& base, int exponent) {
  if (exponent < 0) throw std::invalid_argument("negative exponents are not supported");
  if (exponent == 0) return ScalarExpr::constant(1.0);
  if (exponent == 1) return base;
  if (base.is_constant()) return ScalarExpr::constant(ipow(base.constant_value(), exponent));
  auto n = std::make_shared<ExprAccess::Node>();
  n->kind = Kind::Pow;
  n->index = exponent;
  n->a = ExprAccess::ptr(base);
  return ExprAccess::wrap(std::move(n));
}

ScalarExpr unary(Kind kind, const ScalarExpr& arg) {
  switch (kind) {
    case Kind::Sin:
    case Kind::Cos:
    case Kind::Exp:
    case Kind::Ln: break;
    case Kind::Neg: return -arg;
    default: throw std::invalid_argument("not a unary function kind");
  }
  return ExprAccess::make(kind, arg);
}

// ---------------------------------------------------------------------------
// Printing

namespace {

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s(buf);
  // Shortest representation that round-trips.
  for (int prec = 1; prec < 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) {
      s = buf;
      break;
    }
  }
  return s;
}

int precedence(const Node& n) {
  switch (n.kind) {
    case Kind::Add:
    case Kind::Sub: return 1;
    case Kind::Mul:
    case Kind::Div: return 2;
    case Kind::Neg: return 3;
    case Kind::Pow: return 4;
    case Kind::Constant: return n.value < 0 ? 3 : 5;
    default: return 5;
  }
}

const char* function_name(Kind k) {
  switch (k) {
    case Kind::Sin: return "sin";
    case Kind::Cos: return "cos";
    case Kind::Exp: return "exp";
    case Kind::Ln: return "ln";
    default: return "?";
  }
}

void print(const Node& n, const std::vector<std::string>& names, std::string& out);

void print_child(const Node& child, int min_precedence, const std::vector<std::string>& names,
                 std::string& out) {
  if (precedence(child) < min_precedence) {
    out += '(';
    print(child, names, out);
    out += ')';
  } else {
    print(child, names, out);
  }
}

void print(const Node& n, const std::vector<std::string>& names, std::string& out) {
  switch (n.kind) {
    case Kind::Constant: out += format_number(n.value); return;
    case Kind::Variable:
      out += n.index < static_cast<int>(names.size()) ? names[static_cast<std::size_t>(n.index)]
                                                      : "x" + std::to_string(n.index);
      return;
    case Kind::Add:
      print_child(*n.a, 1, names, out);
      out += " + ";
      print_child(*n.b, 2, names, out);
      return;
    case Kind::Sub:
      print_child(*n.a, 1, names, out);
      out += " - ";
      print_child(*n.b, 2, names, out);
      return;
    case Kind::Mul:
      print_child(*n.a, 2, names, out);
      out += "*";
      print_child(*n.b, 4, names, out);
      return;
    case Kind::Div:
      print_child(*n.a, 2, names, out);
      out += "/";
      print_child(*n.b, 4, names, out);
      return;
    case Kind::Neg:
      out += '-';
      print_child(*n.a, 4, names, out);
      return;
    case Kind::Pow:
      print_child(*n.a, 5, names, out);
      out += '^';
      out += std::to_string(n.index);
      return;
    default:
      out += function_name(n.kind);
      out += '(';
      print(*n.a, names, out);
      out += ')';
      return;
  }
}

std::vector<std::string> default_names(std::size_t dim) {
  if (dim % 2 == 0 && dim > 0) return PhaseSpace(static_cast<int>(dim / 2)).names();
  return {};
}

// ---------------------------------------------------------------------------
// Evaluation, generic over double and Jet.

template <class T>
T eval_node(const Node& n, std::span<const T> vars, std::size_t dim) {
  switch (n.kind) {
    case Kind::Constant: return T(n.value);
    case Kind::Variable:
      if (static_cast<std::size_t>(n.index) >= vars.size())
        throw std::out_of_range("expression references a coordinate outside the phase point");
      return vars[static_cast<std::size_t>(n.index)];
    case Kind::Add: return eval_node(*n.a, vars, dim) + eval_node(*n.b, vars, dim);
    case Kind::Sub: return eval_node(*n.a, vars, dim) - eval_node(*n.b, vars, dim);
    case Kind::Mul: return eval_node(*n.a, vars, dim) * eval_node(*n.b, vars, dim);
    case Kind::Div: {
      T den = eval_node(*n.b, vars, dim);
      if (value_of(den) == 0.0) {
        std::string s;
        print(n, default_names(dim), s);
        throw DomainError("division by zero", s);
      }
      return eval_node(*n.a, vars, dim) / den;
    }
    case Kind::Neg: return -eval_node(*n.a, vars, dim);
    case Kind::Pow: {
      const T base = eval_node(*n.a, vars, dim);
      if constexpr (std::is_same_v<T, Jet>) {
        Jet r(ipow(base.v, n.index));
        const double slope = n.index * ipow(base.v, n.index - 1);
        for (int i = 0; i < kMaxJetDim; ++i) r.d[i] = slope * base.d[i];
        return r;
      } else {
        return ipow(base, n.index);
      }
    }
    case Kind::Sin: {
      using std::sin;
      return sin(eval_node(*n.a, vars, dim));
    }
    case Kind::Cos: {
      using std::cos;
      return cos(eval_node(*n.a, vars, dim));
    }
    case Kind::Exp: {
      using std::exp;
      return exp(eval_node(*n.a, vars, dim));
    }
    case Kind::Ln: {
      using std::log;
      T arg = eval_node(*n.a, vars, dim);
      if (!(value_of(arg) > 0.0)) {
        std::string s;
        print(n, default_names(dim), s);
        throw DomainError("logarithm of a non-positive value", s);
      }
      return log(arg);
    }
  }
  return T(0.0);
}

}  // namespace

std::string to_string(const ScalarExpr& e, const PhaseSpace& space) {
  std::string out;
  print(ExprAccess::node(e), space.names(), out);
  return out;
}

double eval(const ScalarExpr& e, std::span<const double> x) {
  return eval_node<double>(ExprAccess::node(e), x, x.size());
}

Jet eval_jet(const ScalarExpr& e, std::span<const double> x) {
  if (x.size() > static_cast<std::size_t>(kMaxJetDim)) throw std::invalid_argument("phase point too large for jets");
  std::array<Jet, kMaxJetDim> vars;
  for (std::size_t i = 0; i < x.size(); ++i) vars[i] = Jet::variable(x[i], static_cast<int>(i));
  return eval_node<Jet>(ExprAccess::node(e), std::span<const Jet>(vars.data(), x.size()), x.size());
}

// ---------------------------------------------------------------------------
// Differentiation and substitution

ScalarExpr diff(const ScalarExpr& e, int index) {
  const auto& n = ExprAccess::node(e);
  switch (n.kind) {
    case Kind::Constant: return ScalarExpr();
    case Kind::Variable: return n.index == index ? ScalarExpr::constant(1.0) : ScalarExpr();
    default: break;
  }
  const ScalarExpr a = ExprAccess::wrap(n.a);
  const ScalarExpr da = diff(a, index);
  switch (n.kind) {
    case Kind::Add: return da + diff(ExprAccess::wrap(n.b), index);
    case Kind::Sub: return da - diff(ExprAccess::wrap(n.b), index);
    case Kind::Mul: {
      const ScalarExpr b = ExprAccess::wrap(n.b);
      return da * b + a * diff(b, index);
    }
    case Kind::Div: {
      const ScalarExpr b = ExprAccess::wrap(n.b);
      const ScalarExpr db = diff(b, index);
      if (db.is_zero()) return da / b;
      return (da * b - a * db) / pow(b, 2);
    }
    case Kind::Neg: return -da;
    case Kind::Pow:
      if (da.is_zero()) return ScalarExpr();
      return ScalarExpr::constant(n.index) * pow(a, n.index - 1) * da;
    case Kind::Sin: return da.is_zero() ? ScalarExpr() : cos(a) * da;
    case Kind::Cos: return da.is_zero() ? ScalarExpr() : -(sin(a) * da);
    case Kind::Exp: return da.is_zero() ? ScalarExpr() : e * da;
    case Kind::Ln: return da / a;
    default: break;
  }
  throw std::logic_error("unreachable expression kind");
}

ScalarExpr diff(const ScalarExpr& e, const PhaseSpace& space, std::string_view coord) {
  const auto idx = space.index_of(coord);
  if (!idx) throw std::invalid_argument("unknown coordinate '" + std::string(coord) + "'");
  return diff(e, *idx);
}

ScalarExpr substitute(const ScalarExpr& e, std::span<const ScalarExpr> replacements) {
  const auto& n = ExprAccess::node(e);
  switch (n.kind) {
    case Kind::Constant: return e;
    case Kind::Variable:
      if (static_cast<std::size_t>(n.index) >= replacements.size())
        throw std::out_of_range("substitution does not cover every coordinate");
      return replacements[static_cast<std::size_t>(n.index)];
    default: break;
  }
  const ScalarExpr a = substitute(ExprAccess::wrap(n.a), replacements);
  if (is_binary(n.kind)) {
    const ScalarExpr b = substitute(ExprAccess::wrap(n.b), replacements);
    switch (n.kind) {
      case Kind::Add: return a + b;
      case Kind::Sub: return a - b;
      case Kind::Mul: return a * b;
      default: return a / b;
    }
  }
  if (n.kind == Kind::Neg) return -a;
  if (n.kind == Kind::Pow) return pow(a, n.index);
  return unary(n.kind, a);
}

}  // namespace binoether

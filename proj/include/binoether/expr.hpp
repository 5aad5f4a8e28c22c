#pragma once

// A small expression language over phase-space coordinates.
//
// Expressions are immutable trees with shared structure; copying a ScalarExpr
// is cheap and concurrent evaluation from many threads is safe. Coordinates are
// stored by index into the canonical order (q1..qn, p1..pn); a PhaseSpace maps
// those indices to names for parsing and printing.

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "binoether/jet.hpp"

namespace binoether {

namespace detail {
struct ExprAccess;
}

class PhaseSpace {
 public:
  /// Canonical names q1..qn, p1..pn.
  explicit PhaseSpace(int dof);
  PhaseSpace(int dof, std::vector<std::string> names);

  int dof() const noexcept { return dof_; }
  int dim() const noexcept { return 2 * dof_; }
  const std::string& name(int index) const { return names_.at(static_cast<std::size_t>(index)); }
  const std::vector<std::string>& names() const noexcept { return names_; }
  std::optional<int> index_of(std::string_view name) const;

  bool operator==(const PhaseSpace&) const = default;

 private:
  int dof_;
  std::vector<std::string> names_;
};

/// A point of the 2n-dimensional phase space in canonical coordinate order.
class PhasePoint {
 public:
  PhasePoint() = default;
  explicit PhasePoint(std::vector<double> coords);

  std::size_t size() const noexcept { return coords_.size(); }
  double operator[](std::size_t i) const { return coords_[i]; }
  std::span<const double> coords() const noexcept { return coords_; }

  bool operator==(const PhasePoint&) const = default;

 private:
  std::vector<double> coords_;
};

class ScalarExpr {
 public:
  enum class Kind { Constant, Variable, Add, Sub, Mul, Div, Neg, Pow, Sin, Cos, Exp, Ln };

  /// The zero constant.
  ScalarExpr();

  static ScalarExpr constant(double value);
  static ScalarExpr variable(int index);

  Kind kind() const noexcept;
  double constant_value() const;  // Constant only
  int variable_index() const;     // Variable only
  int exponent() const;           // Pow only
  ScalarExpr lhs() const;  // binary nodes; also the operand of unary nodes
  ScalarExpr rhs() const;  // binary nodes

  bool is_constant() const noexcept { return kind() == Kind::Constant; }
  bool is_zero() const noexcept;
  bool is_one() const noexcept;

  /// Largest coordinate index referenced, or -1 for closed expressions.
  int max_variable_index() const;

  friend ScalarExpr operator+(const ScalarExpr& a, const ScalarExpr& b);
  friend ScalarExpr operator-(const ScalarExpr& a, const ScalarExpr& b);
  friend ScalarExpr operator*(const ScalarExpr& a, const ScalarExpr& b);
  friend ScalarExpr operator/(const ScalarExpr& a, const ScalarExpr& b);
  friend ScalarExpr operator-(const ScalarExpr& a);
  friend ScalarExpr pow(const ScalarExpr& base, int exponent);
  friend ScalarExpr unary(Kind kind, const ScalarExpr& arg);

  ScalarExpr& operator+=(const ScalarExpr& o) { return *this = *this + o; }
  ScalarExpr& operator-=(const ScalarExpr& o) { return *this = *this - o; }

 private:
  friend struct detail::ExprAccess;
  struct Node;
  explicit ScalarExpr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

ScalarExpr pow(const ScalarExpr& base, int exponent);
ScalarExpr unary(ScalarExpr::Kind kind, const ScalarExpr& arg);
inline ScalarExpr sin(const ScalarExpr& a) { return unary(ScalarExpr::Kind::Sin, a); }
inline ScalarExpr cos(const ScalarExpr& a) { return unary(ScalarExpr::Kind::Cos, a); }
inline ScalarExpr exp(const ScalarExpr& a) { return unary(ScalarExpr::Kind::Exp, a); }
inline ScalarExpr ln(const ScalarExpr& a) { return unary(ScalarExpr::Kind::Ln, a); }

/// Parses `text` against the grammar
///
///   expr   := term (("+"|"-") term)* ;
///   term   := factor (("*"|"/") factor)* ;
///   factor := ("-")? base ("^" integer)? ;
///   base   := number | ident | "(" expr ")" | func "(" expr ")" ;
///   func   := "sin" | "cos" | "exp" | "ln" ;
///
/// Throws ParseError on syntax errors, unknown identifiers, and exponents that
/// are not non-negative integer literals.
ScalarExpr parse(std::string_view text, const PhaseSpace& space);

/// Prints in a form `parse` accepts and that evaluates identically.
std::string to_string(const ScalarExpr& e, const PhaseSpace& space);

/// Throws DomainError on division by zero or ln of a non-positive value.
double eval(const ScalarExpr& e, std::span<const double> x);
inline double eval(const ScalarExpr& e, const PhasePoint& x) { return eval(e, x.coords()); }

/// Value and exact gradient with respect to every coordinate of `x`.
Jet eval_jet(const ScalarExpr& e, std::span<const double> x);
inline Jet eval_jet(const ScalarExpr& e, const PhasePoint& x) { return eval_jet(e, x.coords()); }

/// Symbolic partial derivative with respect to coordinate `index`.
ScalarExpr diff(const ScalarExpr& e, int index);
ScalarExpr diff(const ScalarExpr& e, const PhaseSpace& space, std::string_view coord);

/// Replaces coordinate i by replacements[i].
ScalarExpr substitute(const ScalarExpr& e, std::span<const ScalarExpr> replacements);

}  // namespace binoether

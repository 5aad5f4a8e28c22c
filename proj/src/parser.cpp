#include <cctype>
#include <charconv>
#include <string>
#include <string_view>
#include <system_error>

#include "binoether/errors.hpp"
#include "binoether/expr.hpp"

namespace binoether {

namespace {

using Reason = ParseError::Reason;

// Recursive-descent parser, one function per grammar rule.
class Parser {
 public:
  Parser(std::string_view text, const PhaseSpace& space) : text_(text), space_(space) {}

  ScalarExpr parse_all() {
    skip_ws();
    if (at_end()) fail(Reason::Syntax, "empty expression");
    ScalarExpr e = expr();
    skip_ws();
    if (!at_end()) fail(Reason::Syntax, std::string("unexpected '") + peek() + "'");
    return e;
  }

 private:
  std::string_view text_;
  const PhaseSpace& space_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(Reason reason, const std::string& what) const { throw ParseError(reason, pos_, what); }
  [[noreturn]] void fail_at(Reason reason, std::size_t at, const std::string& what) const {
    throw ParseError(reason, at, what);
  }

  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return at_end() ? '\0' : text_[pos_]; }
  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip_ws();
    if (peek() == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!accept(c)) {
      if (at_end()) fail(Reason::Syntax, std::string("expected '") + c + "' but input ended");
      fail(Reason::Syntax, std::string("expected '") + c + "'");
    }
  }

  ScalarExpr expr() {
    ScalarExpr lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = lhs + term();
      } else if (accept('-')) {
        lhs = lhs - term();
      } else {
        return lhs;
      }
    }
  }

  ScalarExpr term() {
    ScalarExpr lhs = factor();
    for (;;) {
      if (accept('*')) {
        lhs = lhs * factor();
      } else if (accept('/')) {
        lhs = lhs / factor();
      } else {
        return lhs;
      }
    }
  }

  ScalarExpr factor() {
    const bool negate = accept('-');
    ScalarExpr b = base();
    if (accept('^')) b = pow(b, integer_exponent());
    return negate ? -b : b;
  }

  ScalarExpr base() {
    skip_ws();
    if (at_end()) fail(Reason::Syntax, "unexpected end of input");
    const char c = peek();
    if (c == '(') {
      ++pos_;
      ScalarExpr inner = expr();
      expect(')');
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return ScalarExpr::constant(number());
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      const std::string_view id = identifier();
      if (id == "sin" || id == "cos" || id == "exp" || id == "ln") {
        skip_ws();
        if (peek() != '(') fail(Reason::Syntax, "function '" + std::string(id) + "' needs a parenthesized argument");
        ++pos_;
        ScalarExpr arg = expr();
        expect(')');
        if (id == "sin") return sin(arg);
        if (id == "cos") return cos(arg);
        if (id == "exp") return exp(arg);
        return ln(arg);
      }
      const auto idx = space_.index_of(id);
      if (!idx) fail_at(Reason::UnknownIdentifier, start, "unknown identifier '" + std::string(id) + "'");
      return ScalarExpr::variable(*idx);
    }
    fail(Reason::Syntax, std::string("unexpected '") + c + "'");
  }

  std::string_view identifier() {
    const std::size_t start = pos_;
    while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_')) ++pos_;
    return text_.substr(start, pos_ - start);
  }

  // Extent of a decimal literal starting at pos_: digits, optional fraction,
  // optional exponent. Returns the end offset without consuming.
  std::size_t scan_number(bool& integral) const {
    std::size_t p = pos_;
    integral = true;
    auto digits = [&] {
      const std::size_t s = p;
      while (p < text_.size() && std::isdigit(static_cast<unsigned char>(text_[p]))) ++p;
      return p - s;
    };
    std::size_t mantissa = digits();
    if (p < text_.size() && text_[p] == '.') {
      integral = false;
      ++p;
      mantissa += digits();
    }
    if (mantissa == 0) return pos_;
    if (p < text_.size() && (text_[p] == 'e' || text_[p] == 'E')) {
      std::size_t q = p + 1;
      if (q < text_.size() && (text_[q] == '+' || text_[q] == '-')) ++q;
      std::size_t s = q;
      while (q < text_.size() && std::isdigit(static_cast<unsigned char>(text_[q]))) ++q;
      if (q > s) {
        integral = false;
        p = q;
      }
    }
    return p;
  }

  double number() {
    bool integral = false;
    const std::size_t end = scan_number(integral);
    if (end == pos_) fail(Reason::Syntax, "malformed number");
    const std::string lit(text_.substr(pos_, end - pos_));
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(lit.data(), lit.data() + lit.size(), v);
    if (ec != std::errc() || ptr != lit.data() + lit.size()) fail(Reason::Syntax, "malformed number '" + lit + "'");
    pos_ = end;
    return v;
  }

  int integer_exponent() {
    skip_ws();
    const std::size_t start = pos_;
    bool integral = false;
    const std::size_t end = scan_number(integral);
    if (end == pos_) fail_at(Reason::NonIntegerExponent, start, "exponent must be a non-negative integer literal");
    if (!integral) fail_at(Reason::NonIntegerExponent, start, "exponent must be an integer");
    int k = 0;
    auto [ptr, ec] = std::from_chars(text_.data() + pos_, text_.data() + end, k);
    if (ec != std::errc() || ptr != text_.data() + end) fail_at(Reason::NonIntegerExponent, start, "exponent out of range");
    pos_ = end;
    return k;
  }
};

}  // namespace

ScalarExpr parse(std::string_view text, const PhaseSpace& space) { return Parser(text, space).parse_all(); }

}  // namespace binoether

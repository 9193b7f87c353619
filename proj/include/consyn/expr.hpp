#ifndef CONSYN_EXPR_HPP
#define CONSYN_EXPR_HPP

#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace consyn {

/// Error raised while parsing expression text. Carries the byte offset of
/// the offending token within the source string.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : std::runtime_error(what), position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// Error raised during evaluation (division by zero). Carries the printed
/// form of the offending subexpression.
class EvalError : public std::runtime_error {
 public:
  EvalError(const std::string& what, std::string expression)
      : std::runtime_error(what), expression_(std::move(expression)) {}
  const std::string& expression() const { return expression_; }

 private:
  std::string expression_;
};

/// Immutable arithmetic expression over state variables x1..xn.
///
/// Supported node kinds: real constants, variable references (1-based),
/// unary negation, the four binary operators and integer powers with
/// nonnegative exponents. Construction folds constants and drops additive
/// and multiplicative identities; no canonical form beyond that is
/// promised. Values are cheap handles onto shared immutable nodes, so
/// copying and concurrent evaluation are safe.
class Expr {
 public:
  enum class Kind { Constant, Variable, Negate, Add, Subtract, Multiply, Divide, Power };

  /// Default-constructs the constant 0.
  Expr();

  static Expr constant(double value);
  static Expr variable(int index);  // index is 1-based

  Kind kind() const;
  double constantValue() const;  // valid for Kind::Constant
  int variableIndex() const;     // valid for Kind::Variable
  int exponent() const;          // valid for Kind::Power
  Expr left() const;             // operand (unary) or left operand (binary/power base)
  Expr right() const;            // right operand (binary)

  /// Value of the expression at the state x (x[0] is x1).
  /// Throws EvalError when a division by zero is encountered.
  double eval(std::span<const double> x) const;

  /// Symbolic partial derivative with respect to variable `var` (1-based).
  Expr diff(int var) const;

  /// Renders the expression in the textual grammar accepted by parseExpr;
  /// parseExpr(str()) reproduces a structurally equal expression.
  std::string str() const;

  /// Structural equality (same tree after the constructor-level folding).
  bool sameAs(const Expr& other) const;

  bool isConstant() const { return kind() == Kind::Constant; }
  /// True when any variable node occurs in the tree.
  bool containsVariable() const;
  /// Largest referenced variable index, 0 for constant expressions.
  int maxVariableIndex() const;

  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator/(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a);
  friend Expr pow(const Expr& base, int exponent);

  struct Node;  // opaque outside expr.cpp

 private:
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);

/// Integer power with nonnegative exponent; throws std::invalid_argument
/// for negative exponents.
Expr pow(const Expr& base, int exponent);

/// Parses expression text over the variables x1..x<dimension>.
///
/// Grammar (^ binds tightest, then unary minus, then * /, then + -;
/// * / + - are left-associative, ^ is right-associative and its exponent
/// must reduce to a nonnegative integer constant):
///
///   expression := term (('+' | '-') term)*
///   term       := unary (('*' | '/') unary)*
///   unary      := '-' unary | power
///   power      := primary ('^' unary)?
///   primary    := number | 'x' digits | '(' expression ')'
///
/// Throws ParseError on malformed input, variable indices outside
/// 1..dimension, and non-integer or negative exponents.
Expr parseExpr(std::string_view source, int dimension);

/// Component i is the partial derivative with respect to x(i+1).
std::vector<Expr> gradient(const Expr& e, int dimension);

}  // namespace consyn

#endif  // CONSYN_EXPR_HPP

#include "consyn/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>

namespace consyn {

struct Expr::Node {
  Kind kind;
  double value = 0.0;  // Kind::Constant
  int index = 0;       // Kind::Variable
  int exponent = 0;    // Kind::Power
  std::shared_ptr<const Node> a;
  std::shared_ptr<const Node> b;
};

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;

double ipow(double base, int exponent) {
  double r = 1.0;
  while (exponent > 0) {
    if (exponent & 1) r *= base;
    base *= base;
    exponent >>= 1;
  }
  return r;
}

std::string formatDouble(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

Expr::Expr() : Expr(constant(0.0)) {}

Expr Expr::constant(double value) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Constant;
  n->value = value;
  return Expr(std::move(n));
}

Expr Expr::variable(int index) {
  if (index < 1) throw std::invalid_argument("variable index must be >= 1");
  auto n = std::make_shared<Node>();
  n->kind = Kind::Variable;
  n->index = index;
  return Expr(std::move(n));
}

Expr::Kind Expr::kind() const { return node_->kind; }
double Expr::constantValue() const { return node_->value; }
int Expr::variableIndex() const { return node_->index; }
int Expr::exponent() const { return node_->exponent; }
Expr Expr::left() const { return Expr(node_->a); }
Expr Expr::right() const { return Expr(node_->b); }

namespace {

bool isConstNode(const NodePtr& n, double v) {
  return n->kind == Expr::Kind::Constant && n->value == v;
}

NodePtr makeBinary(Expr::Kind kind, NodePtr a, NodePtr b) {
  auto n = std::make_shared<Expr::Node>();
  n->kind = kind;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

}  // namespace

Expr operator+(const Expr& a, const Expr& b) {
  const NodePtr& na = a.node_;
  const NodePtr& nb = b.node_;
  if (na->kind == Expr::Kind::Constant && nb->kind == Expr::Kind::Constant)
    return Expr::constant(na->value + nb->value);
  if (isConstNode(na, 0.0)) return b;
  if (isConstNode(nb, 0.0)) return a;
  return Expr(makeBinary(Expr::Kind::Add, na, nb));
}

Expr operator-(const Expr& a, const Expr& b) {
  const NodePtr& na = a.node_;
  const NodePtr& nb = b.node_;
  if (na->kind == Expr::Kind::Constant && nb->kind == Expr::Kind::Constant)
    return Expr::constant(na->value - nb->value);
  if (isConstNode(nb, 0.0)) return a;
  if (isConstNode(na, 0.0)) return -b;
  return Expr(makeBinary(Expr::Kind::Subtract, na, nb));
}

Expr operator*(const Expr& a, const Expr& b) {
  const NodePtr& na = a.node_;
  const NodePtr& nb = b.node_;
  if (na->kind == Expr::Kind::Constant && nb->kind == Expr::Kind::Constant)
    return Expr::constant(na->value * nb->value);
  if (isConstNode(na, 0.0) || isConstNode(nb, 0.0)) return Expr::constant(0.0);
  if (isConstNode(na, 1.0)) return b;
  if (isConstNode(nb, 1.0)) return a;
  // Merge adjacent constant factors: c1 * (c2 * e) -> (c1*c2) * e.
  if (na->kind == Expr::Kind::Constant && nb->kind == Expr::Kind::Multiply &&
      nb->a->kind == Expr::Kind::Constant)
    return Expr::constant(na->value * nb->a->value) * Expr(nb->b);
  if (nb->kind == Expr::Kind::Constant && na->kind == Expr::Kind::Multiply &&
      na->a->kind == Expr::Kind::Constant)
    return Expr::constant(nb->value * na->a->value) * Expr(na->b);
  return Expr(makeBinary(Expr::Kind::Multiply, na, nb));
}

Expr operator/(const Expr& a, const Expr& b) {
  const NodePtr& na = a.node_;
  const NodePtr& nb = b.node_;
  if (na->kind == Expr::Kind::Constant && nb->kind == Expr::Kind::Constant &&
      nb->value != 0.0)
    return Expr::constant(na->value / nb->value);
  if (isConstNode(nb, 1.0)) return a;
  return Expr(makeBinary(Expr::Kind::Divide, na, nb));
}

Expr operator-(const Expr& a) {
  const NodePtr& na = a.node_;
  if (na->kind == Expr::Kind::Constant) return Expr::constant(-na->value);
  if (na->kind == Expr::Kind::Negate) return Expr(na->a);
  auto n = std::make_shared<Expr::Node>();
  n->kind = Expr::Kind::Negate;
  n->a = na;
  return Expr(std::move(n));
}

Expr pow(const Expr& base, int exponent) {
  if (exponent < 0) throw std::invalid_argument("power exponent must be >= 0");
  if (exponent == 0) return Expr::constant(1.0);
  if (exponent == 1) return base;
  if (base.isConstant()) {
    double folded = ipow(base.constantValue(), exponent);
    if (std::isfinite(folded)) return Expr::constant(folded);
  }
  auto n = std::make_shared<Expr::Node>();
  n->kind = Expr::Kind::Power;
  n->exponent = exponent;
  n->a = base.node_;
  return Expr(std::move(n));
}

double Expr::eval(std::span<const double> x) const {
  const Node* n = node_.get();
  switch (n->kind) {
    case Kind::Constant:
      return n->value;
    case Kind::Variable:
      if (static_cast<std::size_t>(n->index) > x.size())
        throw EvalError("variable x" + std::to_string(n->index) +
                            " exceeds the state dimension " + std::to_string(x.size()),
                        str());
      return x[static_cast<std::size_t>(n->index - 1)];
    case Kind::Negate:
      return -Expr(n->a).eval(x);
    case Kind::Add:
      return Expr(n->a).eval(x) + Expr(n->b).eval(x);
    case Kind::Subtract:
      return Expr(n->a).eval(x) - Expr(n->b).eval(x);
    case Kind::Multiply:
      return Expr(n->a).eval(x) * Expr(n->b).eval(x);
    case Kind::Divide: {
      double num = Expr(n->a).eval(x);
      double den = Expr(n->b).eval(x);
      if (den == 0.0)
        throw EvalError("division by zero in '" + str() + "'", str());
      return num / den;
    }
    case Kind::Power:
      return ipow(Expr(n->a).eval(x), n->exponent);
  }
  return 0.0;  // unreachable
}

Expr Expr::diff(int var) const {
  const Node* n = node_.get();
  switch (n->kind) {
    case Kind::Constant:
      return constant(0.0);
    case Kind::Variable:
      return constant(n->index == var ? 1.0 : 0.0);
    case Kind::Negate:
      return -Expr(n->a).diff(var);
    case Kind::Add:
      return Expr(n->a).diff(var) + Expr(n->b).diff(var);
    case Kind::Subtract:
      return Expr(n->a).diff(var) - Expr(n->b).diff(var);
    case Kind::Multiply: {
      Expr u(n->a), v(n->b);
      return u.diff(var) * v + u * v.diff(var);
    }
    case Kind::Divide: {
      Expr u(n->a), v(n->b);
      return (u.diff(var) * v - u * v.diff(var)) / pow(v, 2);
    }
    case Kind::Power: {
      Expr u(n->a);
      return constant(static_cast<double>(n->exponent)) * pow(u, n->exponent - 1) *
             u.diff(var);
    }
  }
  return constant(0.0);  // unreachable
}

namespace {

// Precedence levels used by the printer; parentheses are inserted whenever
// a child's level is below what its context requires, so that re-parsing
// reproduces the tree.
int printPrecedence(const Expr::Node* n) {
  switch (n->kind) {
    case Expr::Kind::Add:
    case Expr::Kind::Subtract:
      return 1;
    case Expr::Kind::Multiply:
    case Expr::Kind::Divide:
      return 2;
    case Expr::Kind::Negate:
      return 3;
    case Expr::Kind::Power:
      return 4;
    case Expr::Kind::Constant:
      return n->value < 0.0 ? 3 : 6;  // negative constants print as unary minus
    case Expr::Kind::Variable:
      return 6;
  }
  return 6;
}

void printNode(const Expr::Node* n, int minPrec, std::string& out) {
  const bool parens = printPrecedence(n) < minPrec;
  if (parens) out += '(';
  switch (n->kind) {
    case Expr::Kind::Constant:
      if (n->value < 0.0) {
        out += '-';
        out += formatDouble(-n->value);
      } else {
        out += formatDouble(n->value);
      }
      break;
    case Expr::Kind::Variable:
      out += 'x';
      out += std::to_string(n->index);
      break;
    case Expr::Kind::Negate:
      out += '-';
      printNode(n->a.get(), 3, out);
      break;
    case Expr::Kind::Add:
      printNode(n->a.get(), 1, out);
      out += " + ";
      printNode(n->b.get(), 2, out);
      break;
    case Expr::Kind::Subtract:
      printNode(n->a.get(), 1, out);
      out += " - ";
      printNode(n->b.get(), 2, out);
      break;
    case Expr::Kind::Multiply:
      printNode(n->a.get(), 2, out);
      out += '*';
      printNode(n->b.get(), 3, out);
      break;
    case Expr::Kind::Divide:
      printNode(n->a.get(), 2, out);
      out += '/';
      printNode(n->b.get(), 3, out);
      break;
    case Expr::Kind::Power:
      printNode(n->a.get(), 5, out);
      out += '^';
      out += std::to_string(n->exponent);
      break;
  }
  if (parens) out += ')';
}

}  // namespace

std::string Expr::str() const {
  std::string out;
  printNode(node_.get(), 0, out);
  return out;
}

bool Expr::sameAs(const Expr& other) const {
  const Node* a = node_.get();
  const Node* b = other.node_.get();
  if (a == b) return true;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case Kind::Constant:
      return a->value == b->value;
    case Kind::Variable:
      return a->index == b->index;
    case Kind::Negate:
      return Expr(a->a).sameAs(Expr(b->a));
    case Kind::Power:
      return a->exponent == b->exponent && Expr(a->a).sameAs(Expr(b->a));
    case Kind::Add:
    case Kind::Subtract:
    case Kind::Multiply:
    case Kind::Divide:
      return Expr(a->a).sameAs(Expr(b->a)) && Expr(a->b).sameAs(Expr(b->b));
  }
  return false;
}

bool Expr::containsVariable() const {
  const Node* n = node_.get();
  switch (n->kind) {
    case Kind::Constant:
      return false;
    case Kind::Variable:
      return true;
    case Kind::Negate:
    case Kind::Power:
      return Expr(n->a).containsVariable();
    default:
      return Expr(n->a).containsVariable() || Expr(n->b).containsVariable();
  }
}

int Expr::maxVariableIndex() const {
  const Node* n = node_.get();
  switch (n->kind) {
    case Kind::Constant:
      return 0;
    case Kind::Variable:
      return n->index;
    case Kind::Negate:
    case Kind::Power:
      return Expr(n->a).maxVariableIndex();
    default:
      return std::max(Expr(n->a).maxVariableIndex(), Expr(n->b).maxVariableIndex());
  }
}

namespace {

class Parser {
 public:
  Parser(std::string_view src, int dimension) : src_(src), dim_(dimension) {}

  Expr parse() {
    Expr e = parseExpression();
    skipSpace();
    if (pos_ != src_.size()) fail("unexpected trailing input");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(what + " at position " + std::to_string(pos_), pos_);
  }

  void skipSpace() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_])))
      ++pos_;
  }

  bool consume(char c) {
    skipSpace();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skipSpace();
    return pos_ < src_.size() ? src_[pos_] : '\0';
  }

  Expr parseExpression() {
    Expr e = parseTerm();
    for (;;) {
      if (consume('+'))
        e = e + parseTerm();
      else if (consume('-'))
        e = e - parseTerm();
      else
        return e;
    }
  }

  Expr parseTerm() {
    Expr e = parseUnary();
    for (;;) {
      if (consume('*'))
        e = e * parseUnary();
      else if (consume('/'))
        e = e / parseUnary();
      else
        return e;
    }
  }

  Expr parseUnary() {
    if (consume('-')) return -parseUnary();
    return parsePower();
  }

  Expr parsePower() {
    Expr base = parsePrimary();
    skipSpace();
    const std::size_t caret = pos_;  // points at '^' after the space skip
    if (!consume('^')) return base;
    Expr exp = parseUnary();  // right-associative: x^2^3 == x^(2^3)
    if (!exp.isConstant()) {
      pos_ = caret;
      fail("exponent must be a constant integer");
    }
    double v = exp.constantValue();
    if (v < 0.0 || v != std::floor(v) || v > 1e9) {
      pos_ = caret;
      fail("exponent must be a nonnegative integer");
    }
    return pow(base, static_cast<int>(v));
  }

  Expr parsePrimary() {
    skipSpace();
    if (pos_ >= src_.size()) fail("unexpected end of input");
    char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      Expr e = parseExpression();
      if (!consume(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) return parseNumber();
    if (c == 'x') return parseVariable();
    fail(std::string("unexpected character '") + c + "'");
  }

  Expr parseNumber() {
    std::size_t start = pos_;
    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
      ++pos_;
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
        ++pos_;
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t mark = pos_;
      ++pos_;
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
      if (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
          ++pos_;
      } else {
        pos_ = mark;  // bare 'e' is not an exponent
      }
    }
    double value = 0.0;
    auto res = std::from_chars(src_.data() + start, src_.data() + pos_, value);
    if (res.ec != std::errc()) {
      pos_ = start;
      fail("malformed number");
    }
    return Expr::constant(value);
  }

  Expr parseVariable() {
    std::size_t start = pos_;
    ++pos_;  // 'x'
    std::size_t digitsStart = pos_;
    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
      ++pos_;
    if (pos_ == digitsStart) {
      pos_ = start;
      fail("expected variable of the form x<k>");
    }
    int idx = 0;
    auto res = std::from_chars(src_.data() + digitsStart, src_.data() + pos_, idx);
    if (res.ec != std::errc() || idx < 1 || idx > dim_) {
      std::string token(src_.substr(start, pos_ - start));
      pos_ = start;
      fail("variable " + token + " out of range 1.." + std::to_string(dim_));
    }
    return Expr::variable(idx);
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int dim_;
};

}  // namespace

Expr parseExpr(std::string_view source, int dimension) {
  if (dimension < 1) throw std::invalid_argument("dimension must be >= 1");
  return Parser(source, dimension).parse();
}

std::vector<Expr> gradient(const Expr& e, int dimension) {
  std::vector<Expr> g;
  g.reserve(static_cast<std::size_t>(dimension));
  for (int i = 1; i <= dimension; ++i) g.push_back(e.diff(i));
  return g;
}

}  // namespace consyn

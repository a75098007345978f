#include "antiplane/expr.hpp"

#include <cctype>
#include <cmath>

namespace antiplane {

struct Expr::Node {
  enum class Op { Const, X, Y, Add, Sub, Mul, Div, Neg, Sin, Cos } op;
  double value = 0.0;
  std::shared_ptr<const Node> lhs, rhs;

  double eval(double x, double y) const {
    switch (op) {
      case Op::Const: return value;
      case Op::X: return x;
      case Op::Y: return y;
      case Op::Add: return lhs->eval(x, y) + rhs->eval(x, y);
      case Op::Sub: return lhs->eval(x, y) - rhs->eval(x, y);
      case Op::Mul: return lhs->eval(x, y) * rhs->eval(x, y);
      case Op::Div: return lhs->eval(x, y) / rhs->eval(x, y);
      case Op::Neg: return -lhs->eval(x, y);
      case Op::Sin: return std::sin(lhs->eval(x, y));
      case Op::Cos: return std::cos(lhs->eval(x, y));
    }
    return 0.0;
  }
  bool constant() const {
    switch (op) {
      case Op::Const: return true;
      case Op::X:
      case Op::Y: return false;
      case Op::Neg:
      case Op::Sin:
      case Op::Cos: return lhs->constant();
      default: return lhs->constant() && rhs->constant();
    }
  }
};

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;

struct Parser {
  const std::string& s;
  size_t pos = 0;

  void skip() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  bool eat(char c) {
    skip();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  [[noreturn]] void fail(const std::string& what) {
    throw ExprError(what + " at position " + std::to_string(pos) + " in '" + s + "'");
  }

  NodePtr make(Expr::Node::Op op, NodePtr l = nullptr, NodePtr r = nullptr, double v = 0.0) {
    auto n = std::make_shared<Expr::Node>();
    n->op = op;
    n->value = v;
    n->lhs = std::move(l);
    n->rhs = std::move(r);
    return n;
  }

  NodePtr expr() {
    NodePtr n = term();
    for (;;) {
      if (eat('+'))
        n = make(Expr::Node::Op::Add, n, term());
      else if (eat('-'))
        n = make(Expr::Node::Op::Sub, n, term());
      else
        return n;
    }
  }
  NodePtr term() {
    NodePtr n = factor();
    for (;;) {
      if (eat('*'))
        n = make(Expr::Node::Op::Mul, n, factor());
      else if (eat('/'))
        n = make(Expr::Node::Op::Div, n, factor());
      else
        return n;
    }
  }
  NodePtr factor() {
    if (eat('-')) return make(Expr::Node::Op::Neg, factor());
    return primary();
  }
  NodePtr primary() {
    skip();
    if (pos >= s.size()) fail("unexpected end of expression");
    char c = s[pos];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      size_t end;
      double v = std::stod(s.substr(pos), &end);
      pos += end;
      return make(Expr::Node::Op::Const, nullptr, nullptr, v);
    }
    if (c == '(') {
      ++pos;
      NodePtr n = expr();
      if (!eat(')')) fail("missing ')'");
      return n;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      size_t start = pos;
      while (pos < s.size() && std::isalpha(static_cast<unsigned char>(s[pos]))) ++pos;
      std::string name = s.substr(start, pos - start);
      if (name == "x") return make(Expr::Node::Op::X);
      if (name == "y") return make(Expr::Node::Op::Y);
      if (name == "pi") return make(Expr::Node::Op::Const, nullptr, nullptr, M_PI);
      if (name == "sin" || name == "cos") {
        if (!eat('(')) fail("expected '(' after " + name);
        NodePtr arg = expr();
        if (!eat(')')) fail("missing ')'");
        return make(name == "sin" ? Expr::Node::Op::Sin : Expr::Node::Op::Cos, arg);
      }
      fail("unknown identifier '" + name + "'");
    }
    fail(std::string("unexpected character '") + c + "'");
  }
};

}  // namespace

Expr Expr::parse(const std::string& text) {
  Parser p{text};
  NodePtr root = p.expr();
  p.skip();
  if (p.pos != text.size()) p.fail("trailing characters");
  return Expr(std::move(root));
}

double Expr::eval(double x, double y) const {
  if (!root_) throw ExprError("empty expression");
  return root_->eval(x, y);
}

bool Expr::is_constant() const { return root_ && root_->constant(); }

Expr::Expr() = default;
Expr::Expr(const Expr&) = default;
Expr::Expr(Expr&&) noexcept = default;
Expr& Expr::operator=(Expr other) {
  root_ = std::move(other.root_);
  return *this;
}
Expr::~Expr() = default;
Expr::Expr(std::shared_ptr<const Node> root) : root_(std::move(root)) {}

}  // namespace antiplane

#pragma once

#include <memory>
#include <stdexcept>
#include <string>

namespace antiplane {

struct ExprError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Small arithmetic expressions over x, y: numbers, + - * /, unary minus,
/// parentheses, sin, cos, pi. Enough for manufactured solutions.
class Expr {
 public:
  struct Node;

  static Expr parse(const std::string& text);
  double eval(double x, double y) const;
  bool is_constant() const;

  Expr();
  Expr(const Expr&);
  Expr(Expr&&) noexcept;
  Expr& operator=(Expr);
  ~Expr();

 private:
  explicit Expr(std::shared_ptr<const Node> root);
  std::shared_ptr<const Node> root_;
};

}  // namespace antiplane

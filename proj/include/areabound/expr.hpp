#pragma once

#include <functional>
#include <memory>
#include <string>

namespace areabound {

/// Arithmetic expression in the variables x and y.
/// Grammar: + - * / ^ (right associative), unary minus, parentheses,
/// numeric literals, and the calls exp, log, sin, cos, sqrt, sinh, cosh, tanh.
class Expression {
 public:
  static Expression parse(const std::string& text);

  double operator()(double x, double y) const { return eval_(x, y); }
  const std::string& text() const { return text_; }

  std::function<double(double, double)> as_function() const { return eval_; }

 private:
  std::string text_;
  std::function<double(double, double)> eval_;
};

}  // namespace areabound

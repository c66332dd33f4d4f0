#include "areabound/expr.hpp"

#include <cctype>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace areabound {

namespace {

struct Node;
using NodeP = std::shared_ptr<const Node>;

struct Node {
  enum class Op { Const, VarX, VarY, Add, Sub, Mul, Div, Pow, Neg, Call } op;
  double value = 0;
  double (*fn)(double) = nullptr;
  NodeP a, b;
};

double eval(const Node& n, double x, double y) {
  switch (n.op) {
    case Node::Op::Const: return n.value;
    case Node::Op::VarX: return x;
    case Node::Op::VarY: return y;
    case Node::Op::Add: return eval(*n.a, x, y) + eval(*n.b, x, y);
    case Node::Op::Sub: return eval(*n.a, x, y) - eval(*n.b, x, y);
    case Node::Op::Mul: return eval(*n.a, x, y) * eval(*n.b, x, y);
    case Node::Op::Div: return eval(*n.a, x, y) / eval(*n.b, x, y);
    case Node::Op::Pow: return std::pow(eval(*n.a, x, y), eval(*n.b, x, y));
    case Node::Op::Neg: return -eval(*n.a, x, y);
    case Node::Op::Call: return n.fn(eval(*n.a, x, y));
  }
  return 0;
}

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  NodeP run() {
    NodeP e = expr();
    skip_ws();
    if (pos_ != s_.size())
      throw std::invalid_argument("expression: trailing input at '" +
                                  s_.substr(pos_) + "'");
    return e;
  }

 private:
  const std::string& s_;
  size_t pos_ = 0;

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  char peek() {
    skip_ws();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }

  static NodeP make(Node::Op op, NodeP a = nullptr, NodeP b = nullptr) {
    auto n = std::make_shared<Node>();
    n->op = op;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
  }

  NodeP expr() {
    NodeP lhs = term();
    for (;;) {
      if (eat('+'))
        lhs = make(Node::Op::Add, lhs, term());
      else if (eat('-'))
        lhs = make(Node::Op::Sub, lhs, term());
      else
        return lhs;
    }
  }

  NodeP term() {
    NodeP lhs = signed_power();
    for (;;) {
      if (eat('*'))
        lhs = make(Node::Op::Mul, lhs, signed_power());
      else if (eat('/'))
        lhs = make(Node::Op::Div, lhs, signed_power());
      else
        return lhs;
    }
  }

  // unary minus binds looser than '^', so -x^2 == -(x^2)
  NodeP signed_power() {
    if (eat('-')) return make(Node::Op::Neg, signed_power());
    return power();
  }

  NodeP power() {
    NodeP base = primary();
    if (eat('^')) return make(Node::Op::Pow, base, signed_power());
    return base;
  }

  NodeP primary() {
    skip_ws();
    if (pos_ >= s_.size()) throw std::invalid_argument("expression: unexpected end");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      NodeP e = expr();
      if (!eat(')')) throw std::invalid_argument("expression: missing ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
    throw std::invalid_argument(std::string("expression: unexpected character '") + c + "'");
  }

  NodeP number() {
    size_t end = pos_;
    while (end < s_.size() &&
           (std::isdigit(static_cast<unsigned char>(s_[end])) || s_[end] == '.' ||
            s_[end] == 'e' || s_[end] == 'E' ||
            ((s_[end] == '+' || s_[end] == '-') && end > pos_ &&
             (s_[end - 1] == 'e' || s_[end - 1] == 'E'))))
      ++end;
    auto n = std::make_shared<Node>();
    n->op = Node::Op::Const;
    try {
      n->value = std::stod(s_.substr(pos_, end - pos_));
    } catch (const std::exception&) {
      throw std::invalid_argument("expression: bad numeric literal");
    }
    pos_ = end;
    return n;
  }

  NodeP identifier() {
    size_t end = pos_;
    while (end < s_.size() && std::isalnum(static_cast<unsigned char>(s_[end]))) ++end;
    std::string name = s_.substr(pos_, end - pos_);
    pos_ = end;
    if (name == "x") return make(Node::Op::VarX);
    if (name == "y") return make(Node::Op::VarY);

    static const struct {
      const char* name;
      double (*fn)(double);
    } funcs[] = {{"exp", std::exp},   {"log", std::log},   {"sin", std::sin},
                 {"cos", std::cos},   {"sqrt", std::sqrt}, {"sinh", std::sinh},
                 {"cosh", std::cosh}, {"tanh", std::tanh}};
    for (const auto& f : funcs) {
      if (name == f.name) {
        if (!eat('(')) throw std::invalid_argument("expression: '" + name + "' needs '('");
        NodeP arg = expr();
        if (!eat(')')) throw std::invalid_argument("expression: missing ')'");
        auto n = make(Node::Op::Call, arg);
        const_cast<Node*>(n.get())->fn = f.fn;
        return n;
      }
    }
    throw std::invalid_argument("expression: unknown identifier '" + name + "'");
  }
};

}  // namespace

Expression Expression::parse(const std::string& text) {
  Parser p(text);
  NodeP root = p.run();
  Expression e;
  e.text_ = text;
  e.eval_ = [root](double x, double y) { return eval(*root, x, y); };
  return e;
}

}  // namespace areabound

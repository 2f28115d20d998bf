#include "symimg/expr.hpp"

#include <cctype>
#include <cmath>
#include <memory>
#include <numbers>

#include "symimg/errors.hpp"

namespace symimg {

namespace {

struct Node {
  enum class Op { number, var, add, sub, mul, div, neg, sin, cos };
  Op op = Op::number;
  double value = 0.0;
  std::size_t index = 0;
  std::shared_ptr<const Node> a;
  std::shared_ptr<const Node> b;

  double eval(const Point& x) const {
    switch (op) {
      case Op::number: return value;
      case Op::var: return x[index];
      case Op::add: return a->eval(x) + b->eval(x);
      case Op::sub: return a->eval(x) - b->eval(x);
      case Op::mul: return a->eval(x) * b->eval(x);
      case Op::div: return a->eval(x) / b->eval(x);
      case Op::neg: return -a->eval(x);
      case Op::sin: return std::sin(a->eval(x));
      case Op::cos: return std::cos(a->eval(x));
    }
    return 0.0;
  }
};

using NodePtr = std::shared_ptr<const Node>;

NodePtr make(Node::Op op, NodePtr a = nullptr, NodePtr b = nullptr) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

class Parser {
 public:
  Parser(const std::string& text, std::size_t dim) : s_(text), dim_(dim) {}

  NodePtr parse() {
    NodePtr n = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return n;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError("expression '" + s_ + "': " + msg + " at position " + std::to_string(pos_));
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr expr() {
    NodePtr n = term();
    while (true) {
      if (eat('+'))
        n = make(Node::Op::add, n, term());
      else if (eat('-'))
        n = make(Node::Op::sub, n, term());
      else
        return n;
    }
  }

  NodePtr term() {
    NodePtr n = unary();
    while (true) {
      if (eat('*'))
        n = make(Node::Op::mul, n, unary());
      else if (eat('/'))
        n = make(Node::Op::div, n, unary());
      else
        return n;
    }
  }

  NodePtr unary() {
    if (eat('-')) return make(Node::Op::neg, unary());
    return primary();
  }

  NodePtr primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr n = expr();
      if (!eat(')')) fail("missing ')'");
      return n;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(s_.substr(pos_), &used);
      } catch (const std::exception&) {
        fail("bad number");
      }
      pos_ += used;
      auto n = std::make_shared<Node>();
      n->value = v;
      return n;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t end = pos_;
      while (end < s_.size() && std::isalnum(static_cast<unsigned char>(s_[end]))) ++end;
      const std::string word = s_.substr(pos_, end - pos_);
      pos_ = end;
      if (word == "pi") {
        auto n = std::make_shared<Node>();
        n->value = std::numbers::pi;
        return n;
      }
      if (word == "sin" || word == "cos") {
        if (!eat('(')) fail("expected '(' after " + word);
        NodePtr arg = expr();
        if (!eat(')')) fail("missing ')'");
        return make(word == "sin" ? Node::Op::sin : Node::Op::cos, arg);
      }
      if (word.size() >= 2 && word[0] == 'x' &&
          word.find_first_not_of("0123456789", 1) == std::string::npos) {
        const std::size_t idx = std::stoul(word.substr(1));
        if (idx >= dim_) fail("variable " + word + " exceeds dimension " + std::to_string(dim_));
        auto n = std::make_shared<Node>();
        n->op = Node::Op::var;
        n->index = idx;
        return n;
      }
      fail("unknown name '" + word + "'");
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::string s_;
  std::size_t dim_;
  std::size_t pos_ = 0;
};

}  // namespace

ScalarFunction parse_expression(const std::string& text, std::size_t dim) {
  NodePtr root = Parser(text, dim).parse();
  return [root](const Point& x) { return root->eval(x); };
}

}  // namespace symimg

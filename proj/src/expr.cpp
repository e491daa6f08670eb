#include "gcalc/expr.hpp"

#include <cctype>
#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>

#include "gcalc/error.hpp"

namespace gcalc {
namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;

NodePtr make(Expr::Kind k, std::vector<NodePtr> args = {}, double v = 0.0,
             std::string name = {}) {
  auto n = std::make_shared<Expr::Node>();
  n->kind = k;
  n->value = v;
  n->name = std::move(name);
  n->args = std::move(args);
  return n;
}

class Parser {
 public:
  explicit Parser(std::string_view s) : s_(s) {}

  NodePtr parse_all() {
    NodePtr e = parse_sum();
    skip_ws();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw Error("expr", msg + " at offset " + std::to_string(pos_) + " in \"" +
                            std::string(s_) + "\"");
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr parse_sum() {
    NodePtr lhs = parse_product();
    for (;;) {
      if (accept('+')) {
        lhs = make(Expr::Kind::add, {lhs, parse_product()});
      } else if (accept('-')) {
        lhs = make(Expr::Kind::sub, {lhs, parse_product()});
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_product() {
    NodePtr lhs = parse_unary();
    for (;;) {
      if (accept('*')) {
        lhs = make(Expr::Kind::mul, {lhs, parse_unary()});
      } else if (accept('/')) {
        lhs = make(Expr::Kind::div, {lhs, parse_unary()});
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_unary() {
    if (accept('-')) return make(Expr::Kind::unary_minus, {parse_unary()});
    if (accept('+')) return parse_unary();
    return parse_power();
  }

  // Right associative; binds tighter than unary minus on its left operand.
  NodePtr parse_power() {
    NodePtr base = parse_atom();
    if (accept('^')) return make(Expr::Kind::pow, {base, parse_unary()});
    return base;
  }

  NodePtr parse_atom() {
    skip_ws();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    const char c = s_[pos_];
    if (accept('(')) {
      NodePtr e = parse_sum();
      if (!accept(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string name;
      while (pos_ < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) {
        name += s_[pos_++];
      }
      if (accept('(')) {
        std::vector<NodePtr> args;
        if (!accept(')')) {
          args.push_back(parse_sum());
          while (accept(',')) args.push_back(parse_sum());
          if (!accept(')')) fail("expected ')' after arguments");
        }
        return make(Expr::Kind::call, std::move(args), 0.0, name);
      }
      if (name == "pi") return make(Expr::Kind::number, {}, std::numbers::pi);
      return make(Expr::Kind::variable, {}, 0.0, name);
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  NodePtr parse_number() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() &&
           (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) {
      ++pos_;
    }
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      std::size_t p = pos_ + 1;
      if (p < s_.size() && (s_[p] == '+' || s_[p] == '-')) ++p;
      if (p < s_.size() && std::isdigit(static_cast<unsigned char>(s_[p]))) {
        pos_ = p;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      }
    }
    const std::string tok(s_.substr(start, pos_ - start));
    try {
      std::size_t used = 0;
      double v = std::stod(tok, &used);
      if (used != tok.size()) fail("bad number '" + tok + "'");
      return make(Expr::Kind::number, {}, v);
    } catch (const std::invalid_argument&) {
      fail("bad number '" + tok + "'");
    }
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

double call(const std::string& name, const std::vector<double>& a) {
  auto need = [&](std::size_t n) {
    if (a.size() != n) {
      throw Error("expr", "function '" + name + "' expects " + std::to_string(n) +
                              " argument(s)");
    }
  };
  if (name == "sin") { need(1); return std::sin(a[0]); }
  if (name == "cos") { need(1); return std::cos(a[0]); }
  if (name == "tan") { need(1); return std::tan(a[0]); }
  if (name == "exp") { need(1); return std::exp(a[0]); }
  if (name == "log") { need(1); return std::log(a[0]); }
  if (name == "sqrt") { need(1); return std::sqrt(a[0]); }
  if (name == "abs") { need(1); return std::fabs(a[0]); }
  if (name == "sinh") { need(1); return std::sinh(a[0]); }
  if (name == "cosh") { need(1); return std::cosh(a[0]); }
  if (name == "tanh") { need(1); return std::tanh(a[0]); }
  if (name == "atan") { need(1); return std::atan(a[0]); }
  if (name == "min") { need(2); return std::min(a[0], a[1]); }
  if (name == "max") { need(2); return std::max(a[0], a[1]); }
  throw Error("expr", "unknown function '" + name + "'");
}

double eval_node(const Expr::Node& n, const std::map<std::string, double, std::less<>>& vars) {
  switch (n.kind) {
    case Expr::Kind::number:
      return n.value;
    case Expr::Kind::variable: {
      auto it = vars.find(n.name);
      if (it == vars.end()) throw Error("expr", "unbound variable '" + n.name + "'");
      return it->second;
    }
    case Expr::Kind::unary_minus:
      return -eval_node(*n.args[0], vars);
    case Expr::Kind::add:
      return eval_node(*n.args[0], vars) + eval_node(*n.args[1], vars);
    case Expr::Kind::sub:
      return eval_node(*n.args[0], vars) - eval_node(*n.args[1], vars);
    case Expr::Kind::mul:
      return eval_node(*n.args[0], vars) * eval_node(*n.args[1], vars);
    case Expr::Kind::div:
      return eval_node(*n.args[0], vars) / eval_node(*n.args[1], vars);
    case Expr::Kind::pow: {
      const double b = eval_node(*n.args[0], vars);
      const double e = eval_node(*n.args[1], vars);
      if (e == std::round(e) && std::fabs(e) <= 64) {
        // Integer powers by repeated multiplication keep polynomials exact.
        double r = 1.0;
        for (int i = 0; i < static_cast<int>(std::fabs(e)); ++i) r *= b;
        return e < 0 ? 1.0 / r : r;
      }
      return std::pow(b, e);
    }
    case Expr::Kind::call: {
      std::vector<double> a;
      a.reserve(n.args.size());
      for (const auto& arg : n.args) a.push_back(eval_node(*arg, vars));
      return call(n.name, a);
    }
  }
  return 0.0;
}

void collect(const Expr::Node& n, std::set<std::string>& out) {
  if (n.kind == Expr::Kind::variable) out.insert(n.name);
  for (const auto& a : n.args) collect(*a, out);
}

}  // namespace

Expr Expr::parse(std::string_view text) {
  Expr e;
  e.root_ = Parser(text).parse_all();
  e.text_ = std::string(text);
  return e;
}

double Expr::eval(const std::map<std::string, double, std::less<>>& vars) const {
  return eval_node(*root_, vars);
}

double Expr::operator()(std::string_view var, double value) const {
  std::map<std::string, double, std::less<>> vars;
  vars.emplace(std::string(var), value);
  return eval(vars);
}

std::vector<std::string> Expr::variables() const {
  std::set<std::string> s;
  collect(*root_, s);
  return {s.begin(), s.end()};
}

}  // namespace gcalc

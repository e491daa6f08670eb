#pragma once

// Small arithmetic expression language used by config files and the CLI to
// describe scalar functions ("sin(x) + x^2", "0.5*x^2", ...).

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace gcalc {

class Expr {
 public:
  enum class Kind { number, variable, unary_minus, add, sub, mul, div, pow, call };

  struct Node {
    Kind kind;
    double value = 0.0;       // number
    std::string name;         // variable or function name
    std::vector<std::shared_ptr<const Node>> args;
  };

  /// Parses `text`. Throws gcalc::Error("expr", ...) on malformed input.
  static Expr parse(std::string_view text);

  /// Evaluates with the given variable bindings; unknown variables throw.
  double eval(const std::map<std::string, double, std::less<>>& vars) const;

  /// Convenience for single-variable functions.
  double operator()(std::string_view var, double value) const;

  /// Variables referenced anywhere in the expression.
  std::vector<std::string> variables() const;

  const Node& root() const { return *root_; }
  const std::string& text() const { return text_; }

 private:
  std::shared_ptr<const Node> root_;
  std::string text_;
};

}  // namespace gcalc

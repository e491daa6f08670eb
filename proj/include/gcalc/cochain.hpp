#pragma once

// Cochains on the nerve of the pair groupoid: functions of (n+1)-tuples of
// base points, the permutation action, (anti)symmetrization, the coboundary,
// wedge products and pullbacks.

#include <complex>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gcalc/error.hpp"
#include "gcalc/expr.hpp"
#include "gcalc/point.hpp"

namespace gcalc {

enum class Symmetry {
  none,
  normalized,
  symmetric,                 // invariant under swapping the first two slots
  antisymmetric,             // odd under swapping the first two slots
  completely_symmetric,
  completely_antisymmetric,
  alternating_invariant,     // invariant under even permutations
};

std::string_view symmetry_name(Symmetry s);

/// Scalar function on base points.
using Field = std::function<double(const Point&)>;

/// Field given by an expression in x, y, z.
Field field_from_expr(const Expr& e);
Field field_from_text(std::string_view text);

template <class T>
class BasicCochain {
 public:
  using value_type = T;
  using Evaluator = std::function<T(PointSpan)>;

  BasicCochain() = default;
  BasicCochain(int degree, Evaluator eval, Symmetry symmetry = Symmetry::none,
               std::string name = {},
               double locality = std::numeric_limits<double>::infinity())
      : degree_(degree),
        eval_(std::move(eval)),
        symmetry_(symmetry),
        name_(std::move(name)),
        locality_(locality) {
    if (degree_ < 0) throw Error("cochain", "negative degree");
  }

  int degree() const { return degree_; }
  Symmetry symmetry() const { return symmetry_; }
  const std::string& name() const { return name_; }
  /// Pairwise distance bound for admissible tuples (infinite by default).
  double locality() const { return locality_; }

  /// Evaluates on an (n+1)-tuple. Throws on arity mismatch and
  /// LocalityError when two points are at least `locality()` apart.
  T operator()(PointSpan t) const {
    if (t.size() != static_cast<std::size_t>(degree_ + 1)) {
      throw Error("cochain", "expected " + std::to_string(degree_ + 1) + " points, got " +
                                 std::to_string(t.size()));
    }
    if (locality_ < std::numeric_limits<double>::infinity()) {
      for (std::size_t i = 0; i < t.size(); ++i) {
        for (std::size_t j = i + 1; j < t.size(); ++j) {
          if (!(distance(t[i], t[j]) < locality_)) {
            throw LocalityError("tuple outside locality radius " + std::to_string(locality_) +
                                (name_.empty() ? "" : " of '" + name_ + "'"));
          }
        }
      }
    }
    return eval_(t);
  }
  T operator()(std::initializer_list<Point> t) const {
    return (*this)(PointSpan(t.begin(), t.size()));
  }

  BasicCochain with_locality(double r) const {
    BasicCochain c = *this;
    c.locality_ = r;
    return c;
  }
  BasicCochain with_name(std::string n) const {
    BasicCochain c = *this;
    c.name_ = std::move(n);
    return c;
  }
  BasicCochain with_symmetry(Symmetry s) const {
    BasicCochain c = *this;
    c.symmetry_ = s;
    return c;
  }

  /// The evaluator without arity or locality checks.
  const Evaluator& evaluator() const { return eval_; }

 private:
  int degree_ = 0;
  Evaluator eval_;
  Symmetry symmetry_ = Symmetry::none;
  std::string name_;
  double locality_ = std::numeric_limits<double>::infinity();
};

using Cochain = BasicCochain<double>;
/// Circle-valued cochain, values are unit complex numbers.
using CircleCochain = BasicCochain<std::complex<double>>;

// ---- permutations ---------------------------------------------------------

using Permutation = std::vector<int>;

/// Left action on tuples: the entry in slot i moves to slot sigma[i].
std::vector<Point> permute(const Permutation& sigma, PointSpan t);

/// (sigma tau)[i] = sigma[tau[i]], so permute(compose(s,t)) = permute(s) o permute(t).
Permutation compose(const Permutation& sigma, const Permutation& tau);
Permutation inverse(const Permutation& sigma);
int sign(const Permutation& sigma);
/// All permutations of {0..n-1} in lexicographic order.
std::vector<Permutation> all_permutations(int n);

// ---- operations -----------------------------------------------------------

Cochain antisymmetrize(const Cochain& c);
Cochain symmetrize(const Cochain& c);

/// Unnormalized alternating sum over the n+2 faces.
Cochain coboundary(const Cochain& c);
/// Multiplicative version: alternating product of face values.
CircleCochain coboundary(const CircleCochain& c);

/// Complete antisymmetrization of (t -> a(t_0..t_i) * b(t_i..t_{i+j})).
/// Both inputs must be declared completely antisymmetric.
Cochain wedge(const Cochain& a, const Cochain& b);

/// (phi^* c)(x_0..x_n) = c(phi x_0, .., phi x_n).
Cochain pullback(const std::function<Point(const Point&)>& phi, const Cochain& c);

Cochain operator+(const Cochain& a, const Cochain& b);
Cochain operator-(const Cochain& a, const Cochain& b);
Cochain operator*(double s, const Cochain& a);

Cochain zero_cochain(int degree);

/// Returns a description of the first violated declared symmetry on random
/// tuples in [-1,1]^ambient_dim, or nullopt.
std::optional<std::string> symmetry_violation(const Cochain& c, int ambient_dim, int n_tuples,
                                              std::uint64_t seed, double tol = 1e-12);

// ---- named cochains (1D ones use the x coordinate) --------------------------

Cochain left_cochain(Field f);       // f(x)(y-x), the Ito cochain
Cochain right_cochain(Field f);      // f(y)(y-x)
Cochain midpoint_cochain(Field f);   // f((x+y)/2)(y-x)
Cochain strat_cochain(Field f);      // (f(x)+f(y))/2 (y-x)
Cochain exact_cochain(Field F);      // F(y)-F(x); F may use every coordinate
Cochain stieltjes_cochain(Field f, Field g);  // f(x)(g(y)-g(x))
Cochain power_cochain(int k);        // (y-x)^k
Cochain det_cochain();               // det[x1-x0, x2-x0]/2 on R^2
Cochain metric_squared_cochain();    // (x1-x0).(x2-x0)
Cochain euler_sign_cochain(int degree);  // (-1)^(#distinct points + 1)
Cochain gauss_bonnet_cochain();      // signed area of the geodesic triangle

/// Parses the cochain DSL: left(f), right(f), midpoint(f), strat(f), ito(f),
/// exact(F), stieltjes(f;g), pow(k), det, metric-squared, euler-sign:n,
/// gauss-bonnet. f, g, F are expressions in x (and y, z where meaningful).
Cochain parse_cochain(std::string_view spec);

}  // namespace gcalc

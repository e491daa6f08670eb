#pragma once

// The star product on R^2 = {(p, q)}: an exact Groenewold-type series for
// polynomials and a closed-form evaluation of the oscillatory kernel integral
// for Gaussian x polynomial observables.

#include <Eigen/Dense>
#include <array>
#include <boost/multiprecision/cpp_int.hpp>
#include <complex>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "gcalc/point.hpp"

namespace gcalc {

using Rational = boost::multiprecision::cpp_rational;

/// Exact complex rational re + i im.
struct GaussRational {
  Rational re{0};
  Rational im{0};

  GaussRational() = default;
  GaussRational(Rational r, Rational i = Rational(0)) : re(std::move(r)), im(std::move(i)) {}

  bool is_zero() const { return re == 0 && im == 0; }
  GaussRational conj() const { return {re, -im}; }
  std::complex<double> value() const;

  friend GaussRational operator+(const GaussRational& a, const GaussRational& b) {
    return {a.re + b.re, a.im + b.im};
  }
  friend GaussRational operator-(const GaussRational& a, const GaussRational& b) {
    return {a.re - b.re, a.im - b.im};
  }
  friend GaussRational operator*(const GaussRational& a, const GaussRational& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend bool operator==(const GaussRational& a, const GaussRational& b) {
    return a.re == b.re && a.im == b.im;
  }
};

/// Polynomial in p, q whose coefficients are polynomials in hbar with
/// Gaussian-rational coefficients. Key: {p exponent, q exponent, hbar power}.
class ExactPoly {
 public:
  using Key = std::array<int, 3>;

  ExactPoly() = default;
  static ExactPoly constant(GaussRational c);
  static ExactPoly monomial(int a, int b, GaussRational c = GaussRational(1), int hbar_power = 0);
  static ExactPoly p() { return monomial(1, 0); }
  static ExactPoly q() { return monomial(0, 1); }
  /// Exact conversion of an expression in p and q built from numbers, +, -,
  /// *, and nonnegative integer powers. Decimal literals are converted to
  /// the exact binary value of the double.
  static ExactPoly parse(std::string_view text);

  const std::map<Key, GaussRational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  int degree() const;  // total degree in p, q (-1 for zero)

  void add(const Key& k, const GaussRational& c);
  ExactPoly d_p() const;
  ExactPoly d_q() const;
  ExactPoly conj() const;
  ExactPoly scaled(const GaussRational& c, int hbar_shift = 0) const;
  /// Sets hbar to the given value (coefficients become doubles).
  std::complex<double> operator()(double p, double q, double hbar) const;

  friend ExactPoly operator+(const ExactPoly& a, const ExactPoly& b);
  friend ExactPoly operator-(const ExactPoly& a, const ExactPoly& b);
  friend ExactPoly operator*(const ExactPoly& a, const ExactPoly& b);
  friend bool operator==(const ExactPoly& a, const ExactPoly& b) { return a.terms_ == b.terms_; }

  std::string to_string() const;

 private:
  std::map<Key, GaussRational> terms_;  // no zero coefficients
};

/// f * g = sum_n (i hbar)^n / n! sum_k C(n,k) (-1)^k
///         (d_q^(n-k) d_p^k f) (d_p^(n-k) d_q^k g), which terminates.
ExactPoly star_series(const ExactPoly& f, const ExactPoly& g);

/// {f, g} = 2 (d_q f d_p g - d_p f d_q g). With it f*g - g*f = i hbar {f,g}
/// + O(hbar^3) and the first-order term of f*g is (i hbar / 2) {f, g}.
ExactPoly poisson_bracket(const ExactPoly& f, const ExactPoly& g);

/// Sparse polynomial with complex coefficients in a fixed number of variables.
class MPoly {
 public:
  using Exps = std::vector<int>;

  explicit MPoly(int nvars = 2) : nvars_(nvars) {}
  static MPoly constant(int nvars, std::complex<double> c);
  static MPoly variable(int nvars, int i);
  static MPoly from_exact(const ExactPoly& f, double hbar = 0.0);

  int nvars() const { return nvars_; }
  const std::map<Exps, std::complex<double>>& terms() const { return terms_; }
  int degree() const;

  void add(const Exps& e, std::complex<double> c);
  std::complex<double> operator()(const std::vector<std::complex<double>>& x) const;
  MPoly pow(int k) const;
  /// Replaces variable i by images[i] (all images share one variable count).
  MPoly substitute(const std::vector<MPoly>& images) const;
  MPoly conj() const;

  friend MPoly operator+(const MPoly& a, const MPoly& b);
  friend MPoly operator*(const MPoly& a, const MPoly& b);
  friend MPoly operator*(std::complex<double> s, const MPoly& a);

 private:
  int nvars_;
  std::map<Exps, std::complex<double>> terms_;
};

/// poly(z) exp(-z^T A z / 2 + b^T z + c) on R^2, z = (p, q) (or (x, y) for
/// the Heisenberg slice).
struct GaussObservable {
  Eigen::Matrix2cd A = Eigen::Matrix2cd::Zero();
  Eigen::Vector2cd b = Eigen::Vector2cd::Zero();
  std::complex<double> c = 0.0;
  MPoly poly{2};

  static GaussObservable polynomial(const MPoly& poly);
  static GaussObservable gaussian(const Eigen::Matrix2cd& A, const Eigen::Vector2cd& b = Eigen::Vector2cd::Zero(),
                                  std::complex<double> c = 0.0, const MPoly& poly = MPoly::constant(2, 1.0));

  bool is_polynomial() const { return A.isZero(0.0) && b.isZero(0.0) && c == 0.0; }
  std::complex<double> operator()(double z0, double z1) const;
  GaussObservable conj() const;
  /// Exchanges the two variables.
  GaussObservable swapped() const;
};

struct StarParams {
  enum class Variant { moyal, heisenberg };
  double hbar = 1.0;
  Variant variant = Variant::moyal;
  double z = 1.0;
};

/// Closed form of (2 pi hbar)^-2 int f(m+b) g(m+a) exp(sigma (i/hbar)
/// (a_0 b_1 - a_1 b_0)) da db as a function of m. sigma = +1 is the kernel
/// with Omega = det[[p1-p, p2-p], [q1-q, q2-q]] in (p, q) order. Throws
/// gcalc::Error("moyal", "non-integrable quadratic form") when the
/// quadratic form is singular.
GaussObservable star_closed_form(const GaussObservable& f, const GaussObservable& g, double hbar,
                                 int sigma = 1);

/// Value of f * g at m = (p, q). Pure polynomial factors are regularized by
/// exp(-eps |z|^2) and the eps -> 0 limit is extrapolated. For the
/// heisenberg variant the two coordinates are the slice coordinates (x, y).
std::complex<double> star_integral(const GaussObservable& f, const GaussObservable& g, double p, double q,
                                   const StarParams& params = {});

/// The Heisenberg-dual product at (x, y, z): f and g are functions of (x, y)
/// on the slice; z = 0 gives the pointwise product.
std::complex<double> heisenberg_star(const GaussObservable& f, const GaussObservable& g, double z, double hbar,
                                     const Point& m3);

/// Taylor polynomial of exp(-(p^2 + q^2)/2) through total degree `degree`,
/// exact coefficients.
ExactPoly gaussian_taylor(int degree);

}  // namespace gcalc

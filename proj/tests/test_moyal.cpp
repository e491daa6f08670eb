#include "doctest.h"
#include "gcalc/error.hpp"
#include "gcalc/moyal.hpp"

#include <cmath>

using namespace gcalc;
using cd = std::complex<double>;

TEST_CASE("canonical commutator") {
  const ExactPoly p = ExactPoly::p(), q = ExactPoly::q();
  // q * p = qp + i hbar, p * q = pq - i hbar.
  CHECK(star_series(q, p) == q * p + ExactPoly::monomial(0, 0, GaussRational(0, 1), 1));
  CHECK(star_series(q, p) - star_series(p, q) == ExactPoly::monomial(0, 0, GaussRational(0, 2), 1));
  CHECK(poisson_bracket(q, p) == ExactPoly::constant(GaussRational(2)));
  CHECK(poisson_bracket(p, q) == ExactPoly::constant(GaussRational(-2)));
}

TEST_CASE("series identities") {
  const ExactPoly f = ExactPoly::parse("p^2*q + 3*q - 1/2");
  const ExactPoly g = ExactPoly::parse("q^3 - p*q");
  const ExactPoly one = ExactPoly::constant(GaussRational(1));
  CHECK(star_series(one, f) == f);
  CHECK(star_series(f, one) == f);
  // conj(f * g) = conj(g) * conj(f) for real f, g.
  CHECK(star_series(f, g).conj() == star_series(g.conj(), f.conj()));
  // The hbar^1 term of f * g is (i hbar / 2) {f, g}.
  const ExactPoly prod = star_series(f, g);
  ExactPoly first;
  for (const auto& [k, v] : prod.terms())
    if (k[2] == 1) first.add({k[0], k[1], 0}, v);
  CHECK(first == poisson_bracket(f, g).scaled(GaussRational(0, Rational(1, 2))));
  CHECK(ExactPoly::parse("(p+q)^2") == ExactPoly::parse("p^2 + 2*p*q + q^2"));
  CHECK_THROWS_WITH_AS(ExactPoly::parse("sin(p)"), doctest::Contains("moyal:"), Error);
  CHECK_THROWS_AS(ExactPoly::parse("p^-1"), Error);
}

TEST_CASE("integral of polynomials matches the series") {
  const MPoly P = MPoly::variable(2, 0), Q = MPoly::variable(2, 1);
  const auto f = GaussObservable::polynomial(Q * Q + P);
  const auto g = GaussObservable::polynomial(P * Q);
  const ExactPoly fe = ExactPoly::parse("q^2 + p"), ge = ExactPoly::parse("p*q");
  for (double hbar : {0.2, 1.0})
    for (auto [p, q] : {std::pair{0.3, -0.5}, {1.0, 2.0}}) {
      const cd a = star_integral(f, g, p, q, {hbar});
      const cd b = star_series(fe, ge)(p, q, hbar);
      CHECK(std::abs(a - b) < 1e-8 * std::max(1.0, std::abs(b)));
    }
}

// Radial Gaussians: exp(-r^2/2) * exp(-r^2/2) = exp(-r^2/(1+hbar^2)) / (1+hbar^2),
// the standard Moyal identity with Planck constant 2 hbar.
TEST_CASE("Gaussian self-product") {
  Eigen::Matrix2cd I = Eigen::Matrix2cd::Identity();
  const auto g = GaussObservable::gaussian(I);
  for (double hbar : {0.5, 1.3}) {
    const GaussObservable gg = star_closed_form(g, g, hbar);
    for (auto [p, q] : {std::pair{0.3, -0.4}, {1.0, 0.0}}) {
      const double r2 = p * p + q * q;
      const double oracle = std::exp(-r2 / (1 + hbar * hbar)) / (1 + hbar * hbar);
      CHECK(std::abs(gg(p, q) - oracle) < 1e-12);
      CHECK(std::abs(star_integral(g, g, p, q, {hbar}) - oracle) < 1e-12);
    }
  }
}

TEST_CASE("Gaussian integral against the Taylor series") {
  const double hbar = 0.1;
  const ExactPoly t = gaussian_taylor(12);
  const auto g = GaussObservable::gaussian(Eigen::Matrix2cd::Identity());
  const auto q = GaussObservable::polynomial(MPoly::variable(2, 1));
  const cd series = star_series(ExactPoly::q(), t)(0.2, 0.1, hbar);
  CHECK(std::abs(star_integral(q, g, 0.2, 0.1, {hbar}) - series) < 1e-8);
}

TEST_CASE("constants are translation invariant") {
  const auto c = GaussObservable::polynomial(MPoly::constant(2, 2.5));
  for (auto [p, q] : {std::pair{0.0, 0.0}, {5.0, -3.0}})
    CHECK(std::abs(star_integral(c, c, p, q, {0.7}) - 6.25) < 1e-10);
}

TEST_CASE("Heisenberg slice") {
  Eigen::Matrix2cd A;
  A << 1.0, 0.2, 0.2, 1.5;
  const auto f = GaussObservable::gaussian(A, Eigen::Vector2cd(0.1, 0), 0, MPoly::variable(2, 0));
  const auto g = GaussObservable::gaussian(Eigen::Matrix2cd::Identity(), Eigen::Vector2cd::Zero(), 0,
                                           MPoly::variable(2, 1) + MPoly::constant(2, 1.0));
  const double hbar = 0.3;
  for (auto [x, y] : {std::pair{0.2, -0.1}, {0.5, 0.7}}) {
    const cd moyal = star_integral(f, g, y, x, {hbar});
    const cd heis = heisenberg_star(f.swapped(), g.swapped(), 1.0, hbar, pt(x, y, 1.0));
    CHECK(std::abs(moyal - heis) < 1e-10);
    const cd pointwise = heisenberg_star(f.swapped(), g.swapped(), 0.0, hbar, pt(x, y, 0.0));
    CHECK(std::abs(pointwise - f(y, x) * g(y, x)) < 1e-14);
  }
}

TEST_CASE("singular quadratic forms are reported") {
  const double hbar = 1.0;
  const auto f = GaussObservable::gaussian(cd(0, 1) * Eigen::Matrix2cd::Identity());
  CHECK_THROWS_WITH_AS(star_closed_form(f, f, hbar), doctest::Contains("moyal: non-integrable"), Error);
}

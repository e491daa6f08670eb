#include "doctest.h"
#include "gcalc/cochain.hpp"
#include "gcalc/error.hpp"

#include <cmath>
#include <random>

using namespace gcalc;

namespace {

std::vector<Point> random_tuple(std::mt19937_64& rng, int n, int dim) {
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<Point> t(static_cast<std::size_t>(n));
  for (auto& p : t)
    for (int i = 0; i < dim; ++i) p[static_cast<std::size_t>(i)] = u(rng);
  return t;
}

Cochain smooth_2d_1cochain() {
  return Cochain(1, [](PointSpan t) {
    return std::sin(t[0][0] + 0.3 * t[1][1]) * (t[1][0] - t[0][0]) + t[0][1] * t[1][0] * t[1][1];
  });
}

}  // namespace

TEST_CASE("permutations") {
  const Permutation s{1, 2, 0}, t{0, 2, 1};
  CHECK(sign(s) == 1);
  CHECK(sign(t) == -1);
  CHECK(compose(s, inverse(s)) == Permutation{0, 1, 2});
  CHECK(sign(compose(s, t)) == sign(s) * sign(t));
  CHECK(all_permutations(4).size() == 24);
  const std::vector<Point> pts{pt(1), pt(2), pt(3)};
  const auto moved = permute(s, pts);
  CHECK(moved[1][0] == 1.0);  // out[s[i]] = t[i]
  CHECK(moved[2][0] == 2.0);
  CHECK(moved[0][0] == 3.0);
  CHECK_THROWS_AS(permute({0, 0, 1}, pts), Error);
}

TEST_CASE("antisymmetrize and symmetrize") {
  const Cochain c = smooth_2d_1cochain();
  const Cochain a = antisymmetrize(c);
  const Cochain s = symmetrize(c);
  CHECK(a.symmetry() == Symmetry::completely_antisymmetric);
  CHECK(s.symmetry() == Symmetry::completely_symmetric);
  CHECK_FALSE(symmetry_violation(a, 2, 50, 3, 1e-12).has_value());
  CHECK_FALSE(symmetry_violation(s, 2, 50, 3, 1e-12).has_value());
  // A mislabelled cochain is caught.
  CHECK(symmetry_violation(c.with_symmetry(Symmetry::completely_antisymmetric), 2, 50, 3, 1e-12).has_value());
  std::mt19937_64 rng(5);
  for (int i = 0; i < 20; ++i) {
    const auto t = random_tuple(rng, 2, 2);
    CHECK(a(t) + s(t) == doctest::Approx(c(t)).epsilon(1e-12));
  }
}

TEST_CASE("coboundary squares to zero") {
  std::mt19937_64 rng(11);
  const Cochain c = smooth_2d_1cochain();
  const Cochain dd = coboundary(coboundary(c));
  CHECK(dd.degree() == 3);
  for (int i = 0; i < 50; ++i) CHECK(std::fabs(dd(random_tuple(rng, 4, 2))) < 1e-12);
  const Cochain F(0, [](PointSpan t) { return t[0][0] * t[0][0]; });
  const Cochain dF = coboundary(F);
  CHECK(dF({pt(1), pt(3)}) == 8.0);
}

TEST_CASE("circle-valued coboundary is multiplicative") {
  const CircleCochain a(1, [](PointSpan t) { return std::polar(1.0, t[0][0] * t[1][0]); });
  const CircleCochain da = coboundary(a);
  const std::vector<Point> t{pt(0.1), pt(0.4), pt(-0.3)};
  const auto expect = a({t[1], t[2]}) / a({t[0], t[2]}) * a({t[0], t[1]});
  CHECK(std::abs(da(t) - expect) < 1e-14);
  CHECK(std::abs(coboundary(da)({pt(0.1), pt(0.2), pt(0.7), pt(-1)}) - 1.0) < 1e-12);
}

TEST_CASE("named cochains") {
  auto f = [](const Point& p) { return p[0] * p[0]; };
  CHECK(left_cochain(f)({pt(2), pt(5)}) == 12.0);
  CHECK(right_cochain(f)({pt(2), pt(5)}) == 75.0);
  CHECK(midpoint_cochain(f)({pt(2), pt(4)}) == 18.0);
  CHECK(strat_cochain(f)({pt(2), pt(4)}) == 20.0);
  CHECK(exact_cochain(f)({pt(2), pt(4)}) == 12.0);
  CHECK(power_cochain(3)({pt(1), pt(3)}) == 8.0);
  CHECK(det_cochain()({pt(0, 0), pt(1, 0), pt(0, 1)}) == 0.5);
  CHECK(det_cochain()({pt(0, 0), pt(0, 1), pt(1, 0)}) == -0.5);
  CHECK(metric_squared_cochain()({pt(0, 0), pt(2, 0), pt(3, 1)}) == 6.0);
  CHECK(euler_sign_cochain(2)({pt(0), pt(0), pt(0)}) == 1.0);
  CHECK(euler_sign_cochain(2)({pt(0), pt(1), pt(1)}) == -1.0);
  CHECK(euler_sign_cochain(2)({pt(0), pt(1), pt(2)}) == 1.0);
  CHECK(gauss_bonnet_cochain()({pt(1, 0, 0), pt(0, 1, 0), pt(0, 0, 1)}) == doctest::Approx(M_PI / 2));
  CHECK(gauss_bonnet_cochain()({pt(0, 1, 0), pt(1, 0, 0), pt(0, 0, 1)}) == doctest::Approx(-M_PI / 2));
}

TEST_CASE("wedge needs completely antisymmetric factors") {
  const Cochain a = antisymmetrize(left_cochain([](const Point& p) { return p[1]; }));
  const Cochain b = antisymmetrize(Cochain(1, [](PointSpan t) { return t[1][1] - t[0][1]; }));
  const Cochain w = wedge(a, b);
  CHECK(w.degree() == 2);
  CHECK_FALSE(symmetry_violation(w, 2, 30, 1, 1e-12).has_value());
  CHECK_THROWS_AS(wedge(left_cochain([](const Point& p) { return p[0]; }), b), Error);
}

TEST_CASE("pullback and arithmetic") {
  const Cochain c = power_cochain(2);
  const Cochain pb = pullback([](const Point& p) { return pt(2 * p[0]); }, c);
  CHECK(pb({pt(0), pt(1)}) == 4.0);
  CHECK((c + c)({pt(0), pt(1)}) == 2.0);
  CHECK((3.0 * c - c)({pt(0), pt(2)}) == 8.0);
  CHECK(zero_cochain(2)({pt(0), pt(1), pt(2)}) == 0.0);
  CHECK_THROWS_AS(c + det_cochain(), Error);
}

TEST_CASE("arity and locality are enforced") {
  const Cochain c = power_cochain(2).with_locality(0.5);
  CHECK_THROWS_AS(c({pt(0), pt(1), pt(2)}), Error);
  CHECK_THROWS_AS(c({pt(0), pt(1)}), LocalityError);
  CHECK_THROWS_WITH(c({pt(0), pt(1)}), doctest::Contains("cochain:"));
  CHECK(c({pt(0), pt(0.25)}) == 0.0625);
}

TEST_CASE("cochain specs") {
  CHECK(parse_cochain("left(x^2)")({pt(2), pt(5)}) == 12.0);
  CHECK(parse_cochain("ito(x)")({pt(2), pt(5)}) == 6.0);
  CHECK(parse_cochain("stieltjes(x; x^2)")({pt(1), pt(2)}) == 3.0);
  CHECK(parse_cochain("pow(2)").degree() == 1);
  CHECK(parse_cochain("det").degree() == 2);
  CHECK(parse_cochain("euler-sign:1").degree() == 1);
  CHECK_THROWS_WITH_AS(parse_cochain("nonsense"), doctest::Contains("cochain:"), Error);
  CHECK_THROWS_AS(parse_cochain("left(x+)"), Error);
}

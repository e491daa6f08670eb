#include "doctest.h"
#include "gcalc/cochain.hpp"
#include "gcalc/error.hpp"
#include "gcalc/integrate.hpp"

#include <cmath>
#include <random>

using namespace gcalc;

TEST_CASE("fundamental theorem: exact cochains sum exactly") {
  const Cochain c = exact_cochain([](const Point& p) { return p[0] * p[0] * p[0]; });
  SimplicialComplex k = build_builtin(Manifold::interval, 1, -1.0, 2.0);
  for (int d = 0; d <= 6; ++d) {
    if (d) k = subdivide_once(k, SubdivisionKind::uniform_1d);
    CHECK(std::fabs(riemann_sum(c, k) - 9.0) < 1e-12);
  }
  const auto r = refine_limit(c, build_builtin(Manifold::interval, 3), SubdivisionKind::uniform_1d, 5);
  CHECK(r.exact);
  CHECK(r.converged);
}

TEST_CASE("area cochain sums to the area") {
  for (auto scheme : {SubdivisionKind::barycentric, SubdivisionKind::edge_midpoint}) {
    const auto r = refine_limit(det_cochain(), build_builtin(Manifold::square, 2), scheme, 3);
    CHECK(r.exact);
    CHECK(r.limit == doctest::Approx(1.0).epsilon(1e-13));
  }
}

TEST_CASE("observed orders") {
  const auto left = refine_limit(left_cochain([](const Point& p) { return p[0]; }),
                                 build_builtin(Manifold::interval, 1), SubdivisionKind::uniform_1d, 8);
  CHECK(left.order == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(left.limit == doctest::Approx(0.5).epsilon(1e-12));
  CHECK_FALSE(left.exact);
  const auto strat = refine_limit(strat_cochain([](const Point& p) { return p[0] * p[0]; }),
                                  build_builtin(Manifold::interval, 1), SubdivisionKind::uniform_1d, 8);
  CHECK(strat.order == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(strat.limit == doctest::Approx(1.0 / 3).epsilon(1e-12));
}

TEST_CASE("euler sums") {
  CHECK(euler_sum(build_builtin(Manifold::sphere, 1)) == 2);
  CHECK(euler_sum(build_builtin(Manifold::icosphere, 0)) == 2);
  CHECK(euler_sum(build_builtin(Manifold::torus, 2)) == 0);
  CHECK(euler_sum(build_builtin(Manifold::circle, 6)) == 0);
  CHECK(euler_sum(build_builtin(Manifold::square, 2)) == 1);
  CHECK(euler_sum(subdivide_once(build_builtin(Manifold::hemisphere, 0), SubdivisionKind::barycentric)) == 1);
}

TEST_CASE("orientation reversal") {
  const auto k = build_builtin(Manifold::disk3, 2);
  const Cochain a = antisymmetrize(Cochain(2, [](PointSpan t) { return t[0][0] * t[1][1] + t[2][0] * t[2][0]; }));
  CHECK(riemann_sum(a, k.reversed()) == doctest::Approx(-riemann_sum(a, k)));
  const Cochain s = symmetrize(Cochain(2, [](PointSpan t) { return 1.0 + t[0][0] * t[1][1]; }));
  CHECK(riemann_sum(s, k.reversed()) == doctest::Approx(riemann_sum(s, k)));
}

TEST_CASE("sums of cocycles ignore the interior triangulation") {
  // The unit square cut along either diagonal: same boundary, different interior.
  std::vector<Vertex> v(4);
  const Point xyz[4] = {pt(0, 0), pt(1, 0), pt(1, 1), pt(0, 1)};
  for (int i = 0; i < 4; ++i) v[static_cast<std::size_t>(i)] = {i, xyz[i], 0};
  const auto k1 = SimplicialComplex::from_oriented_cells(2, v, {{0, 1, 2}, {0, 2, 3}});
  const auto k2 = SimplicialComplex::from_oriented_cells(2, v, {{0, 1, 3}, {1, 2, 3}});
  const Cochain lambda = antisymmetrize(Cochain(1, [](PointSpan t) {
    return std::exp(t[0][0]) * t[1][1] + t[0][1] * t[0][1] * t[1][0] - std::sin(t[1][0] * t[0][1]);
  }));
  const Cochain closed = coboundary(lambda);
  CHECK(std::fabs(riemann_sum(closed, k1) - riemann_sum(closed, k2)) < 1e-12);
  const auto b1 = subdivide_once(k1, SubdivisionKind::barycentric);
  CHECK(std::fabs(riemann_sum(closed, b1) - riemann_sum(closed, k2)) > 0.0);  // boundary changed
  CHECK(std::fabs(riemann_sum(closed, b1) - riemann_sum(lambda, boundary_complex(b1))) < 1e-12);
}

TEST_CASE("results do not depend on the thread count") {
  const auto k = subdivide(build_builtin(Manifold::sphere, 2), {SubdivisionKind::barycentric, 1});
  const Cochain gb = gauss_bonnet_cochain();
  const double one = riemann_sum(gb, k, 1);
  CHECK(riemann_sum(gb, k, 4) == one);
  CHECK(riemann_sum(gb, k, 0) == one);
}

TEST_CASE("relative sums") {
  const auto k = build_builtin(Manifold::square, 2);
  const Cochain lambda = antisymmetrize(left_cochain([](const Point& p) { return p[0] * p[1]; }));
  CHECK(std::fabs(relative_sum(coboundary(lambda), lambda, k)) < 1e-12);
}

TEST_CASE("riemann-stieltjes") {
  const auto k = build_builtin(Manifold::interval, 1);
  const Field one = [](const Point&) { return 1.0; };
  const Field g = [](const Point& p) { return std::sin(3 * p[0]); };
  const auto r = riemann_stieltjes(one, exact_cochain(g), k, 4);
  CHECK(r.exact);
  CHECK(r.limit == doctest::Approx(std::sin(3.0)).epsilon(1e-14));
  const auto xg = riemann_stieltjes([](const Point& p) { return p[0]; },
                                    exact_cochain([](const Point& p) { return p[0] * p[0]; }), k, 12);
  CHECK(std::fabs(xg.limit - 2.0 / 3.0) < 1e-6);
  // sin(1/x)-like oscillation with growing variation.
  const Field wild = [](const Point& p) { return std::sin(1.0 / (p[0] + 1e-9)); };
  CHECK_THROWS_WITH_AS(riemann_stieltjes(one, exact_cochain(wild), k, 16, 1e-10, 50.0),
                       doctest::Contains("unbounded variation"), Error);
  const auto tv = total_variation(exact_cochain(g), k, SubdivisionKind::uniform_1d, 10);
  CHECK(tv.value == doctest::Approx(2.0 - std::sin(3.0)).epsilon(1e-4));
}

TEST_CASE("degree mismatches are errors") {
  CHECK_THROWS_WITH_AS(riemann_sum(det_cochain(), build_builtin(Manifold::interval, 2)),
                       doctest::Contains("integrate:"), Error);
}

#include "doctest.h"
#include "gcalc/error.hpp"
#include "gcalc/stochastic.hpp"

#include <cmath>

using namespace gcalc;

namespace {
const PathObservable one = [](const std::vector<double>&) { return 1.0; };
const Field half_x2 = [](const Point& p) { return 0.5 * p[0] * p[0]; };
}  // namespace

TEST_CASE("time grids") {
  const auto g = TimeGrid::uniform(8, {0.5, 1.0});
  CHECK(g.steps() == 8);
  CHECK(g.mesh() == 0.125);
  CHECK(g.marked == std::vector<std::size_t>{4, 8});
  CHECK_THROWS_AS(TimeGrid::uniform(8, {0.3}), Error);
  CHECK_THROWS_AS(TimeGrid::from_times({0.0, 0.5, 0.4, 1.0}), Error);
  CHECK_THROWS_WITH_AS(TimeGrid::from_times({0.1, 1.0}), doctest::Contains("stochastic:"), Error);
  CHECK_THROWS_AS(TimeGrid::uniform(0), Error);
}

TEST_CASE("paths are reproducible per (seed, index)") {
  const auto g = TimeGrid::uniform(16);
  const auto a = sample_path(g, 7, 3), b = sample_path(g, 7, 3), c = sample_path(g, 7, 4);
  CHECK(a.x == b.x);
  CHECK(a.x != c.x);
  CHECK(a.x.front() == 0.0);
  CHECK(sample_path(g, 8, 3).x != a.x);
}

TEST_CASE("Brownian increments have variance dt") {
  const auto g = TimeGrid::uniform(4);
  const Estimate e = monte_carlo(g, 40000, 3, [](const std::vector<double>& x) { return x[2] * x[2]; }, 0);
  CHECK(std::fabs(e.mean - 0.5) < 4 * e.stderr_);
  const Estimate m = monte_carlo(g, 40000, 3, [](const std::vector<double>& x) { return x[4]; }, 0);
  CHECK(std::fabs(m.mean) < 4 * m.stderr_);
}

TEST_CASE("action of Feynman data") {
  const auto g = TimeGrid::uniform(2);
  const std::vector<double> x{0.0, 0.3, -0.1};
  const double expect = 0.5 * (0.09 + 0.16) / 0.5 + 0.5 * (0.0 + 0.045);
  CHECK(action(CochainData::feynman(half_x2), g, x) == doctest::Approx(expect).epsilon(1e-14));
  // The literal squared time step, with its square root taken.
  CochainData sq = CochainData::feynman(half_x2);
  sq.g_dt = Cochain(1, [](PointSpan t) { return (t[1][0] - t[0][0]) * (t[1][0] - t[0][0]); });
  sq.dt_squared = true;
  CHECK(action(sq, g, x) == doctest::Approx(expect).epsilon(1e-14));
}

TEST_CASE("cutoff window") {
  const auto g = TimeGrid::uniform(4);
  const double bound = 2 * std::sqrt(0.25 * std::log(4.0));
  CHECK(cutoff_indicator(g, {0, bound * 0.99, 0, 0, 0}));
  CHECK_FALSE(cutoff_indicator(g, {0, bound * 1.01, 0, 0, 0}));
}

// Two steps of 1/2 with V = x^2/2 at left endpoints: E[exp(-x1^2/4)],
// x1 ~ N(0, 1/2), equals (1 + 2 * 1/4 * 1/2)^(-1/2).
TEST_CASE("finite-dimensional integral against its closed form") {
  const auto g = TimeGrid::uniform(2);
  const double oracle = 1.0 / std::sqrt(1.25);
  CHECK(thm21_quadrature(CochainData::feynman(half_x2), one, g) == doctest::Approx(oracle).epsilon(1e-12));
  Thm21Options o;
  o.samples = 50000;
  o.enforce_cutoff = false;
  const Estimate e = thm21_estimate(CochainData::feynman(half_x2), one, g, o);
  CHECK(std::fabs(e.mean - oracle) < 4 * e.stderr_);
  // V = 0 weighs every path by 1.
  CHECK(thm21_quadrature(CochainData::feynman([](const Point&) { return 0.0; }), one, TimeGrid::uniform(3)) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(thm21_quadrature(CochainData::feynman(half_x2), one, TimeGrid::uniform(4)), Error);
}

TEST_CASE("observables see the marked values") {
  const auto g = TimeGrid::uniform(2, {1.0});
  const PathObservable x2 = [](const std::vector<double>& m) { return m.at(0) * m.at(0); };
  CHECK(thm21_quadrature(CochainData::feynman([](const Point&) { return 0.0; }), x2, g) ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("estimates do not depend on the thread count") {
  const auto g = TimeGrid::uniform(32);
  Thm21Options o;
  o.samples = 3000;
  o.seed = 9;
  o.threads = 1;
  const Estimate a = thm21_estimate(CochainData::feynman(half_x2), one, g, o);
  o.threads = 4;
  const Estimate b = thm21_estimate(CochainData::feynman(half_x2), one, g, o);
  CHECK(a.mean == b.mean);
  CHECK(a.stderr_ == b.stderr_);
  CHECK(a.acceptance_rate == b.acceptance_rate);
}

TEST_CASE("L2 test guards the jets") {
  const auto grids = std::vector<TimeGrid>{TimeGrid::uniform(8), TimeGrid::uniform(32)};
  auto id = [](const Point& p) { return p[0]; };
  L2Options o;
  o.samples = 2000;
  CHECK_THROWS_WITH_AS(l2_convergence_test(left_cochain(id), strat_cochain(id), grids, o),
                       doctest::Contains("stochastic: jet mismatch"), Error);
  o.negative_control = true;
  const L2Report r = l2_convergence_test(left_cochain(id), strat_cochain(id), grids, o);
  CHECK_FALSE(r.jets_agree);
  // (sum dx^2 / 2)^2 has mean (1 + 2 dt) / 4.
  CHECK(std::fabs(r.mean_sq_gap[1] - (1 + 2.0 / 32) / 4) < 4 * r.stderr_[1]);
  o.negative_control = false;
  const L2Report s = l2_convergence_test(strat_cochain(id), exact_cochain([](const Point& p) { return p[0] * p[0] / 2; }),
                                         grids, o);
  CHECK(s.jets_agree);
  CHECK(s.mean_sq_gap[1] < 1e-20);
}

TEST_CASE("log-log slope") {
  CHECK(loglog_slope({1, 2, 4}, {3, 12, 48}) == doctest::Approx(2.0));
  CHECK_THROWS_AS(loglog_slope({1}, {1}), Error);
}

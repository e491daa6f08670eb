#include "doctest.h"
#include "gcalc/cochain.hpp"
#include "gcalc/error.hpp"
#include "gcalc/van_est.hpp"

#include <cmath>
#include <random>

using namespace gcalc;

TEST_CASE("jet of (y-x)^2 is dx^2") {
  const Jet1 j = ve1_deg1(power_cochain(2), 0.4);
  CHECK(std::fabs(j.c0) < 1e-12);
  CHECK(std::fabs(j.c1) < 1e-9);
  CHECK(j.c2 == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("jets of named cochains") {
  auto sq = [](const Point& p) { return p[0] * p[0]; };
  const Jet1 l = ve1_deg1(left_cochain(sq), 0.7);
  CHECK(l.c1 == doctest::Approx(0.49).epsilon(1e-9));
  CHECK(std::fabs(l.c2) < 1e-8);
  // strat(f): f(x) dx + f'(x)/2 dx^2.
  const Jet1 s = ve1_deg1(strat_cochain(sq), 0.7);
  CHECK(s.c1 == doctest::Approx(0.49).epsilon(1e-9));
  CHECK(s.c2 == doctest::Approx(0.7).epsilon(1e-8));
  // exact(sin): cos x dx - sin x / 2 dx^2.
  const Jet1 e = ve1_deg1(exact_cochain([](const Point& p) { return std::sin(p[0]); }), 1.3);
  CHECK(e.c1 == doctest::Approx(std::cos(1.3)).epsilon(1e-9));
  CHECK(e.c2 == doctest::Approx(-std::sin(1.3) / 2).epsilon(1e-8));
}

TEST_CASE("halving the step reduces the jet error at least fourfold") {
  const Cochain c = exact_cochain([](const Point& p) { return std::exp(p[0]); });
  const double x = 0.5;
  double prev1 = 0, prev2 = 0;
  for (double h : {0.4, 0.2}) {
    const Jet1 j = ve1_deg1(c, x, h);
    const double e1 = std::fabs(j.c1 - std::exp(x));
    const double e2 = std::fabs(j.c2 - std::exp(x) / 2);
    if (h < 0.4) {
      CHECK(e1 * 4 <= prev1);
      CHECK(e2 * 4 <= prev2);
    }
    prev1 = e1;
    prev2 = e2;
  }
}

TEST_CASE("VE0 of det/2 is the area form") {
  const Form2Sample a = ve0_deg2(det_cochain(), pt(0.3, -0.2), 0, 1);
  const Form2Sample b = ve0_deg2(det_cochain(), pt(0.3, -0.2), 1, 0);
  CHECK(a.value == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(b.value == doctest::Approx(-0.5).epsilon(1e-9));
  CHECK(a.extrapolation_levels == 2);
}

// For a 1-cochain w on R^2 with VE0(w) = a dx + b dy, VE0 of its coboundary
// (d1x d2y - d1y d2x of the 2-cochain) equals db/dx - da/dy.
TEST_CASE("VE0 commutes with the coboundary on random smooth 1-cochains") {
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> n01;
  for (int trial = 0; trial < 10; ++trial) {
    double k[6];
    for (double& v : k) v = n01(rng);
    const Cochain w(1, [k](PointSpan t) {
      const double x0 = t[0][0], y0 = t[0][1], x1 = t[1][0], y1 = t[1][1];
      return std::sin(k[0] * x0 + k[1] * y1) * (x1 - x0) + std::cos(k[2] * y0 * x1) * (y1 - y0) +
             k[3] * (x1 - x0) * (y1 - y0) + k[4] * x0 * x1 * y1 + k[5] * (y1 - y0) * (y1 - y0);
    });
    // a(p) = d/ds w(p, p + s e_x), b(p) = d/ds w(p, p + s e_y) by central differences.
    auto slot = [&](const Point& p, int dir) {
      const double h = 1e-4;
      Point e{0, 0, 0};
      e[static_cast<std::size_t>(dir)] = h;
      return (w({p, p + e}) - w({p, p - e})) / (2 * h);
    };
    const Point p = pt(0.2 * n01(rng), 0.2 * n01(rng));
    const double g = 1e-3;
    const double db_dx = (slot(p + pt(g, 0), 1) - slot(p - pt(g, 0), 1)) / (2 * g);
    const double da_dy = (slot(p + pt(0, g), 0) - slot(p - pt(0, g), 0)) / (2 * g);
    const Cochain dw = coboundary(w);
    const double ve = ve0_deg2(dw, p, 0, 1).value - ve0_deg2(dw, p, 1, 0).value;
    CHECK(std::fabs(ve - (db_dx - da_dy)) < 1e-6);
  }
}

TEST_CASE("verify_integrates") {
  const Cochain c = strat_cochain([](const Point& p) { return p[0]; });
  const JetTarget exact = [](double x) { return Jet1{0, x, 0.5, x, 0}; };
  const auto ok = verify_integrates(c, exact, {-1, 0, 1}, 1e-6, 2);
  CHECK(ok.pass);
  const auto ito = verify_integrates(left_cochain([](const Point& p) { return p[0]; }), exact, {-1, 0, 1}, 1e-6, 2);
  CHECK_FALSE(ito.pass);
  CHECK(ito.max_deviation == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(verify_integrates(left_cochain([](const Point& p) { return p[0]; }), exact, {-1, 0, 1}, 1e-6, 1).pass);
}

TEST_CASE("the step respects the locality radius") {
  const Cochain c = power_cochain(2).with_locality(0.01);
  const Jet1 j = ve1_deg1(c, 3.0);
  CHECK(j.c2 == doctest::Approx(1.0).epsilon(1e-8));
}

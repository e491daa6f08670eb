#include "gcalc/van_est.hpp"

#include <algorithm>
#include <cmath>

namespace gcalc {
namespace {

[[noreturn]] void fail(const std::string& msg) { throw Error("van_est", msg); }

double checked(double v) {
  if (!std::isfinite(v)) fail("cochain returned a non-finite value");
  return v;
}

// Keeps every stencil point strictly inside the locality radius.
double fit_step(double h, double reach, double locality) {
  if (std::isfinite(locality)) h = std::min(h, 0.9 * locality / reach);
  return h;
}

}  // namespace

double default_step(double magnitude) { return std::ldexp(1.0, -6) * std::max(1.0, std::fabs(magnitude)); }

Jet1 ve1_deg1(const Cochain& c, double x, double h) {
  if (c.degree() != 1) fail("ve1_deg1 needs a 1-cochain");
  if (h <= 0.0) h = default_step(x);
  h = fit_step(h, 2.0, c.locality());
  auto g = [&](double s) {
    const Point t[2] = {pt(x), pt(x + s)};
    return checked(c(PointSpan(t, 2)));
  };
  const double g0 = g(0.0);
  // Five-point first and second differences (fourth order), at h, h/2, h/4.
  double d1[3];
  double d2[3];
  for (int k = 0; k < 3; ++k) {
    const double s = h / static_cast<double>(1 << k);
    const double gp1 = g(s), gm1 = g(-s), gp2 = g(2 * s), gm2 = g(-2 * s);
    d1[k] = (-gp2 + 8 * gp1 - 8 * gm1 + gm2) / (12 * s);
    d2[k] = (-gp2 + 16 * gp1 - 30 * g0 + 16 * gm1 - gm2) / (12 * s * s);
  }
  auto richardson = [](const double* d, double& err) {
    const double a = (16 * d[1] - d[0]) / 15;
    const double b = (16 * d[2] - d[1]) / 15;
    const double r = (64 * b - a) / 63;
    err = std::fabs(r - b);
    return r;
  };
  Jet1 j;
  j.x = x;
  j.c0 = g0;
  double e1 = 0.0, e2 = 0.0;
  j.c1 = richardson(d1, e1);
  j.c2 = 0.5 * richardson(d2, e2);
  j.error = std::max(e1, 0.5 * e2);
  return j;
}

Form2Sample ve0_deg2(const Cochain& c, const Point& x, int i, int j, double h) {
  if (c.degree() != 2) fail("ve0_deg2 needs a 2-cochain");
  if (i < 0 || i > 2 || j < 0 || j > 2) fail("coordinate index out of range");
  if (h <= 0.0) h = default_step(std::max(std::fabs(x[0]), std::fabs(x[1])));
  // Largest pairwise distance in the stencil is |u e_i - v e_j| <= 2h.
  h = fit_step(h, 2.0, c.locality());
  auto F = [&](double u, double v) {
    Point a = x;
    Point b = x;
    a[static_cast<std::size_t>(i)] += u;
    b[static_cast<std::size_t>(j)] += v;
    const Point t[3] = {x, a, b};
    return checked(c(PointSpan(t, 3)));
  };
  double m[3];
  for (int k = 0; k < 3; ++k) {
    const double s = h / static_cast<double>(1 << k);
    m[k] = (F(s, s) - F(s, -s) - F(-s, s) + F(-s, -s)) / (4 * s * s);
  }
  Form2Sample out;
  out.h = h;
  out.extrapolation_levels = 2;
  const double a = (4 * m[1] - m[0]) / 3;
  const double b = (4 * m[2] - m[1]) / 3;
  const double r = (16 * b - a) / 15;
  out.levels = {m[2], b, r};
  out.value = r;
  out.error = std::fabs(r - b);
  return out;
}

IntegratesReport verify_integrates(const Cochain& c, const JetTarget& target,
                                   const std::vector<double>& points, double tol, int order) {
  IntegratesReport rep;
  for (double x : points) {
    const Jet1 j = ve1_deg1(c, x);
    const Jet1 t = target(x);
    double dev = std::fabs(j.c0 - t.c0);
    if (order >= 1) dev = std::max(dev, std::fabs(j.c1 - t.c1));
    if (order >= 2) dev = std::max(dev, std::fabs(j.c2 - t.c2));
    if (rep.jets.empty() || dev > rep.max_deviation) {
      rep.worst_point = x;
      rep.max_deviation = dev;
    }
    rep.jets.push_back(j);
  }
  rep.pass = rep.max_deviation <= tol;
  return rep;
}

}  // namespace gcalc

#pragma once

// Jets of cochains at the diagonal by central differences with Richardson
// extrapolation.

#include <functional>
#include <string>
#include <vector>

#include "gcalc/cochain.hpp"

namespace gcalc {

/// c0 + c1 dx + c2 dx^2 at base point x (1D, x coordinate).
struct Jet1 {
  double c0 = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  double x = 0.0;
  double error = 0.0;  // difference between the last two extrapolation levels
};

/// Mixed partial of a 2-cochain at the diagonal.
struct Form2Sample {
  double value = 0.0;
  double h = 0.0;
  int extrapolation_levels = 0;
  double error = 0.0;
  std::vector<double> levels;  // estimate after each extrapolation level
};

/// Default base step for a point with the given magnitude.
double default_step(double magnitude);

/// Jet of g(s) = c(x, x+s) at s = 0. h <= 0 selects default_step(x).
Jet1 ve1_deg1(const Cochain& c, double x, double h = 0.0);

/// d/d(slot 1, coord i) d/d(slot 2, coord j) of c(x, x+u, x+v) at u = v = 0,
/// for a 2-cochain on R^2 (i, j in {0, 1}).
Form2Sample ve0_deg2(const Cochain& c, const Point& x, int i = 0, int j = 1, double h = 0.0);

using JetTarget = std::function<Jet1(double x)>;

struct IntegratesReport {
  double max_deviation = 0.0;
  double worst_point = 0.0;
  bool pass = false;
  std::vector<Jet1> jets;
};

/// Compares ve1_deg1 jets of c with target(x) at each point. Only the
/// coefficients up to `order` (0, 1 or 2) are compared.
IntegratesReport verify_integrates(const Cochain& c, const JetTarget& target,
                                   const std::vector<double>& points, double tol, int order = 2);

}  // namespace gcalc

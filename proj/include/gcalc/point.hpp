#pragma once

#include <array>
#include <cmath>
#include <span>

namespace gcalc {

/// A base point. Coordinates beyond the ambient dimension are zero; points of
/// R use only x, points of R^2 use x and y, sphere points use all three.
using Point = std::array<double, 3>;

inline Point operator+(const Point& a, const Point& b) {
  return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}
inline Point operator-(const Point& a, const Point& b) {
  return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}
inline Point operator*(double s, const Point& a) {
  return {s * a[0], s * a[1], s * a[2]};
}
inline double dot(const Point& a, const Point& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}
inline Point cross(const Point& a, const Point& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
          a[0] * b[1] - a[1] * b[0]};
}
inline double norm(const Point& a) { return std::sqrt(dot(a, a)); }
inline double distance(const Point& a, const Point& b) { return norm(a - b); }
inline Point normalized(const Point& a) { return (1.0 / norm(a)) * a; }

inline Point pt(double x, double y = 0.0, double z = 0.0) { return {x, y, z}; }

using PointSpan = std::span<const Point>;

}  // namespace gcalc

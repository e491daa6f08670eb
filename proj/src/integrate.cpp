#include "gcalc/integrate.hpp"

#include <cmath>
#include <limits>

#include "gcalc/parallel.hpp"

namespace gcalc {
namespace {

[[noreturn]] void fail(const std::string& msg) { throw Error("integrate", msg); }

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

double exact_threshold(double s) { return std::max(1e-12, 1e-10 * std::fabs(s)); }

}  // namespace

double riemann_sum(const Cochain& c, const SimplicialComplex& k, unsigned threads) {
  if (k.empty()) return 0.0;
  const int n = k.dimension();
  if (c.degree() != n) {
    fail("cochain degree " + std::to_string(c.degree()) + " does not match complex dimension " +
         std::to_string(n));
  }
  std::vector<double> values;
  if (c.symmetry() == Symmetry::completely_symmetric) {
    // Every face once, as a degenerate n-simplex.
    std::vector<const Simplex*> faces;
    for (int d = 0; d <= n; ++d) {
      for (const Simplex& s : k.simplices(d)) faces.push_back(&s);
    }
    values.assign(faces.size(), 0.0);
    parallel_for(faces.size(), threads, [&](std::size_t i) {
      std::vector<Point> p = k.chart_points(*faces[i]);
      while (p.size() < static_cast<std::size_t>(n + 1)) p.push_back(p.back());
      values[i] = c(p);
    });
    return pairwise_sum(values);
  }
  if (!k.is_oriented()) fail("orientation missing for a cochain that is not completely symmetric");
  values.assign(k.num_cells(), 0.0);
  parallel_for(k.num_cells(), threads, [&](std::size_t i) {
    const std::vector<int> cell = k.oriented_cell(i);
    const double v = c(k.chart_points(cell));
    values[i] = n == 0 ? k.orientation()[i] * v : v;
  });
  return pairwise_sum(values);
}

RiemannSumResult refine_limit(const Cochain& c, const SimplicialComplex& k, SubdivisionKind scheme,
                              int max_depth, double tol, unsigned threads) {
  if (max_depth < 0) fail("max_depth must be >= 0");
  RiemannSumResult r;
  SimplicialComplex cur = k;
  for (int d = 0; d <= max_depth; ++d) {
    if (d > 0) cur = subdivide_once(cur, scheme);
    r.sums.push_back(riemann_sum(c, cur, threads));
    r.mesh.push_back(cur.mesh_size());
    r.cells.push_back(cur.num_cells());
  }
  const std::size_t m = r.sums.size();
  r.exact = true;
  for (double s : r.sums) {
    if (std::fabs(s - r.sums.back()) > exact_threshold(r.sums.back())) r.exact = false;
  }
  r.orders.assign(m, nan);
  for (std::size_t d = 2; d < m; ++d) {
    const double a = std::fabs(r.sums[d - 1] - r.sums[d - 2]);
    const double b = std::fabs(r.sums[d] - r.sums[d - 1]);
    if (a <= exact_threshold(r.sums[d]) || b <= exact_threshold(r.sums[d])) continue;
    if (!(r.mesh[d - 1] > r.mesh[d])) continue;
    r.orders[d] = std::log(a / b) / std::log(r.mesh[d - 1] / r.mesh[d]);
  }
  r.order = r.orders.back();
  r.limit = r.sums.back();
  if (!r.exact && m >= 2 && std::isfinite(r.order) && r.order > 0.0) {
    double p = r.order;
    if (std::fabs(p - std::round(p)) < 0.25) p = std::round(p);
    const double ratio = r.mesh[m - 2] / r.mesh[m - 1];
    r.limit = r.sums[m - 1] + (r.sums[m - 1] - r.sums[m - 2]) / (std::pow(ratio, p) - 1.0);
  }
  r.converged = r.exact || std::fabs(r.limit - r.sums.back()) <= tol ||
                (m >= 2 && std::fabs(r.sums[m - 1] - r.sums[m - 2]) <= tol);
  return r;
}

double relative_sum(const Cochain& c_m, const Cochain& c_bd, const SimplicialComplex& k) {
  const SimplicialComplex bd = boundary_complex(k);
  return riemann_sum(c_m, k) - riemann_sum(c_bd, bd);
}

long euler_sum(const SimplicialComplex& k) {
  if (k.empty()) return 0;
  // Every term is +-1, so the double sum is an exact integer.
  return std::lround(riemann_sum(euler_sign_cochain(k.dimension()), k));
}

VariationResult total_variation(const Cochain& c, const SimplicialComplex& k, SubdivisionKind scheme,
                                int depth, double bound) {
  VariationResult r;
  Cochain a(
      c.degree(), [f = c.evaluator()](PointSpan t) { return std::fabs(f(t)); },
      Symmetry::none, "|" + c.name() + "|", c.locality());
  SimplicialComplex cur = k;
  for (int d = 0; d <= depth; ++d) {
    if (d > 0) cur = subdivide_once(cur, scheme);
    double v = 0.0;
    if (!cur.empty()) {
      std::vector<double> values(cur.num_cells());
      for (std::size_t i = 0; i < cur.num_cells(); ++i) values[i] = a(cur.chart_points(cur.oriented_cell(i)));
      v = pairwise_sum(values);
    }
    r.per_depth.push_back(v);
    r.value = std::max(r.value, v);
    if (r.value > bound) {
      r.diverged = true;
      break;
    }
  }
  return r;
}

RiemannSumResult riemann_stieltjes(const Field& f, const Cochain& dg, const SimplicialComplex& k,
                                   int max_depth, double tol, double variation_bound) {
  if (dg.degree() != 1 || k.dimension() != 1) fail("riemann_stieltjes works with 1-cochains on 1-complexes");
  const VariationResult tv = total_variation(dg, k, SubdivisionKind::uniform_1d, max_depth, variation_bound);
  if (tv.diverged) {
    fail("unbounded variation: total variation exceeded " + std::to_string(variation_bound) +
         " at depth " + std::to_string(tv.per_depth.size() - 1));
  }
  Cochain integrand(
      1, [f, g = dg.evaluator()](PointSpan t) { return f(t[0]) * g(t); }, Symmetry::normalized,
      "stieltjes", dg.locality());
  return refine_limit(integrand, k, SubdivisionKind::uniform_1d, max_depth, tol);
}

}  // namespace gcalc

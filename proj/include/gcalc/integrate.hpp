#pragma once

// Generalized Riemann sums over triangulations and the refinement-limit
// driver built on them.

#include <functional>
#include <string>
#include <vector>

#include "gcalc/cochain.hpp"
#include "gcalc/simplicial.hpp"

namespace gcalc {

/// Sum of c over the oriented top cells of k. A completely symmetric cochain
/// is instead summed over every face of every dimension, each once, padded
/// to degree n by repeating its last vertex. `threads` = 0 uses all cores;
/// the result does not depend on it.
double riemann_sum(const Cochain& c, const SimplicialComplex& k, unsigned threads = 1);

struct RiemannSumResult {
  std::vector<double> sums;        // one per depth, starting at depth 0
  std::vector<double> mesh;        // mesh size per depth
  std::vector<std::size_t> cells;  // top cells per depth
  double limit = 0.0;              // Richardson-extrapolated limit
  double order = 0.0;              // observed order from the last two differences (NaN if exact)
  std::vector<double> orders;      // order estimate per depth (NaN where undefined)
  bool exact = false;              // all sums agree to max(1e-12, 1e-10 |sum|)
  bool converged = false;          // last correction below tol
};

/// Sums along the lineage K, S(K), S(S(K)), ... up to max_depth.
RiemannSumResult refine_limit(const Cochain& c, const SimplicialComplex& k, SubdivisionKind scheme,
                              int max_depth, double tol = 1e-10, unsigned threads = 1);

/// Sum over K of c_m minus sum over its boundary of c_bd.
double relative_sum(const Cochain& c_m, const Cochain& c_bd, const SimplicialComplex& k);

/// Sum over all faces of (-1)^(number of vertices + 1).
long euler_sum(const SimplicialComplex& k);

struct VariationResult {
  std::vector<double> per_depth;
  double value = 0.0;    // sup over the lineage
  bool diverged = false; // exceeded the bound
};

/// Sum of |c| over top cells along the lineage up to depth, stopping early
/// when the bound is exceeded.
VariationResult total_variation(const Cochain& c, const SimplicialComplex& k, SubdivisionKind scheme,
                                int depth, double bound = 1e6);

/// Limit of sum f(x_0) * dg(cell) over an interval lineage, where dg is the
/// 1-cochain (the coboundary of a 0-cochain or a 1-cocycle). Throws
/// gcalc::Error("integrate", "unbounded variation ...") when the total
/// variation of dg exceeds `variation_bound` along the lineage.
RiemannSumResult riemann_stieltjes(const Field& f, const Cochain& dg, const SimplicialComplex& k,
                                   int max_depth, double tol = 1e-10, double variation_bound = 1e6);

}  // namespace gcalc

#pragma once

// Brownian paths on time grids, the finite-dimensional approximation of the
// Wiener integral with cochain data, and stochastic integrals as cochain sums.

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "gcalc/cochain.hpp"

namespace gcalc {

struct TimeGrid {
  std::vector<double> times;         // 0 = t_0 < ... < t_m = 1
  std::vector<std::size_t> marked;   // indices into times

  /// Uniform grid with m steps; marked times must be grid points.
  static TimeGrid uniform(std::size_t m, const std::vector<double>& marked_times = {});
  /// Validates and builds from explicit times.
  static TimeGrid from_times(std::vector<double> times, const std::vector<double>& marked_times = {});

  std::size_t steps() const { return times.size() - 1; }
  double dt(std::size_t i) const { return times[i + 1] - times[i]; }
  double mesh() const;
};

struct PathSample {
  std::vector<double> x;  // x[0] = 0
  std::uint64_t seed = 0;
  std::uint64_t index = 0;
  bool in_cutoff = true;
};

/// Generator for sample `index` of a run with the given seed. Streams depend
/// only on (seed, index), never on scheduling.
std::mt19937_64 sample_rng(std::uint64_t seed, std::uint64_t index);

PathSample sample_path(const TimeGrid& grid, std::uint64_t seed, std::uint64_t index = 0);

/// The three pieces of cochain data entering the action.
struct CochainData {
  Cochain g_dx;       // 1-cochain on R, jet dx^2
  Cochain g_dt;       // 1-cochain on [0,1], jet dt (or dt^2 when dt_squared)
  Cochain v;          // 1-cochain on R restricting to V on the diagonal
  bool dt_squared = false;  // g_dt is a squared time step; its square root enters

  /// G_dx = (y-x)^2, G_dt = t1-t0, V cochain = V(x).
  static CochainData feynman(Field potential);
  /// G_dx = (y-x)^2 (1+(y-x)^3), G_dt = (t1-t0)(1+(t1-t0)^2), V cochain = V(x).
  static CochainData perturbed(Field potential);
};

/// sum_i G_dx(x_i,x_{i+1}) / (2 G_dt(t_i,t_{i+1})) + V(x_i,x_{i+1}) G_dt(t_i,t_{i+1}).
double action(const CochainData& s, const TimeGrid& grid, const std::vector<double>& x);

/// |x_{j+1} - x_j| < 2 sqrt(dt_j |log dt_j|) for all j.
bool cutoff_indicator(const TimeGrid& grid, const std::vector<double>& x);

struct Estimate {
  double mean = 0.0;
  double stderr_ = 0.0;
  double acceptance_rate = 1.0;
  std::size_t samples = 0;
};

/// Observable evaluated at the marked times, in order.
using PathObservable = std::function<double(const std::vector<double>& marked_values)>;

struct Thm21Options {
  std::size_t samples = 100000;
  std::uint64_t seed = 1;
  bool enforce_cutoff = true;
  unsigned threads = 0;
};

/// Importance-sampled estimate of the finite-dimensional integral: Brownian
/// samples weighted by 1_A exp(-(S - sum dx^2/(2 dt))) f.
Estimate thm21_estimate(const CochainData& s, const PathObservable& f, const TimeGrid& grid,
                        const Thm21Options& opt);

/// Deterministic tensor Gauss-Hermite evaluation of the same integral for
/// grids with at most 3 steps (no cutoff).
double thm21_quadrature(const CochainData& s, const PathObservable& f, const TimeGrid& grid,
                        int nodes = 40);

/// sum_i c(x_i, x_{i+1}).
double cochain_path_sum(const Cochain& c, const std::vector<double>& x);

/// Plain Monte Carlo of a per-path statistic.
Estimate monte_carlo(const TimeGrid& grid, std::size_t samples, std::uint64_t seed,
                     const std::function<double(const std::vector<double>&)>& stat,
                     unsigned threads = 0);

struct L2Report {
  std::vector<double> mesh;
  std::vector<double> mean_sq_gap;
  std::vector<double> stderr_;
  std::vector<double> slopes;  // log-log slope between consecutive meshes
  bool jets_agree = true;
  double jet_deviation = 0.0;
  std::string diagnostic;
};

struct L2Options {
  std::size_t samples = 100000;
  std::uint64_t seed = 1;
  unsigned threads = 0;
  /// Run even when the jets differ (the expected negative control).
  bool negative_control = false;
  std::vector<double> jet_points = {-1.0, -0.5, 0.0, 0.5, 1.0};
  double jet_tol = 1e-6;
};

/// E[(sum c1 - sum c2)^2] along a refining grid sequence. Throws
/// gcalc::Error("stochastic", "jet mismatch ...") when the order-2 jets of
/// c1 and c2 differ, unless negative_control is set.
L2Report l2_convergence_test(const Cochain& c1, const Cochain& c2, const std::vector<TimeGrid>& grids,
                             const L2Options& opt);

/// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace gcalc

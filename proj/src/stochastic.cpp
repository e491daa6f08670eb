#include "gcalc/stochastic.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "gcalc/parallel.hpp"
#include "gcalc/van_est.hpp"

namespace gcalc {
namespace {

[[noreturn]] void fail(const std::string& msg) { throw Error("stochastic", msg); }

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::vector<std::size_t> locate_marks(const std::vector<double>& times, const std::vector<double>& marks) {
  std::vector<std::size_t> idx;
  for (double t : marks) {
    auto it = std::min_element(times.begin(), times.end(),
                               [t](double a, double b) { return std::fabs(a - t) < std::fabs(b - t); });
    if (it == times.end() || std::fabs(*it - t) > 1e-12) {
      fail("marked time " + std::to_string(t) + " is not a grid point");
    }
    idx.push_back(static_cast<std::size_t>(it - times.begin()));
  }
  return idx;
}

Estimate summarize(const std::vector<double>& v, std::size_t accepted) {
  Estimate e;
  e.samples = v.size();
  if (v.empty()) return e;
  const double n = static_cast<double>(v.size());
  e.mean = pairwise_sum(v) / n;
  std::vector<double> sq(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) sq[i] = (v[i] - e.mean) * (v[i] - e.mean);
  const double var = v.size() > 1 ? pairwise_sum(sq) / (n - 1.0) : 0.0;
  e.stderr_ = std::sqrt(var / n);
  e.acceptance_rate = static_cast<double>(accepted) / n;
  return e;
}

double eval1(const Cochain& c, double a, double b) {
  const Point t[2] = {pt(a), pt(b)};
  return c(PointSpan(t, 2));
}

std::vector<double> marked_values(const TimeGrid& grid, const std::vector<double>& x) {
  std::vector<double> v;
  v.reserve(grid.marked.size());
  for (std::size_t i : grid.marked) v.push_back(x[i]);
  return v;
}

}  // namespace

TimeGrid TimeGrid::uniform(std::size_t m, const std::vector<double>& marked_times) {
  if (m == 0) fail("a time grid needs at least one step");
  std::vector<double> t(m + 1);
  for (std::size_t i = 0; i <= m; ++i) t[i] = static_cast<double>(i) / static_cast<double>(m);
  return from_times(std::move(t), marked_times);
}

TimeGrid TimeGrid::from_times(std::vector<double> times, const std::vector<double>& marked_times) {
  if (times.size() < 2 || times.front() != 0.0 || times.back() != 1.0) {
    fail("time grid must run from 0 to 1");
  }
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1])) fail("time grid must be strictly increasing");
  }
  TimeGrid g;
  g.marked = locate_marks(times, marked_times);
  g.times = std::move(times);
  return g;
}

double TimeGrid::mesh() const {
  double h = 0.0;
  for (std::size_t i = 0; i < steps(); ++i) h = std::max(h, dt(i));
  return h;
}

std::mt19937_64 sample_rng(std::uint64_t seed, std::uint64_t index) {
  return std::mt19937_64(splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632be59bd9b4e019ULL)));
}

PathSample sample_path(const TimeGrid& grid, std::uint64_t seed, std::uint64_t index) {
  auto rng = sample_rng(seed, index);
  std::normal_distribution<double> normal(0.0, 1.0);
  PathSample p;
  p.seed = seed;
  p.index = index;
  p.x.assign(grid.times.size(), 0.0);
  for (std::size_t i = 0; i < grid.steps(); ++i) p.x[i + 1] = p.x[i] + std::sqrt(grid.dt(i)) * normal(rng);
  p.in_cutoff = cutoff_indicator(grid, p.x);
  return p;
}

CochainData CochainData::feynman(Field potential) {
  CochainData d;
  d.g_dx = power_cochain(2).with_name("(y-x)^2");
  d.g_dt = power_cochain(1).with_name("t1-t0");
  d.v = Cochain(
      1, [potential](PointSpan t) { return potential(t[0]); }, Symmetry::none, "V(x)");
  return d;
}

CochainData CochainData::perturbed(Field potential) {
  CochainData d = feynman(std::move(potential));
  d.g_dx = Cochain(
      1,
      [](PointSpan t) {
        const double u = t[1][0] - t[0][0];
        return u * u * (1.0 + u * u * u);
      },
      Symmetry::none, "(y-x)^2(1+(y-x)^3)");
  d.g_dt = Cochain(
      1,
      [](PointSpan t) {
        const double u = t[1][0] - t[0][0];
        return u * (1.0 + u * u);
      },
      Symmetry::none, "(t1-t0)(1+(t1-t0)^2)");
  return d;
}

double action(const CochainData& s, const TimeGrid& grid, const std::vector<double>& x) {
  if (x.size() != grid.times.size()) fail("path length does not match the grid");
  double total = 0.0;
  for (std::size_t i = 0; i < grid.steps(); ++i) {
    double gdt = eval1(s.g_dt, grid.times[i], grid.times[i + 1]);
    if (s.dt_squared) gdt = std::sqrt(gdt);
    if (!(gdt > 0.0)) fail("G_dt must be positive on grid steps");
    total += 0.5 * eval1(s.g_dx, x[i], x[i + 1]) / gdt + eval1(s.v, x[i], x[i + 1]) * gdt;
  }
  return total;
}

bool cutoff_indicator(const TimeGrid& grid, const std::vector<double>& x) {
  for (std::size_t j = 0; j < grid.steps(); ++j) {
    const double dt = grid.dt(j);
    // |log dt| keeps the bound real for dt >= 1.
    const double bound = 2.0 * std::sqrt(dt * std::fabs(std::log(dt)));
    if (!(std::fabs(x[j + 1] - x[j]) < bound)) return false;
  }
  return true;
}

Estimate thm21_estimate(const CochainData& s, const PathObservable& f, const TimeGrid& grid,
                        const Thm21Options& opt) {
  if (opt.samples == 0) fail("need at least one sample");
  std::vector<double> w(opt.samples, 0.0);
  std::vector<char> acc(opt.samples, 0);
  parallel_for(opt.samples, opt.threads, [&](std::size_t k) {
    const PathSample p = sample_path(grid, opt.seed, k);
    acc[k] = p.in_cutoff;
    if (opt.enforce_cutoff && !p.in_cutoff) return;
    double kinetic = 0.0;
    for (std::size_t i = 0; i < grid.steps(); ++i) {
      const double dx = p.x[i + 1] - p.x[i];
      kinetic += 0.5 * dx * dx / grid.dt(i);
    }
    const double u = action(s, grid, p.x) - kinetic;
    const double v = std::exp(-u) * f(marked_values(grid, p.x));
    if (!std::isfinite(v)) fail("non-finite weight in sample " + std::to_string(k));
    w[k] = v;
  });
  std::size_t accepted = 0;
  for (char a : acc) accepted += a ? 1 : 0;
  return summarize(w, accepted);
}

double thm21_quadrature(const CochainData& s, const PathObservable& f, const TimeGrid& grid, int nodes) {
  const std::size_t m = grid.steps();
  if (m > 3) fail("tensor quadrature is limited to at most 3 steps");
  if (nodes < 2) fail("need at least two quadrature nodes");
  // Golub-Welsch for the probabilists' Hermite weight exp(-x^2/2)/sqrt(2 pi).
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(nodes, nodes);
  for (int k = 1; k < nodes; ++k) J(k, k - 1) = J(k - 1, k) = std::sqrt(static_cast<double>(k));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  std::vector<double> xi(static_cast<std::size_t>(nodes));
  std::vector<double> wt(static_cast<std::size_t>(nodes));
  for (int k = 0; k < nodes; ++k) {
    xi[static_cast<std::size_t>(k)] = es.eigenvalues()(k);
    const double v0 = es.eigenvectors()(0, k);
    wt[static_cast<std::size_t>(k)] = v0 * v0;
  }
  std::vector<std::size_t> idx(m, 0);
  double total = 0.0;
  std::vector<double> x(m + 1, 0.0);
  while (true) {
    double weight = 1.0;
    for (std::size_t i = 0; i < m; ++i) {
      x[i + 1] = x[i] + std::sqrt(grid.dt(i)) * xi[idx[i]];
      weight *= wt[idx[i]];
    }
    double kinetic = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double dx = x[i + 1] - x[i];
      kinetic += 0.5 * dx * dx / grid.dt(i);
    }
    total += weight * std::exp(-(action(s, grid, x) - kinetic)) * f(marked_values(grid, x));
    std::size_t d = 0;
    while (d < m && ++idx[d] == static_cast<std::size_t>(nodes)) idx[d++] = 0;
    if (d == m) break;
  }
  return total;
}

double cochain_path_sum(const Cochain& c, const std::vector<double>& x) {
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) s += eval1(c, x[i], x[i + 1]);
  return s;
}

Estimate monte_carlo(const TimeGrid& grid, std::size_t samples, std::uint64_t seed,
                     const std::function<double(const std::vector<double>&)>& stat, unsigned threads) {
  std::vector<double> v(samples, 0.0);
  parallel_for(samples, threads, [&](std::size_t k) { v[k] = stat(sample_path(grid, seed, k).x); });
  return summarize(v, samples);
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) fail("slope needs at least two points");
  double mx = 0, my = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]) / n;
    my += std::log(y[i]) / n;
  }
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

L2Report l2_convergence_test(const Cochain& c1, const Cochain& c2, const std::vector<TimeGrid>& grids,
                             const L2Options& opt) {
  L2Report rep;
  for (double x : opt.jet_points) {
    const Jet1 a = ve1_deg1(c1, x);
    const Jet1 b = ve1_deg1(c2, x);
    const double dev = std::max({std::fabs(a.c0 - b.c0), std::fabs(a.c1 - b.c1), std::fabs(a.c2 - b.c2)});
    if (dev > rep.jet_deviation) {
      rep.jet_deviation = dev;
      rep.diagnostic = "jets differ at x=" + std::to_string(x) + ": (" + std::to_string(a.c0) + ", " +
                       std::to_string(a.c1) + ", " + std::to_string(a.c2) + ") vs (" +
                       std::to_string(b.c0) + ", " + std::to_string(b.c1) + ", " + std::to_string(b.c2) + ")";
    }
  }
  rep.jets_agree = rep.jet_deviation <= opt.jet_tol;
  if (!rep.jets_agree && !opt.negative_control) fail("jet mismatch: " + rep.diagnostic);
  if (rep.jets_agree) rep.diagnostic.clear();
  for (const TimeGrid& g : grids) {
    const Estimate e = monte_carlo(
        g, opt.samples, opt.seed,
        [&](const std::vector<double>& x) {
          const double d = cochain_path_sum(c1, x) - cochain_path_sum(c2, x);
          return d * d;
        },
        opt.threads);
    rep.mesh.push_back(g.mesh());
    rep.mean_sq_gap.push_back(e.mean);
    rep.stderr_.push_back(e.stderr_);
  }
  for (std::size_t i = 1; i < rep.mesh.size(); ++i) {
    if (rep.mean_sq_gap[i - 1] > 0 && rep.mean_sq_gap[i] > 0) {
      rep.slopes.push_back(loglog_slope({rep.mesh[i - 1], rep.mesh[i]}, {rep.mean_sq_gap[i - 1], rep.mean_sq_gap[i]}));
    } else {
      rep.slopes.push_back(std::numeric_limits<double>::quiet_NaN());
    }
  }
  return rep;
}

}  // namespace gcalc

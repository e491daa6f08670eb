#include "gcalc/cochain.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "gcalc/simplicial.hpp"

namespace gcalc {
namespace {

[[noreturn]] void fail(const std::string& msg) { throw Error("cochain", msg); }

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace

std::string_view symmetry_name(Symmetry s) {
  switch (s) {
    case Symmetry::none: return "none";
    case Symmetry::normalized: return "normalized";
    case Symmetry::symmetric: return "symmetric";
    case Symmetry::antisymmetric: return "antisymmetric";
    case Symmetry::completely_symmetric: return "completely-symmetric";
    case Symmetry::completely_antisymmetric: return "completely-antisymmetric";
    case Symmetry::alternating_invariant: return "alternating-invariant";
  }
  return "none";
}

Field field_from_expr(const Expr& e) {
  return [e](const Point& p) {
    return e.eval({{"x", p[0]}, {"y", p[1]}, {"z", p[2]}});
  };
}

Field field_from_text(std::string_view text) { return field_from_expr(Expr::parse(text)); }

// ---- permutations ---------------------------------------------------------

std::vector<Point> permute(const Permutation& sigma, PointSpan t) {
  if (sigma.size() != t.size()) fail("permutation size does not match tuple size");
  std::vector<Point> out(t.size());
  std::vector<char> hit(t.size(), 0);
  for (std::size_t i = 0; i < t.size(); ++i) {
    const int j = sigma[i];
    if (j < 0 || j >= static_cast<int>(t.size()) || hit[static_cast<std::size_t>(j)]) {
      fail("not a permutation");
    }
    hit[static_cast<std::size_t>(j)] = 1;
    out[static_cast<std::size_t>(j)] = t[i];
  }
  return out;
}

Permutation compose(const Permutation& sigma, const Permutation& tau) {
  if (sigma.size() != tau.size()) fail("permutation size mismatch");
  Permutation r(tau.size());
  for (std::size_t i = 0; i < tau.size(); ++i) r[i] = sigma[static_cast<std::size_t>(tau[i])];
  return r;
}

Permutation inverse(const Permutation& sigma) {
  Permutation r(sigma.size());
  for (std::size_t i = 0; i < sigma.size(); ++i) r[static_cast<std::size_t>(sigma[i])] = static_cast<int>(i);
  return r;
}

int sign(const Permutation& sigma) {
  int inv = 0;
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    for (std::size_t j = i + 1; j < sigma.size(); ++j) {
      if (sigma[i] > sigma[j]) ++inv;
    }
  }
  return inv % 2 == 0 ? 1 : -1;
}

std::vector<Permutation> all_permutations(int n) {
  Permutation p(static_cast<std::size_t>(n));
  std::iota(p.begin(), p.end(), 0);
  std::vector<Permutation> out;
  do {
    out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

// ---- operations -----------------------------------------------------------

namespace {

Cochain average(const Cochain& c, bool alternating) {
  const int n = c.degree();
  auto perms = std::make_shared<std::vector<Permutation>>(all_permutations(n + 1));
  auto signs = std::make_shared<std::vector<int>>();
  for (const auto& p : *perms) signs->push_back(alternating ? sign(p) : 1);
  const double norm = 1.0 / factorial(n + 1);
  auto f = c.evaluator();
  std::string name = (alternating ? "alt(" : "sym(") + c.name() + ")";
  return Cochain(
      n,
      [=](PointSpan t) {
        double s = 0.0;
        for (std::size_t k = 0; k < perms->size(); ++k) {
          const auto u = permute((*perms)[k], t);
          s += (*signs)[k] * f(u);
        }
        return norm * s;
      },
      alternating ? Symmetry::completely_antisymmetric : Symmetry::completely_symmetric, name,
      c.locality());
}

std::vector<Point> drop(PointSpan t, std::size_t i) {
  std::vector<Point> f;
  f.reserve(t.size() - 1);
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (k != i) f.push_back(t[k]);
  }
  return f;
}

}  // namespace

Cochain antisymmetrize(const Cochain& c) { return average(c, true); }
Cochain symmetrize(const Cochain& c) { return average(c, false); }

Cochain coboundary(const Cochain& c) {
  auto f = c.evaluator();
  Symmetry s = c.symmetry() == Symmetry::completely_antisymmetric ? Symmetry::completely_antisymmetric
                                                                  : Symmetry::none;
  return Cochain(
      c.degree() + 1,
      [f](PointSpan t) {
        double s = 0.0;
        for (std::size_t i = 0; i < t.size(); ++i) {
          const auto face = drop(t, i);
          s += (i % 2 == 0 ? 1.0 : -1.0) * f(face);
        }
        return s;
      },
      s, "d(" + c.name() + ")", c.locality());
}

CircleCochain coboundary(const CircleCochain& c) {
  auto f = c.evaluator();
  return CircleCochain(
      c.degree() + 1,
      [f](PointSpan t) {
        std::complex<double> s = 1.0;
        for (std::size_t i = 0; i < t.size(); ++i) {
          const auto face = drop(t, i);
          const auto v = f(face);
          s *= (i % 2 == 0) ? v : std::conj(v) / std::norm(v);
        }
        return s;
      },
      Symmetry::none, "d(" + c.name() + ")", c.locality());
}

Cochain wedge(const Cochain& a, const Cochain& b) {
  if (a.symmetry() != Symmetry::completely_antisymmetric ||
      b.symmetry() != Symmetry::completely_antisymmetric) {
    fail("wedge requires completely antisymmetric inputs");
  }
  const int i = a.degree();
  const int j = b.degree();
  auto fa = a.evaluator();
  auto fb = b.evaluator();
  Cochain product(
      i + j,
      [=](PointSpan t) {
        return fa(t.subspan(0, static_cast<std::size_t>(i + 1))) *
               fb(t.subspan(static_cast<std::size_t>(i)));
      },
      Symmetry::none, "", std::min(a.locality(), b.locality()));
  return antisymmetrize(product).with_name(a.name() + "^" + b.name());
}

Cochain pullback(const std::function<Point(const Point&)>& phi, const Cochain& c) {
  auto f = c.evaluator();
  Symmetry s = c.symmetry();
  return Cochain(
      c.degree(),
      [phi, f](PointSpan t) {
        std::vector<Point> u;
        u.reserve(t.size());
        for (const Point& p : t) u.push_back(phi(p));
        return f(u);
      },
      s, "pullback(" + c.name() + ")");
}

namespace {
Symmetry combined(Symmetry a, Symmetry b) { return a == b ? a : Symmetry::none; }
}  // namespace

Cochain operator+(const Cochain& a, const Cochain& b) {
  if (a.degree() != b.degree()) fail("degree mismatch in sum");
  auto fa = a.evaluator();
  auto fb = b.evaluator();
  return Cochain(
      a.degree(), [fa, fb](PointSpan t) { return fa(t) + fb(t); }, combined(a.symmetry(), b.symmetry()),
      a.name() + "+" + b.name(), std::min(a.locality(), b.locality()));
}

Cochain operator-(const Cochain& a, const Cochain& b) { return a + (-1.0) * b; }

Cochain operator*(double s, const Cochain& a) {
  auto fa = a.evaluator();
  return Cochain(
      a.degree(), [s, fa](PointSpan t) { return s * fa(t); }, a.symmetry(), a.name(), a.locality());
}

Cochain zero_cochain(int degree) {
  return Cochain(
      degree, [](PointSpan) { return 0.0; }, Symmetry::completely_antisymmetric, "0");
}

std::optional<std::string> symmetry_violation(const Cochain& c, int ambient_dim, int n_tuples,
                                              std::uint64_t seed, double tol) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const int n = c.degree();
  const auto perms = all_permutations(n + 1);
  auto f = c.evaluator();
  auto close = [&](double a, double b) { return std::fabs(a - b) <= tol * std::max(1.0, std::fabs(a)); };
  for (int s = 0; s < n_tuples; ++s) {
    std::vector<Point> t(static_cast<std::size_t>(n + 1));
    for (auto& p : t) {
      for (int k = 0; k < ambient_dim; ++k) p[static_cast<std::size_t>(k)] = u(rng);
    }
    const double v = f(t);
    switch (c.symmetry()) {
      case Symmetry::none:
        return std::nullopt;
      case Symmetry::normalized:
        if (n >= 1) {
          auto d = t;
          d[1] = d[0];
          if (!close(f(d), 0.0)) return "not normalized";
        }
        break;
      case Symmetry::symmetric:
      case Symmetry::antisymmetric:
        if (n >= 1) {
          auto d = t;
          std::swap(d[0], d[1]);
          const double expect = c.symmetry() == Symmetry::symmetric ? v : -v;
          if (!close(f(d), expect)) return "swap of the first two slots violates declared symmetry";
        }
        break;
      case Symmetry::completely_symmetric:
      case Symmetry::completely_antisymmetric:
      case Symmetry::alternating_invariant:
        for (const auto& p : perms) {
          const int sg = sign(p);
          if (c.symmetry() == Symmetry::alternating_invariant && sg < 0) continue;
          const double expect = c.symmetry() == Symmetry::completely_antisymmetric ? sg * v : v;
          if (!close(f(permute(p, t)), expect)) {
            return "permutation action violates declared " + std::string(symmetry_name(c.symmetry()));
          }
        }
        if (c.symmetry() == Symmetry::completely_antisymmetric && n >= 1) {
          auto d = t;
          d[static_cast<std::size_t>(n)] = d[0];
          if (!close(f(d), 0.0)) return "completely antisymmetric cochain nonzero on a repeated point";
        }
        break;
    }
  }
  return std::nullopt;
}

// ---- named cochains ---------------------------------------------------------

Cochain left_cochain(Field f) {
  return Cochain(
      1, [f](PointSpan t) { return f(t[0]) * (t[1][0] - t[0][0]); }, Symmetry::normalized, "left");
}

Cochain right_cochain(Field f) {
  return Cochain(
      1, [f](PointSpan t) { return f(t[1]) * (t[1][0] - t[0][0]); }, Symmetry::normalized, "right");
}

Cochain midpoint_cochain(Field f) {
  return Cochain(
      1, [f](PointSpan t) { return f(0.5 * (t[0] + t[1])) * (t[1][0] - t[0][0]); },
      Symmetry::completely_antisymmetric, "midpoint");
}

Cochain strat_cochain(Field f) {
  return Cochain(
      1, [f](PointSpan t) { return 0.5 * (f(t[0]) + f(t[1])) * (t[1][0] - t[0][0]); },
      Symmetry::completely_antisymmetric, "strat");
}

Cochain exact_cochain(Field F) {
  return Cochain(
      1, [F](PointSpan t) { return F(t[1]) - F(t[0]); }, Symmetry::completely_antisymmetric, "exact");
}

Cochain stieltjes_cochain(Field f, Field g) {
  return Cochain(
      1, [f, g](PointSpan t) { return f(t[0]) * (g(t[1]) - g(t[0])); }, Symmetry::normalized,
      "stieltjes");
}

Cochain power_cochain(int k) {
  if (k < 0) fail("power must be >= 0");
  const Symmetry s = (k % 2 == 1) ? Symmetry::completely_antisymmetric : Symmetry::completely_symmetric;
  return Cochain(
      1, [k](PointSpan t) { return std::pow(t[1][0] - t[0][0], k); }, s, "pow" + std::to_string(k));
}

Cochain det_cochain() {
  return Cochain(
      2,
      [](PointSpan t) {
        const Point a = t[1] - t[0];
        const Point b = t[2] - t[0];
        return 0.5 * (a[0] * b[1] - a[1] * b[0]);
      },
      Symmetry::completely_antisymmetric, "det");
}

Cochain metric_squared_cochain() {
  return Cochain(
      2, [](PointSpan t) { return dot(t[1] - t[0], t[2] - t[0]); }, Symmetry::normalized,
      "metric-squared");
}

Cochain euler_sign_cochain(int degree) {
  return Cochain(
      degree,
      [](PointSpan t) {
        int distinct = 0;
        for (std::size_t i = 0; i < t.size(); ++i) {
          bool seen = false;
          for (std::size_t j = 0; j < i; ++j) seen = seen || t[j] == t[i];
          if (!seen) ++distinct;
        }
        return distinct % 2 == 1 ? 1.0 : -1.0;
      },
      Symmetry::completely_symmetric, "euler-sign");
}

Cochain gauss_bonnet_cochain() {
  return Cochain(
      2,
      [](PointSpan t) {
        const Point a = normalized(t[0]);
        const Point b = normalized(t[1]);
        const Point c = normalized(t[2]);
        if (std::fabs(dot(cross(a, b), c)) < 1e-15) return 0.0;
        const auto tri = spherical_triangle(a, b, c);
        return tri.orientation * tri.area;
      },
      Symmetry::completely_antisymmetric, "gauss-bonnet");
}

Cochain parse_cochain(std::string_view spec_in) {
  const std::string spec = trim(spec_in);
  auto arg_of = [&](std::string_view head) -> std::optional<std::string> {
    if (spec.size() > head.size() + 1 && spec.compare(0, head.size(), head) == 0 &&
        spec[head.size()] == '(' && spec.back() == ')') {
      return spec.substr(head.size() + 1, spec.size() - head.size() - 2);
    }
    return std::nullopt;
  };
  if (auto a = arg_of("left")) return left_cochain(field_from_text(*a)).with_name(spec);
  if (auto a = arg_of("ito")) return left_cochain(field_from_text(*a)).with_name(spec);
  if (auto a = arg_of("right")) return right_cochain(field_from_text(*a)).with_name(spec);
  if (auto a = arg_of("midpoint")) return midpoint_cochain(field_from_text(*a)).with_name(spec);
  if (auto a = arg_of("strat")) return strat_cochain(field_from_text(*a)).with_name(spec);
  if (auto a = arg_of("exact")) return exact_cochain(field_from_text(*a)).with_name(spec);
  if (auto a = arg_of("stieltjes")) {
    const auto semi = a->find(';');
    if (semi == std::string::npos) fail("stieltjes needs two functions: stieltjes(f;g)");
    return stieltjes_cochain(field_from_text(a->substr(0, semi)), field_from_text(a->substr(semi + 1)))
        .with_name(spec);
  }
  if (auto a = arg_of("pow")) return power_cochain(std::stoi(*a));
  if (spec == "det") return det_cochain();
  if (spec == "metric-squared") return metric_squared_cochain();
  if (spec == "gauss-bonnet") return gauss_bonnet_cochain();
  if (spec.rfind("euler-sign", 0) == 0) {
    int deg = 2;
    if (spec.size() > 10) {
      if (spec[10] != ':') fail("bad cochain spec '" + spec + "'");
      deg = std::stoi(spec.substr(11));
    }
    return euler_sign_cochain(deg);
  }
  fail("unknown cochain spec '" + spec + "'");
}

}  // namespace gcalc

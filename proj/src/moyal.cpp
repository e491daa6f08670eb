#include "gcalc/moyal.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <cmath>
#include <functional>
#include <sstream>

#include "gcalc/error.hpp"
#include "gcalc/expr.hpp"

namespace gcalc {
namespace {

[[noreturn]] void fail(const std::string& msg) { throw Error("moyal", msg); }

using cd = std::complex<double>;

Rational factorial(int n) {
  Rational f(1);
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

Rational binomial(int n, int k) { return factorial(n) / (factorial(k) * factorial(n - k)); }

GaussRational i_power(int n) {
  switch (n % 4) {
    case 0: return {Rational(1), Rational(0)};
    case 1: return {Rational(0), Rational(1)};
    case 2: return {Rational(-1), Rational(0)};
    default: return {Rational(0), Rational(-1)};
  }
}

}  // namespace

std::complex<double> GaussRational::value() const {
  return {static_cast<double>(re), static_cast<double>(im)};
}

// ---- ExactPoly ----------------------------------------------------------------

ExactPoly ExactPoly::constant(GaussRational c) { return monomial(0, 0, std::move(c)); }

ExactPoly ExactPoly::monomial(int a, int b, GaussRational c, int hbar_power) {
  if (a < 0 || b < 0 || hbar_power < 0) fail("negative exponent");
  ExactPoly f;
  f.add({a, b, hbar_power}, c);
  return f;
}

void ExactPoly::add(const Key& k, const GaussRational& c) {
  if (c.is_zero()) return;
  auto it = terms_.find(k);
  if (it == terms_.end()) {
    terms_.emplace(k, c);
    return;
  }
  it->second = it->second + c;
  if (it->second.is_zero()) terms_.erase(it);
}

int ExactPoly::degree() const {
  int d = -1;
  for (const auto& [k, c] : terms_) d = std::max(d, k[0] + k[1]);
  return d;
}

ExactPoly ExactPoly::d_p() const {
  ExactPoly r;
  for (const auto& [k, c] : terms_) {
    if (k[0] > 0) r.add({k[0] - 1, k[1], k[2]}, c * GaussRational(Rational(k[0])));
  }
  return r;
}

ExactPoly ExactPoly::d_q() const {
  ExactPoly r;
  for (const auto& [k, c] : terms_) {
    if (k[1] > 0) r.add({k[0], k[1] - 1, k[2]}, c * GaussRational(Rational(k[1])));
  }
  return r;
}

ExactPoly ExactPoly::conj() const {
  ExactPoly r;
  for (const auto& [k, c] : terms_) r.add(k, c.conj());
  return r;
}

ExactPoly ExactPoly::scaled(const GaussRational& s, int hbar_shift) const {
  ExactPoly r;
  for (const auto& [k, c] : terms_) r.add({k[0], k[1], k[2] + hbar_shift}, c * s);
  return r;
}

std::complex<double> ExactPoly::operator()(double p, double q, double hbar) const {
  cd s = 0.0;
  for (const auto& [k, c] : terms_) {
    s += c.value() * std::pow(p, k[0]) * std::pow(q, k[1]) * std::pow(hbar, k[2]);
  }
  return s;
}

ExactPoly operator+(const ExactPoly& a, const ExactPoly& b) {
  ExactPoly r = a;
  for (const auto& [k, c] : b.terms_) r.add(k, c);
  return r;
}

ExactPoly operator-(const ExactPoly& a, const ExactPoly& b) {
  return a + b.scaled(GaussRational(Rational(-1)));
}

ExactPoly operator*(const ExactPoly& a, const ExactPoly& b) {
  ExactPoly r;
  for (const auto& [ka, ca] : a.terms_) {
    for (const auto& [kb, cb] : b.terms_) r.add({ka[0] + kb[0], ka[1] + kb[1], ka[2] + kb[2]}, ca * cb);
  }
  return r;
}

std::string ExactPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << "(" << c.re;
    if (c.im != 0) os << (c.im > 0 ? "+" : "") << c.im << "i";
    os << ")";
    if (k[0]) os << "*p^" << k[0];
    if (k[1]) os << "*q^" << k[1];
    if (k[2]) os << "*hbar^" << k[2];
  }
  return os.str();
}

namespace {

ExactPoly from_node(const Expr::Node& n) {
  using K = Expr::Kind;
  switch (n.kind) {
    case K::number:
      return ExactPoly::constant(GaussRational(Rational(n.value)));
    case K::variable:
      if (n.name == "p") return ExactPoly::p();
      if (n.name == "q") return ExactPoly::q();
      fail("polynomial observables use the variables p and q, got '" + n.name + "'");
    case K::unary_minus:
      return from_node(*n.args[0]).scaled(GaussRational(Rational(-1)));
    case K::add:
      return from_node(*n.args[0]) + from_node(*n.args[1]);
    case K::sub:
      return from_node(*n.args[0]) - from_node(*n.args[1]);
    case K::mul:
      return from_node(*n.args[0]) * from_node(*n.args[1]);
    case K::div: {
      const ExactPoly d = from_node(*n.args[1]);
      if (d.degree() != 0 || d.terms().begin()->first[2] != 0 || d.terms().begin()->second.im != 0) {
        fail("polynomial observables may only divide by real constants");
      }
      return from_node(*n.args[0]).scaled(GaussRational(Rational(1) / d.terms().begin()->second.re));
    }
    case K::pow: {
      const Expr::Node& e = *n.args[1];
      if (e.kind != K::number || e.value < 0 || e.value != std::floor(e.value) || e.value > 64) {
        fail("polynomial exponents must be small nonnegative integers");
      }
      ExactPoly base = from_node(*n.args[0]);
      ExactPoly r = ExactPoly::constant(GaussRational(Rational(1)));
      for (int i = 0; i < static_cast<int>(e.value); ++i) r = r * base;
      return r;
    }
    case K::call:
      fail("function '" + n.name + "' is not allowed in a polynomial observable");
  }
  fail("bad polynomial expression");
}

}  // namespace

ExactPoly ExactPoly::parse(std::string_view text) {
  const Expr e = Expr::parse(text);
  return from_node(e.root());
}

ExactPoly star_series(const ExactPoly& f, const ExactPoly& g) {
  if (f.is_zero() || g.is_zero()) return {};
  const int nmax = std::min(f.degree(), g.degree());
  // df[i][j] = d_q^i d_p^j f, and dg[i][j] = d_p^i d_q^j g.
  std::vector<std::vector<ExactPoly>> df(static_cast<std::size_t>(nmax + 1));
  std::vector<std::vector<ExactPoly>> dg(static_cast<std::size_t>(nmax + 1));
  for (int i = 0; i <= nmax; ++i) {
    df[static_cast<std::size_t>(i)].resize(static_cast<std::size_t>(nmax + 1 - i));
    dg[static_cast<std::size_t>(i)].resize(static_cast<std::size_t>(nmax + 1 - i));
    for (int j = 0; i + j <= nmax; ++j) {
      if (j == 0) {
        df[static_cast<std::size_t>(i)][0] = i == 0 ? f : df[static_cast<std::size_t>(i - 1)][0].d_q();
        dg[static_cast<std::size_t>(i)][0] = i == 0 ? g : dg[static_cast<std::size_t>(i - 1)][0].d_p();
      } else {
        df[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
            df[static_cast<std::size_t>(i)][static_cast<std::size_t>(j - 1)].d_p();
        dg[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
            dg[static_cast<std::size_t>(i)][static_cast<std::size_t>(j - 1)].d_q();
      }
    }
  }
  ExactPoly out;
  for (int n = 0; n <= nmax; ++n) {
    const GaussRational pref = i_power(n) * GaussRational(Rational(1) / factorial(n));
    for (int k = 0; k <= n; ++k) {
      const ExactPoly& a = df[static_cast<std::size_t>(n - k)][static_cast<std::size_t>(k)];
      const ExactPoly& b = dg[static_cast<std::size_t>(n - k)][static_cast<std::size_t>(k)];
      if (a.is_zero() || b.is_zero()) continue;
      const Rational sgn = (k % 2 == 0) ? Rational(1) : Rational(-1);
      out = out + (a * b).scaled(pref * GaussRational(binomial(n, k) * sgn), n);
    }
  }
  return out;
}

ExactPoly poisson_bracket(const ExactPoly& f, const ExactPoly& g) {
  return (f.d_q() * g.d_p() - f.d_p() * g.d_q()).scaled(GaussRational(Rational(2)));
}

ExactPoly gaussian_taylor(int degree) {
  const ExactPoly r2 = ExactPoly::monomial(2, 0) + ExactPoly::monomial(0, 2);
  ExactPoly out;
  ExactPoly power = ExactPoly::constant(GaussRational(Rational(1)));
  for (int k = 0; 2 * k <= degree; ++k) {
    Rational c = Rational(1) / (factorial(k) * Rational(boost::multiprecision::cpp_int(1) << k));
    if (k % 2 == 1) c = -c;
    out = out + power.scaled(GaussRational(c));
    power = power * r2;
  }
  return out;
}

// ---- MPoly ----------------------------------------------------------------------

MPoly MPoly::constant(int nvars, cd c) {
  MPoly r(nvars);
  r.add(Exps(static_cast<std::size_t>(nvars), 0), c);
  return r;
}

MPoly MPoly::variable(int nvars, int i) {
  MPoly r(nvars);
  Exps e(static_cast<std::size_t>(nvars), 0);
  e[static_cast<std::size_t>(i)] = 1;
  r.add(e, 1.0);
  return r;
}

MPoly MPoly::from_exact(const ExactPoly& f, double hbar) {
  MPoly r(2);
  for (const auto& [k, c] : f.terms()) r.add({k[0], k[1]}, c.value() * std::pow(hbar, k[2]));
  return r;
}

void MPoly::add(const Exps& e, cd c) {
  if (static_cast<int>(e.size()) != nvars_) fail("exponent vector has the wrong size");
  if (c == 0.0) return;
  auto it = terms_.find(e);
  if (it == terms_.end()) {
    terms_.emplace(e, c);
  } else {
    it->second += c;
    if (it->second == 0.0) terms_.erase(it);
  }
}

int MPoly::degree() const {
  int d = -1;
  for (const auto& [e, c] : terms_) {
    int s = 0;
    for (int v : e) s += v;
    d = std::max(d, s);
  }
  return d;
}

cd MPoly::operator()(const std::vector<cd>& x) const {
  if (static_cast<int>(x.size()) != nvars_) fail("wrong number of arguments");
  cd s = 0.0;
  for (const auto& [e, c] : terms_) {
    cd t = c;
    for (std::size_t i = 0; i < e.size(); ++i) {
      for (int k = 0; k < e[i]; ++k) t *= x[i];
    }
    s += t;
  }
  return s;
}

MPoly operator+(const MPoly& a, const MPoly& b) {
  if (a.nvars_ != b.nvars_) fail("variable count mismatch");
  MPoly r = a;
  for (const auto& [e, c] : b.terms_) r.add(e, c);
  return r;
}

MPoly operator*(const MPoly& a, const MPoly& b) {
  if (a.nvars_ != b.nvars_) fail("variable count mismatch");
  MPoly r(a.nvars_);
  MPoly::Exps e(static_cast<std::size_t>(a.nvars_));
  for (const auto& [ea, ca] : a.terms_) {
    for (const auto& [eb, cb] : b.terms_) {
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      r.add(e, ca * cb);
    }
  }
  return r;
}

MPoly operator*(cd s, const MPoly& a) {
  MPoly r(a.nvars_);
  for (const auto& [e, c] : a.terms_) r.add(e, s * c);
  return r;
}

MPoly MPoly::pow(int k) const {
  MPoly r = constant(nvars_, 1.0);
  for (int i = 0; i < k; ++i) r = r * *this;
  return r;
}

MPoly MPoly::substitute(const std::vector<MPoly>& images) const {
  if (static_cast<int>(images.size()) != nvars_) fail("need one image per variable");
  const int out_vars = images.empty() ? 0 : images[0].nvars();
  // Cache powers of each image.
  std::vector<std::vector<MPoly>> powers(images.size());
  MPoly r(out_vars);
  for (const auto& [e, c] : terms_) {
    MPoly t = constant(out_vars, c);
    for (std::size_t i = 0; i < e.size(); ++i) {
      auto& pw = powers[i];
      while (static_cast<int>(pw.size()) <= e[i]) {
        pw.push_back(pw.empty() ? constant(out_vars, 1.0) : pw.back() * images[i]);
      }
      if (e[i] > 0) t = t * pw[static_cast<std::size_t>(e[i])];
    }
    r = r + t;
  }
  return r;
}

MPoly MPoly::conj() const {
  MPoly r(nvars_);
  for (const auto& [e, c] : terms_) r.add(e, std::conj(c));
  return r;
}

// ---- Gaussian observables ----------------------------------------------------------

GaussObservable GaussObservable::polynomial(const MPoly& poly) {
  if (poly.nvars() != 2) fail("observables are polynomials in two variables");
  GaussObservable g;
  g.poly = poly;
  return g;
}

GaussObservable GaussObservable::gaussian(const Eigen::Matrix2cd& A, const Eigen::Vector2cd& b, cd c,
                                          const MPoly& poly) {
  if (poly.nvars() != 2) fail("observables are polynomials in two variables");
  GaussObservable g;
  g.A = 0.5 * (A + A.transpose());
  g.b = b;
  g.c = c;
  g.poly = poly;
  return g;
}

cd GaussObservable::operator()(double z0, double z1) const {
  Eigen::Vector2cd z(z0, z1);
  const cd expo = -0.5 * (z.transpose() * A * z)(0) + (b.transpose() * z)(0) + c;
  return poly({z0, z1}) * std::exp(expo);
}

GaussObservable GaussObservable::conj() const {
  GaussObservable g;
  g.A = A.conjugate();
  g.b = b.conjugate();
  g.c = std::conj(c);
  g.poly = poly.conj();
  return g;
}

GaussObservable GaussObservable::swapped() const {
  GaussObservable g;
  g.A << A(1, 1), A(1, 0), A(0, 1), A(0, 0);
  g.b << b(1), b(0);
  g.c = c;
  MPoly p(2);
  for (const auto& [e, v] : poly.terms()) p.add({e[1], e[0]}, v);
  g.poly = p;
  return g;
}

namespace {

// E[y^alpha] for a centered complex Gaussian with covariance S (Isserlis).
class Moments {
 public:
  explicit Moments(const Eigen::Matrix4cd& S) : S_(S) {}

  cd operator()(std::array<int, 4> a) {
    int total = a[0] + a[1] + a[2] + a[3];
    if (total == 0) return 1.0;
    if (total % 2 == 1) return 0.0;
    auto it = memo_.find(a);
    if (it != memo_.end()) return it->second;
    int i = 0;
    while (a[static_cast<std::size_t>(i)] == 0) ++i;
    std::array<int, 4> rest = a;
    --rest[static_cast<std::size_t>(i)];
    cd s = 0.0;
    for (int j = 0; j < 4; ++j) {
      if (rest[static_cast<std::size_t>(j)] == 0) continue;
      std::array<int, 4> r2 = rest;
      const int mult = r2[static_cast<std::size_t>(j)]--;
      s += static_cast<double>(mult) * S_(i, j) * (*this)(r2);
    }
    memo_.emplace(a, s);
    return s;
  }

 private:
  Eigen::Matrix4cd S_;
  std::map<std::array<int, 4>, cd> memo_;
};

}  // namespace

GaussObservable star_closed_form(const GaussObservable& f, const GaussObservable& g, double hbar, int sigma) {
  if (hbar == 0.0) fail("hbar must be nonzero");
  if (sigma != 1 && sigma != -1) fail("orientation must be +1 or -1");
  const cd I(0.0, 1.0);
  // w = (a, b): a is g's offset, b is f's offset.
  Eigen::Matrix4cd K = Eigen::Matrix4cd::Zero();
  K.topLeftCorner<2, 2>() = g.A;
  K.bottomRightCorner<2, 2>() = f.A;
  const cd m = static_cast<double>(sigma) * I / hbar;
  K(0, 3) += -m;
  K(3, 0) += -m;
  K(1, 2) += m;
  K(2, 1) += m;

  Eigen::FullPivLU<Eigen::Matrix4cd> lu(K);
  if (!lu.isInvertible()) fail("non-integrable quadratic form");
  const Eigen::Matrix4cd Kinv = lu.inverse();
  Eigen::ComplexEigenSolver<Eigen::Matrix4cd> es(K, false);
  cd inv_sqrt_det = 1.0;
  for (int i = 0; i < 4; ++i) {
    const cd lam = es.eigenvalues()(i);
    if (lam.real() < -1e-12 * std::abs(lam)) fail("non-integrable quadratic form");
    inv_sqrt_det /= std::sqrt(lam);
  }

  Eigen::Matrix<cd, 4, 2> L;
  L.topRows<2>() = -g.A;
  L.bottomRows<2>() = -f.A;
  Eigen::Vector4cd J0;
  J0 << g.b, f.b;
  const Eigen::Matrix<cd, 4, 2> KL = Kinv * L;
  const Eigen::Vector4cd KJ = Kinv * J0;

  GaussObservable out;
  out.A = f.A + g.A - L.transpose() * KL;
  out.A = 0.5 * (out.A + out.A.transpose());
  out.b = f.b + g.b + L.transpose() * KJ;
  out.c = f.c + g.c + 0.5 * (J0.transpose() * KJ)(0);
  const cd scale = inv_sqrt_det / (hbar * hbar);

  // Variables of the expanded prefactor: m0, m1, y0..y3.
  constexpr int nv = 6;
  auto var = [](int i) { return MPoly::variable(nv, i); };
  std::vector<MPoly> w(4, MPoly(nv));
  for (int i = 0; i < 4; ++i) {
    w[static_cast<std::size_t>(i)] = MPoly::constant(nv, KJ(i)) + KL(i, 0) * var(0) + KL(i, 1) * var(1) + var(2 + i);
  }
  const MPoly pg = g.poly.substitute({var(0) + w[0], var(1) + w[1]});
  const MPoly pf = f.poly.substitute({var(0) + w[2], var(1) + w[3]});
  const MPoly q = pf * pg;
  Moments mom(Kinv);
  MPoly result(2);
  for (const auto& [e, c] : q.terms()) {
    const cd mo = mom({e[2], e[3], e[4], e[5]});
    if (mo == 0.0) continue;
    result.add({e[0], e[1]}, scale * c * mo);
  }
  out.poly = result;
  return out;
}

namespace {

// f exp(-eps |z - m|^2), centred at the evaluation point.
GaussObservable regularized(const GaussObservable& f, double eps, double m0, double m1) {
  if (!f.is_polynomial()) return f;
  GaussObservable r = f;
  r.A = Eigen::Matrix2cd::Identity() * (2.0 * eps);
  r.b = Eigen::Vector2cd(2.0 * eps * m0, 2.0 * eps * m1);
  r.c = -eps * (m0 * m0 + m1 * m1);
  return r;
}

// Neville extrapolation of values at x_i to x = 0.
cd neville_at_zero(std::vector<double> x, std::vector<cd> y) {
  const std::size_t n = x.size();
  for (std::size_t k = 1; k < n; ++k) {
    for (std::size_t i = 0; i + k < n; ++i) {
      y[i] = (x[i + k] * y[i] - x[i] * y[i + 1]) / (x[i + k] - x[i]);
    }
  }
  return y[0];
}

cd star_at(const GaussObservable& f, const GaussObservable& g, double z0, double z1, double hbar, int sigma) {
  if (!f.is_polynomial() && !g.is_polynomial()) return star_closed_form(f, g, hbar, sigma)(z0, z1);
  std::vector<double> eps;
  std::vector<cd> vals;
  for (int k = 0; k < 4; ++k) {
    const double e = 1e-3 / static_cast<double>(1 << k);
    eps.push_back(e);
    vals.push_back(star_closed_form(regularized(f, e, z0, z1), regularized(g, e, z0, z1), hbar, sigma)(z0, z1));
  }
  return neville_at_zero(eps, vals);
}

}  // namespace

cd star_integral(const GaussObservable& f, const GaussObservable& g, double p, double q, const StarParams& params) {
  if (!(params.hbar > 0.0)) fail("hbar must be positive");
  if (params.variant == StarParams::Variant::heisenberg) {
    return heisenberg_star(f, g, params.z, params.hbar, pt(p, q, params.z));
  }
  return star_at(f, g, p, q, params.hbar, 1);
}

cd heisenberg_star(const GaussObservable& f, const GaussObservable& g, double z, double hbar, const Point& m3) {
  if (z == 0.0) return f(m3[0], m3[1]) * g(m3[0], m3[1]);
  return star_at(f, g, m3[0], m3[1], z * hbar, -1);
}

}  // namespace gcalc

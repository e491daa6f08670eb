#include "gcalc/dw_tqft.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <queue>
#include <set>
#include <sstream>

#include "gcalc/cochain.hpp"
#include "gcalc/error.hpp"
#include "json.hpp"

namespace gcalc {
namespace {

[[noreturn]] void fail(const std::string& msg) { throw Error("dw_tqft", msg); }

std::size_t edge_index(const SimplicialComplex& k, int u, int v) {
  if (u > v) std::swap(u, v);
  const auto& edges = k.simplices(1);
  const Simplex e{u, v};
  auto it = std::lower_bound(edges.begin(), edges.end(), e);
  if (it == edges.end() || *it != e) fail("edge not in complex");
  return static_cast<std::size_t>(it - edges.begin());
}

struct FaceEdges {
  std::size_t e01, e12, e02;
};

std::vector<FaceEdges> face_edges(const SimplicialComplex& k) {
  std::vector<FaceEdges> out;
  for (const Simplex& f : k.top()) {
    out.push_back({edge_index(k, f[0], f[1]), edge_index(k, f[1], f[2]), edge_index(k, f[0], f[2])});
  }
  return out;
}

void require_closed_surface(const SimplicialComplex& k) {
  if (k.dimension() != 2) fail("partition functions need a 2-dimensional complex");
  if (!k.is_oriented()) fail("complex is not oriented");
  if (!boundary_complex(k).empty()) fail("complex has boundary; a closed surface is required");
}

}  // namespace

// ---- groups -----------------------------------------------------------------

FiniteGroup FiniteGroup::from_table(std::vector<std::vector<int>> table, std::string name) {
  const int n = static_cast<int>(table.size());
  if (n == 0) fail("empty group table");
  for (const auto& row : table) {
    if (static_cast<int>(row.size()) != n) fail("group table is not square");
    for (int v : row) {
      if (v < 0 || v >= n) fail("group table entry out of range");
    }
  }
  FiniteGroup g;
  g.order = n;
  g.table = std::move(table);
  g.name = std::move(name);
  g.identity = -1;
  for (int e = 0; e < n && g.identity < 0; ++e) {
    bool ok = true;
    for (int a = 0; a < n && ok; ++a) ok = g.mul(e, a) == a && g.mul(a, e) == a;
    if (ok) g.identity = e;
  }
  if (g.identity < 0) fail("group table has no identity");
  g.inverse.assign(static_cast<std::size_t>(n), -1);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      if (g.mul(a, b) == g.identity && g.mul(b, a) == g.identity) g.inverse[static_cast<std::size_t>(a)] = b;
    }
    if (g.inverse[static_cast<std::size_t>(a)] < 0) fail("element without inverse");
  }
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      for (int c = 0; c < n; ++c) {
        if (g.mul(g.mul(a, b), c) != g.mul(a, g.mul(b, c))) fail("group table is not associative");
      }
    }
  }
  return g;
}

FiniteGroup FiniteGroup::cyclic(int n) {
  if (n < 1) fail("cyclic group order must be >= 1");
  std::vector<std::vector<int>> t(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(n)));
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) t[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = (a + b) % n;
  }
  return from_table(std::move(t), "Z" + std::to_string(n));
}

FiniteGroup FiniteGroup::symmetric3() {
  const auto perms = all_permutations(3);
  const int n = static_cast<int>(perms.size());
  std::vector<std::vector<int>> t(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(n)));
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      const Permutation ab = compose(perms[static_cast<std::size_t>(a)], perms[static_cast<std::size_t>(b)]);
      t[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] =
          static_cast<int>(std::find(perms.begin(), perms.end(), ab) - perms.begin());
    }
  }
  return from_table(std::move(t), "S3");
}

FiniteGroup FiniteGroup::product(const FiniteGroup& g, const FiniteGroup& h) {
  const int n = g.order * h.order;
  std::vector<std::vector<int>> t(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(n)));
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      t[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] =
          g.mul(a / h.order, b / h.order) * h.order + h.mul(a % h.order, b % h.order);
    }
  }
  return from_table(std::move(t), g.name + "x" + h.name);
}

FiniteGroup parse_group(std::string_view spec) {
  constexpr std::string_view prefix = "builtin:";
  if (spec.substr(0, prefix.size()) != prefix) {
    std::ifstream in{std::string(spec)};
    if (!in) fail("cannot open group file '" + std::string(spec) + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return group_from_json_text(ss.str());
  }
  const std::string name(spec.substr(prefix.size()));
  if (name == "S3") return FiniteGroup::symmetric3();
  auto cyclic_of = [&](const std::string& s) {
    if (s.size() < 2 || s[0] != 'Z') fail("unknown group '" + name + "'");
    std::size_t used = 0;
    int n = 0;
    try {
      n = std::stoi(s.substr(1), &used);
    } catch (const std::exception&) {
      fail("unknown group '" + name + "'");
    }
    if (used != s.size() - 1) fail("unknown group '" + name + "'");
    return FiniteGroup::cyclic(n);
  };
  if (auto x = name.find('x'); x != std::string::npos) {
    return FiniteGroup::product(cyclic_of(name.substr(0, x)), cyclic_of(name.substr(x + 1)));
  }
  return cyclic_of(name);
}

FiniteGroup group_from_json_text(std::string_view text) {
  try {
    const auto j = nlohmann::json::parse(text);
    auto t = j.at("table").get<std::vector<std::vector<int>>>();
    if (j.contains("order") && j.at("order").get<int>() != static_cast<int>(t.size())) {
      fail("order does not match table size");
    }
    return FiniteGroup::from_table(std::move(t), j.value("name", std::string("G")));
  } catch (const nlohmann::json::exception& e) {
    fail(std::string("bad group JSON: ") + e.what());
  }
}

std::string group_to_json_text(const FiniteGroup& g) {
  nlohmann::json j;
  j["order"] = g.order;
  j["table"] = g.table;
  j["name"] = g.name;
  return j.dump();
}

// ---- cocycles ---------------------------------------------------------------

CocycleTable CocycleTable::trivial(const FiniteGroup& g) {
  CocycleTable w;
  w.omega.assign(static_cast<std::size_t>(g.order),
                 std::vector<std::complex<double>>(static_cast<std::size_t>(g.order), 1.0));
  return w;
}

namespace {
// exp(2 pi i k / n), exact at quarter turns.
std::complex<double> root_of_unity(int k, int n) {
  if ((4 * k) % n == 0) {
    static const std::complex<double> quarter[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    return quarter[((4 * k) / n) % 4];
  }
  return std::polar(1.0, 2.0 * std::numbers::pi * k / n);
}
}  // namespace

CocycleTable CocycleTable::bimultiplicative(int n) {
  const FiniteGroup zn = FiniteGroup::cyclic(n);
  const FiniteGroup g = FiniteGroup::product(zn, zn);
  CocycleTable w = trivial(g);
  for (int x = 0; x < g.order; ++x) {
    for (int y = 0; y < g.order; ++y) {
      const int a = x / n;
      const int d = y % n;
      w.omega[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)] =
          root_of_unity((a * d) % n, n);
    }
  }
  w.validate(g);
  return w;
}

CocycleTable CocycleTable::twisted(const FiniteGroup& g, const std::vector<std::complex<double>>& beta) const {
  if (static_cast<int>(beta.size()) != g.order) fail("beta has the wrong size");
  CocycleTable w = *this;
  for (int a = 0; a < g.order; ++a) {
    for (int b = 0; b < g.order; ++b) {
      w.omega[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] *=
          beta[static_cast<std::size_t>(a)] * beta[static_cast<std::size_t>(b)] /
          beta[static_cast<std::size_t>(g.mul(a, b))];
    }
  }
  return w;
}

void CocycleTable::validate(const FiniteGroup& g, double tol) {
  const auto n = static_cast<std::size_t>(g.order);
  if (omega.size() != n) fail("cocycle table has the wrong size");
  for (const auto& row : omega) {
    if (row.size() != n) fail("cocycle table is not square");
    for (auto v : row) {
      if (std::fabs(std::abs(v) - 1.0) > tol) fail("cocycle values must have modulus 1");
    }
  }
  for (int a = 0; a < g.order; ++a) {
    for (int b = 0; b < g.order; ++b) {
      for (int c = 0; c < g.order; ++c) {
        const auto lhs = (*this)(a, b) * (*this)(g.mul(a, b), c);
        const auto rhs = (*this)(a, g.mul(b, c)) * (*this)(b, c);
        if (std::abs(lhs - rhs) > tol) fail("table violates the 2-cocycle identity");
      }
    }
  }
  normalized = true;
  for (int a = 0; a < g.order; ++a) {
    if (std::abs((*this)(g.identity, a) - 1.0) > tol || std::abs((*this)(a, g.identity) - 1.0) > tol) {
      normalized = false;
    }
  }
}

CocycleTable cocycle_from_json_text(std::string_view text, const FiniteGroup& g) {
  if (text == "trivial") return CocycleTable::trivial(g);
  try {
    const auto j = nlohmann::json::parse(text);
    const auto& rows = j.at("omega");
    CocycleTable w;
    for (const auto& row : rows) {
      std::vector<std::complex<double>> r;
      for (const auto& v : row) {
        const auto p = v.get<std::vector<double>>();
        if (p.size() != 2) fail("cocycle entries must be [re, im]");
        r.emplace_back(p[0], p[1]);
      }
      w.omega.push_back(std::move(r));
    }
    w.validate(g);
    return w;
  } catch (const nlohmann::json::exception& e) {
    fail(std::string("bad cocycle JSON: ") + e.what());
  }
}

// ---- colorings --------------------------------------------------------------

bool is_flat(const SimplicialComplex& k, const FiniteGroup& g, const Coloring& c) {
  if (c.size() != k.count(1)) return false;
  for (const FaceEdges& f : face_edges(k)) {
    if (g.mul(c[f.e01], c[f.e12]) != c[f.e02]) return false;
  }
  return true;
}

std::complex<double> coloring_weight(const SimplicialComplex& k, const FiniteGroup& /*g*/,
                                     const CocycleTable& w, const Coloring& c) {
  const auto faces = face_edges(k);
  std::complex<double> prod = 1.0;
  for (std::size_t i = 0; i < faces.size(); ++i) {
    const auto v = w(c[faces[i].e01], c[faces[i].e12]);
    prod *= k.orientation()[i] > 0 ? v : std::conj(v);
  }
  return prod;
}

Coloring gauge_transform(const SimplicialComplex& k, const FiniteGroup& g, const Coloring& c,
                         const std::vector<int>& h) {
  Coloring out(c.size());
  const auto& edges = k.simplices(1);
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const int u = edges[e][0];
    const int v = edges[e][1];
    out[e] = g.mul(g.mul(g.inv(h.at(static_cast<std::size_t>(u))), c[e]), h.at(static_cast<std::size_t>(v)));
  }
  return out;
}

namespace {

class FlatSearch {
 public:
  FlatSearch(const SimplicialComplex& k, const FiniteGroup& g, const std::function<void(const Coloring&)>& visit,
             const EnumerateOptions& opt)
      : k_(k), g_(g), visit_(visit), opt_(opt), faces_(face_edges(k)) {
    const std::size_t ne = k.count(1);
    color_.assign(ne, -1);
    incident_.assign(ne, {});
    for (std::size_t f = 0; f < faces_.size(); ++f) {
      incident_[faces_[f].e01].push_back(f);
      incident_[faces_[f].e12].push_back(f);
      incident_[faces_[f].e02].push_back(f);
    }
  }

  FlatCount run() {
    if (opt_.gauge_fix && !fix_tree()) return count_;
    search();
    count_.total = static_cast<double>(count_.gauge_fixed);
    if (opt_.gauge_fix) {
      count_.total *= std::pow(static_cast<double>(g_.order), static_cast<double>(k_.count(0)) - 1.0);
    }
    return count_;
  }

 private:
  // Colors a BFS spanning tree of the 1-skeleton with the identity.
  bool fix_tree() {
    const auto& verts = k_.simplices(0);
    if (verts.empty()) return true;
    std::map<int, std::vector<std::pair<int, std::size_t>>> adj;
    const auto& edges = k_.simplices(1);
    for (std::size_t e = 0; e < edges.size(); ++e) {
      adj[edges[e][0]].emplace_back(edges[e][1], e);
      adj[edges[e][1]].emplace_back(edges[e][0], e);
    }
    std::set<int> seen{verts.front()[0]};
    std::queue<int> q;
    q.push(verts.front()[0]);
    while (!q.empty()) {
      const int u = q.front();
      q.pop();
      for (auto [v, e] : adj[u]) {
        if (seen.insert(v).second) {
          if (!assign(e, g_.identity)) return false;
          q.push(v);
        }
      }
    }
    if (seen.size() != verts.size()) fail("complex is not connected");
    return propagate();
  }

  bool assign(std::size_t e, int value) {
    if (color_[e] >= 0) return color_[e] == value;
    color_[e] = value;
    trail_.push_back(e);
    pending_.push_back(e);
    return true;
  }

  bool propagate() {
    while (!pending_.empty()) {
      const std::size_t e = pending_.back();
      pending_.pop_back();
      for (std::size_t fi : incident_[e]) {
        const FaceEdges& f = faces_[fi];
        const int a = color_[f.e01], b = color_[f.e12], c = color_[f.e02];
        const int known = (a >= 0) + (b >= 0) + (c >= 0);
        if (known == 3) {
          if (g_.mul(a, b) != c) return fail_pending();
        } else if (known == 2) {
          bool ok = true;
          if (c < 0) ok = assign(f.e02, g_.mul(a, b));
          else if (a < 0) ok = assign(f.e01, g_.mul(c, g_.inv(b)));
          else ok = assign(f.e12, g_.mul(g_.inv(a), c));
          if (!ok) return fail_pending();
        }
      }
    }
    return true;
  }

  bool fail_pending() {
    pending_.clear();
    return false;
  }

  void undo(std::size_t mark) {
    while (trail_.size() > mark) {
      color_[trail_.back()] = -1;
      trail_.pop_back();
    }
  }

  void search() {
    if (++nodes_ > opt_.max_nodes) fail("enumeration exceeded the configured node bound");
    const auto it = std::find(color_.begin(), color_.end(), -1);
    if (it == color_.end()) {
      ++count_.gauge_fixed;
      if (visit_) {
        visit_(color_);
        ++count_.visited;
      }
      return;
    }
    const auto e = static_cast<std::size_t>(it - color_.begin());
    for (int v = 0; v < g_.order; ++v) {
      const std::size_t mark = trail_.size();
      if (assign(e, v) && propagate()) search();
      undo(mark);
    }
  }

  const SimplicialComplex& k_;
  const FiniteGroup& g_;
  const std::function<void(const Coloring&)>& visit_;
  EnumerateOptions opt_;
  std::vector<FaceEdges> faces_;
  std::vector<std::vector<std::size_t>> incident_;
  Coloring color_;
  std::vector<std::size_t> trail_;
  std::vector<std::size_t> pending_;
  std::uint64_t nodes_ = 0;
  FlatCount count_;
};

}  // namespace

FlatCount enumerate_flat(const SimplicialComplex& k, const FiniteGroup& g,
                         const std::function<void(const Coloring&)>& visit, const EnumerateOptions& opt) {
  require_closed_surface(k);
  return FlatSearch(k, g, visit, opt).run();
}

std::complex<double> partition_function(const SimplicialComplex& k, const FiniteGroup& g,
                                        const CocycleTable& w, const EnumerateOptions& opt) {
  std::vector<std::complex<double>> weights;
  const FlatCount fc =
      enumerate_flat(k, g, [&](const Coloring& c) { weights.push_back(coloring_weight(k, g, w, c)); }, opt);
  (void)fc;
  std::complex<double> sum = 0.0;
  for (const auto& v : weights) sum += v;
  const double n = static_cast<double>(g.order);
  if (opt.gauge_fix) return sum / n;
  return sum / std::pow(n, static_cast<double>(k.count(0)));
}

std::uint64_t mednykh_oracle(const FiniteGroup& g, int genus) {
  if (genus < 0) fail("genus must be >= 0");
  if (genus == 0) return 1;
  const double size = std::pow(static_cast<double>(g.order), 2.0 * genus);
  if (size > 1e9) fail("oracle enumeration too large");
  const std::size_t slots = static_cast<std::size_t>(2 * genus);
  std::vector<int> t(slots, 0);
  std::uint64_t count = 0;
  while (true) {
    int prod = g.identity;
    for (int i = 0; i < genus; ++i) {
      const int a = t[static_cast<std::size_t>(2 * i)];
      const int b = t[static_cast<std::size_t>(2 * i + 1)];
      prod = g.mul(prod, g.mul(g.mul(a, b), g.mul(g.inv(a), g.inv(b))));
    }
    if (prod == g.identity) ++count;
    std::size_t d = 0;
    while (d < slots && ++t[d] == g.order) t[d++] = 0;
    if (d == slots) break;
  }
  return count;
}

std::complex<double> torus_oracle(const FiniteGroup& g, const CocycleTable& w) {
  std::complex<double> s = 0.0;
  for (int a = 0; a < g.order; ++a) {
    for (int b = 0; b < g.order; ++b) {
      if (g.mul(a, b) == g.mul(b, a)) s += w(a, b) / w(b, a);
    }
  }
  return s / static_cast<double>(g.order);
}

}  // namespace gcalc

#include "gcalc/simplicial.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <numeric>
#include <set>
#include <sstream>

#include "gcalc/error.hpp"
#include "json.hpp"

namespace gcalc {
namespace {

[[noreturn]] void fail(const std::string& msg) { throw Error("simplicial", msg); }

// Parity (+1/-1) of the permutation that sorts `v`; 0 if `v` has repeats.
int sort_parity(std::vector<int>& v) {
  int inversions = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    for (std::size_t j = i + 1; j < v.size(); ++j) {
      if (v[i] == v[j]) return 0;
      if (v[i] > v[j]) ++inversions;
    }
  }
  std::sort(v.begin(), v.end());
  return inversions % 2 == 0 ? 1 : -1;
}

double wrap_unit(double d) { return d - std::floor(d + 0.5); }  // into [-0.5, 0.5)

double wrap_01(double u) {
  double w = u - std::floor(u);
  return w >= 1.0 ? 0.0 : w;
}

}  // namespace

std::string_view manifold_name(Manifold m) {
  switch (m) {
    case Manifold::empty: return "empty";
    case Manifold::interval: return "interval";
    case Manifold::circle: return "circle";
    case Manifold::sphere: return "sphere";
    case Manifold::icosphere: return "icosphere";
    case Manifold::hemisphere: return "hemisphere";
    case Manifold::torus: return "torus";
    case Manifold::disk3: return "disk3";
    case Manifold::square: return "square";
    case Manifold::custom: return "custom";
  }
  return "custom";
}

namespace {
Manifold parse_manifold(std::string_view s) {
  for (Manifold m : {Manifold::empty, Manifold::interval, Manifold::circle, Manifold::sphere,
                     Manifold::icosphere, Manifold::hemisphere, Manifold::torus,
                     Manifold::disk3, Manifold::square, Manifold::custom}) {
    if (manifold_name(m) == s) return m;
  }
  fail("unknown manifold tag '" + std::string(s) + "'");
}
}  // namespace

std::string_view subdivision_name(SubdivisionKind k) {
  switch (k) {
    case SubdivisionKind::barycentric: return "barycentric";
    case SubdivisionKind::edge_midpoint: return "edge-midpoint";
    case SubdivisionKind::uniform_1d: return "uniform";
  }
  return "barycentric";
}

SubdivisionKind parse_subdivision(std::string_view name) {
  if (name == "barycentric") return SubdivisionKind::barycentric;
  if (name == "edge-midpoint" || name == "midpoint") return SubdivisionKind::edge_midpoint;
  if (name == "uniform" || name == "1d-uniform-split") return SubdivisionKind::uniform_1d;
  fail("unknown subdivision scheme '" + std::string(name) + "'");
}

// ---------------------------------------------------------------------------
// SimplicialComplex

const std::vector<Simplex>& SimplicialComplex::simplices(int k) const {
  static const std::vector<Simplex> none;
  if (k < 0 || k > dim_) return none;
  return faces_[static_cast<std::size_t>(k)];
}

std::vector<int> SimplicialComplex::oriented_cell(std::size_t i) const {
  std::vector<int> c = top().at(i);
  if (orientation_[i] < 0 && c.size() >= 2) std::swap(c[0], c[1]);
  return c;
}

std::vector<Point> SimplicialComplex::chart_points(std::span<const int> ids) const {
  std::vector<Point> pts;
  pts.reserve(ids.size());
  for (int id : ids) pts.push_back(vertices_.at(static_cast<std::size_t>(id)).xyz);
  if (periodic_ && !pts.empty()) {
    const Point base = pts[0];
    for (std::size_t i = 1; i < pts.size(); ++i) {
      pts[i][0] = base[0] + wrap_unit(pts[i][0] - base[0]);
      pts[i][1] = base[1] + wrap_unit(pts[i][1] - base[1]);
    }
  }
  return pts;
}

long SimplicialComplex::euler_characteristic() const {
  long chi = 0;
  for (int k = 0; k <= dim_; ++k) {
    chi += (k % 2 == 0 ? 1 : -1) * static_cast<long>(count(k));
  }
  return chi;
}

double SimplicialComplex::mesh_size() const {
  double h = 0.0;
  for (const Simplex& e : simplices(1)) {
    auto p = chart_points(e);
    h = std::max(h, distance(p[0], p[1]));
  }
  return h;
}

void SimplicialComplex::close() {
  // faces_[dim_] already holds the (sorted) top cells in caller order.
  std::vector<Simplex> cells = std::move(faces_.back());
  faces_.assign(static_cast<std::size_t>(dim_ + 1), {});
  std::vector<std::set<Simplex>> lower(static_cast<std::size_t>(dim_ + 1));
  for (const Simplex& cell : cells) {
    const unsigned n = static_cast<unsigned>(cell.size());
    for (unsigned mask = 1; mask < (1u << n) - 1; ++mask) {
      Simplex f;
      for (unsigned b = 0; b < n; ++b) {
        if (mask & (1u << b)) f.push_back(cell[b]);
      }
      lower[f.size() - 1].insert(std::move(f));
    }
  }
  for (int k = 0; k < dim_; ++k) {
    faces_[static_cast<std::size_t>(k)].assign(lower[static_cast<std::size_t>(k)].begin(),
                                              lower[static_cast<std::size_t>(k)].end());
  }
  faces_[static_cast<std::size_t>(dim_)] = std::move(cells);
}

SimplicialComplex SimplicialComplex::from_oriented_cells(int dimension,
                                                         std::vector<Vertex> vertices,
                                                         const std::vector<std::vector<int>>& cells,
                                                         Manifold tag, std::vector<int> signs,
                                                         bool oriented) {
  SimplicialComplex k;
  if (cells.empty()) return k;
  if (dimension < 0) fail("negative dimension");
  if (!signs.empty() && signs.size() != cells.size()) fail("signs/cells size mismatch");
  k.dim_ = dimension;
  k.tag_ = tag;
  k.oriented_ = oriented;
  k.periodic_ = tag == Manifold::torus;
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    if (vertices[i].id != static_cast<int>(i)) fail("vertex ids must equal their index");
  }
  k.vertices_ = std::move(vertices);
  k.faces_.assign(static_cast<std::size_t>(dimension + 1), {});
  auto& top = k.faces_.back();
  top.reserve(cells.size());
  k.orientation_.reserve(cells.size());
  for (std::size_t i = 0; i < cells.size(); ++i) {
    std::vector<int> c = cells[i];
    if (c.size() != static_cast<std::size_t>(dimension + 1)) fail("cell has wrong arity");
    for (int id : c) {
      if (id < 0 || id >= static_cast<int>(k.vertices_.size())) fail("cell references unknown vertex");
    }
    const int parity = sort_parity(c);
    if (parity == 0) fail("cell has a repeated vertex");
    const int sign = signs.empty() ? 1 : signs[i];
    if (sign != 1 && sign != -1) fail("orientation signs must be +1 or -1");
    top.push_back(std::move(c));
    k.orientation_.push_back(parity * sign);
  }
  k.close();
  k.validate();
  return k;
}

void SimplicialComplex::validate() const {
  if (dim_ < 0) return;
  if (orientation_.size() != top().size()) fail("orientation table size mismatch");
  {
    std::set<Simplex> seen(top().begin(), top().end());
    if (seen.size() != top().size()) fail("duplicate top cell");
  }
  // Closure: every face of every simplex is present.
  for (int k = 1; k <= dim_; ++k) {
    const auto& below = simplices(k - 1);
    for (const Simplex& s : simplices(k)) {
      for (std::size_t i = 0; i < s.size(); ++i) {
        Simplex f = s;
        f.erase(f.begin() + static_cast<std::ptrdiff_t>(i));
        if (!std::binary_search(below.begin(), below.end(), f)) fail("complex is not closed");
      }
    }
  }
  if (dim_ == 0) return;
  // Each (n-1)-face lies in one or two top cells, with opposite induced
  // orientations when shared.
  std::map<Simplex, std::vector<int>> induced;
  for (std::size_t c = 0; c < top().size(); ++c) {
    const std::vector<int> oc = oriented_cell(c);
    for (std::size_t i = 0; i < oc.size(); ++i) {
      std::vector<int> f = oc;
      f.erase(f.begin() + static_cast<std::ptrdiff_t>(i));
      const int parity = sort_parity(f);
      induced[f].push_back((i % 2 == 0 ? 1 : -1) * parity);
    }
  }
  for (const auto& [face, signs] : induced) {
    if (signs.size() > 2) fail("a codimension-1 face lies in more than two cells");
    if (oriented_ && signs.size() == 2 && signs[0] + signs[1] != 0) {
      fail("incoherent orientation across a shared face");
    }
  }
}

SimplicialComplex SimplicialComplex::reversed() const {
  SimplicialComplex r = *this;
  for (int& o : r.orientation_) o = -o;
  return r;
}

// ---------------------------------------------------------------------------
// Built-ins

namespace {

std::vector<Vertex> make_vertices(const std::vector<Point>& pts) {
  std::vector<Vertex> v;
  v.reserve(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) v.push_back({static_cast<int>(i), pts[i], 0});
  return v;
}

// Faces of a convex polyhedron inscribed in the unit sphere whose edges all
// have the given length, oriented by the outward normal.
std::vector<std::vector<int>> polyhedron_faces(const std::vector<Point>& pts, double edge) {
  const int n = static_cast<int>(pts.size());
  auto adjacent = [&](int i, int j) {
    return std::fabs(distance(pts[static_cast<std::size_t>(i)], pts[static_cast<std::size_t>(j)]) - edge) < 1e-9;
  };
  std::vector<std::vector<int>> faces;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (!adjacent(i, j)) continue;
      for (int k = j + 1; k < n; ++k) {
        if (!adjacent(i, k) || !adjacent(j, k)) continue;
        const Point& a = pts[static_cast<std::size_t>(i)];
        const Point& b = pts[static_cast<std::size_t>(j)];
        const Point& c = pts[static_cast<std::size_t>(k)];
        if (dot(cross(b - a, c - a), a) > 0) {
          faces.push_back({i, j, k});
        } else {
          faces.push_back({i, k, j});
        }
      }
    }
  }
  return faces;
}

std::vector<Point> octahedron_points() {
  return {pt(1, 0, 0), pt(-1, 0, 0), pt(0, 1, 0), pt(0, -1, 0), pt(0, 0, 1), pt(0, 0, -1)};
}

std::vector<Point> icosahedron_points() {
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Point> p;
  for (double s1 : {-1.0, 1.0}) {
    for (double s2 : {-1.0, 1.0}) {
      p.push_back(pt(0, s1, s2 * phi));
      p.push_back(pt(s1, s2 * phi, 0));
      p.push_back(pt(s2 * phi, 0, s1));
    }
  }
  for (auto& q : p) q = normalized(q);
  return p;
}

// Grid of r x r squares on [0,1]^2, two triangles per square. Periodic grids
// identify the last row/column with the first.
SimplicialComplex grid(int r, bool periodic, Manifold tag) {
  const int side = periodic ? r : r + 1;
  std::vector<Point> pts;
  for (int i = 0; i < side; ++i) {
    for (int j = 0; j < side; ++j) {
      pts.push_back(pt(static_cast<double>(i) / r, static_cast<double>(j) / r));
    }
  }
  auto id = [&](int i, int j) { return (i % side) * side + (j % side); };
  std::vector<std::vector<int>> cells;
  for (int i = 0; i < r; ++i) {
    for (int j = 0; j < r; ++j) {
      cells.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      cells.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  }
  return SimplicialComplex::from_oriented_cells(2, make_vertices(pts), cells, tag);
}

}  // namespace

SimplicialComplex build_builtin(Manifold tag, int resolution, double a, double b) {
  auto need = [&](int minimum) {
    if (resolution < minimum) {
      fail("resolution below minimum for " + std::string(manifold_name(tag)) + " (got " +
           std::to_string(resolution) + ", need >= " + std::to_string(minimum) + ")");
    }
  };
  SimplicialComplex k;
  switch (tag) {
    case Manifold::interval: {
      need(1);
      if (!(b > a)) fail("interval endpoints must satisfy a < b");
      std::vector<Point> pts;
      for (int i = 0; i <= resolution; ++i) {
        pts.push_back(pt(i == resolution ? b : a + (b - a) * i / resolution));
      }
      std::vector<std::vector<int>> cells;
      for (int i = 0; i < resolution; ++i) cells.push_back({i, i + 1});
      k = SimplicialComplex::from_oriented_cells(1, make_vertices(pts), cells, tag);
      k.marked_ = {0, resolution};
      break;
    }
    case Manifold::circle: {
      need(3);
      std::vector<Point> pts;
      for (int i = 0; i < resolution; ++i) {
        const double th = 2.0 * std::numbers::pi * i / resolution;
        pts.push_back(pt(std::cos(th), std::sin(th)));
      }
      std::vector<std::vector<int>> cells;
      for (int i = 0; i < resolution; ++i) cells.push_back({i, (i + 1) % resolution});
      k = SimplicialComplex::from_oriented_cells(1, make_vertices(pts), cells, tag);
      break;
    }
    case Manifold::sphere:
    case Manifold::icosphere:
    case Manifold::hemisphere: {
      need(0);
      std::vector<Point> pts;
      std::vector<std::vector<int>> cells;
      if (tag == Manifold::icosphere) {
        pts = icosahedron_points();
        // Edge length of the icosahedron inscribed in the unit sphere.
        const double edge = 1.0 / std::sin(2.0 * std::numbers::pi / 5.0);
        cells = polyhedron_faces(pts, edge);
      } else {
        pts = octahedron_points();
        cells = polyhedron_faces(pts, std::sqrt(2.0));
        if (tag == Manifold::hemisphere) {
          // Keep the four faces touching +z; drop -z from the vertex table.
          std::erase_if(cells, [](const std::vector<int>& c) {
            return std::find(c.begin(), c.end(), 5) != c.end();
          });
          pts.pop_back();
        }
      }
      k = SimplicialComplex::from_oriented_cells(2, make_vertices(pts), cells, tag);
      if (resolution > 0) {
        k = subdivide(k, {SubdivisionKind::edge_midpoint, resolution});
        k.depth_ = 0;
        k.parent_.reset();
        k.parent_cell_.clear();
      }
      break;
    }
    case Manifold::torus:
      need(1);
      k = grid(3 * resolution, true, tag);
      break;
    case Manifold::square:
      need(1);
      k = grid(resolution, false, tag);
      break;
    case Manifold::disk3: {
      need(1);
      const int m = 3 * resolution;
      std::vector<Point> pts{pt(0, 0)};
      for (int j = 0; j < m; ++j) {
        const double th = 2.0 * std::numbers::pi * j / m;
        pts.push_back(pt(std::cos(th), std::sin(th)));
      }
      std::vector<std::vector<int>> cells;
      for (int j = 0; j < m; ++j) cells.push_back({0, 1 + j, 1 + (j + 1) % m});
      k = SimplicialComplex::from_oriented_cells(2, make_vertices(pts), cells, tag);
      k.marked_ = {1, 1 + resolution, 1 + 2 * resolution};
      break;
    }
    case Manifold::empty:
    case Manifold::custom:
      fail("no built-in triangulation for '" + std::string(manifold_name(tag)) + "'");
  }
  return k;
}

SimplicialComplex parse_mesh_spec(std::string_view spec) {
  constexpr std::string_view prefix = "builtin:";
  if (spec.substr(0, prefix.size()) != prefix) {
    std::ifstream in{std::string(spec)};
    if (!in) fail("cannot open mesh file '" + std::string(spec) + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return complex_from_json_text(ss.str());
  }
  std::string rest(spec.substr(prefix.size()));
  std::string name = rest;
  std::string res;
  // The interval's argument list may contain ':'-free text only.
  if (auto colon = rest.rfind(':'); colon != std::string::npos && rest.find(')') < colon) {
    name = rest.substr(0, colon);
    res = rest.substr(colon + 1);
  } else if (auto c2 = rest.find(':'); c2 != std::string::npos && rest.find('(') == std::string::npos) {
    name = rest.substr(0, c2);
    res = rest.substr(c2 + 1);
  }
  double a = 0.0;
  double b = 1.0;
  if (auto paren = name.find('('); paren != std::string::npos) {
    const auto close = name.find(')', paren);
    if (close == std::string::npos) fail("bad mesh spec '" + std::string(spec) + "'");
    const std::string args = name.substr(paren + 1, close - paren - 1);
    const auto comma = args.find(',');
    if (comma == std::string::npos) fail("interval needs (a,b)");
    a = std::stod(args.substr(0, comma));
    b = std::stod(args.substr(comma + 1));
    name = name.substr(0, paren);
  }
  Manifold tag = parse_manifold(name);
  int resolution = -1;
  if (res.empty()) {
    resolution = (tag == Manifold::interval) ? 1
                 : (tag == Manifold::circle) ? 3
                 : (tag == Manifold::sphere || tag == Manifold::icosphere ||
                    tag == Manifold::hemisphere)
                     ? 0
                     : 1;
  } else if (res == "octahedron") {
    if (tag != Manifold::sphere) fail("'octahedron' resolution is only valid for sphere");
    resolution = 0;
  } else if (res == "icosahedron") {
    if (tag != Manifold::sphere && tag != Manifold::icosphere) fail("'icosahedron' resolution is only valid for sphere");
    tag = Manifold::icosphere;
    resolution = 0;
  } else {
    try {
      resolution = std::stoi(res);
    } catch (const std::exception&) {
      fail("bad resolution '" + res + "'");
    }
  }
  return build_builtin(tag, resolution, a, b);
}

// ---------------------------------------------------------------------------
// Subdivision

namespace {

class NewVertices {
 public:
  explicit NewVertices(const SimplicialComplex& parent) : parent_(parent) {
    vertices_ = parent.vertices();
  }

  // Vertex at the barycenter of the (sorted) face, created once per face.
  int at(const Simplex& face) {
    if (face.size() == 1) return face[0];
    auto it = ids_.find(face);
    if (it != ids_.end()) return it->second;
    auto pts = parent_.chart_points(face);
    Point c{};
    for (const auto& p : pts) c = c + p;
    c = (1.0 / static_cast<double>(pts.size())) * c;
    switch (parent_.manifold()) {
      case Manifold::sphere:
      case Manifold::icosphere:
      case Manifold::hemisphere:
      case Manifold::circle:
        c = normalized(c);
        break;
      case Manifold::torus:
        c[0] = wrap_01(c[0]);
        c[1] = wrap_01(c[1]);
        break;
      default:
        break;
    }
    const int id = static_cast<int>(vertices_.size());
    vertices_.push_back({id, c, 0});
    ids_.emplace(face, id);
    return id;
  }

  std::vector<Vertex> take() { return std::move(vertices_); }

 private:
  const SimplicialComplex& parent_;
  std::vector<Vertex> vertices_;
  std::map<Simplex, int> ids_;
};

Simplex sorted_face(std::initializer_list<int> ids) {
  Simplex s(ids);
  std::sort(s.begin(), s.end());
  return s;
}

int permutation_sign(const std::vector<int>& perm) {
  int inv = 0;
  for (std::size_t i = 0; i < perm.size(); ++i) {
    for (std::size_t j = i + 1; j < perm.size(); ++j) {
      if (perm[i] > perm[j]) ++inv;
    }
  }
  return inv % 2 == 0 ? 1 : -1;
}

}  // namespace

SimplicialComplex subdivide_once(const SimplicialComplex& k, SubdivisionKind kind) {
  if (k.empty()) return k;
  const int n = k.dimension();
  NewVertices nv(k);
  std::vector<std::vector<int>> cells;
  std::vector<int> signs;
  std::vector<int> parent_cell;

  auto emit = [&](std::vector<int> cell, int sign, std::size_t parent) {
    cells.push_back(std::move(cell));
    signs.push_back(sign);
    parent_cell.push_back(static_cast<int>(parent));
  };

  for (std::size_t ci = 0; ci < k.num_cells(); ++ci) {
    const std::vector<int> oc = k.oriented_cell(ci);
    // 0-dimensional cells carry their sign separately from the vertex order.
    const int cell_sign = n == 0 ? k.orientation()[ci] : 1;
    if (n == 0) {
      emit(oc, cell_sign, ci);
      continue;
    }
    switch (kind) {
      case SubdivisionKind::uniform_1d:
        if (n != 1) fail("1D uniform split requires a 1-dimensional complex");
        [[fallthrough]];
      case SubdivisionKind::edge_midpoint: {
        if (n == 1) {
          const int m = nv.at(sorted_face({oc[0], oc[1]}));
          emit({oc[0], m}, 1, ci);
          emit({m, oc[1]}, 1, ci);
        } else if (n == 2) {
          const int a = oc[0], b = oc[1], c = oc[2];
          const int ab = nv.at(sorted_face({a, b}));
          const int bc = nv.at(sorted_face({b, c}));
          const int ca = nv.at(sorted_face({c, a}));
          emit({a, ab, ca}, 1, ci);
          emit({ab, b, bc}, 1, ci);
          emit({ca, bc, c}, 1, ci);
          emit({ab, bc, ca}, 1, ci);
        } else {
          fail("edge-midpoint subdivision supports dimensions 1 and 2");
        }
        break;
      }
      case SubdivisionKind::barycentric: {
        // One child per ordering pi of the cell's vertices: the flag of faces
        // {v_pi0} < {v_pi0, v_pi1} < ... ; its orientation is sign(pi).
        std::vector<int> perm(static_cast<std::size_t>(n + 1));
        std::iota(perm.begin(), perm.end(), 0);
        do {
          std::vector<int> child;
          Simplex face;
          for (int idx : perm) {
            face.push_back(oc[static_cast<std::size_t>(idx)]);
            Simplex sf = face;
            std::sort(sf.begin(), sf.end());
            child.push_back(nv.at(sf));
          }
          emit(std::move(child), permutation_sign(perm), ci);
        } while (std::next_permutation(perm.begin(), perm.end()));
        break;
      }
    }
  }
  SimplicialComplex out = SimplicialComplex::from_oriented_cells(n, nv.take(), cells, k.manifold(),
                                                                 signs, k.is_oriented());
  out.marked_ = k.marked_;
  out.depth_ = k.depth_ + 1;
  out.parent_ = std::make_shared<const SimplicialComplex>(k);
  out.parent_cell_ = std::move(parent_cell);
  return out;
}

SimplicialComplex subdivide(const SimplicialComplex& k, SubdivisionScheme scheme) {
  if (scheme.depth < 0) fail("subdivision depth must be >= 0");
  SimplicialComplex out = k;
  for (int d = 0; d < scheme.depth; ++d) out = subdivide_once(out, scheme.kind);
  return out;
}

SimplicialComplex boundary_complex(const SimplicialComplex& k) {
  if (k.dimension() <= 0) return {};
  std::map<Simplex, std::vector<std::pair<std::vector<int>, int>>> induced;
  for (std::size_t c = 0; c < k.num_cells(); ++c) {
    const std::vector<int> oc = k.oriented_cell(c);
    for (std::size_t i = 0; i < oc.size(); ++i) {
      std::vector<int> f = oc;
      f.erase(f.begin() + static_cast<std::ptrdiff_t>(i));
      Simplex key = f;
      std::sort(key.begin(), key.end());
      induced[key].emplace_back(f, i % 2 == 0 ? 1 : -1);
    }
  }
  std::vector<std::vector<int>> cells;
  std::vector<int> signs;
  for (auto& [key, occ] : induced) {
    if (occ.size() != 1) continue;
    cells.push_back(occ[0].first);
    signs.push_back(occ[0].second);
  }
  if (cells.empty()) return {};
  const int bd = k.dimension() - 1;
  SimplicialComplex b = SimplicialComplex::from_oriented_cells(bd, k.vertices(), cells,
                                                               k.manifold(), signs, k.is_oriented());
  b.periodic_ = k.periodic_;
  return b;
}

// ---------------------------------------------------------------------------
// JSON

std::string to_json_text(const SimplicialComplex& k) {
  using nlohmann::json;
  json j;
  j["dimension"] = k.dimension();
  j["manifold_tag"] = std::string(manifold_name(k.manifold()));
  json verts = json::array();
  for (const Vertex& v : k.vertices()) {
    verts.push_back({{"id", v.id}, {"xyz", {v.xyz[0], v.xyz[1], v.xyz[2]}}, {"chart", v.chart}});
  }
  j["vertices"] = verts;
  json simp = json::object();
  for (int d = 0; d <= k.dimension(); ++d) {
    json list = json::array();
    if (d == k.dimension()) {
      for (std::size_t i = 0; i < k.num_cells(); ++i) list.push_back(k.oriented_cell(i));
    } else {
      for (const Simplex& s : k.simplices(d)) list.push_back(s);
    }
    simp[std::to_string(d)] = list;
  }
  j["simplices"] = simp;
  if (k.dimension() == 0) j["signs"] = k.orientation();
  if (!k.marked().empty()) j["marked"] = k.marked();
  return j.dump();
}

SimplicialComplex complex_from_json_text(std::string_view text) {
  using nlohmann::json;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    fail(std::string("bad complex JSON: ") + e.what());
  }
  try {
    const int dim = j.at("dimension").get<int>();
    std::vector<Vertex> verts;
    for (const auto& v : j.at("vertices")) {
      Vertex vx;
      vx.id = v.at("id").get<int>();
      auto xyz = v.at("xyz").get<std::vector<double>>();
      for (std::size_t i = 0; i < std::min<std::size_t>(3, xyz.size()); ++i) vx.xyz[i] = xyz[i];
      vx.chart = v.value("chart", 0);
      verts.push_back(vx);
    }
    std::sort(verts.begin(), verts.end(), [](const Vertex& a, const Vertex& b) { return a.id < b.id; });
    if (dim < 0) return {};
    const auto cells = j.at("simplices").at(std::to_string(dim)).get<std::vector<std::vector<int>>>();
    std::vector<int> signs;
    if (j.contains("signs")) signs = j.at("signs").get<std::vector<int>>();
    const Manifold tag = parse_manifold(j.value("manifold_tag", std::string("custom")));
    SimplicialComplex k = SimplicialComplex::from_oriented_cells(dim, std::move(verts), cells, tag, signs);
    if (j.contains("marked")) k.marked_ = j.at("marked").get<std::vector<int>>();
    // Lower-dimensional simplices in the file must agree with the closure.
    for (int d = 0; d < dim; ++d) {
      const std::string key = std::to_string(d);
      if (!j.at("simplices").contains(key)) continue;
      auto listed = j.at("simplices").at(key).get<std::vector<std::vector<int>>>();
      for (auto& s : listed) std::sort(s.begin(), s.end());
      std::sort(listed.begin(), listed.end());
      if (listed != k.simplices(d)) fail("listed " + key + "-simplices disagree with the closure of the top cells");
    }
    return k;
  } catch (const json::exception& e) {
    fail(std::string("bad complex JSON: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Spherical geometry

GeodesicTriangleData spherical_triangle(const Point& a, const Point& b, const Point& c) {
  constexpr double eps = 1e-12;
  const Point* v[3] = {&a, &b, &c};
  for (int i = 0; i < 3; ++i) {
    if (std::fabs(norm(*v[i]) - 1.0) > 1e-9) fail("spherical_triangle expects unit vectors");
    const Point& p = *v[i];
    const Point& q = *v[(i + 1) % 3];
    if (norm(p + q) < eps) fail("degenerate geodesic triangle (antipodal vertices)");
  }
  const double det = dot(cross(a, b), c);
  if (std::fabs(det) < eps) fail("degenerate geodesic triangle");
  GeodesicTriangleData t;
  for (int i = 0; i < 3; ++i) {
    const Point& p = *v[i];
    const Point& q = *v[(i + 1) % 3];
    const Point& r = *v[(i + 2) % 3];
    // Angle between the great-circle tangents at p towards q and r.
    const Point tq = q - dot(p, q) * p;
    const Point tr = r - dot(p, r) * p;
    t.angles[i] = std::atan2(norm(cross(tq, tr)), dot(tq, tr));
  }
  t.area = t.angles[0] + t.angles[1] + t.angles[2] - std::numbers::pi;
  t.orientation = det > 0 ? 1 : -1;
  return t;
}

}  // namespace gcalc

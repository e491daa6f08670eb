#pragma once

// Oriented abstract simplicial complexes with geometric realizations for the
// built-in manifolds, subdivision operators and spherical geometry helpers.

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gcalc/point.hpp"

namespace gcalc {

enum class Manifold {
  empty,
  interval,    // [a,b], uniform split
  circle,      // unit circle in the xy-plane
  sphere,      // octahedron + geodesic refinement
  icosphere,   // icosahedron + geodesic refinement
  hemisphere,  // upper half of the octahedral sphere, geodesic (equator) boundary
  torus,       // flat torus [0,1)^2, grid triangulation
  disk3,       // polygonal disk with a center fan and marked points 0, 1, inf
  square,      // [0,1]^2, grid triangulation
  custom,
};

std::string_view manifold_name(Manifold m);

struct Vertex {
  int id = 0;
  Point xyz{};
  int chart = 0;
};

/// Vertex ids of a simplex in increasing order.
using Simplex = std::vector<int>;

enum class SubdivisionKind { barycentric, edge_midpoint, uniform_1d };

struct SubdivisionScheme {
  SubdivisionKind kind = SubdivisionKind::barycentric;
  int depth = 1;
};

std::string_view subdivision_name(SubdivisionKind k);
SubdivisionKind parse_subdivision(std::string_view name);

/// Top cells are stored with sorted vertex ids plus a parity flag per cell:
/// +1 when the sorted order is the positively oriented order, -1 otherwise.
/// For a 0-dimensional complex the flag is the sign of the point.
class SimplicialComplex {
 public:
  /// The empty complex.
  SimplicialComplex() = default;

  /// Builds a complex from top cells listed in their oriented vertex order.
  /// `signs`, when given, multiplies each cell's orientation (required for
  /// signed 0-dimensional complexes). Throws if the result is not a valid
  /// pseudo-manifold complex or if `oriented` is set and orientations clash.
  static SimplicialComplex from_oriented_cells(int dimension, std::vector<Vertex> vertices,
                                               const std::vector<std::vector<int>>& cells,
                                               Manifold tag = Manifold::custom,
                                               std::vector<int> signs = {},
                                               bool oriented = true);

  int dimension() const { return dim_; }
  bool empty() const { return dim_ < 0; }
  Manifold manifold() const { return tag_; }
  bool is_oriented() const { return oriented_; }

  /// Vertex table. It may contain vertices that belong to no simplex (e.g. a
  /// boundary complex shares its parent's table); simplices(0) lists the
  /// vertices of the complex.
  const std::vector<Vertex>& vertices() const { return vertices_; }
  const std::vector<Simplex>& simplices(int k) const;
  std::size_t count(int k) const { return simplices(k).size(); }
  std::size_t num_cells() const { return empty() ? 0 : top().size(); }
  const std::vector<Simplex>& top() const { return simplices(dim_); }
  const std::vector<int>& orientation() const { return orientation_; }

  /// Cell i in its positively oriented order (sorted, with the first two
  /// entries swapped when the parity flag is -1).
  std::vector<int> oriented_cell(std::size_t i) const;

  /// Coordinates of the given vertices in one chart. For the torus the points
  /// are unwrapped around the first vertex so the simplex is local.
  std::vector<Point> chart_points(std::span<const int> ids) const;

  /// Marked points (interval endpoints, the disk's 0/1/inf).
  const std::vector<int>& marked() const { return marked_; }

  /// Lineage: number of subdivisions from the built-in, the parent complex,
  /// and for each top cell the index of the parent top cell containing it.
  int depth() const { return depth_; }
  const std::shared_ptr<const SimplicialComplex>& parent() const { return parent_; }
  const std::vector<int>& parent_cell() const { return parent_cell_; }

  long euler_characteristic() const;

  /// Largest edge length measured in chart coordinates.
  double mesh_size() const;

  /// Checks closure, the pseudo-manifold condition on (n-1)-faces and
  /// orientation coherence. Throws gcalc::Error on failure.
  void validate() const;

  /// Same complex with every orientation flag flipped.
  SimplicialComplex reversed() const;

 private:
  friend SimplicialComplex complex_from_json_text(std::string_view);
  friend SimplicialComplex subdivide_once(const SimplicialComplex&, SubdivisionKind);
  friend SimplicialComplex boundary_complex(const SimplicialComplex&);
  friend SimplicialComplex build_builtin(Manifold, int, double, double);

  void close();  // fills faces_ of all dimensions from the top cells

  int dim_ = -1;
  Manifold tag_ = Manifold::empty;
  bool oriented_ = true;
  bool periodic_ = false;  // torus: coordinates wrap with period 1 in x and y
  std::vector<Vertex> vertices_;
  std::vector<std::vector<Simplex>> faces_;  // faces_[k] sorted lexicographically
  std::vector<int> orientation_;
  std::vector<int> marked_;
  int depth_ = 0;
  std::shared_ptr<const SimplicialComplex> parent_;
  std::vector<int> parent_cell_;
};

/// Built-in triangulations. Resolution meaning per manifold:
///   interval: number of edges (>= 1); circle: number of edges (>= 3);
///   sphere/icosphere/hemisphere: geodesic refinement depth (>= 0);
///   torus: grid of 3r x 3r squares (r >= 1); square: r x r squares (r >= 1);
///   disk3: 3r boundary edges around a center vertex (r >= 1).
/// `a`, `b` are the interval endpoints and are ignored elsewhere.
SimplicialComplex build_builtin(Manifold tag, int resolution, double a = 0.0, double b = 1.0);

/// Parses "builtin:<name>[:<res>]" (name may be "interval(a,b)"; sphere accepts
/// "octahedron" and "icosahedron" as resolutions) or a path to a JSON complex.
SimplicialComplex parse_mesh_spec(std::string_view spec);

SimplicialComplex subdivide(const SimplicialComplex& k, SubdivisionScheme scheme);
SimplicialComplex subdivide_once(const SimplicialComplex& k, SubdivisionKind kind);

/// (n-1)-complex of faces lying in exactly one top cell, with the induced
/// orientation. Empty for closed complexes and for 0-dimensional input.
SimplicialComplex boundary_complex(const SimplicialComplex& k);

/// {dimension, vertices:[{id, xyz, chart}], simplices:{k:[[ids...]]},
///  manifold_tag}. Top simplices are written in oriented order; a signed
/// 0-dimensional complex also carries "signs".
std::string to_json_text(const SimplicialComplex& k);
SimplicialComplex complex_from_json_text(std::string_view text);

struct GeodesicTriangleData {
  double angles[3] = {0, 0, 0};  // interior angles at a, b, c (radians)
  double area = 0.0;             // spherical excess, steradians
  int orientation = 1;           // sign of det[a, b, c]
};

/// Geodesic triangle on the unit sphere spanned by unit vectors a, b, c.
/// Throws gcalc::Error("simplicial", "degenerate geodesic triangle") when
/// the points are antipodal, coincide or lie on one great circle.
GeodesicTriangleData spherical_triangle(const Point& a, const Point& b, const Point& c);

}  // namespace gcalc

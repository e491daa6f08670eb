#include "doctest.h"
#include "gcalc/error.hpp"
#include "gcalc/simplicial.hpp"

#include <cmath>
#include <numbers>

using namespace gcalc;

namespace {
std::array<std::size_t, 3> fve(const SimplicialComplex& k) { return {k.count(0), k.count(1), k.count(2)}; }
}  // namespace

TEST_CASE("built-in counts and euler characteristics") {
  const auto oct = build_builtin(Manifold::sphere, 0);
  CHECK(fve(oct) == std::array<std::size_t, 3>{6, 12, 8});
  CHECK(oct.euler_characteristic() == 2);
  const auto ico = build_builtin(Manifold::icosphere, 0);
  CHECK(fve(ico) == std::array<std::size_t, 3>{12, 30, 20});
  const auto torus = build_builtin(Manifold::torus, 1);
  CHECK(fve(torus) == std::array<std::size_t, 3>{9, 27, 18});
  CHECK(torus.euler_characteristic() == 0);
  CHECK(build_builtin(Manifold::circle, 5).euler_characteristic() == 0);
  CHECK(build_builtin(Manifold::interval, 7).euler_characteristic() == 1);
  CHECK(build_builtin(Manifold::disk3, 2).euler_characteristic() == 1);
  CHECK(build_builtin(Manifold::square, 3).euler_characteristic() == 1);
  CHECK(build_builtin(Manifold::hemisphere, 1).euler_characteristic() == 1);
  for (auto tag : {Manifold::sphere, Manifold::icosphere, Manifold::torus, Manifold::disk3, Manifold::square,
                   Manifold::hemisphere, Manifold::interval, Manifold::circle}) {
    CHECK_NOTHROW(build_builtin(tag, tag == Manifold::circle ? 3 : 1).validate());
  }
}

TEST_CASE("interval marks its endpoints") {
  const auto k = build_builtin(Manifold::interval, 4, -1.0, 3.0);
  REQUIRE(k.marked().size() == 2);
  CHECK(k.vertices()[static_cast<std::size_t>(k.marked()[0])].xyz[0] == -1.0);
  CHECK(k.vertices()[static_cast<std::size_t>(k.marked()[1])].xyz[0] == 3.0);
  CHECK(k.mesh_size() == doctest::Approx(1.0));
}

TEST_CASE("sphere vertices are unit vectors at every depth") {
  auto k = build_builtin(Manifold::sphere, 2);
  CHECK(k.num_cells() == 8 * 16);
  for (const auto& s : k.simplices(0)) {
    CHECK(norm(k.vertices()[static_cast<std::size_t>(s[0])].xyz) == doctest::Approx(1.0));
  }
}

TEST_CASE("subdivision multiplies top cells and keeps the lineage") {
  const auto k = build_builtin(Manifold::square, 2);
  const auto b = subdivide_once(k, SubdivisionKind::barycentric);
  CHECK(b.num_cells() == 6 * k.num_cells());
  CHECK(b.depth() == 1);
  REQUIRE(b.parent() != nullptr);
  CHECK(b.parent()->num_cells() == k.num_cells());
  CHECK(b.parent_cell().size() == b.num_cells());
  CHECK(b.euler_characteristic() == 1);
  CHECK_NOTHROW(b.validate());
  const auto e = subdivide_once(k, SubdivisionKind::edge_midpoint);
  CHECK(e.num_cells() == 4 * k.num_cells());
  CHECK(e.mesh_size() == doctest::Approx(k.mesh_size() / 2));
  const auto t = subdivide(build_builtin(Manifold::torus, 1), {SubdivisionKind::barycentric, 2});
  CHECK(t.num_cells() == 18 * 36);
  CHECK(t.euler_characteristic() == 0);
  const auto i = subdivide(build_builtin(Manifold::interval, 1), {SubdivisionKind::uniform_1d, 5});
  CHECK(i.num_cells() == 32);
  CHECK_THROWS_AS(subdivide_once(k, SubdivisionKind::uniform_1d), Error);
}

TEST_CASE("boundary complexes") {
  const auto sq = build_builtin(Manifold::square, 3);
  const auto bd = boundary_complex(sq);
  CHECK(bd.dimension() == 1);
  CHECK(bd.num_cells() == 12);
  CHECK(boundary_complex(bd).empty());
  CHECK(boundary_complex(build_builtin(Manifold::sphere, 0)).empty());
  const auto hb = boundary_complex(build_builtin(Manifold::hemisphere, 0));
  CHECK(hb.num_cells() == 4);
  const auto ib = boundary_complex(build_builtin(Manifold::interval, 3));
  CHECK(ib.dimension() == 0);
  CHECK(ib.num_cells() == 2);
  int signs = 0;
  for (int s : ib.orientation()) signs += s;
  CHECK(signs == 0);
}

TEST_CASE("orientation reversal and oriented cells") {
  const auto k = build_builtin(Manifold::disk3, 1);
  const auto r = k.reversed();
  for (std::size_t i = 0; i < k.num_cells(); ++i) CHECK(r.orientation()[i] == -k.orientation()[i]);
  CHECK_NOTHROW(r.validate());
}

TEST_CASE("JSON round trip") {
  const auto k = subdivide_once(build_builtin(Manifold::disk3, 1), SubdivisionKind::barycentric);
  const auto j = complex_from_json_text(to_json_text(k));
  CHECK(fve(j) == fve(k));
  CHECK(j.orientation() == k.orientation());
  CHECK(j.top() == k.top());
  CHECK(j.marked() == k.marked());
  const auto i = complex_from_json_text(to_json_text(boundary_complex(build_builtin(Manifold::interval, 2))));
  CHECK(i.num_cells() == 2);
  CHECK_THROWS_WITH_AS(complex_from_json_text("{bad"), doctest::Contains("simplicial:"), Error);
}

TEST_CASE("mesh specs") {
  CHECK(parse_mesh_spec("builtin:sphere:octahedron").num_cells() == 8);
  CHECK(parse_mesh_spec("builtin:sphere:icosahedron").num_cells() == 20);
  CHECK(parse_mesh_spec("builtin:torus:2").num_cells() == 2 * 36);
  CHECK(parse_mesh_spec("builtin:interval(0,2):4").mesh_size() == doctest::Approx(0.5));
  CHECK_THROWS_WITH_AS(parse_mesh_spec("builtin:klein"), doctest::Contains("simplicial:"), Error);
  CHECK_THROWS_WITH_AS(build_builtin(Manifold::circle, 2), doctest::Contains("resolution below minimum"), Error);
  CHECK_THROWS_AS(build_builtin(Manifold::torus, 0), Error);
}

TEST_CASE("invalid complexes are rejected") {
  std::vector<Vertex> v(4);
  for (int i = 0; i < 4; ++i) v[static_cast<std::size_t>(i)].id = i;
  // Three triangles on one edge.
  CHECK_THROWS_AS(SimplicialComplex::from_oriented_cells(2, v, {{0, 1, 2}, {1, 0, 3}, {0, 1, 3}}), Error);
  // Incoherent orientation.
  CHECK_THROWS_AS(SimplicialComplex::from_oriented_cells(2, v, {{0, 1, 2}, {0, 1, 3}}), Error);
  CHECK_NOTHROW(SimplicialComplex::from_oriented_cells(2, v, {{0, 1, 2}, {1, 0, 3}}));
  CHECK_THROWS_AS(SimplicialComplex::from_oriented_cells(2, v, {{0, 1, 1}}), Error);
}

TEST_CASE("geodesic triangles") {
  const auto t = spherical_triangle(pt(1, 0, 0), pt(0, 1, 0), pt(0, 0, 1));
  CHECK(t.area == doctest::Approx(std::numbers::pi / 2));
  for (double a : t.angles) CHECK(a == doctest::Approx(std::numbers::pi / 2));
  CHECK(t.orientation == 1);
  CHECK(spherical_triangle(pt(0, 1, 0), pt(1, 0, 0), pt(0, 0, 1)).orientation == -1);
  CHECK_THROWS_AS(spherical_triangle(pt(1, 0, 0), pt(-1, 0, 0), pt(0, 0, 1)), Error);
  CHECK_THROWS_AS(spherical_triangle(pt(1, 0, 0), pt(0, 1, 0), normalized(pt(1, 1, 0))), Error);
}

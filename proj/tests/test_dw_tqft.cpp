#include "doctest.h"
#include "gcalc/dw_tqft.hpp"
#include "gcalc/error.hpp"

#include <cmath>
#include <complex>
#include <random>

using namespace gcalc;
using cd = std::complex<double>;

TEST_CASE("finite groups") {
  const auto s3 = FiniteGroup::symmetric3();
  CHECK(s3.order == 6);
  bool abelian = true;
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b) abelian = abelian && s3.mul(a, b) == s3.mul(b, a);
  CHECK_FALSE(abelian);
  const auto z = FiniteGroup::product(FiniteGroup::cyclic(2), FiniteGroup::cyclic(3));
  CHECK(z.order == 6);
  for (int a = 0; a < 6; ++a) CHECK(z.mul(a, z.inv(a)) == z.identity);
  CHECK_THROWS_WITH_AS(FiniteGroup::from_table({{0, 1}, {0, 1}}, "bad"), doctest::Contains("dw_tqft:"), Error);
  const auto g = group_from_json_text(group_to_json_text(s3));
  CHECK(g.table == s3.table);
  CHECK(parse_group("builtin:Z2xZ2").order == 4);
  CHECK(parse_group("builtin:Z5").order == 5);
  CHECK_THROWS_AS(parse_group("builtin:Q8x"), Error);
}

// Commuting pairs: |G| times the number of conjugacy classes.
TEST_CASE("commuting-pair counts") {
  CHECK(mednykh_oracle(FiniteGroup::cyclic(2), 1) == 4);
  CHECK(mednykh_oracle(FiniteGroup::symmetric3(), 1) == 18);
  CHECK(mednykh_oracle(parse_group("builtin:Z2xZ2"), 1) == 16);
  CHECK(mednykh_oracle(FiniteGroup::symmetric3(), 0) == 1);
  // Genus 2 for Z2: every 4-tuple.
  CHECK(mednykh_oracle(FiniteGroup::cyclic(2), 2) == 16);
}

TEST_CASE("partition functions with trivial cocycle") {
  const auto torus = build_builtin(Manifold::torus, 1);
  const auto sphere = build_builtin(Manifold::sphere, 0);
  for (const auto& g : {FiniteGroup::cyclic(2), FiniteGroup::cyclic(3), FiniteGroup::symmetric3()}) {
    const cd zt = partition_function(torus, g, CocycleTable::trivial(g));
    const cd zs = partition_function(sphere, g, CocycleTable::trivial(g));
    CHECK(zt.real() == doctest::Approx(static_cast<double>(mednykh_oracle(g, 1)) / g.order));
    CHECK(zs.real() == doctest::Approx(1.0 / g.order));
  }
  CHECK(partition_function(torus, FiniteGroup::cyclic(2), CocycleTable::trivial(FiniteGroup::cyclic(2))).real() == 2.0);
  CHECK(partition_function(torus, FiniteGroup::symmetric3(), CocycleTable::trivial(FiniteGroup::symmetric3())).real() == 3.0);
}

// omega(a, b) = (-1)^(a1 b2) on Z2 x Z2: the torus sum of
// omega(a,b)/omega(b,a) over all pairs vanishes unless a = 0, so Z = 4/4.
TEST_CASE("bimultiplicative cocycle on the torus") {
  const auto g = parse_group("builtin:Z2xZ2");
  CocycleTable w = CocycleTable::bimultiplicative(2);
  CHECK_NOTHROW(w.validate(g));
  const auto torus = build_builtin(Manifold::torus, 1);
  const cd z = partition_function(torus, g, w);
  CHECK(std::abs(z - cd(1.0, 0.0)) < 1e-12);
  CHECK(std::abs(torus_oracle(g, w) - cd(1.0, 0.0)) < 1e-12);
  CHECK(std::abs(partition_function(torus, g, CocycleTable::trivial(g)) - cd(4.0, 0.0)) < 1e-12);
  EnumerateOptions all;
  all.gauge_fix = false;
  CHECK(std::abs(partition_function(torus, g, w, all) - z) < 1e-12);
  // Sphere: nothing to detect.
  CHECK(std::abs(partition_function(build_builtin(Manifold::sphere, 0), g, w) - cd(0.25, 0)) < 1e-12);
}

TEST_CASE("invalid cocycles are rejected") {
  const auto g = FiniteGroup::cyclic(2);
  CocycleTable w = CocycleTable::trivial(g);
  w.omega[1][1] = cd(0, 1);
  w.omega[0][1] = cd(-1, 0);
  CHECK_THROWS_WITH_AS(w.validate(g), doctest::Contains("dw_tqft:"), Error);
  CocycleTable big = CocycleTable::trivial(g);
  big.omega[1][1] = 2.0;
  CHECK_THROWS_AS(big.validate(g), Error);
  const auto parsed = cocycle_from_json_text("{\"omega\": [[[1,0],[1,0]],[[1,0],[1,0]]]}", g);
  CHECK(parsed(1, 1) == cd(1, 0));
}

TEST_CASE("flat colorings and gauge invariance of the weight") {
  const auto torus = build_builtin(Manifold::torus, 1);
  const auto g = parse_group("builtin:Z2xZ2");
  const CocycleTable w = CocycleTable::bimultiplicative(2);
  std::vector<Coloring> found;
  const FlatCount fc = enumerate_flat(torus, g, [&](const Coloring& c) { found.push_back(c); });
  CHECK(fc.gauge_fixed == 16);
  CHECK(found.size() == 16);
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> pick(0, 3);
  for (const auto& c : found) {
    CHECK(is_flat(torus, g, c));
    std::vector<int> h(torus.vertices().size());
    for (int& x : h) x = pick(rng);
    const Coloring c2 = gauge_transform(torus, g, c, h);
    CHECK(is_flat(torus, g, c2));
    CHECK(std::abs(coloring_weight(torus, g, w, c2) - coloring_weight(torus, g, w, c)) < 1e-12);
  }
}

TEST_CASE("subdivision invariance") {
  const auto torus = build_builtin(Manifold::torus, 1);
  const auto g = parse_group("builtin:Z2xZ2");
  const CocycleTable w = CocycleTable::bimultiplicative(2);
  const auto b = subdivide_once(torus, SubdivisionKind::barycentric);
  CHECK(std::abs(partition_function(b, g, w) - partition_function(torus, g, w)) < 1e-10);
  const auto t2 = build_builtin(Manifold::torus, 2);
  CHECK(std::abs(partition_function(t2, g, w) - partition_function(torus, g, w)) < 1e-10);
}

TEST_CASE("surfaces with boundary are rejected") {
  CHECK_THROWS_WITH_AS(partition_function(build_builtin(Manifold::square, 1), FiniteGroup::cyclic(2),
                                          CocycleTable::trivial(FiniteGroup::cyclic(2))),
                       doctest::Contains("dw_tqft:"), Error);
}

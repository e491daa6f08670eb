#pragma once

// Finite-group Dijkgraaf-Witten partition functions on closed triangulated
// surfaces, in the flat edge-coloring model.

#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "gcalc/simplicial.hpp"

namespace gcalc {

struct FiniteGroup {
  int order = 0;
  std::vector<std::vector<int>> table;  // table[a][b] = a*b
  int identity = 0;
  std::vector<int> inverse;
  std::string name;

  /// Validates the table (closure, associativity, identity, inverses).
  static FiniteGroup from_table(std::vector<std::vector<int>> table, std::string name);

  static FiniteGroup cyclic(int n);
  static FiniteGroup symmetric3();
  /// Direct product; (a, b) has index a * |H| + b.
  static FiniteGroup product(const FiniteGroup& g, const FiniteGroup& h);

  int mul(int a, int b) const { return table[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)]; }
  int inv(int a) const { return inverse[static_cast<std::size_t>(a)]; }
};

/// "builtin:Zn", "builtin:S3", "builtin:Z2xZ2", "builtin:ZnxZm", or a JSON
/// file {order, table, name}.
FiniteGroup parse_group(std::string_view spec);
FiniteGroup group_from_json_text(std::string_view text);
std::string group_to_json_text(const FiniteGroup& g);

struct CocycleTable {
  std::vector<std::vector<std::complex<double>>> omega;
  bool normalized = true;

  static CocycleTable trivial(const FiniteGroup& g);
  /// omega((a,b),(c,d)) = exp(2 pi i a d / n) on Zn x Zn.
  static CocycleTable bimultiplicative(int n);
  /// omega * d(beta) with d(beta)(g,h) = beta(g) beta(h) / beta(gh).
  CocycleTable twisted(const FiniteGroup& g, const std::vector<std::complex<double>>& beta) const;

  std::complex<double> operator()(int a, int b) const {
    return omega[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
  }

  /// Throws gcalc::Error("dw_tqft", ...) unless |omega| = 1 and the 2-cocycle
  /// identity holds to tol; sets `normalized`.
  void validate(const FiniteGroup& g, double tol = 1e-12);
};

/// {omega: [[re, im], ...]} row-major, or "trivial".
CocycleTable cocycle_from_json_text(std::string_view text, const FiniteGroup& g);

/// Colors of the edges of k.simplices(1) (edge (u,v), u < v, carries g(u,v)).
using Coloring = std::vector<int>;

bool is_flat(const SimplicialComplex& k, const FiniteGroup& g, const Coloring& c);

/// Product over top cells of omega(g01, g12)^orientation.
std::complex<double> coloring_weight(const SimplicialComplex& k, const FiniteGroup& g,
                                     const CocycleTable& w, const Coloring& c);

/// g(u,v) -> h(u)^-1 g(u,v) h(v).
Coloring gauge_transform(const SimplicialComplex& k, const FiniteGroup& g, const Coloring& c,
                         const std::vector<int>& h_by_vertex_id);

struct FlatCount {
  std::uint64_t gauge_fixed = 0;  // colorings trivial on a spanning tree
  double total = 0.0;             // gauge_fixed * |G|^(V-1)
  std::uint64_t visited = 0;      // colorings passed to the visitor
};

struct EnumerateOptions {
  /// Restrict to colorings that are trivial on a spanning tree.
  bool gauge_fix = true;
  /// Upper bound on explored search nodes.
  std::uint64_t max_nodes = 50'000'000;
};

/// Enumerates flat colorings of a closed connected surface, calling `visit`
/// (if set) for each.
FlatCount enumerate_flat(const SimplicialComplex& k, const FiniteGroup& g,
                         const std::function<void(const Coloring&)>& visit = {},
                         const EnumerateOptions& opt = {});

/// |G|^-V times the sum over all flat colorings of coloring_weight. With
/// gauge_fix the sum runs over tree-trivial colorings and is rescaled.
std::complex<double> partition_function(const SimplicialComplex& k, const FiniteGroup& g,
                                        const CocycleTable& w, const EnumerateOptions& opt = {});

/// Number of 2g-tuples with prod [a_i, b_i] = e.
std::uint64_t mednykh_oracle(const FiniteGroup& g, int genus);

/// (1/|G|) sum over commuting pairs of omega(a,b)/omega(b,a).
std::complex<double> torus_oracle(const FiniteGroup& g, const CocycleTable& w);

}  // namespace gcalc

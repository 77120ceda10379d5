#pragma once

// Seeded random instances for verification sweeps.
//
// All randomness flows through Rng, a std::mt19937_64 whose outputs are
// turned into integers by rejection sampling and into doubles from the top
// 53 bits. Standard-library distributions are avoided on purpose: their
// algorithms are implementation-defined, while these are not, so a seed
// reproduces the same instances on every platform.

#include <cstdint>
#include <random>
#include <vector>

#include "twospin/gadgets.hpp"
#include "twospin/spin_core.hpp"

namespace twospin {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform integer in [0, n); n must be positive.
  std::uint64_t below(std::uint64_t n);
  /// Uniform integer in [lo, hi].
  long long between(long long lo, long long hi);
  /// Uniform double in [0, 1).
  double uniform();

 private:
  std::mt19937_64 engine_;
};

struct BipartiteTopology {
  FieldedGraph<double> graph;  // all fields 1
  std::vector<VertexIndex> left;
};

/// Bipartite multigraph on 2..max_vertices vertices with every degree at
/// most max_degree. Vertex ids are "v0", "v1", ...
BipartiteTopology random_bipartite(Rng& rng, std::size_t max_vertices = 12, std::size_t max_degree = 5);

/// Connected multigraph on 1..max_vertices vertices: a random spanning tree
/// plus up to n extra edges, which may be parallel edges or self-loops.
FieldedGraph<double> random_connected_graph(Rng& rng, std::size_t max_vertices = 12);

/// Random star/tree/comb gadget whose materialized size is at most max_size.
Gadget random_gadget(Rng& rng, std::size_t max_size = 14);

/// Copy of `topology` with every field set to `mu`.
template <class Scalar>
FieldedGraph<Scalar> with_uniform_field(const FieldedGraph<double>& topology, const Scalar& mu) {
  FieldedGraph<Scalar> out;
  for (const auto& vertex : topology.vertices()) out.add_vertex(vertex.id, mu);
  for (const auto& [u, v] : topology.edges()) out.add_edge(u, v);
  out.set_output(topology.output());
  return out;
}

}  // namespace twospin

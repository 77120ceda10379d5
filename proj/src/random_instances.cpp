#include "twospin/random_instances.hpp"

#include <algorithm>
#include <limits>

namespace twospin {

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) throw DomainError("Rng::below needs a positive bound");
  // reject the final partial block so every residue is equally likely
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x = engine_();
  while (x >= limit) x = engine_();
  return x % n;
}

long long Rng::between(long long lo, long long hi) {
  if (hi < lo) throw DomainError("Rng::between needs lo <= hi");
  return lo + static_cast<long long>(below(static_cast<std::uint64_t>(hi - lo) + 1));
}

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

BipartiteTopology random_bipartite(Rng& rng, std::size_t max_vertices, std::size_t max_degree) {
  if (max_vertices < 2) throw DomainError("a bipartite sample needs at least two vertices");
  const auto n = static_cast<std::size_t>(rng.between(2, static_cast<long long>(max_vertices)));
  const auto left_size = static_cast<std::size_t>(rng.between(1, static_cast<long long>(n) - 1));
  BipartiteTopology out;
  for (std::size_t v = 0; v < n; ++v) {
    out.graph.add_vertex("v" + std::to_string(v), 1.0);
    if (v < left_size) out.left.push_back(v);
  }
  const std::size_t right_size = n - left_size;
  const std::size_t capacity = std::min(left_size, right_size) * max_degree;
  const auto attempts = static_cast<std::size_t>(rng.between(0, static_cast<long long>(capacity)));
  for (std::size_t i = 0; i < attempts; ++i) {
    const VertexIndex u = rng.below(left_size);
    const VertexIndex v = left_size + rng.below(right_size);
    if (out.graph.degree(u) < max_degree && out.graph.degree(v) < max_degree) out.graph.add_edge(u, v);
  }
  return out;
}

FieldedGraph<double> random_connected_graph(Rng& rng, std::size_t max_vertices) {
  if (max_vertices < 1) throw DomainError("a graph sample needs at least one vertex");
  const auto n = static_cast<std::size_t>(rng.between(1, static_cast<long long>(max_vertices)));
  FieldedGraph<double> g;
  for (std::size_t v = 0; v < n; ++v) g.add_vertex("v" + std::to_string(v), 1.0);
  for (std::size_t v = 1; v < n; ++v) g.add_edge(rng.below(v), v);
  const auto extra = static_cast<std::size_t>(rng.between(0, static_cast<long long>(n)));
  for (std::size_t i = 0; i < extra; ++i) g.add_edge(rng.below(n), rng.below(n));
  return g;
}

namespace {

Gadget random_gadget_within(Rng& rng, std::size_t budget) {
  const std::uint64_t choice = budget >= 3 ? rng.below(3) : rng.below(2) * 2;
  if (choice == 0) {
    return Gadget::star(rng.below(budget));
  }
  if (choice == 1) {
    // largest depth of a d-ary tree that fits
    const int d = static_cast<int>(rng.between(1, 3));
    int t_max = 0;
    std::size_t size = 1;
    std::size_t level = 1;
    while (true) {
      level *= static_cast<std::size_t>(d);
      if (size + level > budget) break;
      size += level;
      ++t_max;
    }
    return Gadget::tree(d, static_cast<int>(rng.between(0, t_max)));
  }
  if (budget < 2) return Gadget::star(0);
  std::size_t remaining = budget - 1;
  std::vector<Gadget> children;
  const auto wanted = static_cast<std::size_t>(rng.between(1, 4));
  while (children.size() < wanted && remaining >= 1) {
    const auto share = static_cast<std::size_t>(rng.between(1, static_cast<long long>(remaining)));
    Gadget child = random_gadget_within(rng, share);
    remaining -= static_cast<std::size_t>(child.size());
    children.push_back(std::move(child));
  }
  return Gadget::comb(std::move(children));
}

}  // namespace

Gadget random_gadget(Rng& rng, std::size_t max_size) {
  if (max_size < 1) throw DomainError("gadget size bound must be positive");
  return random_gadget_within(rng, max_size);
}

}  // namespace twospin

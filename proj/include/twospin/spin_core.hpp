#pragma once

// Two-state spin systems on multigraphs and their exact partition functions.
//
// A system is parameterized by the edge interaction matrix
//     A = [[beta, 1], [1, gamma]]
// and per-vertex external fields. Spin 0 carries weight `field`, spin 1
// carries weight 1. Self-loops contribute A(s, s) and parallel edges
// multiply.

#include <Eigen/Core>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "twospin/errors.hpp"
#include "twospin/scalar.hpp"

namespace twospin {

using VertexIndex = std::size_t;

inline constexpr std::size_t kDefaultEnumerationLimit = 24;

enum class Regime { Ferromagnetic, AntiFerromagnetic, Degenerate };

template <class Scalar>
using InteractionMatrix = Eigen::Matrix<Scalar, 2, 2>;

template <class Scalar = double>
struct SpinParams {
  Scalar beta{1};
  Scalar gamma{1};
  Scalar mu{1};

  SpinParams() = default;
  SpinParams(Scalar beta, Scalar gamma, Scalar mu)
      : beta(std::move(beta)), gamma(std::move(gamma)), mu(std::move(mu)) {
    validate();
  }

  void validate() const {
    if (beta < Scalar(0) || gamma < Scalar(0)) {
      throw DomainError("edge weights beta and gamma must be non-negative");
    }
    if (!(mu > Scalar(0))) throw DomainError("external field mu must be positive");
  }

  Regime regime() const {
    const Scalar product = beta * gamma;
    if (product > Scalar(1)) return Regime::Ferromagnetic;
    if (product < Scalar(1)) return Regime::AntiFerromagnetic;
    return Regime::Degenerate;
  }

  InteractionMatrix<Scalar> interaction() const {
    InteractionMatrix<Scalar> a;
    a << beta, Scalar(1), Scalar(1), gamma;
    return a;
  }

  template <class To>
  SpinParams<To> cast() const {
    if constexpr (std::is_same_v<To, Scalar>) {
      return *this;
    } else if constexpr (std::is_same_v<To, double>) {
      return SpinParams<double>(to_double(beta), to_double(gamma), to_double(mu));
    } else {
      return SpinParams<To>(scalar_from_double<To>(to_double(beta)),
                            scalar_from_double<To>(to_double(gamma)),
                            scalar_from_double<To>(to_double(mu)));
    }
  }
};

/// Multigraph with per-vertex external fields and an optional output vertex.
template <class Scalar = double>
class FieldedGraph {
 public:
  struct Vertex {
    std::string id;
    Scalar field;
  };

  VertexIndex add_vertex(std::string id, Scalar field) {
    if (!(field > Scalar(0))) {
      throw DomainError("vertex '" + id + "' has a non-positive field");
    }
    if (index_.count(id) != 0) throw DomainError("duplicate vertex id '" + id + "'");
    const VertexIndex v = vertices_.size();
    index_.emplace(id, v);
    vertices_.push_back({std::move(id), std::move(field)});
    degree_.push_back(0);
    return v;
  }

  /// Adds an undirected edge; u == v adds a self-loop.
  void add_edge(VertexIndex u, VertexIndex v) {
    if (u >= size() || v >= size()) throw DomainError("edge endpoint is not a vertex");
    edges_.emplace_back(u, v);
    ++degree_[u];
    ++degree_[v];
  }

  void add_edge(std::string_view u, std::string_view v) { add_edge(require(u), require(v)); }

  void set_output(std::optional<VertexIndex> v) {
    if (v && *v >= size()) throw DomainError("output is not a vertex");
    output_ = v;
  }

  void set_field(VertexIndex v, Scalar field) {
    if (!(field > Scalar(0))) {
      throw DomainError("vertex '" + vertices_.at(v).id + "' has a non-positive field");
    }
    vertices_.at(v).field = std::move(field);
  }

  std::size_t size() const { return vertices_.size(); }
  std::size_t num_edges() const { return edges_.size(); }
  const std::vector<Vertex>& vertices() const { return vertices_; }
  const std::vector<std::pair<VertexIndex, VertexIndex>>& edges() const { return edges_; }
  const Scalar& field(VertexIndex v) const { return vertices_.at(v).field; }
  const std::string& id(VertexIndex v) const { return vertices_.at(v).id; }
  std::optional<VertexIndex> output() const { return output_; }

  /// Number of edge endpoints at v; a self-loop counts twice.
  std::size_t degree(VertexIndex v) const { return degree_.at(v); }

  std::optional<VertexIndex> find(std::string_view id) const {
    const auto it = index_.find(std::string(id));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  VertexIndex require(std::string_view id) const {
    if (const auto v = find(id)) return *v;
    throw DomainError("unknown vertex id '" + std::string(id) + "'");
  }

  template <class To>
  FieldedGraph<To> cast() const {
    FieldedGraph<To> out;
    for (const auto& vertex : vertices_) {
      if constexpr (std::is_same_v<To, Scalar>) {
        out.add_vertex(vertex.id, vertex.field);
      } else if constexpr (std::is_same_v<To, double>) {
        out.add_vertex(vertex.id, to_double(vertex.field));
      } else {
        out.add_vertex(vertex.id, scalar_from_double<To>(to_double(vertex.field)));
      }
    }
    for (const auto& [u, v] : edges_) out.add_edge(u, v);
    out.set_output(output_);
    return out;
  }

 private:
  std::vector<Vertex> vertices_;
  std::vector<std::pair<VertexIndex, VertexIndex>> edges_;
  std::vector<std::size_t> degree_;
  std::unordered_map<std::string, VertexIndex> index_;
  std::optional<VertexIndex> output_;
};

/// Partial assignment of spins (0 or 1) to vertices.
class PinAssignment {
 public:
  PinAssignment() = default;
  PinAssignment(std::initializer_list<std::pair<VertexIndex, int>> pins) {
    for (const auto& [v, s] : pins) pin(v, s);
  }

  void pin(VertexIndex v, int spin) {
    if (spin != 0 && spin != 1) throw DomainError("spin must be 0 or 1");
    if (!pins_.emplace(v, spin).second) throw DomainError("vertex pinned twice");
  }

  std::optional<int> spin(VertexIndex v) const {
    const auto it = pins_.find(v);
    if (it == pins_.end()) return std::nullopt;
    return it->second;
  }

  const std::map<VertexIndex, int>& pins() const { return pins_; }

 private:
  std::map<VertexIndex, int> pins_;
};

namespace detail {

template <class Scalar>
void check_instance(const FieldedGraph<Scalar>& g, const PinAssignment& pins,
                    std::size_t enumeration_limit) {
  if (g.size() > enumeration_limit) {
    throw CapacityError("graph has " + std::to_string(g.size()) +
                        " vertices; exhaustive evaluation is limited to " +
                        std::to_string(enumeration_limit));
  }
  for (VertexIndex v = 0; v < g.size(); ++v) {
    if (!(g.field(v) > Scalar(0))) throw DomainError("vertex '" + g.id(v) + "' has a non-positive field");
  }
  for (const auto& [v, s] : pins.pins()) {
    (void)s;
    if (v >= g.size()) throw DomainError("pinned vertex is not in the graph");
  }
}

/// Sum with Neumaier compensation for floating scalars, plain otherwise.
template <class Scalar>
class Accumulator {
 public:
  void add(const Scalar& x) {
    if constexpr (std::is_floating_point_v<Scalar>) {
      const Scalar t = sum_ + x;
      if (std::abs(sum_) >= std::abs(x)) {
        carry_ += (sum_ - t) + x;
      } else {
        carry_ += (x - t) + sum_;
      }
      sum_ = t;
    } else {
      sum_ += x;
    }
  }
  Scalar value() const {
    if constexpr (std::is_floating_point_v<Scalar>) {
      return sum_ + carry_;
    } else {
      return sum_;
    }
  }

 private:
  Scalar sum_{0};
  Scalar carry_{0};
};

}  // namespace detail

/// Z restricted to configurations agreeing with `pins`.
///
/// Unpinned vertices are split into an enumerated core and a greedy
/// independent set whose members are summed out in closed form for each
/// core configuration. The result is the full configuration sum; only the
/// evaluation order changes, and that order is fixed.
template <class Scalar>
Scalar pinned_partition(const FieldedGraph<Scalar>& g, const SpinParams<Scalar>& p,
                        const PinAssignment& pins,
                        std::size_t enumeration_limit = kDefaultEnumerationLimit) {
  detail::check_instance(g, pins, enumeration_limit);
  const std::size_t n = g.size();
  const InteractionMatrix<Scalar> a = p.interaction();

  std::vector<std::vector<VertexIndex>> neighbours(n);
  std::vector<int> loops(n, 0);
  for (const auto& [u, v] : g.edges()) {
    if (u == v) {
      ++loops[u];
    } else {
      neighbours[u].push_back(v);
      neighbours[v].push_back(u);
    }
  }

  // Greedy independent set among unpinned vertices, in index order.
  std::vector<char> summed_out(n, 0);
  for (VertexIndex v = 0; v < n; ++v) {
    if (pins.spin(v)) continue;
    bool free = true;
    for (VertexIndex w : neighbours[v]) free = free && !summed_out[w];
    summed_out[v] = free ? 1 : 0;
  }

  std::vector<VertexIndex> core_free;
  std::vector<VertexIndex> independent;
  std::vector<int> spin(n, 0);
  for (VertexIndex v = 0; v < n; ++v) {
    if (const auto s = pins.spin(v)) {
      spin[v] = *s;
    } else if (summed_out[v]) {
      independent.push_back(v);
    } else {
      core_free.push_back(v);
    }
  }

  std::vector<std::pair<VertexIndex, VertexIndex>> core_edges;
  for (const auto& e : g.edges()) {
    if (!summed_out[e.first] && !summed_out[e.second]) core_edges.push_back(e);
  }
  const std::vector<Scalar> loop_weight0 = [&] {
    std::vector<Scalar> w;
    w.reserve(n);
    for (VertexIndex v = 0; v < n; ++v) w.push_back(ipow(a(0, 0), loops[v]));
    return w;
  }();
  const std::vector<Scalar> loop_weight1 = [&] {
    std::vector<Scalar> w;
    w.reserve(n);
    for (VertexIndex v = 0; v < n; ++v) w.push_back(ipow(a(1, 1), loops[v]));
    return w;
  }();

  detail::Accumulator<Scalar> total;
  const std::uint64_t configurations = std::uint64_t{1} << core_free.size();
  for (std::uint64_t mask = 0; mask < configurations; ++mask) {
    for (std::size_t i = 0; i < core_free.size(); ++i) spin[core_free[i]] = (mask >> i) & 1;

    Scalar weight(1);
    for (VertexIndex v = 0; v < n; ++v) {
      if (summed_out[v]) continue;
      if (spin[v] == 0) weight *= g.field(v);
    }
    for (const auto& [u, v] : core_edges) weight *= a(spin[u], spin[v]);

    for (VertexIndex v : independent) {
      Scalar zero = g.field(v) * loop_weight0[v];
      Scalar one = loop_weight1[v];
      for (VertexIndex w : neighbours[v]) {
        zero *= a(spin[w], 0);
        one *= a(spin[w], 1);
      }
      weight *= zero + one;
    }
    total.add(weight);
  }
  return total.value();
}

/// Z = sum over all configurations of prod_v field_v^{1-s_v} prod_e A(s_u, s_v).
template <class Scalar>
Scalar partition_function(const FieldedGraph<Scalar>& g, const SpinParams<Scalar>& p,
                          std::size_t enumeration_limit = kDefaultEnumerationLimit) {
  return pinned_partition(g, p, PinAssignment{}, enumeration_limit);
}

/// Z(output = 0) / Z(output = 1).
template <class Scalar>
Scalar effective_field(const FieldedGraph<Scalar>& g, const SpinParams<Scalar>& p,
                       std::size_t enumeration_limit = kDefaultEnumerationLimit) {
  const auto out = g.output();
  if (!out) throw DomainError("graph has no output vertex");
  const Scalar zero = pinned_partition(g, p, PinAssignment{{*out, 0}}, enumeration_limit);
  const Scalar one = pinned_partition(g, p, PinAssignment{{*out, 1}}, enumeration_limit);
  return zero / one;
}

/// ln Z by log-sum-exp over configurations; usable when Z overflows double.
double log_partition_function(const FieldedGraph<double>& g, const SpinParams<double>& p,
                              std::size_t enumeration_limit = kDefaultEnumerationLimit);

}  // namespace twospin

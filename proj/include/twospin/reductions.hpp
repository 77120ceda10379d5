#pragma once

// Partition-function preserving transformations between two-spin instances.
//
// Each transformation returns a certificate holding both instances and the
// exact scalar linking their partition functions. verify_reduction() checks
// the identity by exhaustive evaluation, exactly when Scalar is exact.

#include <cmath>
#include <deque>
#include <optional>
#include <string>
#include <vector>

#include "twospin/spin_core.hpp"

namespace twospin {

/// Orientation of the scalar stored in a certificate.
enum class ScaleRelation {
  OutputIsScaledInput,  // Z_out = scale * Z_in
  InputIsScaledOutput   // Z_in = scale * Z_out
};

template <class Scalar>
struct Instance {
  FieldedGraph<Scalar> graph;
  SpinParams<Scalar> params;  // beta and gamma; per-vertex fields live in graph
};

template <class Scalar>
struct ReductionCertificate {
  std::string kind;
  Instance<Scalar> input;
  Instance<Scalar> output;
  Scalar scale{1};
  ScaleRelation relation = ScaleRelation::OutputIsScaledInput;
  std::optional<bool> verified;  // empty until verify_reduction runs
  std::optional<Scalar> z_input;
  std::optional<Scalar> z_output;
  double relative_error = 0;
};

template <class Scalar>
struct ContractionResult {
  FieldedGraph<Scalar> graph;
  Scalar scale{1};  // Z(original) = scale * Z(graph)
  std::vector<std::string> removed;  // ids in removal order
};

struct SelfLoopRealization {
  long long loops = 0;
  long long bristles = 0;
  FieldedGraph<double> gadget;
  double achieved = 0;
  double log_error = 0;  // ln(achieved/target)
  double tolerance = 0;  // 1/m
};

inline constexpr double kFloatVerificationTolerance = 1e-9;

/// Left side of a 2-coloring (lowest index of each component on the left),
/// or nullopt if the graph has an odd cycle or a self-loop.
template <class Scalar>
std::optional<std::vector<VertexIndex>> bipartition(const FieldedGraph<Scalar>& g) {
  std::vector<int> color(g.size(), -1);
  std::vector<std::vector<VertexIndex>> adjacency(g.size());
  for (const auto& [u, v] : g.edges()) {
    if (u == v) return std::nullopt;
    adjacency[u].push_back(v);
    adjacency[v].push_back(u);
  }
  for (VertexIndex start = 0; start < g.size(); ++start) {
    if (color[start] >= 0) continue;
    color[start] = 0;
    std::deque<VertexIndex> queue{start};
    while (!queue.empty()) {
      const VertexIndex u = queue.front();
      queue.pop_front();
      for (VertexIndex w : adjacency[u]) {
        if (color[w] < 0) {
          color[w] = 1 - color[u];
          queue.push_back(w);
        } else if (color[w] == color[u]) {
          return std::nullopt;
        }
      }
    }
  }
  std::vector<VertexIndex> left;
  for (VertexIndex v = 0; v < g.size(); ++v) {
    if (color[v] == 0) left.push_back(v);
  }
  return left;
}

/// Anti-ferromagnetic Ising instance (a, a, mu') with a = 1/sqrt(beta gamma)
/// on a bipartite graph, mapped to the ferromagnetic (beta, gamma) system on
/// the same graph with fields mu' (gamma/beta)^(d/2) on the left and
/// (gamma/beta)^(d/2)/mu' on the right. Z_ferro = mu'^(-|R|) gamma^|E| Z_anti.
///
/// Only the topology of `graph` is used; its fields are replaced by mu'.
template <class Scalar>
ReductionCertificate<Scalar> bipartite_transform(const FieldedGraph<Scalar>& graph,
                                                 const std::vector<VertexIndex>& left,
                                                 const Scalar& beta, const Scalar& gamma,
                                                 const Scalar& mu_prime) {
  if (!(beta < gamma)) throw DomainError("bipartite transform requires beta < gamma");
  if (!(beta * gamma > Scalar(1))) throw DomainError("bipartite transform requires beta*gamma > 1");
  if (!(mu_prime > Scalar(1))) throw DomainError("bipartite transform requires mu' > 1");

  std::vector<char> on_left(graph.size(), 0);
  for (VertexIndex v : left) {
    if (v >= graph.size()) throw DomainError("left part names a vertex outside the graph");
    on_left[v] = 1;
  }
  for (const auto& [u, v] : graph.edges()) {
    if (on_left[u] == on_left[v]) {
      throw DomainError("edge (" + graph.id(u) + ", " + graph.id(v) + ") does not cross the bipartition");
    }
  }

  const Scalar ratio_root = scalar_sqrt(gamma / beta);  // sqrt(gamma/beta)
  const Scalar anti_edge = Scalar(1) / (beta * ratio_root);  // 1/sqrt(beta gamma)

  ReductionCertificate<Scalar> cert;
  cert.kind = "bipartite";
  cert.input.params = SpinParams<Scalar>(anti_edge, anti_edge, mu_prime);
  cert.output.params = SpinParams<Scalar>(beta, gamma, Scalar(1));
  long long right_count = 0;
  for (VertexIndex v = 0; v < graph.size(); ++v) {
    const Scalar weight = ipow(ratio_root, static_cast<long long>(graph.degree(v)));
    cert.input.graph.add_vertex(graph.id(v), mu_prime);
    if (on_left[v]) {
      cert.output.graph.add_vertex(graph.id(v), mu_prime * weight);
    } else {
      cert.output.graph.add_vertex(graph.id(v), weight / mu_prime);
      ++right_count;
    }
  }
  for (const auto& [u, v] : graph.edges()) {
    cert.input.graph.add_edge(u, v);
    cert.output.graph.add_edge(u, v);
  }
  cert.input.graph.set_output(graph.output());
  cert.output.graph.set_output(graph.output());
  cert.scale = ipow(mu_prime, -right_count) * ipow(gamma, static_cast<long long>(graph.num_edges()));
  cert.relation = ScaleRelation::OutputIsScaledInput;
  return cert;
}

/// Repeatedly removes a degree-one vertex u with neighbour v, multiplying the
/// scale by (mu_u + gamma) and setting mu_v <- mu_v h(mu_u). Degree-one
/// vertices are processed first-in first-out, seeded in index order.
template <class Scalar>
ContractionResult<Scalar> contract_degree_one(const FieldedGraph<Scalar>& g,
                                              const SpinParams<Scalar>& p) {
  const std::size_t n = g.size();
  std::vector<char> vertex_alive(n, 1);
  std::vector<char> edge_alive(g.num_edges(), 1);
  std::vector<std::size_t> degree(n);
  std::vector<std::vector<std::size_t>> incident(n);
  std::vector<Scalar> field;
  field.reserve(n);
  for (VertexIndex v = 0; v < n; ++v) {
    degree[v] = g.degree(v);
    field.push_back(g.field(v));
  }
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    const auto& [u, v] = g.edges()[e];
    incident[u].push_back(e);
    if (v != u) incident[v].push_back(e);
  }

  ContractionResult<Scalar> result;
  std::deque<VertexIndex> pending;
  for (VertexIndex v = 0; v < n; ++v) {
    if (degree[v] == 1) pending.push_back(v);
  }
  std::size_t alive_count = n;
  while (!pending.empty() && alive_count > 1) {
    const VertexIndex u = pending.front();
    pending.pop_front();
    if (!vertex_alive[u] || degree[u] != 1) continue;
    std::size_t edge = g.num_edges();
    for (std::size_t e : incident[u]) {
      if (edge_alive[e]) {
        edge = e;
        break;
      }
    }
    if (edge == g.num_edges()) throw InternalError("degree-one vertex without a live edge");
    const auto& [a, b] = g.edges()[edge];
    const VertexIndex v = a == u ? b : a;

    const Scalar& mu_u = field[u];
    result.scale *= mu_u + p.gamma;
    field[v] *= (p.beta * mu_u + Scalar(1)) / (mu_u + p.gamma);

    edge_alive[edge] = 0;
    vertex_alive[u] = 0;
    --alive_count;
    degree[u] = 0;
    --degree[v];
    result.removed.push_back(g.id(u));
    if (degree[v] == 1) pending.push_back(v);
  }

  std::vector<VertexIndex> remap(n, n);
  for (VertexIndex v = 0; v < n; ++v) {
    if (vertex_alive[v]) remap[v] = result.graph.add_vertex(g.id(v), field[v]);
  }
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    if (!edge_alive[e]) continue;
    const auto& [u, v] = g.edges()[e];
    result.graph.add_edge(remap[u], remap[v]);
  }
  if (const auto out = g.output(); out && vertex_alive[*out]) result.graph.set_output(remap[*out]);
  return result;
}

template <class Scalar>
ReductionCertificate<Scalar> contraction_certificate(const FieldedGraph<Scalar>& g,
                                                     const SpinParams<Scalar>& p) {
  ContractionResult<Scalar> contracted = contract_degree_one(g, p);
  ReductionCertificate<Scalar> cert;
  cert.kind = "contract";
  cert.input = {g, p};
  cert.output = {std::move(contracted.graph), p};
  cert.scale = std::move(contracted.scale);
  cert.relation = ScaleRelation::InputIsScaledOutput;
  return cert;
}

namespace detail {

template <class Scalar>
bool at_most(const Scalar& value, const Scalar& limit) {
  if constexpr (std::is_floating_point_v<Scalar>) {
    return value <= limit * (1.0 + 1e-12);
  } else {
    return value <= limit;
  }
}

}  // namespace detail

/// Maps a (beta, gamma) instance with minimum degree >= 2 (or a single
/// vertex) and fields <= p.mu <= gamma/beta onto the ferromagnetic Ising
/// system (a, a) with a = sqrt(beta gamma) and fields mu_v (beta/gamma)^(d_v/2).
/// Z_in = sqrt(gamma/beta)^|E| Z_out, and every Ising field is at most 1.
template <class Scalar>
ReductionCertificate<Scalar> to_ising(const FieldedGraph<Scalar>& g, const SpinParams<Scalar>& p) {
  if (!(p.beta * p.gamma > Scalar(1))) throw DomainError("Ising transform requires beta*gamma > 1");
  const Scalar ratio = p.gamma / p.beta;
  if (!detail::at_most(p.mu, ratio)) throw DomainError("Ising transform requires mu <= gamma/beta");
  for (VertexIndex v = 0; v < g.size(); ++v) {
    if (g.size() > 1 && g.degree(v) < 2) {
      throw DomainError("vertex '" + g.id(v) + "' has degree " + std::to_string(g.degree(v)) +
                        "; the Ising transform needs minimum degree 2");
    }
    if (!detail::at_most(g.field(v), p.mu)) {
      throw DomainError("vertex '" + g.id(v) + "' has a field above mu");
    }
  }

  const Scalar ratio_root = scalar_sqrt(ratio);
  const Scalar ising_edge = p.beta * ratio_root;  // sqrt(beta gamma)
  ReductionCertificate<Scalar> cert;
  cert.kind = "ising";
  cert.input = {g, p};
  Scalar largest(0);
  for (VertexIndex v = 0; v < g.size(); ++v) {
    const Scalar field = g.field(v) / ipow(ratio_root, static_cast<long long>(g.degree(v)));
    if (g.size() > 1 && !detail::at_most(field, Scalar(1))) {
      throw InternalError("Ising field of '" + g.id(v) + "' exceeds 1");
    }
    if (largest < field) largest = field;
    cert.output.graph.add_vertex(g.id(v), field);
  }
  for (const auto& [u, v] : g.edges()) cert.output.graph.add_edge(u, v);
  cert.output.graph.set_output(g.output());
  cert.output.params = SpinParams<Scalar>(ising_edge, ising_edge, largest > Scalar(0) ? largest : Scalar(1));
  cert.scale = ipow(ratio_root, static_cast<long long>(g.num_edges()));
  cert.relation = ScaleRelation::InputIsScaledOutput;
  return cert;
}

/// Degree-one contraction followed by the Ising transform, composed into a
/// single certificate with Z_in = scale * Z_out.
template <class Scalar>
ReductionCertificate<Scalar> contract_then_ising(const FieldedGraph<Scalar>& g,
                                                 const SpinParams<Scalar>& p) {
  ContractionResult<Scalar> contracted = contract_degree_one(g, p);
  ReductionCertificate<Scalar> ising = to_ising(contracted.graph, p);
  ReductionCertificate<Scalar> cert;
  cert.kind = "pipeline";
  cert.input = {g, p};
  cert.output = std::move(ising.output);
  cert.scale = contracted.scale * ising.scale;
  cert.relation = ScaleRelation::InputIsScaledOutput;
  return cert;
}

/// Evaluates both partition functions and records whether the certificate's
/// identity holds: exactly for exact scalars, to relative error 1e-9 otherwise.
template <class Scalar>
ReductionCertificate<Scalar> verify_reduction(ReductionCertificate<Scalar> cert,
                                              std::size_t enumeration_limit = kDefaultEnumerationLimit) {
  const Scalar z_in = partition_function(cert.input.graph, cert.input.params, enumeration_limit);
  const Scalar z_out = partition_function(cert.output.graph, cert.output.params, enumeration_limit);
  const bool output_scaled = cert.relation == ScaleRelation::OutputIsScaledInput;
  const Scalar lhs = output_scaled ? z_out : z_in;
  const Scalar rhs = output_scaled ? cert.scale * z_in : cert.scale * z_out;
  if constexpr (is_exact_v<Scalar>) {
    cert.verified = lhs == rhs;
    cert.relative_error = cert.verified.value() ? 0.0 : std::abs(to_double(lhs - rhs) / to_double(lhs));
  } else {
    cert.relative_error = std::abs(lhs - rhs) / std::abs(lhs);
    cert.verified = cert.relative_error <= kFloatVerificationTolerance;
  }
  cert.z_input = z_in;
  cert.z_output = z_out;
  return cert;
}

/// Integers x, y >= 0 with |y b - x a - ln(target/mu)| <= 1/m, where
/// a = ln(gamma/beta) and b = ln((mu beta + 1)/(mu + gamma)); the gadget is a
/// single output vertex with x self-loops and y pendant bristles, realizing
/// mu (beta/gamma)^x ((mu beta + 1)/(mu + gamma))^y. The returned pair has the
/// smallest x among all solutions. Requires gamma > beta > 1 and
/// mu > (gamma - 1)/(beta - 1).
SelfLoopRealization realize_field_selfloops(double target, long long m, const SpinParams<double>& p);

}  // namespace twospin

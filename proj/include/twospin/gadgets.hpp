#pragma once

// Vertex-weight gadgets built from stars, d-ary trees and the comb join.
//
// A gadget is an immutable tree description; identical subtrees are shared,
// so gadgets whose materialized size is exponential in the recursion depth
// stay small in memory and evaluate in time linear in their description.

#include <cstdint>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "twospin/recursion.hpp"
#include "twospin/spin_core.hpp"

namespace twospin {

inline constexpr std::size_t kDefaultMaterializeLimit = 1'000'000;

class Gadget {
 public:
  enum class Kind { Star, Tree, Comb, Leaf };

  /// w-star with its center as output; star(0) is a single vertex.
  static Gadget star(std::uint64_t w);
  /// Full d-ary tree of depth t rooted at the output; tree(d, 0) is a single vertex.
  static Gadget tree(int d, int t);
  /// Fresh root joined to the output of every child. Throws on empty input.
  static Gadget comb(std::vector<Gadget> children);
  /// Fixed effective field; for exercising comb only, never materialized.
  static Gadget leaf(double field);

  Kind kind() const;
  std::uint64_t star_size() const;  // w of a star
  int arity() const;                // d of a tree
  int depth_parameter() const;      // t of a tree
  double leaf_field() const;
  const std::vector<Gadget>& children() const;

  /// Vertex count of the materialized graph. Throws CapacityError on
  /// 64-bit overflow.
  std::uint64_t size() const;
  /// Longest root-to-leaf path, in edges.
  std::uint64_t height() const;

  /// Identity of the shared node; equal ids imply equal gadgets.
  const void* node_id() const { return node_.get(); }

 private:
  struct StarNode {
    std::uint64_t w;
  };
  struct TreeNode {
    int d;
    int t;
  };
  struct CombNode {
    std::vector<Gadget> children;
  };
  struct LeafNode {
    double field;
  };
  using Node = std::variant<StarNode, TreeNode, CombNode, LeafNode>;

  explicit Gadget(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  std::shared_ptr<const Node> node_;
};

/// Exact effective field via mu(comb(G_1..G_k)) = mu * prod h(mu(G_i)),
/// mu(S_w) = mu h(mu)^w and mu(T_t) = f(mu(T_{t-1})).
double gadget_field(const Gadget& g, const SpinParams<double>& p);

/// Convenience: comb of the given children.
inline Gadget comb(std::vector<Gadget> children) { return Gadget::comb(std::move(children)); }

/// Materializes the gadget as a tree graph with every field equal to mu and
/// the output at the root. Vertices are numbered in depth-first preorder.
template <class Scalar = double>
FieldedGraph<Scalar> materialize(const Gadget& g, const Scalar& mu,
                                 std::size_t limit = kDefaultMaterializeLimit);

struct ConvergenceRow {
  int index = 0;       // w for stars, t for trees
  double field = 0;    // mu(S_w) or mu(T_t)
  double bound = 0;    // mu beta^w, or exp(c^t iota)
  double log_ratio = 0;  // trees: ln(mu(T_t)/mu_star); stars: ln(field/mu)
  bool holds = false;
};

/// Rows w = 0..w_max of mu(S_w) = mu h(mu)^w against mu beta^w. For beta < 1
/// a row holds when field < bound (w >= 1); for beta = 1 when the sequence is
/// strictly decreasing. Requires beta <= 1.
std::vector<ConvergenceRow> star_convergence(const SpinParams<double>& p, int w_max);

/// Rows t = 0..t_max checking 1 < mu(T_t)/mu_star <= exp(c^t iota) with the
/// constants of decay_constants(rp).
std::vector<ConvergenceRow> tree_convergence(const RecursionParams& rp, int t_max);

}  // namespace twospin

#include "twospin/gadgets.hpp"

#include <cmath>
#include <limits>
#include <unordered_map>

namespace twospin {

namespace {

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  if (a > std::numeric_limits<std::uint64_t>::max() - b) {
    throw CapacityError("gadget size overflows 64 bits");
  }
  return a + b;
}

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) {
    throw CapacityError("gadget size overflows 64 bits");
  }
  return a * b;
}

std::uint64_t tree_size(int d, int t) {
  std::uint64_t total = 0;
  std::uint64_t level = 1;
  for (int depth = 0; depth <= t; ++depth) {
    total = checked_add(total, level);
    if (depth < t) level = checked_mul(level, static_cast<std::uint64_t>(d));
  }
  return total;
}

class FieldEvaluator {
 public:
  explicit FieldEvaluator(const SpinParams<double>& p) : p_(p), h_mu_(h(p.mu, p)) {}

  double operator()(const Gadget& g) {
    if (const auto it = memo_.find(g.node_id()); it != memo_.end()) return it->second;
    double value = 0.0;
    switch (g.kind()) {
      case Gadget::Kind::Star:
        value = p_.mu * std::pow(h_mu_, static_cast<double>(g.star_size()));
        break;
      case Gadget::Kind::Tree: {
        value = p_.mu;
        for (int t = 0; t < g.depth_parameter(); ++t) {
          value = p_.mu * std::pow(h(value, p_), g.arity());
        }
        break;
      }
      case Gadget::Kind::Comb: {
        value = p_.mu;
        for (const Gadget& child : g.children()) value *= h((*this)(child), p_);
        break;
      }
      case Gadget::Kind::Leaf:
        value = g.leaf_field();
        break;
    }
    memo_.emplace(g.node_id(), value);
    return value;
  }

 private:
  SpinParams<double> p_;
  double h_mu_;
  std::unordered_map<const void*, double> memo_;
};

}  // namespace

Gadget Gadget::star(std::uint64_t w) {
  return Gadget(std::make_shared<const Node>(StarNode{w}));
}

Gadget Gadget::tree(int d, int t) {
  if (d < 1) throw DomainError("tree arity must be positive");
  if (t < 0) throw DomainError("tree depth must be non-negative");
  return Gadget(std::make_shared<const Node>(TreeNode{d, t}));
}

Gadget Gadget::comb(std::vector<Gadget> children) {
  if (children.empty()) throw DomainError("comb needs at least one child");
  return Gadget(std::make_shared<const Node>(CombNode{std::move(children)}));
}

Gadget Gadget::leaf(double field) {
  if (!(field > 0.0)) throw DomainError("leaf field must be positive");
  return Gadget(std::make_shared<const Node>(LeafNode{field}));
}

Gadget::Kind Gadget::kind() const {
  return static_cast<Kind>(node_->index());
}

std::uint64_t Gadget::star_size() const { return std::get<StarNode>(*node_).w; }
int Gadget::arity() const { return std::get<TreeNode>(*node_).d; }
int Gadget::depth_parameter() const { return std::get<TreeNode>(*node_).t; }
double Gadget::leaf_field() const { return std::get<LeafNode>(*node_).field; }
const std::vector<Gadget>& Gadget::children() const { return std::get<CombNode>(*node_).children; }

namespace {

// Memoized over shared nodes, so described size stays linear even when the
// materialized graph is exponential.
template <class Combine>
std::uint64_t fold_nodes(const Gadget& g, std::unordered_map<const void*, std::uint64_t>& memo,
                         Combine combine) {
  if (const auto it = memo.find(g.node_id()); it != memo.end()) return it->second;
  std::vector<std::uint64_t> child_values;
  if (g.kind() == Gadget::Kind::Comb) {
    for (const Gadget& child : g.children()) child_values.push_back(fold_nodes(child, memo, combine));
  }
  const std::uint64_t value = combine(g, child_values);
  memo.emplace(g.node_id(), value);
  return value;
}

}  // namespace

std::uint64_t Gadget::size() const {
  std::unordered_map<const void*, std::uint64_t> memo;
  return fold_nodes(*this, memo, [](const Gadget& g, const std::vector<std::uint64_t>& children) {
    switch (g.kind()) {
      case Kind::Star:
        return checked_add(g.star_size(), 1);
      case Kind::Tree:
        return tree_size(g.arity(), g.depth_parameter());
      case Kind::Comb: {
        std::uint64_t total = 1;
        for (std::uint64_t child : children) total = checked_add(total, child);
        return total;
      }
      case Kind::Leaf:
        return std::uint64_t{1};
    }
    return std::uint64_t{0};
  });
}

std::uint64_t Gadget::height() const {
  std::unordered_map<const void*, std::uint64_t> memo;
  return fold_nodes(*this, memo, [](const Gadget& g, const std::vector<std::uint64_t>& children) {
    switch (g.kind()) {
      case Kind::Star:
        return std::uint64_t{g.star_size() > 0 ? 1U : 0U};
      case Kind::Tree:
        return static_cast<std::uint64_t>(g.depth_parameter());
      case Kind::Comb: {
        std::uint64_t deepest = 0;
        for (std::uint64_t child : children) deepest = std::max(deepest, child);
        return deepest + 1;
      }
      case Kind::Leaf:
        return std::uint64_t{0};
    }
    return std::uint64_t{0};
  });
}

double gadget_field(const Gadget& g, const SpinParams<double>& p) {
  FieldEvaluator evaluate(p);
  return evaluate(g);
}

template <class Scalar>
FieldedGraph<Scalar> materialize(const Gadget& g, const Scalar& mu, std::size_t limit) {
  const std::uint64_t n = g.size();
  if (n > limit) {
    throw CapacityError("gadget has " + std::to_string(n) + " vertices; materialization limit is " +
                        std::to_string(limit));
  }
  FieldedGraph<Scalar> out;
  struct Frame {
    Gadget gadget;
    std::optional<VertexIndex> parent;
  };
  std::vector<Frame> stack{{g, std::nullopt}};
  auto new_vertex = [&](std::optional<VertexIndex> parent) {
    const VertexIndex v = out.add_vertex("v" + std::to_string(out.size()), mu);
    if (parent) out.add_edge(*parent, v);
    return v;
  };
  while (!stack.empty()) {
    Frame frame = std::move(stack.back());
    stack.pop_back();
    const Gadget& node = frame.gadget;
    switch (node.kind()) {
      case Gadget::Kind::Star: {
        const VertexIndex center = new_vertex(frame.parent);
        for (std::uint64_t i = 0; i < node.star_size(); ++i) new_vertex(center);
        break;
      }
      case Gadget::Kind::Tree: {
        const VertexIndex root = new_vertex(frame.parent);
        if (node.depth_parameter() > 0) {
          const Gadget child = Gadget::tree(node.arity(), node.depth_parameter() - 1);
          for (int i = 0; i < node.arity(); ++i) stack.push_back({child, root});
        }
        break;
      }
      case Gadget::Kind::Comb: {
        const VertexIndex root = new_vertex(frame.parent);
        const auto& children = node.children();
        for (auto it = children.rbegin(); it != children.rend(); ++it) stack.push_back({*it, root});
        break;
      }
      case Gadget::Kind::Leaf:
        throw DomainError("leaf gadgets carry a synthetic field and cannot be materialized");
    }
  }
  out.set_output(VertexIndex{0});
  return out;
}

template FieldedGraph<double> materialize<double>(const Gadget&, const double&, std::size_t);
template FieldedGraph<QuadraticNumber> materialize<QuadraticNumber>(const Gadget&,
                                                                    const QuadraticNumber&,
                                                                    std::size_t);

std::vector<ConvergenceRow> star_convergence(const SpinParams<double>& p, int w_max) {
  if (w_max < 0) throw DomainError("w_max must be non-negative");
  if (p.beta > 1.0) throw DomainError("star convergence requires beta <= 1");
  if (!(p.beta * p.gamma > 1.0)) throw DomainError("star convergence requires beta*gamma > 1");
  const double rate = h(p.mu, p);
  std::vector<ConvergenceRow> rows;
  double previous = std::numeric_limits<double>::infinity();
  for (int w = 0; w <= w_max; ++w) {
    ConvergenceRow row;
    row.index = w;
    row.field = gadget_field(Gadget::star(static_cast<std::uint64_t>(w)), p);
    row.bound = p.mu * std::pow(p.beta, w);
    row.log_ratio = w * std::log(rate);
    if (w == 0) {
      row.holds = row.field == p.mu;
    } else if (p.beta < 1.0) {
      row.holds = row.field < row.bound && row.field < previous;
    } else {
      row.holds = row.field < previous;
    }
    previous = row.field;
    rows.push_back(row);
  }
  return rows;
}

std::vector<ConvergenceRow> tree_convergence(const RecursionParams& rp, int t_max) {
  const DecayConstants constants = decay_constants(rp);
  const std::vector<double> gaps = tree_log_gaps(rp, constants.mu_star, t_max);
  std::vector<ConvergenceRow> rows;
  for (int t = 0; t <= t_max; ++t) {
    ConvergenceRow row;
    row.index = t;
    row.field = gadget_field(Gadget::tree(rp.d, t), rp.params);
    row.log_ratio = gaps[static_cast<std::size_t>(t)];
    const double log_bound = std::pow(constants.decay_rate, t) * constants.iota;
    row.bound = std::exp(log_bound);
    row.holds = row.log_ratio > 0.0 && row.log_ratio <= log_bound;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace twospin

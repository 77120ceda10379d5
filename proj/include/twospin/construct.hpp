#pragma once

// Recursive gadget construction targeting an arbitrary field in (0, mu_star].
//
// construct(ell, target) combs k singletons, d-1 basic gadgets (long stars
// standing in for field 0 or deep d-ary trees standing in for mu_star) and
// one child that is either built recursively at depth ell-1 or, when its
// target is tiny, a star. Because each level contracts log-errors by at
// least alpha, the error of a depth-ell gadget is (ln gamma + ell) alpha^ell.

#include <cstdint>
#include <optional>
#include <vector>

#include "twospin/gadgets.hpp"
#include "twospin/recursion.hpp"

namespace twospin {

/// Loop state inside one construction level: position i in 1..d and the
/// residual target mu_i that the remaining d-i+1 factors must produce.
struct LevelState {
  int i = 1;
  double mu_i = 0;
};

/// One basic-gadget substitution y_i -> Y_i.
struct BranchRecord {
  int i = 0;
  double mu_i = 0;
  bool zero_branch = false;   // y_i = 0 (star) versus y_i = mu_star (tree)
  double condition_lhs = 0;   // mu h(mu_star) h(0)^(d-i), compared with mu_i
  double y = 0;
  std::uint64_t parameter = 0;  // w of the star or t of the tree
  double basic_field = 0;     // mu(Y_i)
  double log_slack = 0;       // ln h(mu(Y_i)) - ln h(y_i)
};

struct LevelRecord {
  int ell = 0;
  double target = 0;
  std::uint64_t k = 0;
  std::vector<BranchRecord> branches;
  double mu_d = 0;
  double next_target = 0;     // mu-hat', or 0 at ell = 0
  double cutoff = 0;          // delta
  bool cut_off = false;       // next_target <= delta, closed by a star
  std::uint64_t cutoff_star = 0;
  double cutoff_log_slack = 0;
};

struct ConstructReport {
  Gadget gadget = Gadget::star(0);
  double target = 0;
  double achieved = 0;
  double log_error = 0;   // ln(achieved/target)
  double bound = 0;       // (ln gamma + ell) alpha^ell
  std::uint64_t size = 0;
  std::uint64_t height = 0;
  int depth = 0;          // ell
  double alpha = 0;
  double base_error_const = 0;  // ln gamma
  std::vector<LevelRecord> trace;
};

/// log(size) = intercept + slope * ell, least squares over a sweep.
struct SizeGrowthFit {
  double intercept = 0;
  double slope = 0;
  double max_abs_residual = 0;
};

/// true iff mu h(0)^(d-i+1) < mu_i <= mu h(mu_star)^(d-i+1), i.e. the
/// remaining equation mu h(x)^(d-i+1) = mu_i has a root in (0, mu_star].
/// The upper end is closed up to `relative_tolerance`.
bool check_invariant(const LevelState& state, const RecursionParams& rp, double mu_star,
                     double relative_tolerance = 1e-9);

/// Holds the recursion constants so sweeps do not recompute them.
class GadgetBuilder {
 public:
  /// Requires beta <= 1, beta gamma > 1, beta (beta gamma)^d > 1 and mu above
  /// lemma_mu_bound(beta, gamma, d).
  explicit GadgetBuilder(RecursionParams rp);

  Gadget construct(int ell, double target) const;
  ConstructReport certify(int ell, double target) const;

  const RecursionParams& params() const { return rp_; }
  const DecayConstants& constants() const { return constants_; }
  double mu_star() const { return constants_.mu_star; }

  /// Star length that pushes a field below alpha^ell/d.
  std::uint64_t vanishing_star(int ell) const;
  /// Tree depth that puts a field within exp(alpha^ell/d) of mu_star.
  int saturating_tree_depth(int ell) const;
  /// delta: next targets at or below it are closed by a star.
  double cutoff(int ell) const;

 private:
  Gadget build(int ell, double target, std::vector<LevelRecord>* trace) const;

  RecursionParams rp_;
  DecayConstants constants_;
  double h_mu_ = 0;
  double h_zero_ = 0;
  double h_star_ = 0;
};

Gadget construct(int ell, double target, const RecursionParams& rp);
ConstructReport certify(int ell, double target, const RecursionParams& rp);

SizeGrowthFit fit_size_growth(const std::vector<int>& ells, const std::vector<double>& sizes);

}  // namespace twospin

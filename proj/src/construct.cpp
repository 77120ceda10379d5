#include "twospin/construct.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <sstream>

namespace twospin {

namespace {

constexpr double kTargetTolerance = 1e-9;

// k >= 0 with top * rate^(k+1) < target <= top * rate^k, for 0 < rate < 1.
std::uint64_t geometric_slot(double target, double top, double rate) {
  const double log_target = std::log(target);
  const double log_top = std::log(top);
  const double log_rate = std::log(rate);
  auto level = [&](std::uint64_t k) { return log_top + static_cast<double>(k) * log_rate; };
  const double estimate = std::floor((log_target - log_top) / log_rate);
  std::uint64_t k = estimate > 0.0 ? static_cast<std::uint64_t>(estimate) : 0;
  while (k > 0 && level(k) < log_target) --k;
  while (level(k + 1) >= log_target) ++k;
  return k;
}

}  // namespace

bool check_invariant(const LevelState& state, const RecursionParams& rp, double mu_star,
                     double relative_tolerance) {
  const int remaining = rp.d - state.i + 1;
  if (remaining < 1) return false;
  const double lower = rp.mu() * std::pow(h(0.0, rp.params), remaining);
  const double upper = rp.mu() * std::pow(h(mu_star, rp.params), remaining);
  return lower < state.mu_i && state.mu_i <= upper * (1.0 + relative_tolerance);
}

GadgetBuilder::GadgetBuilder(RecursionParams rp) : rp_(std::move(rp)) {
  const double bound = lemma_mu_bound(rp_.beta(), rp_.gamma(), rp_.d);
  if (!(rp_.mu() > bound)) {
    std::ostringstream msg;
    msg << "construction requires mu > " << bound << " for (beta, gamma, d) = (" << rp_.beta()
        << ", " << rp_.gamma() << ", " << rp_.d << ")";
    throw DomainError(msg.str());
  }
  constants_ = decay_constants(rp_);
  h_mu_ = h(rp_.mu(), rp_.params);
  h_zero_ = h(0.0, rp_.params);
  h_star_ = h(constants_.mu_star, rp_.params);
}

std::uint64_t GadgetBuilder::vanishing_star(int ell) const {
  const double log_goal = ell * std::log(constants_.alpha) - std::log(rp_.d * rp_.mu());
  if (log_goal >= 0.0) return 0;
  // smallest w with mu h(mu)^w <= alpha^ell / d
  const double log_rate = std::log(h_mu_);
  double estimate = std::ceil(log_goal / log_rate);
  std::uint64_t w = estimate > 0.0 ? static_cast<std::uint64_t>(estimate) : 0;
  while (w > 0 && static_cast<double>(w - 1) * log_rate <= log_goal) --w;
  while (static_cast<double>(w) * log_rate > log_goal) ++w;
  if (rp_.beta() < 1.0) {
    const double paper = std::floor(log_goal / std::log(rp_.beta())) + 1.0;
    if (paper > static_cast<double>(w)) w = static_cast<std::uint64_t>(paper);
  }
  return w;
}

int GadgetBuilder::saturating_tree_depth(int ell) const {
  const double numerator =
      ell * std::log(constants_.alpha) - std::log(static_cast<double>(rp_.d)) - std::log(constants_.iota);
  const double t = std::floor(numerator / std::log(constants_.decay_rate)) + 1.0;
  return t > 0.0 ? static_cast<int>(t) : 0;
}

double GadgetBuilder::cutoff(int ell) const {
  const double log_gamma = std::log(rp_.gamma());
  const double log_alpha = std::log(constants_.alpha);
  const double log_dmu = std::log(rp_.d * rp_.mu());
  auto delta_for = [&](double rate) {
    const double log_rate = std::log(rate);
    return std::exp(-(log_gamma * log_alpha / log_rate) * ell + log_gamma * log_dmu / log_rate +
                    std::log(rp_.mu() / rp_.gamma()));
  };
  double delta = delta_for(h_mu_);
  if (rp_.beta() < 1.0) delta = std::min(delta, delta_for(rp_.beta()));
  return delta;
}

Gadget GadgetBuilder::construct(int ell, double target) const { return build(ell, target, nullptr); }

Gadget GadgetBuilder::build(int ell, double target, std::vector<LevelRecord>* trace) const {
  if (ell < 0) throw DomainError("recursion depth must be non-negative");
  const double mu_star = constants_.mu_star;
  if (!(target > 0.0 && target <= mu_star * (1.0 + kTargetTolerance))) {
    std::ostringstream msg;
    msg << "target " << target << " is outside (0, mu_star] = (0, " << mu_star << "]";
    throw DomainError(msg.str());
  }
  target = std::min(target, mu_star);
  const double mu = rp_.mu();
  const SpinParams<double>& p = rp_.params;

  LevelRecord record;
  record.ell = ell;
  record.target = target;

  if (ell == 0) {
    record.k = geometric_slot(target, mu, h_mu_);
    if (trace) trace->push_back(record);
    return Gadget::star(record.k);
  }

  record.k = geometric_slot(target, mu_star, h_mu_);
  std::vector<Gadget> parts(record.k, Gadget::star(0));
  double mu_i = target / std::pow(h_mu_, static_cast<double>(record.k));

  for (int i = 1; i <= rp_.d - 1; ++i) {
    if (!check_invariant({i, mu_i}, rp_, mu_star)) {
      std::ostringstream msg;
      msg << "construction invariant violated at ell=" << ell << ", i=" << i << ", mu_i=" << mu_i;
      throw InternalError(msg.str());
    }
    BranchRecord branch;
    branch.i = i;
    branch.mu_i = mu_i;
    branch.condition_lhs = mu * h_star_ * std::pow(h_zero_, rp_.d - i);
    branch.zero_branch = branch.condition_lhs >= mu_i;
    Gadget basic = Gadget::star(0);
    if (branch.zero_branch) {
      branch.y = 0.0;
      branch.parameter = vanishing_star(ell);
      basic = Gadget::star(branch.parameter);
    } else {
      branch.y = mu_star;
      const int t = saturating_tree_depth(ell);
      branch.parameter = static_cast<std::uint64_t>(t);
      basic = Gadget::tree(rp_.d, t);
    }
    branch.basic_field = gadget_field(basic, p);
    branch.log_slack = std::log(h(branch.basic_field, p)) - std::log(h(branch.y, p));
    parts.push_back(basic);
    mu_i /= h(branch.y, p);
    record.branches.push_back(branch);
  }

  if (!check_invariant({rp_.d, mu_i}, rp_, mu_star)) {
    std::ostringstream msg;
    msg << "construction invariant violated at ell=" << ell << ", i=d, mu_d=" << mu_i;
    throw InternalError(msg.str());
  }
  record.mu_d = mu_i;
  // mu h(x) = mu_d; the invariant puts mu_d/mu in (h(0), h(mu_star)]
  const double ratio = std::min(mu_i / mu, h_star_);
  double next = solve_h_inverse(ratio, p);
  if (next > mu_star) {
    if (next > mu_star * (1.0 + kTargetTolerance)) {
      throw InternalError("inverted target exceeds mu_star");
    }
    next = mu_star;
  }
  record.next_target = next;
  record.cutoff = cutoff(ell);

  Gadget last = Gadget::star(0);
  std::vector<LevelRecord> deeper;
  if (next <= record.cutoff) {
    record.cut_off = true;
    // largest w with mu gamma^-w > delta
    const double log_ratio = std::log(mu / record.cutoff);
    const double log_gamma = std::log(rp_.gamma());
    double estimate = std::ceil(log_ratio / log_gamma) - 1.0;
    std::uint64_t w = estimate > 0.0 ? static_cast<std::uint64_t>(estimate) : 0;
    while (static_cast<double>(w + 1) * log_gamma < log_ratio) ++w;
    while (w > 0 && static_cast<double>(w) * log_gamma >= log_ratio) --w;
    record.cutoff_star = w;
    last = Gadget::star(w);
    record.cutoff_log_slack = std::log(h(gadget_field(last, p), p)) - std::log(h(next, p));
  } else {
    last = build(ell - 1, next, trace ? &deeper : nullptr);
  }
  parts.push_back(last);

  if (trace) {
    trace->push_back(record);
    for (auto& level : deeper) trace->push_back(std::move(level));
  }
  return Gadget::comb(std::move(parts));
}

ConstructReport GadgetBuilder::certify(int ell, double target) const {
  ConstructReport report;
  report.gadget = build(ell, target, &report.trace);
  report.target = std::min(target, constants_.mu_star);
  report.achieved = gadget_field(report.gadget, rp_.params);
  report.log_error = std::log(report.achieved / report.target);
  report.alpha = constants_.alpha;
  report.base_error_const = std::log(rp_.gamma());
  report.bound = (report.base_error_const + ell) * std::pow(constants_.alpha, ell);
  report.size = report.gadget.size();
  report.height = report.gadget.height();
  report.depth = ell;
  return report;
}

Gadget construct(int ell, double target, const RecursionParams& rp) {
  return GadgetBuilder(rp).construct(ell, target);
}

ConstructReport certify(int ell, double target, const RecursionParams& rp) {
  return GadgetBuilder(rp).certify(ell, target);
}

SizeGrowthFit fit_size_growth(const std::vector<int>& ells, const std::vector<double>& sizes) {
  if (ells.size() != sizes.size() || ells.size() < 2) {
    throw DomainError("size fit needs at least two (ell, size) pairs");
  }
  const Eigen::Index n = static_cast<Eigen::Index>(ells.size());
  Eigen::MatrixXd design(n, 2);
  Eigen::VectorXd log_size(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(sizes[static_cast<std::size_t>(i)] > 0.0)) throw DomainError("sizes must be positive");
    design(i, 0) = 1.0;
    design(i, 1) = ells[static_cast<std::size_t>(i)];
    log_size(i) = std::log(sizes[static_cast<std::size_t>(i)]);
  }
  const Eigen::Vector2d coefficients = design.colPivHouseholderQr().solve(log_size);
  SizeGrowthFit fit;
  fit.intercept = coefficients(0);
  fit.slope = coefficients(1);
  fit.max_abs_residual = (design * coefficients - log_size).cwiseAbs().maxCoeff();
  return fit;
}

}  // namespace twospin

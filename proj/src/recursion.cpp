#include "twospin/recursion.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace twospin {

namespace {

constexpr int kMaxFixedPointIterations = 1'000'000;
constexpr int kDecayGridPoints = 10'000;

}  // namespace

RecursionParams::RecursionParams(SpinParams<double> p, int arity)
    : params(p), d(arity) {
  if (d < 1) throw DomainError("arity d must be a positive integer");
  if (!(params.beta * params.gamma > 1.0)) {
    throw DomainError("recursion requires a ferromagnetic system (beta*gamma > 1)");
  }
  if (params.beta > 1.0) throw DomainError("recursion requires beta <= 1");
  if (!(params.beta * std::pow(params.beta * params.gamma, d) > 1.0)) {
    throw DomainError("recursion requires beta*(beta*gamma)^d > 1");
  }
}

double h(double x, const SpinParams<double>& p) {
  return (p.beta * x + 1.0) / (x + p.gamma);
}

double f(double x, const RecursionParams& rp) {
  return rp.mu() * std::pow(h(x, rp.params), rp.d);
}

double h_log_derivative(double x, const SpinParams<double>& p) {
  return (p.beta * p.gamma - 1.0) * x / ((x + p.gamma) * (p.beta * x + 1.0));
}

Eigen::ArrayXd h_log_derivative(const Eigen::ArrayXd& x, const SpinParams<double>& p) {
  return (p.beta * p.gamma - 1.0) * x / ((x + p.gamma) * (p.beta * x + 1.0));
}

double f_log_derivative(double x, const RecursionParams& rp) {
  return rp.d * h_log_derivative(x, rp.params);
}

double contraction_rate(const SpinParams<double>& p) {
  if (!(p.beta * p.gamma > 1.0)) throw DomainError("contraction rate requires beta*gamma > 1");
  const double root = std::sqrt(p.beta * p.gamma);
  return (root - 1.0) / (root + 1.0);
}

std::vector<double> mu_star_iterates(const RecursionParams& rp, double tolerance) {
  if (!(tolerance > 0.0)) throw DomainError("tolerance must be positive");
  std::vector<double> iterates{rp.mu()};
  double x = rp.mu();
  for (int i = 0; i < kMaxFixedPointIterations; ++i) {
    const double next = f(x, rp);
    if (!(next < x)) return iterates;  // stalled at double resolution
    iterates.push_back(next);
    if (x - next <= tolerance * next) return iterates;
    x = next;
  }
  throw NumericError("fixed-point iteration did not converge within " +
                     std::to_string(kMaxFixedPointIterations) + " steps");
}

double solve_mu_star(const RecursionParams& rp, double tolerance) {
  double x = mu_star_iterates(rp, tolerance).back();
  // Newton on ln f(x) - ln x removes the residual bias of the stopped
  // iteration, which always ends slightly above the fixed point.
  auto residual = [&](double y) { return std::log(f(y, rp)) - std::log(y); };
  double r = residual(x);
  for (int i = 0; i < 8 && r != 0.0; ++i) {
    const double slope = (f_log_derivative(x, rp) - 1.0) / x;
    const double candidate = x - r / slope;
    const double next_r = residual(candidate);
    if (!(std::abs(next_r) < std::abs(r))) break;
    x = candidate;
    r = next_r;
  }
  return x;
}

std::vector<double> tree_log_gaps(const RecursionParams& rp, double mu_star, int t_max) {
  if (t_max < 0) throw DomainError("t_max must be non-negative");
  const double beta = rp.beta();
  const double gamma = rp.gamma();
  const double bg1 = beta * gamma - 1.0;
  std::vector<double> gaps;
  gaps.reserve(static_cast<std::size_t>(t_max) + 1);
  double gap = std::log(rp.mu() / mu_star);
  gaps.push_back(gap);
  for (int t = 1; t <= t_max; ++t) {
    // h(x)/h(mu*) - 1 = (bg - 1)(x - mu*)/((x + gamma)(beta mu* + 1))
    const double excess = mu_star * std::expm1(gap);
    const double x = mu_star + excess;
    const double ratio_minus_one = bg1 * excess / ((x + gamma) * (beta * mu_star + 1.0));
    gap = rp.d * std::log1p(ratio_minus_one);
    gaps.push_back(gap);
  }
  return gaps;
}

DecayConstants decay_constants(const RecursionParams& rp) {
  DecayConstants out;
  out.alpha = contraction_rate(rp.params);
  out.mu_star = solve_mu_star(rp);
  out.g_at_fixed_point = f_log_derivative(out.mu_star, rp);
  if (!(out.g_at_fixed_point > 0.0 && out.g_at_fixed_point < 1.0)) {
    throw NumericError("f is not a contraction at its largest fixed point");
  }
  out.decay_rate = 0.5 * (out.g_at_fixed_point + 1.0);

  double eta = 0.5 * out.mu_star;
  for (int halvings = 0;; ++halvings) {
    if (halvings > 200) throw NumericError("no window around mu_star with sup g <= c");
    const Eigen::ArrayXd grid =
        Eigen::ArrayXd::LinSpaced(kDecayGridPoints, out.mu_star - eta, out.mu_star + eta);
    const double sup = rp.d * h_log_derivative(grid, rp.params).maxCoeff();
    if (sup <= out.decay_rate) break;
    eta *= 0.5;
  }
  out.eta = eta;

  int t0 = 0;
  double x = rp.mu();
  while (!(x < out.mu_star + eta)) {
    if (t0 >= kMaxFixedPointIterations) throw NumericError("tree sequence never entered the window");
    x = f(x, rp);
    ++t0;
  }
  out.t0 = t0;

  // Depths before t0 are outside the contraction window, so their gaps are
  // folded into iota directly.
  const std::vector<double> gaps = tree_log_gaps(rp, out.mu_star, t0);
  double iota = std::max(std::log(rp.mu()), eta * std::pow(out.decay_rate, -t0));
  for (int t = 0; t <= t0; ++t) {
    iota = std::max(iota, gaps[static_cast<std::size_t>(t)] * std::pow(out.decay_rate, -t));
  }
  out.iota = iota;
  return out;
}

double solve_h_inverse(double t, const SpinParams<double>& p) {
  if (!(t > 1.0 / p.gamma && t < p.beta)) {
    std::ostringstream msg;
    msg << "h^{-1}(" << t << ") is undefined: h maps (0, inf) onto (1/gamma, beta) = ("
        << 1.0 / p.gamma << ", " << p.beta << ")";
    throw DomainError(msg.str());
  }
  return (t * p.gamma - 1.0) / (p.beta - t);
}

double lemma_mu_bound(double beta, double gamma, int d) {
  const double growth = beta * std::pow(beta * gamma, d);
  if (!(growth > 1.0)) throw DomainError("lemma bound requires beta*(beta*gamma)^d > 1");
  return std::pow(gamma, d) * (beta * gamma - 1.0) / beta * (1.0 + (d + 1.0) / std::log(growth));
}

double ising_fixed_point_slope(double beta, double mu, int children) {
  auto step = [&](double x) { return mu * std::pow((beta * x + 1.0) / (x + beta), children); };
  // F is decreasing, so F(x) - x has exactly one root in [F(inf), F(0)].
  double lo = std::min(mu * std::pow(beta, children), mu / std::pow(beta, children));
  double hi = std::max(mu * std::pow(beta, children), mu / std::pow(beta, children));
  for (int i = 0; i < 400 && hi - lo > 1e-15 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (step(mid) > mid) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double x = 0.5 * (lo + hi);
  return children * x * (1.0 - beta * beta) / ((beta * x + 1.0) * (x + beta));
}

double uniqueness_threshold(double beta, int delta, TreeBranching branching) {
  if (delta < 3) throw DomainError("Delta must be at least 3");
  if (!(beta > 0.0 && beta < 1.0)) throw DomainError("uniqueness threshold requires 0 < beta < 1");
  if (!(beta < (delta - 1.0) / (delta + 1.0))) {
    throw DomainError("uniqueness threshold requires beta < (Delta-1)/(Delta+1)");
  }
  const int children = branching == TreeBranching::Delta ? delta : delta - 1;
  if (ising_fixed_point_slope(beta, 1.0, children) <= 1.0) {
    throw DomainError("the tree with " + std::to_string(children) +
                      " children is in uniqueness already at mu = 1; no threshold above 1");
  }
  // The slope at the fixed point decreases in mu for mu > 1.
  double lo = 0.0;
  double hi = 1.0;
  while (ising_fixed_point_slope(beta, std::exp(hi), children) > 1.0) {
    hi *= 2.0;
    if (hi > 1e4) throw NumericError("uniqueness threshold search diverged");
  }
  for (int i = 0; i < 200 && hi - lo > 1e-14 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (ising_fixed_point_slope(beta, std::exp(mid), children) > 1.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return std::exp(hi);
}

HardnessThresholds hardness_thresholds(double beta, double gamma) {
  if (!(beta >= 0.0 && gamma > 0.0)) throw DomainError("beta and gamma must be non-negative");
  if (!(beta * gamma > 1.0)) throw DomainError("thresholds require beta*gamma > 1");
  if (!(beta < gamma)) throw DomainError("thresholds require beta < gamma");

  HardnessThresholds out;
  const double root = std::sqrt(beta * gamma);
  out.delta = static_cast<int>(std::floor((root + 1.0) / (root - 1.0))) + 1;
  out.anti_ferro_edge = 1.0 / root;
  out.mu_bound_bounded = std::pow(gamma / beta, 0.5 * out.delta);

  int d = 1;
  while (!(beta * std::pow(beta * gamma, d) > 1.0)) {
    if (++d > 1'000'000) throw NumericError("no arity d with beta*(beta*gamma)^d > 1 found");
  }
  out.d = d;

  if (beta <= 1.0) {
    const double growth = std::log(beta * std::pow(beta * gamma, d));
    const double second = (beta * gamma - 1.0) / beta * (1.0 + (d + 1.0) / growth);
    out.mu_bound_uniform = std::pow(gamma, d) * std::max(out.mu_bound_bounded, second);
    out.lemma_mu_bound = lemma_mu_bound(beta, gamma, d);
    out.note =
        "mu_bound_uniform is the closed-form bound gamma^d * max{(gamma/beta)^(Delta/2), "
        "((beta*gamma-1)/beta)(1+(d+1)/ln(beta(beta*gamma)^d))}; for (beta,gamma)=(1,2) it "
        "evaluates to 16, not the value 12 quoted in some accounts";
  } else {
    out.mu_bound_large_beta = (gamma - 1.0) / (beta - 1.0);
    out.note = "beta > 1: any mu above (gamma-1)/(beta-1) lets loops and bristles realize every field";
  }
  return out;
}

}  // namespace twospin

#pragma once

// Scalar tree recursion for ferromagnetic two-spin systems.
//
// h(x) = (beta x + 1)/(x + gamma) is the factor a child with effective
// field x contributes to its parent; f(x) = mu h(x)^d is one level of a
// d-ary tree. mu_star is the largest fixed point of f, and the decay
// constants quantify how fast d-ary trees converge to it.

#include <Eigen/Core>
#include <optional>
#include <string>
#include <vector>

#include "twospin/spin_core.hpp"

namespace twospin {

/// Spin parameters plus the tree arity d. Requires beta*gamma > 1,
/// beta <= 1 and beta (beta gamma)^d > 1.
struct RecursionParams {
  SpinParams<double> params;
  int d = 1;

  RecursionParams() = default;
  RecursionParams(SpinParams<double> params, int d);
  RecursionParams(double beta, double gamma, double mu, int d)
      : RecursionParams(SpinParams<double>(beta, gamma, mu), d) {}

  double beta() const { return params.beta; }
  double gamma() const { return params.gamma; }
  double mu() const { return params.mu; }
};

struct DecayConstants {
  double alpha = 0;             // (sqrt(bg) - 1)/(sqrt(bg) + 1)
  double decay_rate = 0;        // c: sup of x f'(x)/f(x) near mu_star
  double eta = 0;               // half-width of the window where the sup holds
  double iota = 0;              // ln(mu(T_t)/mu_star) <= decay_rate^t * iota
  int t0 = 0;                   // first tree depth inside the window
  double mu_star = 0;
  double g_at_fixed_point = 0;  // x f'(x)/f(x) at mu_star
};

struct HardnessThresholds {
  int delta = 0;  // max degree of the bipartite anti-ferromagnetic source
  int d = 0;      // smallest d >= 1 with beta (beta gamma)^d > 1
  double anti_ferro_edge = 0;     // 1/sqrt(beta gamma)
  double mu_bound_bounded = 0;    // (gamma/beta)^(delta/2)
  std::optional<double> mu_bound_uniform;     // beta <= 1 only
  std::optional<double> mu_bound_large_beta;  // beta > 1 only
  std::optional<double> lemma_mu_bound;       // beta <= 1 only
  std::string note;
};

/// Which tree the uniqueness recursion runs on.
enum class TreeBranching {
  Delta,         // every vertex has Delta children
  DeltaMinusOne  // the Delta-regular tree seen from a non-root vertex
};

double h(double x, const SpinParams<double>& p);
double f(double x, const RecursionParams& rp);

/// x h'(x)/h(x) = (beta gamma - 1) x / ((x + gamma)(beta x + 1)).
double h_log_derivative(double x, const SpinParams<double>& p);
/// x f'(x)/f(x) = d * h_log_derivative(x).
double f_log_derivative(double x, const RecursionParams& rp);

/// Vectorized h_log_derivative over a grid.
Eigen::ArrayXd h_log_derivative(const Eigen::ArrayXd& x, const SpinParams<double>& p);

/// (sqrt(beta gamma) - 1)/(sqrt(beta gamma) + 1): the supremum of
/// h_log_derivative over x > 0 when beta gamma > 1.
double contraction_rate(const SpinParams<double>& p);

/// Largest fixed point of f, via x0 = mu, x_{i+1} = f(x_i) until the
/// relative step drops below `tolerance`, then polished by Newton steps.
double solve_mu_star(const RecursionParams& rp, double tolerance = 1e-12);

/// The iterates x0 = mu, x1, ... visited by solve_mu_star before polishing.
std::vector<double> mu_star_iterates(const RecursionParams& rp, double tolerance = 1e-12);

/// ln(x_t / mu_star) for t = 0..t_max along x_{t+1} = f(x_t), x_0 = mu.
///
/// Evaluated in fixed-point-relative coordinates, so the gaps stay
/// resolvable long after x_t and mu_star agree to double precision.
std::vector<double> tree_log_gaps(const RecursionParams& rp, double mu_star, int t_max);

DecayConstants decay_constants(const RecursionParams& rp);

/// Solution x of h(x) = t. Requires 1/gamma < t < beta.
double solve_h_inverse(double t, const SpinParams<double>& p);

/// Threshold on mu above which Prop.-4 style solvability holds:
/// gamma^d (beta gamma - 1)/beta * (1 + (d + 1)/ln(beta (beta gamma)^d)).
double lemma_mu_bound(double beta, double gamma, int d);

/// Critical field mu_c > 1 of the anti-ferromagnetic Ising tree recursion
/// x -> mu ((beta x + 1)/(x + beta))^b. Requires 0 < beta < (Delta-1)/(Delta+1)
/// and Delta >= 3.
double uniqueness_threshold(double beta, int delta,
                            TreeBranching branching = TreeBranching::Delta);

/// |F'(x*)| at the unique fixed point x* of the Ising recursion above with b
/// children. The Gibbs measure is unique iff this is <= 1.
double ising_fixed_point_slope(double beta, double mu, int children);

HardnessThresholds hardness_thresholds(double beta, double gamma);

}  // namespace twospin

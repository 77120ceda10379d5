#include "twospin/reductions.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace twospin {

namespace {

constexpr long long kSearchLimit = 1'000'000;

struct Convergent {
  long long p;  // bristles added
  long long q;  // loops added
  long double shift;  // p b - q a
};

// Convergents p/q of a/b together with the residual shift p b - q a of
// adding q loops and p bristles. Shifts alternate in sign and shrink.
std::vector<Convergent> convergents(long double a, long double b) {
  std::vector<Convergent> out;
  long double x = a / b;
  long long p_prev = 1, q_prev = 0;  // p_{-1}, q_{-1}
  long long p_prev2 = 0, q_prev2 = 1;  // p_{-2}, q_{-2}
  for (int n = 0; n < 64; ++n) {
    const long double term_ld = std::floor(x);
    if (term_ld > 1e12L) break;
    const long long term = static_cast<long long>(term_ld);
    const long double p_next = static_cast<long double>(term) * p_prev + p_prev2;
    const long double q_next = static_cast<long double>(term) * q_prev + q_prev2;
    if (p_next > 1e15L || q_next > 1e15L) break;
    const long long p = static_cast<long long>(p_next);
    const long long q = static_cast<long long>(q_next);
    out.push_back({p, q, static_cast<long double>(p) * b - static_cast<long double>(q) * a});
    p_prev2 = p_prev;
    q_prev2 = q_prev;
    p_prev = p;
    q_prev = q;
    const long double frac = x - term_ld;
    if (frac < 1e-18L) break;
    x = 1.0L / frac;
  }
  return out;
}

}  // namespace

SelfLoopRealization realize_field_selfloops(double target, long long m, const SpinParams<double>& p) {
  if (!(p.gamma > p.beta && p.beta > 1.0)) {
    throw DomainError("self-loop realization requires gamma > beta > 1");
  }
  if (!(p.mu > (p.gamma - 1.0) / (p.beta - 1.0))) {
    throw DomainError("self-loop realization requires mu > (gamma-1)/(beta-1)");
  }
  if (!(target > 0.0)) throw DomainError("target field must be positive");
  if (m < 1) throw DomainError("accuracy parameter m must be a positive integer");

  const long double a = std::log(static_cast<long double>(p.gamma) / p.beta);
  const long double b = std::log((static_cast<long double>(p.mu) * p.beta + 1.0L) / (p.mu + p.gamma));
  const long double goal = std::log(static_cast<long double>(target) / p.mu);
  const long double tolerance = 1.0L / static_cast<long double>(m);
  auto residual = [&](long long x, long long y) {
    return static_cast<long double>(y) * b - static_cast<long double>(x) * a - goal;
  };
  auto nearest_bristles = [&](long long x) {
    const long double y = std::nearbyint((goal + static_cast<long double>(x) * a) / b);
    return y > 0.0L ? static_cast<long long>(y) : 0LL;
  };

  // Greedy descent along convergents bounds the smallest solution.
  long long x_bound = kSearchLimit;
  {
    long long x = 0;
    long long y = 0;
    if (goal >= 0.0L) {
      y = nearest_bristles(0);
    } else {
      x = static_cast<long long>(std::nearbyint(-goal / a));
      y = nearest_bristles(x);
    }
    long double r = residual(x, y);
    const std::vector<Convergent> steps = convergents(a, b);
    for (int iteration = 0; iteration < 256 && std::fabs(r) > tolerance; ++iteration) {
      const Convergent* chosen = nullptr;
      for (const Convergent& c : steps) {
        if (c.shift != 0.0L && std::fabs(c.shift) <= std::fabs(r) && (c.shift > 0) != (r > 0)) {
          chosen = &c;
          break;
        }
      }
      if (!chosen) break;
      const long long k = static_cast<long long>(std::floor(std::fabs(r) / std::fabs(chosen->shift)));
      if (k <= 0 || x > kSearchLimit || y > kSearchLimit) break;
      x += k * chosen->q;
      y += k * chosen->p;
      r = residual(x, y);
    }
    if (std::fabs(r) <= tolerance && x <= kSearchLimit) x_bound = x;
  }

  long long best_x = 0;
  long long best_y = nearest_bristles(0);
  long double best_r = std::fabs(residual(best_x, best_y));
  for (long long x = 0; x <= x_bound; ++x) {
    const long long y = nearest_bristles(x);
    const long double r = std::fabs(residual(x, y));
    if (r < best_r) {
      best_r = r;
      best_x = x;
      best_y = y;
    }
    if (r <= tolerance) {
      best_x = x;
      best_y = y;
      best_r = r;
      break;
    }
  }
  if (best_r > tolerance) {
    std::ostringstream msg;
    msg << "no loops/bristles pair within 1/" << m << " found up to " << x_bound
        << " loops; best residual " << static_cast<double>(best_r);
    throw ApproximationFailure(msg.str(), best_x, best_y, static_cast<double>(best_r));
  }

  SelfLoopRealization out;
  out.loops = best_x;
  out.bristles = best_y;
  out.tolerance = 1.0 / static_cast<double>(m);
  out.achieved = p.mu * std::pow(p.beta / p.gamma, static_cast<double>(best_x)) *
                 std::pow((p.mu * p.beta + 1.0) / (p.mu + p.gamma), static_cast<double>(best_y));
  out.log_error = std::log(out.achieved / target);
  const VertexIndex center = out.gadget.add_vertex("v", p.mu);
  for (long long i = 0; i < best_x; ++i) out.gadget.add_edge(center, center);
  for (long long i = 0; i < best_y; ++i) {
    const VertexIndex leaf = out.gadget.add_vertex("b" + std::to_string(i + 1), p.mu);
    out.gadget.add_edge(center, leaf);
  }
  out.gadget.set_output(center);
  return out;
}

}  // namespace twospin

#include "twospin/spin_core.hpp"

#include <cmath>
#include <limits>

namespace twospin {

double log_partition_function(const FieldedGraph<double>& g, const SpinParams<double>& p,
                              std::size_t enumeration_limit) {
  detail::check_instance(g, PinAssignment{}, enumeration_limit);
  const std::size_t n = g.size();
  const double log_a[2][2] = {{std::log(p.beta), 0.0}, {0.0, std::log(p.gamma)}};
  std::vector<double> log_field(n);
  for (VertexIndex v = 0; v < n; ++v) log_field[v] = std::log(g.field(v));

  // streaming log-sum-exp: total = exp(running_max) * scaled
  double running_max = -std::numeric_limits<double>::infinity();
  double scaled = 0.0;
  const std::uint64_t configurations = std::uint64_t{1} << n;
  for (std::uint64_t mask = 0; mask < configurations; ++mask) {
    double term = 0.0;
    for (VertexIndex v = 0; v < n; ++v) {
      if (((mask >> v) & 1) == 0) term += log_field[v];
    }
    for (const auto& [u, v] : g.edges()) term += log_a[(mask >> u) & 1][(mask >> v) & 1];
    if (term == -std::numeric_limits<double>::infinity()) continue;
    if (term > running_max) {
      scaled = scaled * std::exp(running_max - term) + 1.0;
      running_max = term;
    } else {
      scaled += std::exp(term - running_max);
    }
  }
  return running_max + std::log(scaled);
}

}  // namespace twospin

#pragma once

// Independent oracles used across the unit tests.

#include <cmath>
#include <cstdint>

#include "twospin/spin_core.hpp"

namespace twospin::testing {

// Direct sum over all 2^n configurations, one product per configuration.
template <class Scalar>
Scalar naive_partition(const FieldedGraph<Scalar>& g, const SpinParams<Scalar>& p,
                       const PinAssignment& pins = {}) {
  const std::size_t n = g.size();
  Scalar total(0);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    auto spin = [&](VertexIndex v) { return static_cast<int>((mask >> v) & 1U); };
    bool consistent = true;
    for (const auto& [v, s] : pins.pins()) consistent = consistent && spin(v) == s;
    if (!consistent) continue;
    Scalar term(1);
    for (VertexIndex v = 0; v < n; ++v) {
      if (spin(v) == 0) term *= g.field(v);
    }
    for (const auto& [u, v] : g.edges()) {
      const int a = spin(u);
      const int b = spin(v);
      if (a == 0 && b == 0) term *= p.beta;
      if (a == 1 && b == 1) term *= p.gamma;
    }
    total += term;
  }
  return total;
}

inline double relative_error(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace twospin::testing

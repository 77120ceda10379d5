#include <catch_amalgamated.hpp>

#include <cmath>

#include "twospin/construct.hpp"

using namespace twospin;
using Catch::Approx;

namespace {
const RecursionParams kBase(1, 2, 20, 1);
}

TEST_CASE("base case returns the star bracketing the target") {
  const ConstructReport r = certify(0, 10, kBase);
  REQUIRE(r.gadget.kind() == Gadget::Kind::Star);
  CHECK(r.gadget.star_size() == 14);
  CHECK(r.size == 15);
  CHECK(r.achieved == Approx(10.427).margin(1e-3));
  CHECK(std::abs(r.log_error) == Approx(0.0418).margin(1e-4));
  CHECK(r.bound == Approx(std::log(2.0)));
  CHECK(20 * std::pow(21.0 / 22.0, 15) < 10);
}

TEST_CASE("targets outside (0, mu_star] and small mu are rejected") {
  const GadgetBuilder builder(kBase);
  CHECK_THROWS_AS(builder.construct(2, 0.0), DomainError);
  CHECK_THROWS_AS(builder.construct(2, builder.mu_star() * 1.01), DomainError);
  CHECK_THROWS_AS(builder.construct(-1, 5.0), DomainError);
  CHECK_NOTHROW(builder.construct(2, builder.mu_star()));
  CHECK_THROWS_AS(GadgetBuilder(RecursionParams(1, 2, 7, 1)), DomainError);  // below the lemma bound
}

TEST_CASE("error bound holds across depths and targets") {
  for (const RecursionParams& rp : {kBase, RecursionParams(0.8, 2, 30, 2), RecursionParams(1, 2, 20, 2)}) {
    const GadgetBuilder builder(rp);
    for (int ell = 0; ell <= 6; ++ell) {
      for (int j = 1; j <= 20; ++j) {
        const double target = builder.mu_star() * j / 20.0;
        const ConstructReport r = builder.certify(ell, target);
        INFO("ell=" << ell << " target=" << target);
        CHECK(std::abs(r.log_error) <= r.bound);
      }
    }
  }
}

TEST_CASE("trace records consistent branch decisions and per-step slack") {
  const RecursionParams rp(0.8, 2, 30, 2);
  const GadgetBuilder builder(rp);
  const double mu_star = builder.mu_star();
  const double h_star = h(mu_star, rp.params);
  const double h_zero = h(0, rp.params);
  const double alpha = builder.constants().alpha;
  for (int ell = 1; ell <= 3; ++ell) {
    for (double fraction : {0.05, 0.3, 0.7, 1.0}) {
      const ConstructReport r = builder.certify(ell, mu_star * fraction);
      REQUIRE(!r.trace.empty());
      CHECK(r.trace.front().ell == ell);
      for (const LevelRecord& level : r.trace) {
        for (const BranchRecord& b : level.branches) {
          CHECK(check_invariant({b.i, b.mu_i}, rp, mu_star));
          const double lhs = rp.mu() * h_star * std::pow(h_zero, rp.d - b.i);
          CHECK(b.condition_lhs == Approx(lhs));
          CHECK(b.zero_branch == (lhs >= b.mu_i));
          CHECK(std::abs(b.log_slack) <= std::pow(alpha, level.ell) / rp.d);
        }
        if (level.ell > 0) {
          CHECK(check_invariant({rp.d, level.mu_d}, rp, mu_star));
          CHECK(level.next_target <= mu_star);
        }
      }
    }
  }
}

TEST_CASE("check_invariant boundaries") {
  const double mu_star = solve_mu_star(kBase);
  const double upper = 20 * h(mu_star, kBase.params);
  const double lower = 20 * h(0, kBase.params);
  CHECK(check_invariant({1, upper}, kBase, mu_star));
  CHECK_FALSE(check_invariant({1, lower}, kBase, mu_star));
  CHECK(check_invariant({1, 0.5 * (upper + lower)}, kBase, mu_star));
  CHECK_FALSE(check_invariant({1, upper * 1.001}, kBase, mu_star));
}

TEST_CASE("construction is deterministic") {
  const GadgetBuilder builder(RecursionParams(0.8, 2, 30, 2));
  const ConstructReport a = builder.certify(4, 3.3);
  const ConstructReport b = builder.certify(4, 3.3);
  CHECK(a.achieved == b.achieved);
  CHECK(a.size == b.size);
  CHECK(a.trace.size() == b.trace.size());
}

TEST_CASE("log error shrinks geometrically in depth") {
  // fitted slope of ln|error| over ell = 1..7 must beat ln(alpha)
  for (double target : {1.5, 7.0, 13.0}) {
    const GadgetBuilder builder(kBase);
    std::vector<int> ells;
    std::vector<double> errors;
    for (int ell = 1; ell <= 7; ++ell) {
      const double e = std::abs(builder.certify(ell, target).log_error);
      if (e < 1e-13) continue;  // at the double-precision floor
      ells.push_back(ell);
      errors.push_back(e);
    }
    REQUIRE(ells.size() >= 4);
    const SizeGrowthFit fit = fit_size_growth(ells, errors);
    INFO("target=" << target << " slope=" << fit.slope);
    CHECK(fit.slope <= std::log(builder.constants().alpha) + 0.5);
  }
}

TEST_CASE("structural size grows at most exponentially") {
  const GadgetBuilder builder(RecursionParams(0.8, 2, 30, 2));
  std::vector<int> ells;
  std::vector<double> sizes;
  for (int ell = 0; ell <= 8; ++ell) {
    ells.push_back(ell);
    sizes.push_back(static_cast<double>(builder.certify(ell, 7.0).size));
  }
  const SizeGrowthFit fit = fit_size_growth(ells, sizes);
  CHECK(fit.slope > 0);
  CHECK(fit.max_abs_residual <= 2.5);
  CHECK_THROWS_AS(fit_size_growth({1}, {1.0}), DomainError);
}

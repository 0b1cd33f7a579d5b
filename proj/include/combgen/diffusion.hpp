#ifndef COMBGEN_DIFFUSION_HPP
#define COMBGEN_DIFFUSION_HPP

#include "combgen/rng.hpp"

namespace combgen {

inline constexpr long k_default_step_budget = 100'000'000;

struct Hit_time_result {
  double time{};
  bool censored{};  // step budget exhausted before absorption
  long steps{};
};

// First time the diffusion dz = sqrt(z) dw started at x reaches 0, by
// Euler-Maruyama with increment z <- max(0, z + sqrt(z dt) N(0,1)).
// Discretization bias is O(sqrt(dt)); a good default is dt = 1e-4 x.
auto feller_hit_time(double x, double dt, Rng& rng, long max_steps = k_default_step_budget)
    -> Hit_time_result;

// Exact draw of the supremum of the Brownian CPP over [0, x]: t = 2x/ln(1/U),
// so P(t <= s) = exp(-2x/s).  Equal in law to feller_hit_time's target.
auto cpp_sup_sample(double x, Rng& rng) -> double;

}  // namespace combgen

#endif  // COMBGEN_DIFFUSION_HPP

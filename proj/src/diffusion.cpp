#include "combgen/diffusion.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace combgen {

auto feller_hit_time(double x, double dt, Rng& rng, long max_steps) -> Hit_time_result {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw std::invalid_argument{"feller_hit_time: start must be positive and finite"};
  }
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw std::invalid_argument{"feller_hit_time: step must be positive and finite"};
  }
  if (max_steps <= 0) { throw std::invalid_argument{"feller_hit_time: step budget must be positive"}; }

  auto normal = std::normal_distribution<double>{0.0, 1.0};
  auto z = x;
  auto steps = 0L;
  while (z > 0.0) {
    if (steps == max_steps) {
      return {.time = static_cast<double>(steps) * dt, .censored = true, .steps = steps};
    }
    z = std::max(0.0, z + std::sqrt(z * dt) * normal(rng.engine()));
    ++steps;
  }
  return {.time = static_cast<double>(steps) * dt, .censored = false, .steps = steps};
}

auto cpp_sup_sample(double x, Rng& rng) -> double {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw std::invalid_argument{"cpp_sup_sample: interval length must be positive and finite"};
  }
  return 2.0 * x / -std::log(rng.runif());
}

}  // namespace combgen

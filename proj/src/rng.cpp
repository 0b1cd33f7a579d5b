#include "combgen/rng.hpp"

#include <cmath>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace combgen {

auto splitmix64(std::uint64_t& state) -> std::uint64_t {
  state += 0x9e3779b97f4a7c15ULL;
  auto z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

auto Rng::substream(std::uint64_t master_seed, std::uint64_t index) -> Rng {
  auto state = master_seed;
  auto a = splitmix64(state);
  state ^= index * 0x9e3779b97f4a7c15ULL + 0x2545f4914f6cdd1dULL;
  auto b = splitmix64(state);
  return Rng{a ^ (b + index)};
}

auto Rng::runif() -> double {
  // 53 random bits centered in (0, 1): strictly inside the interval.
  return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

auto Rng::runif(double lo, double hi) -> double {
  return lo + (hi - lo) * runif();
}

auto Rng::rexp(double rate) -> double {
  if (rate <= 0.0) { throw std::invalid_argument{"rexp: rate must be positive"}; }
  return -std::log(runif()) / rate;
}

auto Rng::rgamma_int(int shape, double rate) -> double {
  if (shape <= 0) { throw std::invalid_argument{"rgamma_int: shape must be positive"}; }
  auto sum = 0.0;
  for (auto i = 0; i != shape; ++i) { sum += -std::log(runif()); }
  return sum / rate;
}

auto Rng::rgamma(double shape, double rate) -> double {
  if (shape <= 0.0 || rate <= 0.0) {
    throw std::invalid_argument{"rgamma: shape and rate must be positive"};
  }
  auto dist = std::gamma_distribution<double>{shape, 1.0 / rate};
  return dist(engine_);
}

auto Rng::rpois(double mean) -> long {
  if (mean < 0.0) { throw std::invalid_argument{"rpois: mean must be nonnegative"}; }
  if (mean == 0.0) { return 0; }
  auto dist = std::poisson_distribution<long>{mean};
  return dist(engine_);
}

auto Rng::rnorm() -> double {
  auto dist = std::normal_distribution<double>{0.0, 1.0};
  return dist(engine_);
}

auto Rng::rint(std::uint64_t bound) -> std::uint64_t {
  if (bound == 0) { throw std::invalid_argument{"rint: bound must be positive"}; }
  auto dist = std::uniform_int_distribution<std::uint64_t>{0, bound - 1};
  return dist(engine_);
}

auto run_replicates(long reps, std::uint64_t master_seed, int threads,
                    const std::function<void(long, Rng&)>& body,
                    std::uint64_t index_offset) -> void {
  if (reps < 0) { throw std::invalid_argument{"run_replicates: reps must be nonnegative"}; }
  auto workers = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
  if (workers < 1) { workers = 1; }
  if (workers == 1 || reps < 2) {
    for (auto r = 0L; r != reps; ++r) {
      auto rng = Rng::substream(master_seed, index_offset + static_cast<std::uint64_t>(r));
      body(r, rng);
    }
    return;
  }

  auto pool = std::vector<std::thread>{};
  pool.reserve(static_cast<std::size_t>(workers));
  std::exception_ptr first_error{};
  auto error_mutex = std::mutex{};
  for (auto w = 0; w != workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        // Strided assignment keeps the replicate -> rng mapping fixed.
        for (auto r = static_cast<long>(w); r < reps; r += workers) {
          auto rng = Rng::substream(master_seed, index_offset + static_cast<std::uint64_t>(r));
          body(r, rng);
        }
      } catch (...) {
        auto lock = std::lock_guard{error_mutex};
        if (!first_error) { first_error = std::current_exception(); }
      }
    });
  }
  for (auto& t : pool) { t.join(); }
  if (first_error) { std::rethrow_exception(first_error); }
}

}  // namespace combgen

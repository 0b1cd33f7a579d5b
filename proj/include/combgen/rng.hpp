#ifndef COMBGEN_RNG_HPP
#define COMBGEN_RNG_HPP

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace combgen {

// Splits one 64-bit state into a well-mixed stream; used to derive independent
// substream seeds from (master_seed, replicate_index) so replicate r draws the
// same numbers no matter how replicates are scheduled across threads.
auto splitmix64(std::uint64_t& state) -> std::uint64_t;

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_{seed} {}

  static auto substream(std::uint64_t master_seed, std::uint64_t index) -> Rng;

  // Uniform on the open interval (0, 1); never returns an endpoint, so
  // log(u) and 1/u are always finite.
  auto runif() -> double;
  auto runif(double lo, double hi) -> double;
  auto rexp(double rate) -> double;
  // Gamma with integer shape, parameterized by rate (mean = shape / rate).
  // Exact inversion via a sum of exponentials; cost grows with shape.
  auto rgamma_int(int shape, double rate) -> double;
  // Gamma for arbitrary (possibly large) shape, O(1) per draw.
  auto rgamma(double shape, double rate) -> double;
  auto rpois(double mean) -> long;
  auto rnorm() -> double;
  auto rint(std::uint64_t bound) -> std::uint64_t;  // uniform on {0, ..., bound - 1}

  auto engine() -> std::mt19937_64& { return engine_; }

 private:
  std::mt19937_64 engine_;
};

// Runs `reps` independent replicates on up to `threads` workers (0 means the
// hardware count).  body(replicate_index, rng) must not touch shared state;
// results are delivered through it and must be indexed by replicate so output
// order is deterministic.  Replicate r draws from substream index_offset + r;
// distinct offsets give a second batch streams disjoint from the first.
auto run_replicates(long reps, std::uint64_t master_seed, int threads,
                    const std::function<void(long, Rng&)>& body,
                    std::uint64_t index_offset = 0) -> void;

}  // namespace combgen

#endif  // COMBGEN_RNG_HPP

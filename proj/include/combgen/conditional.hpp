#ifndef COMBGEN_CONDITIONAL_HPP
#define COMBGEN_CONDITIONAL_HPP

#include <vector>

#include "combgen/comb.hpp"
#include "combgen/kingman.hpp"
#include "combgen/rng.hpp"

namespace combgen {

// The genealogy of n individuals drawn from one depth-eps block: the block
// comb, its length, and the coalescence times H_1 <= ... read consecutively
// along the n ordered sample points.
struct Quenched_sample {
  Comb block_comb;
  double block_length{};  // in (0, 1]
  double eps{};
  int order{};
  std::vector<double> coalescence_times;  // n - 1 values, each <= eps
  long attempts{1};                       // uniform-set draws consumed
};

// Jump times of the n-coalescent conditioned on full coalescence before eps,
// rescaled by 1/eps: strictly increasing values in (0, 1).
struct Averaged_sample {
  std::vector<double> ranked_times;  // (T_n, ..., T_2) / eps
  double eps{};
  int order{};
  long attempts{};
};

// The eps -> 0 limit of Quenched_sample: a size-biased killed CPP summarized
// by its kill length, the n+1 spacings of the ordered sample points, and the
// consecutive interval suprema.
struct Limit_quenched_sample {
  double kill_length{};                   // Gamma(n+1, rate 2)
  std::vector<double> spacings;           // n + 1 values, i.i.d. Exp(2)
  std::vector<double> coalescence_times;  // n - 1 values in (0, 1)
  int order{};
};

// Depth of the comb built under the chosen block, as a fraction of eps.  The
// uniform-limit statistics are insensitive below the 0.01 quantile, so 0.01
// is the default; 1.0 keeps only the partition (enough for block lengths).
inline constexpr double k_default_fidelity = 0.01;

// Picks a depth-eps block with probability proportional to length^n, then
// drops n ordered uniforms on it and reads off their consecutive coalescence
// times.  The block choice is the exact size-biased law of the scheme
// "n uniforms conditioned to land in one block".
auto quenched_conditional_sample(int n, double eps, Rng& rng,
                                 double fidelity = k_default_fidelity,
                                 Tail_mode mode = Tail_mode::mean,
                                 long level_cap = k_default_level_cap) -> Quenched_sample;

// The literal scheme: redraws n uniforms on [0, 1] until all land in one
// block of the same sampled genealogy.  Equal in law to the direct sampler;
// practical only for eps around 0.05 and above.  attempt_budget 0 derives a
// budget from the expected acceptance rate.
auto quenched_conditional_sample_rejection(int n, double eps, Rng& rng,
                                           double fidelity = k_default_fidelity,
                                           Tail_mode mode = Tail_mode::mean,
                                           long level_cap = k_default_level_cap,
                                           long attempt_budget = 0) -> Quenched_sample;

// One draw of the moment statistic Z_{n,eps}: with N the block count at depth
// eps and xi_1..xi_N i.i.d. Exp(1) summing to S, returns
// (1/N) sum_k (xi_k 2 / (eps S))^n.  Converges to n! as eps -> 0.
auto block_moment_statistic(int n, double eps, Rng& rng, Tail_mode mode = Tail_mode::mean,
                            long level_cap = k_default_level_cap) -> double;

// Rejection sampler for the coalescent jump times given T_2 < eps; gaps
// T_i - T_{i+1} are Exp(i (i-1) / 2).  attempt_budget 0 derives the budget
// 10 (n-1)! / (eps^{n-1} prod a_i) from the acceptance asymptotic.
auto averaged_conditional_sample(int n, double eps, Rng& rng, long attempt_budget = 0)
    -> Averaged_sample;

// The eps -> 0 limit of the averaged scheme: n - 1 sorted uniforms on (0, 1).
auto limit_order_statistics(int n, Rng& rng) -> std::vector<double>;

auto limit_quenched_sample(int n, Rng& rng) -> Limit_quenched_sample;

}  // namespace combgen

#endif  // COMBGEN_CONDITIONAL_HPP

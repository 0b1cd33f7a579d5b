#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "combgen/kingman.hpp"
#include "combgen/stats.hpp"

namespace combgen {

// Shared knobs for the verification experiments.  Each experiment pins its own
// tolerances, fidelities and structural parameters; options only control the
// Monte Carlo effort, the seed and (where meaningful) n and eps.
struct Experiment_options {
  long reps = 10'000;
  std::uint64_t seed = 42;
  int threads = 0;
  std::optional<int> n{};
  std::optional<double> eps{};
  Tail_mode tail_mode = Tail_mode::mean;
};

// Pairwise coalescence time of two uniform points on a sampled comb vs Exp(1).
auto verify_kingman_comb_law(const Experiment_options& opts) -> std::vector<Test_report>;

// eps * (number of blocks at depth eps): mean near 2 and spread shrinking as
// eps decreases.
auto verify_block_count(const Experiment_options& opts) -> std::vector<Test_report>;

// Rescaled comb restricted to small depths looks like the Brownian point
// process: interval sups match exp(-2/t) and disjoint intervals decouple.
auto verify_cvc2(const Experiment_options& opts) -> std::vector<Test_report>;

// Length of the size-biased block at depth eps, rescaled by eps, vs
// Gamma(n + 1, 2).
auto verify_cvc(const Experiment_options& opts) -> std::vector<Test_report>;

// Block-moment statistic Z_{n,eps}: mean near n!, spread of Z_{2,eps}
// shrinking as eps decreases.
auto verify_ui(const Experiment_options& opts) -> std::vector<Test_report>;

// Rescaled coalescence times inside the size-biased block: each H_i / eps
// uniform on (0, 1) and distinct coordinates uncorrelated.
auto verify_teo1(const Experiment_options& opts) -> std::vector<Test_report>;

// Limit sampler law: spacings i.i.d. Exp(2) and the rescaled times satisfy
// the product form P(H_1 <= s_1, H_2 <= s_2) = s_1 * s_2.
auto verify_cor_final(const Experiment_options& opts) -> std::vector<Test_report>;

// Two-sample check: ranked rescaled quenched times vs the limit sampler.
auto verify_cvh(const Experiment_options& opts) -> std::vector<Test_report>;

// Averaged conditioning by rejection: pooled rescaled times uniform and the
// acceptance frequency near its predicted value.
auto verify_petit_calcul(const Experiment_options& opts) -> std::vector<Test_report>;

// Feller absorption times vs the exact dual law 2x / Exp(1), plus a censoring
// budget check.
auto verify_id(const Experiment_options& opts) -> std::vector<Test_report>;

// Exact flow identities on Cannings bridges plus Wright-Fisher pair
// coalescence times rescaled by N vs Exp(1).
auto verify_cannings(const Experiment_options& opts) -> std::vector<Test_report>;

// Structural comb invariants (ultrametric, commutation, range queries) over
// randomly generated combs: zero violations allowed.
auto verify_core_invariants(const Experiment_options& opts) -> std::vector<Test_report>;

// Dispatches on the experiment id used by the command line (cvc2, cvc, teo1,
// petit-calcul, ui, id, cor-final, block-count).  Throws std::invalid_argument
// for unknown ids.
auto run_verification(std::string_view id, const Experiment_options& opts)
    -> std::vector<Test_report>;

// The ids accepted by run_verification, in display order.
auto verification_ids() -> const std::vector<std::string>&;

}  // namespace combgen

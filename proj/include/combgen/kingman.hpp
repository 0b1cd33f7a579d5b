#ifndef COMBGEN_KINGMAN_HPP
#define COMBGEN_KINGMAN_HPP

#include <string>
#include <string_view>
#include <vector>

#include "combgen/comb.hpp"
#include "combgen/rng.hpp"

namespace combgen {

// How the unresolved mass below the deepest generated level is summarized.
// mean adds its expected value, zero drops it, sampled_gamma draws a
// moment-matched Gamma variate.
enum class Tail_mode { mean, zero, sampled_gamma };

auto tail_mode_from_name(std::string_view name) -> Tail_mode;
auto to_string(Tail_mode mode) -> std::string;

inline constexpr long k_default_level_cap = 10'000'000;

// Coalescence levels T_1 > T_2 > ... of the exchangeable genealogy, truncated
// at depth_cut, with the uniform positions V_j that attach level j to the
// window [0, 1).
struct Kingman_levels {
  std::vector<double> levels;
  std::vector<double> positions;
  double depth_cut{};
};

struct Kingman_comb {
  Comb comb;  // window [0, 1), floor depth_cut
  std::vector<double> levels;
  std::vector<double> positions;
  double depth_cut{};
};

// The genealogy cut at depth `depth`: block i spans
// [boundaries[i], boundaries[i + 1]), and block_combs[i] is the comb restricted
// to that block, positions rebased to 0.
struct Block_partition {
  double depth{};
  std::vector<double> boundaries;  // 0 = boundaries[0] < ... < boundaries[m] = window
  std::vector<double> lengths;
  std::vector<Comb> block_combs;

  auto block_count() const -> std::size_t { return lengths.size(); }
};

// All levels >= depth_cut, in decreasing order.  Level j is the sum of
// independent Exp(k (k-1) / 2) variables over k > j; generation starts at
// index ceil(8 / depth_cut), below which the remaining sum is summarized by
// `mode`.  Throws Resource_cap_error when that start index exceeds level_cap.
auto sample_levels(double depth_cut, Rng& rng, Tail_mode mode = Tail_mode::mean,
                   long level_cap = k_default_level_cap) -> std::vector<double>;

auto sample_kingman_levels(double depth_cut, Rng& rng, Tail_mode mode = Tail_mode::mean,
                           long level_cap = k_default_level_cap) -> Kingman_levels;

auto sample_kingman_comb(double depth_cut, Rng& rng, Tail_mode mode = Tail_mode::mean,
                         long level_cap = k_default_level_cap) -> Kingman_comb;

// Number of blocks when the genealogy is cut at depth eps: one more than the
// number of levels at or above eps.
auto sample_block_count(double eps, Rng& rng, Tail_mode mode = Tail_mode::mean,
                        long level_cap = k_default_level_cap) -> long;

// Cuts an existing comb at depth eps >= its resolution.  Interior boundaries
// are the atoms with height >= eps; block combs keep the strictly lower atoms.
auto blocks_at_depth(const Kingman_comb& kc, double eps) -> Block_partition;

// Flat Dirichlet vector of m lengths summing to 1: the law of the block
// lengths given that the cut produced m blocks.
auto sample_dirichlet_lengths(int m, Rng& rng) -> std::vector<double>;

}  // namespace combgen

#endif  // COMBGEN_KINGMAN_HPP

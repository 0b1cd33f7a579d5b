#include "combgen/kingman.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "combgen/errors.hpp"

namespace combgen {

namespace {

// Levels are generated from the deepest index upward: the start index K is
// chosen so that the skipped remainder (mean 2 / K) sits well below depth_cut,
// then successive Exp(k (k-1) / 2) gaps climb through the cut.
constexpr auto k_truncation_constant = 8.0;

auto start_index(double depth_cut, long level_cap) -> long {
  if (!(depth_cut > 0.0) || !std::isfinite(depth_cut)) {
    throw std::invalid_argument{"levels: depth_cut must be positive and finite"};
  }
  if (level_cap <= 0) { throw std::invalid_argument{"levels: level_cap must be positive"}; }
  auto k = static_cast<long>(std::ceil(k_truncation_constant / depth_cut));
  k = std::max(k, 2L);
  if (k > level_cap) {
    throw Resource_cap_error{
        "levels: depth_cut " + std::to_string(depth_cut) + " needs " + std::to_string(k) +
        " levels, above the cap of " + std::to_string(level_cap) +
        "; use a coarser depth or raise the cap"};
  }
  return k;
}

auto tail_remainder(long k, Tail_mode mode, Rng& rng) -> double {
  switch (mode) {
    case Tail_mode::mean: return 2.0 / static_cast<double>(k);
    case Tail_mode::zero: return 0.0;
    case Tail_mode::sampled_gamma: {
      // Matches the first two moments of the remainder: mean 2 / k,
      // variance 4 / (3 k^3).
      auto kd = static_cast<double>(k);
      return rng.rgamma(3.0 * kd, 1.5 * kd * kd);
    }
  }
  throw std::invalid_argument{"levels: unknown tail mode"};
}

// Calls emit(level) for every level >= depth_cut, deepest first.
template <typename Emit>
auto stream_levels_ascending(double depth_cut, Rng& rng, Tail_mode mode, long level_cap,
                             Emit&& emit) -> void {
  auto k = start_index(depth_cut, level_cap);
  auto level = tail_remainder(k, mode, rng);
  if (level >= depth_cut) { emit(level); }
  for (auto j = k; j >= 2; --j) {
    auto rate = 0.5 * static_cast<double>(j) * static_cast<double>(j - 1);
    level += rng.rexp(rate);
    if (level >= depth_cut) { emit(level); }
  }
}

}  // namespace

auto tail_mode_from_name(std::string_view name) -> Tail_mode {
  if (name == "mean") { return Tail_mode::mean; }
  if (name == "zero") { return Tail_mode::zero; }
  if (name == "sampled-gamma") { return Tail_mode::sampled_gamma; }
  throw std::invalid_argument{"tail mode: expected mean, zero or sampled-gamma, got '" +
                              std::string{name} + "'"};
}

auto to_string(Tail_mode mode) -> std::string {
  switch (mode) {
    case Tail_mode::mean: return "mean";
    case Tail_mode::zero: return "zero";
    case Tail_mode::sampled_gamma: return "sampled-gamma";
  }
  return "unknown";
}

auto sample_levels(double depth_cut, Rng& rng, Tail_mode mode, long level_cap)
    -> std::vector<double> {
  auto levels = std::vector<double>{};
  stream_levels_ascending(depth_cut, rng, mode, level_cap,
                          [&](double level) { levels.push_back(level); });
  std::ranges::reverse(levels);
  return levels;
}

auto sample_kingman_levels(double depth_cut, Rng& rng, Tail_mode mode, long level_cap)
    -> Kingman_levels {
  auto out = Kingman_levels{.levels = sample_levels(depth_cut, rng, mode, level_cap),
                            .positions = {},
                            .depth_cut = depth_cut};
  out.positions.reserve(out.levels.size());
  for (std::size_t i = 0; i != out.levels.size(); ++i) { out.positions.push_back(rng.runif()); }
  return out;
}

auto sample_kingman_comb(double depth_cut, Rng& rng, Tail_mode mode, long level_cap)
    -> Kingman_comb {
  auto kl = sample_kingman_levels(depth_cut, rng, mode, level_cap);
  // Positions coincide with probability zero; redraw the collision so the
  // comb's atom positions stay distinct.
  auto order = std::vector<std::size_t>(kl.positions.size());
  for (std::size_t i = 0; i != order.size(); ++i) { order[i] = i; }
  auto by_position = [&](std::size_t a, std::size_t b) {
    return kl.positions[a] < kl.positions[b];
  };
  std::ranges::sort(order, by_position);
  for (auto clean = false; !clean;) {
    clean = true;
    for (std::size_t i = 1; i < order.size(); ++i) {
      if (kl.positions[order[i - 1]] == kl.positions[order[i]]) {
        kl.positions[order[i]] = rng.runif();
        clean = false;
      }
    }
    if (!clean) { std::ranges::sort(order, by_position); }
  }

  auto atoms = std::vector<Comb_atom>{};
  atoms.reserve(kl.levels.size());
  for (std::size_t i = 0; i != kl.levels.size(); ++i) {
    atoms.push_back({kl.positions[i], kl.levels[i]});
  }
  return Kingman_comb{.comb = Comb{std::move(atoms), 1.0, depth_cut},
                      .levels = std::move(kl.levels),
                      .positions = std::move(kl.positions),
                      .depth_cut = depth_cut};
}

auto sample_block_count(double eps, Rng& rng, Tail_mode mode, long level_cap) -> long {
  auto above = 0L;
  stream_levels_ascending(eps, rng, mode, level_cap, [&](double) { ++above; });
  return above + 1;
}

auto blocks_at_depth(const Kingman_comb& kc, double eps) -> Block_partition {
  if (!(eps > 0.0) || !std::isfinite(eps)) {
    throw std::invalid_argument{"blocks_at_depth: depth must be positive and finite"};
  }
  if (eps < kc.depth_cut) {
    throw std::invalid_argument{"blocks_at_depth: depth is finer than the comb's resolution"};
  }
  auto window = kc.comb.window_length();
  auto partition = Block_partition{.depth = eps, .boundaries = {0.0}, .lengths = {}, .block_combs = {}};
  for (const auto& atom : kc.comb.atoms()) {
    // An atom at 0 adds no boundary: the window edge is already one.
    if (atom.height > eps && atom.position > 0.0) { partition.boundaries.push_back(atom.position); }
  }
  partition.boundaries.push_back(window);

  const auto& atoms = kc.comb.atoms();
  for (std::size_t i = 0; i + 1 < partition.boundaries.size(); ++i) {
    auto lo = partition.boundaries[i];
    auto hi = partition.boundaries[i + 1];
    partition.lengths.push_back(hi - lo);
    auto block_atoms = std::vector<Comb_atom>{};
    auto first = std::ranges::lower_bound(atoms, lo, {}, &Comb_atom::position);
    for (auto it = first; it != atoms.end() && it->position < hi; ++it) {
      if (it->height <= eps) {
        auto rebased = it->position - lo;
        // Subtraction may round onto the block length; keep strictly inside.
        if (rebased >= hi - lo) { rebased = std::nextafter(hi - lo, 0.0); }
        block_atoms.push_back({rebased, it->height});
      }
    }
    partition.block_combs.emplace_back(std::move(block_atoms), hi - lo, kc.depth_cut);
  }
  return partition;
}

auto sample_dirichlet_lengths(int m, Rng& rng) -> std::vector<double> {
  if (m < 1) { throw std::invalid_argument{"dirichlet: need at least one block"}; }
  auto lengths = std::vector<double>(static_cast<std::size_t>(m));
  auto total = 0.0;
  for (auto& l : lengths) {
    l = rng.rexp(1.0);
    total += l;
  }
  for (auto& l : lengths) { l /= total; }
  return lengths;
}

}  // namespace combgen

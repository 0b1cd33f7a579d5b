#include "combgen/conditional.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "combgen/cpp_process.hpp"
#include "combgen/errors.hpp"
#include "combgen/intensity.hpp"

namespace combgen {

namespace {

// The comb cut at depth eps, represented lazily: block boundaries plus the
// below-eps atoms with their positions still on [0, 1).  Only the atoms of
// one block are ever materialized into a Comb.
struct Depth_partition {
  std::vector<double> boundaries;                    // 0 = b_0 < ... < b_m = 1
  std::vector<std::pair<double, double>> sub_atoms;  // (position, height <= eps)
};

auto ipow(double x, int n) -> double {
  auto result = 1.0;
  for (auto i = 0; i != n; ++i) { result *= x; }
  return result;
}

auto check_quenched_args(int n, double eps, double fidelity) -> void {
  if (n < 1) { throw std::invalid_argument{"quenched sample: order must be >= 1"}; }
  if (!(eps > 0.0) || !std::isfinite(eps)) {
    throw std::invalid_argument{"quenched sample: eps must be positive and finite"};
  }
  if (!(fidelity > 0.0 && fidelity <= 1.0)) {
    throw std::invalid_argument{"quenched sample: fidelity must lie in (0, 1]"};
  }
}

auto build_depth_partition(double eps, double depth_cut, Rng& rng, Tail_mode mode,
                           long level_cap) -> Depth_partition {
  auto levels = sample_levels(depth_cut, rng, mode, level_cap);
  auto partition = Depth_partition{.boundaries = {0.0}, .sub_atoms = {}};
  for (auto level : levels) {
    auto position = rng.runif();
    if (level > eps) {
      partition.boundaries.push_back(position);
    } else {
      partition.sub_atoms.emplace_back(position, level);
    }
  }
  partition.boundaries.push_back(1.0);
  auto& b = partition.boundaries;
  std::ranges::sort(b);
  for (auto clean = false; !clean;) {
    clean = true;
    for (std::size_t i = 1; i < b.size(); ++i) {
      if (b[i - 1] == b[i]) {  // probability-zero tie: redraw the position
        b[i] = rng.runif();
        clean = false;
      }
    }
    if (!clean) { std::ranges::sort(b); }
  }
  return partition;
}

auto select_block_size_biased(const std::vector<double>& boundaries, int n, Rng& rng)
    -> std::size_t {
  auto total = 0.0;
  for (std::size_t i = 0; i + 1 < boundaries.size(); ++i) {
    total += ipow(boundaries[i + 1] - boundaries[i], n);
  }
  auto target = rng.runif() * total;
  auto acc = 0.0;
  for (std::size_t i = 0; i + 1 < boundaries.size(); ++i) {
    acc += ipow(boundaries[i + 1] - boundaries[i], n);
    if (target <= acc) { return i; }
  }
  return boundaries.size() - 2;  // guard against rounding in the final sum
}

auto block_comb_of(const Depth_partition& partition, std::size_t block, double depth_cut,
                   Rng& rng) -> Comb {
  auto lo = partition.boundaries[block];
  auto hi = partition.boundaries[block + 1];
  auto length = hi - lo;
  auto atoms = std::vector<Comb_atom>{};
  for (const auto& [position, height] : partition.sub_atoms) {
    if (position >= lo && position < hi) {
      auto rebased = position - lo;
      if (rebased >= length) { rebased = std::nextafter(length, 0.0); }
      atoms.push_back({rebased, height});
    }
  }
  auto by_position = [](const Comb_atom& a, const Comb_atom& b) { return a.position < b.position; };
  std::ranges::sort(atoms, by_position);
  for (auto clean = false; !clean;) {
    clean = true;
    for (std::size_t i = 1; i < atoms.size(); ++i) {
      if (atoms[i - 1].position == atoms[i].position) {
        atoms[i].position = rng.runif(0.0, length);
        clean = false;
      }
    }
    if (!clean) { std::ranges::sort(atoms, by_position); }
  }
  return Comb{std::move(atoms), length, depth_cut};
}

// Sorts the sample points and clears probability-zero degeneracies (ties and
// atom hits) by redrawing inside the block.
auto order_sample_points(std::vector<double>& points, const Comb& block_comb, Rng& rng) -> void {
  std::ranges::sort(points);
  for (auto clean = false; !clean;) {
    clean = true;
    for (std::size_t i = 0; i < points.size(); ++i) {
      auto tie = i > 0 && points[i - 1] == points[i];
      if (tie || block_comb.has_atom_at(points[i])) {
        points[i] = rng.runif(0.0, block_comb.window_length());
        clean = false;
      }
    }
    if (!clean) { std::ranges::sort(points); }
  }
}

auto coalescence_times_of(const Comb& block_comb, const std::vector<double>& ordered_points)
    -> std::vector<double> {
  auto times = std::vector<double>{};
  times.reserve(ordered_points.size() - 1);
  for (std::size_t i = 1; i < ordered_points.size(); ++i) {
    times.push_back(block_comb.metric(ordered_points[i - 1], ordered_points[i]));
  }
  return times;
}

auto factorial(int n) -> double {
  auto f = 1.0;
  for (auto i = 2; i <= n; ++i) { f *= i; }
  return f;
}

constexpr auto k_max_auto_budget = 100'000'000L;

}  // namespace

auto quenched_conditional_sample(int n, double eps, Rng& rng, double fidelity, Tail_mode mode,
                                 long level_cap) -> Quenched_sample {
  check_quenched_args(n, eps, fidelity);
  auto depth_cut = fidelity * eps;
  auto partition = build_depth_partition(eps, depth_cut, rng, mode, level_cap);
  auto block = select_block_size_biased(partition.boundaries, n, rng);
  auto comb = block_comb_of(partition, block, depth_cut, rng);
  auto length = partition.boundaries[block + 1] - partition.boundaries[block];

  auto points = std::vector<double>(static_cast<std::size_t>(n));
  for (auto& p : points) { p = rng.runif(0.0, length); }
  order_sample_points(points, comb, rng);
  auto times = coalescence_times_of(comb, points);
  return Quenched_sample{.block_comb = std::move(comb),
                         .block_length = length,
                         .eps = eps,
                         .order = n,
                         .coalescence_times = std::move(times),
                         .attempts = 1};
}

auto quenched_conditional_sample_rejection(int n, double eps, Rng& rng, double fidelity,
                                           Tail_mode mode, long level_cap, long attempt_budget)
    -> Quenched_sample {
  check_quenched_args(n, eps, fidelity);
  if (attempt_budget <= 0) {
    // Acceptance is roughly n! (eps / 2)^{n-1}.
    auto expected = factorial(n) * std::pow(eps / 2.0, n - 1);
    auto budget = std::ceil(10.0 / expected);
    if (budget > static_cast<double>(k_max_auto_budget)) {
      throw Resource_cap_error{
          "quenched rejection: expected acceptance rate " + std::to_string(expected) +
          " is impractically small; use a larger eps or the direct size-biased sampler"};
    }
    attempt_budget = std::max(static_cast<long>(budget), 100L);
  }

  auto depth_cut = fidelity * eps;
  auto partition = build_depth_partition(eps, depth_cut, rng, mode, level_cap);
  const auto& b = partition.boundaries;
  auto points = std::vector<double>(static_cast<std::size_t>(n));
  for (auto attempt = 1L; attempt <= attempt_budget; ++attempt) {
    auto block = std::size_t{0};
    auto together = true;
    for (std::size_t i = 0; i != points.size(); ++i) {
      points[i] = rng.runif();
      auto slot = static_cast<std::size_t>(std::ranges::upper_bound(b, points[i]) - b.begin()) - 1;
      if (i == 0) {
        block = slot;
      } else if (slot != block) {
        together = false;  // keep drawing the remaining points: fixed count per attempt
      }
    }
    if (!together) { continue; }
    auto lo = b[block];
    auto length = b[block + 1] - lo;
    auto comb = block_comb_of(partition, block, depth_cut, rng);
    for (auto& p : points) {
      p -= lo;
      if (p >= length) { p = std::nextafter(length, 0.0); }
    }
    order_sample_points(points, comb, rng);
    auto times = coalescence_times_of(comb, points);
    return Quenched_sample{.block_comb = std::move(comb),
                           .block_length = length,
                           .eps = eps,
                           .order = n,
                           .coalescence_times = std::move(times),
                           .attempts = attempt};
  }
  throw Resource_cap_error{
      "quenched rejection: no acceptance within " + std::to_string(attempt_budget) +
      " attempts; use a larger eps or the direct size-biased sampler"};
}

auto block_moment_statistic(int n, double eps, Rng& rng, Tail_mode mode, long level_cap)
    -> double {
  if (n < 1) { throw std::invalid_argument{"block_moment_statistic: order must be >= 1"}; }
  if (!(eps > 0.0) || !std::isfinite(eps)) {
    throw std::invalid_argument{"block_moment_statistic: eps must be positive and finite"};
  }
  auto count = sample_block_count(eps, rng, mode, level_cap);
  auto sum = 0.0;
  auto sum_pow = 0.0;
  for (auto k = 0L; k != count; ++k) {
    auto xi = rng.rexp(1.0);
    sum += xi;
    sum_pow += ipow(xi, n);
  }
  auto scale = ipow(2.0 / (eps * sum), n);
  return scale * sum_pow / static_cast<double>(count);
}

auto averaged_conditional_sample(int n, double eps, Rng& rng, long attempt_budget)
    -> Averaged_sample {
  if (n < 2) { throw std::invalid_argument{"averaged sample: order must be >= 2"}; }
  if (!(eps > 0.0) || !std::isfinite(eps)) {
    throw std::invalid_argument{"averaged sample: eps must be positive and finite"};
  }
  auto rate_product = 1.0;
  for (auto i = 2; i <= n; ++i) { rate_product *= 0.5 * i * (i - 1); }
  if (attempt_budget <= 0) {
    // Acceptance ~ eps^{n-1} prod a_i / (n-1)!.
    auto expected = std::pow(eps, n - 1) * rate_product / factorial(n - 1);
    auto budget = std::ceil(10.0 / expected);
    if (budget > static_cast<double>(k_max_auto_budget)) {
      throw Resource_cap_error{
          "averaged sample: expected acceptance rate " + std::to_string(expected) +
          " is impractically small; use a larger eps or limit_order_statistics"};
    }
    attempt_budget = std::max(static_cast<long>(budget), 100L);
  }

  auto times = std::vector<double>(static_cast<std::size_t>(n) - 1);
  for (auto attempt = 1L; attempt <= attempt_budget; ++attempt) {
    auto t = 0.0;
    for (auto i = n; i >= 2; --i) {
      t += rng.rexp(0.5 * i * (i - 1));
      times[static_cast<std::size_t>(n - i)] = t;
    }
    if (times.back() >= eps) { continue; }
    for (auto& v : times) { v /= eps; }
    return Averaged_sample{
        .ranked_times = times, .eps = eps, .order = n, .attempts = attempt};
  }
  throw Resource_cap_error{
      "averaged sample: no acceptance within " + std::to_string(attempt_budget) +
      " attempts; use a larger eps or limit_order_statistics"};
}

auto limit_order_statistics(int n, Rng& rng) -> std::vector<double> {
  if (n < 2) { throw std::invalid_argument{"limit_order_statistics: order must be >= 2"}; }
  auto values = std::vector<double>(static_cast<std::size_t>(n) - 1);
  for (auto& v : values) { v = rng.runif(); }
  std::ranges::sort(values);
  for (auto clean = false; !clean;) {
    clean = true;
    for (std::size_t i = 1; i < values.size(); ++i) {
      if (values[i - 1] == values[i]) {
        values[i] = rng.runif();
        clean = false;
      }
    }
    if (!clean) { std::ranges::sort(values); }
  }
  return values;
}

auto limit_quenched_sample(int n, Rng& rng) -> Limit_quenched_sample {
  if (n < 1) { throw std::invalid_argument{"limit_quenched_sample: order must be >= 1"}; }
  auto kill_length = rng.rgamma_int(n + 1, 2.0);
  auto points = std::vector<double>(static_cast<std::size_t>(n));
  for (auto& p : points) { p = rng.runif(0.0, kill_length); }
  std::ranges::sort(points);
  for (auto clean = false; !clean;) {
    clean = true;
    for (std::size_t i = 1; i < points.size(); ++i) {
      if (points[i - 1] == points[i]) {
        points[i] = rng.runif(0.0, kill_length);
        clean = false;
      }
    }
    if (!clean) { std::ranges::sort(points); }
  }

  auto spacings = std::vector<double>{};
  spacings.reserve(points.size() + 1);
  spacings.push_back(points.front());
  for (std::size_t i = 1; i < points.size(); ++i) { spacings.push_back(points[i] - points[i - 1]); }
  spacings.push_back(kill_length - points.back());

  auto interior = std::span<const double>{spacings}.subspan(1, points.size() - 1);
  auto times = exact_interval_sups(interior, Intensity_measure::brownian_capped(1.0), rng);
  return Limit_quenched_sample{.kill_length = kill_length,
                               .spacings = std::move(spacings),
                               .coalescence_times = std::move(times),
                               .order = n};
}

}  // namespace combgen

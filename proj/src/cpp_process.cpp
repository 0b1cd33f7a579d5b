#include "combgen/cpp_process.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace combgen {

namespace {

// Sorts atoms by position and redraws any collision (probability-zero events)
// so the comb constructor's distinctness requirement always holds.
auto sort_atoms_redraw(std::vector<Comb_atom>& atoms, double window_length, Rng& rng) -> void {
  auto by_position = [](const Comb_atom& a, const Comb_atom& b) { return a.position < b.position; };
  std::ranges::sort(atoms, by_position);
  for (auto clean = false; !clean;) {
    clean = true;
    for (std::size_t i = 1; i < atoms.size(); ++i) {
      if (atoms[i - 1].position == atoms[i].position) {
        atoms[i].position = rng.runif(0.0, window_length);
        clean = false;
      }
    }
    if (!clean) { std::ranges::sort(atoms, by_position); }
  }
}

}  // namespace

auto sample_cpp(const Intensity_measure& intensity, double window_length, double floor,
                Rng& rng) -> Cpp_sample {
  if (!(window_length > 0.0) || !std::isfinite(window_length)) {
    throw std::invalid_argument{"sample_cpp: window length must be positive and finite"};
  }
  if (!(floor > 0.0) || !std::isfinite(floor)) {
    throw std::invalid_argument{"sample_cpp: floor must be positive"};
  }
  auto total_tail = intensity.tail(floor);
  if (!std::isfinite(total_tail)) {
    throw std::invalid_argument{"sample_cpp: tail mass at the floor must be finite"};
  }
  auto count = total_tail > 0.0 ? rng.rpois(window_length * total_tail) : 0L;
  auto atoms = std::vector<Comb_atom>{};
  atoms.reserve(static_cast<std::size_t>(count));
  for (auto i = 0L; i != count; ++i) {
    auto position = rng.runif(0.0, window_length);
    // P(H >= t) = tail(t) / tail(floor) for t >= floor.
    auto height = intensity.tail_inverse(rng.runif() * total_tail);
    atoms.push_back({position, height});
  }
  sort_atoms_redraw(atoms, window_length, rng);
  return Cpp_sample{.comb = Comb{std::move(atoms), window_length, floor},
                    .intensity_name = intensity.name,
                    .generation_floor = floor};
}

auto sample_killed_brownian_cpp(double floor, Rng& rng) -> std::pair<Cpp_sample, double> {
  if (!(floor > 0.0 && floor < 1.0)) {
    throw std::invalid_argument{"sample_killed_brownian_cpp: floor must lie in (0, 1)"};
  }
  // Atoms above height 1 arrive at rate 2 along the window, so the first one
  // sits at an Exp(2) position; before it the heights are conditioned below 1.
  auto l1 = rng.rexp(2.0);
  auto sample = sample_cpp(Intensity_measure::brownian_capped(1.0), l1, floor, rng);
  return {std::move(sample), l1};
}

auto sample_size_biased_killed_cpp(int n, double floor, Rng& rng) -> Size_biased_killed_cpp {
  if (n < 0) { throw std::invalid_argument{"sample_size_biased_killed_cpp: order must be >= 0"}; }
  if (!(floor > 0.0 && floor < 1.0)) {
    throw std::invalid_argument{"sample_size_biased_killed_cpp: floor must lie in (0, 1)"};
  }
  auto kill_length = rng.rgamma_int(n + 1, 2.0);
  auto sample = sample_cpp(Intensity_measure::brownian_capped(1.0), kill_length, floor, rng);
  return Size_biased_killed_cpp{.comb = std::move(sample.comb),
                                .kill_length = kill_length,
                                .order = n};
}

auto exact_interval_sups(std::span<const double> widths, const Intensity_measure& intensity,
                         Rng& rng) -> std::vector<double> {
  auto sups = std::vector<double>{};
  sups.reserve(widths.size());
  for (auto width : widths) {
    if (!(width > 0.0) || !std::isfinite(width)) {
      throw std::invalid_argument{"exact_interval_sups: widths must be positive"};
    }
    sups.push_back(intensity.tail_inverse(-std::log(rng.runif()) / width));
  }
  return sups;
}

}  // namespace combgen

#ifndef COMBGEN_CPP_PROCESS_HPP
#define COMBGEN_CPP_PROCESS_HPP

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "combgen/comb.hpp"
#include "combgen/intensity.hpp"
#include "combgen/rng.hpp"

namespace combgen {

// A coalescent point process realization: atoms form a Poisson process with
// intensity dt (x) nu(dx), truncated below generation_floor.
struct Cpp_sample {
  Comb comb;
  std::string intensity_name;
  double generation_floor{};
};

// k_L(M) for L ~ Gamma(n+1, rate 2) and M the unit-capped Brownian CPP: the
// limit family genealogy under size-biased block choice of order n.
struct Size_biased_killed_cpp {
  Comb comb;  // window [0, kill_length), heights < 1
  double kill_length{};
  int order{};
};

// Atoms with height >= floor on [0, window_length): count is
// Poisson(window_length * tail(floor)), positions uniform, heights by tail
// inversion.  floor must be positive with finite tail mass.
auto sample_cpp(const Intensity_measure& intensity, double window_length, double floor,
                Rng& rng) -> Cpp_sample;

// The Brownian CPP killed at the first height above 1: returns the comb of
// atoms before that point together with the kill position l1 ~ Exp(2).
// floor must lie in (0, 1).
auto sample_killed_brownian_cpp(double floor, Rng& rng) -> std::pair<Cpp_sample, double>;

auto sample_size_biased_killed_cpp(int n, double floor, Rng& rng) -> Size_biased_killed_cpp;

// Independent suprema of a CPP over consecutive intervals of the given widths:
// S_i with P(S_i <= s) = exp(-width_i * tail(s)), drawn by inversion.  Exact at
// every height; no floor is involved.
auto exact_interval_sups(std::span<const double> widths, const Intensity_measure& intensity,
                         Rng& rng) -> std::vector<double>;

}  // namespace combgen

#endif  // COMBGEN_CPP_PROCESS_HPP

#ifndef COMBGEN_INTENSITY_HPP
#define COMBGEN_INTENSITY_HPP

#include <functional>
#include <optional>
#include <string>
#include <string_view>

namespace combgen {

// A sigma-finite measure on heights described by its tail mass
// tail(t) = measure of (t, infinity), finite for every t > 0, together with
// the generalized inverse used for sampling by tail inversion.
struct Intensity_measure {
  std::string name;
  std::function<double(double)> tail;
  std::function<double(double)> tail_inverse;
  std::optional<double> support_upper;  // heights never exceed this, when set

  // Density 2 dx / x^2: the branch-length measure of excursions, tail 2 / t.
  static auto brownian() -> Intensity_measure;

  // brownian restricted to heights below cap: tail 2 / t - 2 / cap on (0, cap).
  static auto brownian_capped(double cap) -> Intensity_measure;

  // Names accepted on the command line: "brownian", "brownian-capped-1",
  // or "brownian-capped:<cap>" for other caps.
  static auto by_name(std::string_view name) -> Intensity_measure;
};

}  // namespace combgen

#endif  // COMBGEN_INTENSITY_HPP

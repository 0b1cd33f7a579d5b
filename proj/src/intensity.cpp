#include "combgen/intensity.hpp"

#include <charconv>
#include <stdexcept>

namespace combgen {

auto Intensity_measure::brownian() -> Intensity_measure {
  return {
      .name = "brownian",
      .tail = [](double t) {
        if (t <= 0.0) { throw std::invalid_argument{"brownian tail: t must be positive"}; }
        return 2.0 / t;
      },
      .tail_inverse = [](double y) {
        if (y <= 0.0) { throw std::invalid_argument{"brownian tail inverse: mass must be positive"}; }
        return 2.0 / y;
      },
      .support_upper = std::nullopt,
  };
}

auto Intensity_measure::brownian_capped(double cap) -> Intensity_measure {
  if (cap <= 0.0) { throw std::invalid_argument{"brownian_capped: cap must be positive"}; }
  return {
      .name = "brownian-capped:" + std::to_string(cap),
      .tail = [cap](double t) {
        if (t <= 0.0) { throw std::invalid_argument{"capped tail: t must be positive"}; }
        return t >= cap ? 0.0 : 2.0 / t - 2.0 / cap;
      },
      .tail_inverse = [cap](double y) {
        if (y <= 0.0) { throw std::invalid_argument{"capped tail inverse: mass must be positive"}; }
        return 2.0 / (y + 2.0 / cap);
      },
      .support_upper = cap,
  };
}

auto Intensity_measure::by_name(std::string_view name) -> Intensity_measure {
  if (name == "brownian") { return brownian(); }
  if (name == "brownian-capped-1") { return brownian_capped(1.0); }
  constexpr auto prefix = std::string_view{"brownian-capped:"};
  if (name.starts_with(prefix)) {
    auto spec = name.substr(prefix.size());
    auto cap = 0.0;
    auto [end, ec] = std::from_chars(spec.data(), spec.data() + spec.size(), cap);
    if (ec != std::errc{} || end != spec.data() + spec.size()) {
      throw std::invalid_argument{"intensity: malformed cap in '" + std::string{name} + "'"};
    }
    return brownian_capped(cap);
  }
  throw std::invalid_argument{"intensity: unknown measure '" + std::string{name} + "'"};
}

}  // namespace combgen

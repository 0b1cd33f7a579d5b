#ifndef COMBGEN_CANNINGS_HPP
#define COMBGEN_CANNINGS_HPP

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "combgen/rng.hpp"

namespace combgen {

// A non-decreasing map {0,...,N} -> {0,...,N} with value(0) = 0 and
// value(N) = N: the cumulative offspring counts of one generation.  Its
// generalized inverse sends an individual to its parent.
class Discrete_bridge {
 public:
  explicit Discrete_bridge(std::vector<long> values);

  static auto identity(long size) -> Discrete_bridge;
  static auto from_offspring(std::span<const long> offspring) -> Discrete_bridge;

  auto size() const -> long { return static_cast<long>(values_.size()) - 1; }
  auto value(long x) const -> long;
  auto values() const -> const std::vector<long>& { return values_; }

  // (*this) after inner: x -> value(inner.value(x)).
  auto compose_after(const Discrete_bridge& inner) const -> Discrete_bridge;

  // min{y in {1,...,N} : value(y) >= x}: the parent map, for x in {1,...,N}.
  auto inverse(long x) const -> long;

  friend auto operator==(const Discrete_bridge&, const Discrete_bridge&) -> bool = default;

 private:
  std::vector<long> values_;
};

enum class Offspring_law { wright_fisher, moran };

auto offspring_law_from_name(std::string_view name) -> Offspring_law;
auto to_string(Offspring_law law) -> std::string;

// Any generator of exchangeable offspring counts summing to the population
// size can drive the flow.
using Offspring_sampler = std::function<std::vector<long>(long size, Rng& rng)>;

auto wright_fisher_offspring(long size, Rng& rng) -> std::vector<long>;
auto moran_offspring(long size, Rng& rng) -> std::vector<long>;

auto sample_offspring_bridge(long size, Offspring_law law, Rng& rng) -> Discrete_bridge;
auto sample_offspring_bridge(long size, const Offspring_sampler& sampler, Rng& rng)
    -> Discrete_bridge;

// generations[g] maps generation g to g + 1; the flow spans 0..length().
struct Bridge_flow {
  std::vector<Discrete_bridge> generations;

  auto size() const -> long { return generations.empty() ? 0 : generations.front().size(); }
  auto length() const -> long { return static_cast<long>(generations.size()); }
};

auto sample_bridge_flow(long size, long num_generations, Offspring_law law, Rng& rng)
    -> Bridge_flow;

// B_{m,n}: the composition of the stored bridges from generation m to n, m < n.
auto compose(const Bridge_flow& flow, long m, long n) -> Discrete_bridge;

// Smallest k such that individuals x and y of the last generation share an
// ancestor k generations back; nullopt if the flow ends first.  Lineages
// stay merged once they meet.
auto pair_coalescence_generation(const Bridge_flow& flow, long x, long y) -> std::optional<long>;

// Same walk over freshly sampled i.i.d. bridges, without storing a flow;
// capped at max_generations.
auto sample_pair_coalescence_generation(long size, Offspring_law law, long x, long y, Rng& rng,
                                        long max_generations) -> std::optional<long>;

}  // namespace combgen

#endif  // COMBGEN_CANNINGS_HPP

#include "combgen/cannings.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace combgen {

Discrete_bridge::Discrete_bridge(std::vector<long> values) : values_{std::move(values)} {
  if (values_.size() < 2) {
    throw std::invalid_argument{"bridge: need values for 0..N with N >= 1"};
  }
  auto n = static_cast<long>(values_.size()) - 1;
  if (values_.front() != 0 || values_.back() != n) {
    throw std::invalid_argument{"bridge: endpoints must be value(0) = 0 and value(N) = N"};
  }
  for (std::size_t i = 1; i < values_.size(); ++i) {
    if (values_[i] < values_[i - 1]) {
      throw std::invalid_argument{"bridge: values must be non-decreasing"};
    }
  }
}

auto Discrete_bridge::identity(long size) -> Discrete_bridge {
  if (size < 1) { throw std::invalid_argument{"bridge: size must be >= 1"}; }
  auto values = std::vector<long>(static_cast<std::size_t>(size) + 1);
  std::iota(values.begin(), values.end(), 0L);
  return Discrete_bridge{std::move(values)};
}

auto Discrete_bridge::from_offspring(std::span<const long> offspring) -> Discrete_bridge {
  auto values = std::vector<long>{};
  values.reserve(offspring.size() + 1);
  values.push_back(0);
  auto acc = 0L;
  for (auto count : offspring) {
    if (count < 0) { throw std::invalid_argument{"bridge: offspring counts must be >= 0"}; }
    acc += count;
    values.push_back(acc);
  }
  return Discrete_bridge{std::move(values)};
}

auto Discrete_bridge::value(long x) const -> long {
  if (x < 0 || x > size()) { throw std::invalid_argument{"bridge: argument outside 0..N"}; }
  return values_[static_cast<std::size_t>(x)];
}

auto Discrete_bridge::compose_after(const Discrete_bridge& inner) const -> Discrete_bridge {
  if (inner.size() != size()) { throw std::invalid_argument{"bridge: size mismatch in composition"}; }
  auto values = std::vector<long>{};
  values.reserve(values_.size());
  for (auto v : inner.values_) { values.push_back(values_[static_cast<std::size_t>(v)]); }
  return Discrete_bridge{std::move(values)};
}

auto Discrete_bridge::inverse(long x) const -> long {
  if (x < 1 || x > size()) { throw std::invalid_argument{"bridge: inverse argument outside 1..N"}; }
  // value(0) = 0 < x, so the first position reaching x is >= 1.
  auto it = std::ranges::lower_bound(values_, x);
  return static_cast<long>(it - values_.begin());
}

auto offspring_law_from_name(std::string_view name) -> Offspring_law {
  if (name == "wright-fisher") { return Offspring_law::wright_fisher; }
  if (name == "moran") { return Offspring_law::moran; }
  throw std::invalid_argument{"offspring law: expected wright-fisher or moran, got '" +
                              std::string{name} + "'"};
}

auto to_string(Offspring_law law) -> std::string {
  switch (law) {
    case Offspring_law::wright_fisher: return "wright-fisher";
    case Offspring_law::moran: return "moran";
  }
  return "unknown";
}

auto wright_fisher_offspring(long size, Rng& rng) -> std::vector<long> {
  if (size < 2) { throw std::invalid_argument{"offspring: population size must be >= 2"}; }
  auto counts = std::vector<long>(static_cast<std::size_t>(size), 0L);
  for (auto child = 0L; child != size; ++child) {
    ++counts[rng.rint(static_cast<std::uint64_t>(size))];
  }
  return counts;
}

auto moran_offspring(long size, Rng& rng) -> std::vector<long> {
  if (size < 2) { throw std::invalid_argument{"offspring: population size must be >= 2"}; }
  auto counts = std::vector<long>(static_cast<std::size_t>(size), 1L);
  auto winner = rng.rint(static_cast<std::uint64_t>(size));
  auto loser = rng.rint(static_cast<std::uint64_t>(size) - 1);
  if (loser >= winner) { ++loser; }
  counts[winner] = 2;
  counts[loser] = 0;
  return counts;
}

auto sample_offspring_bridge(long size, Offspring_law law, Rng& rng) -> Discrete_bridge {
  switch (law) {
    case Offspring_law::wright_fisher: return Discrete_bridge::from_offspring(wright_fisher_offspring(size, rng));
    case Offspring_law::moran: return Discrete_bridge::from_offspring(moran_offspring(size, rng));
  }
  throw std::invalid_argument{"offspring law: unknown"};
}

auto sample_offspring_bridge(long size, const Offspring_sampler& sampler, Rng& rng)
    -> Discrete_bridge {
  auto offspring = sampler(size, rng);
  if (static_cast<long>(offspring.size()) != size) {
    throw std::invalid_argument{"offspring sampler: wrong vector length"};
  }
  return Discrete_bridge::from_offspring(offspring);
}

auto sample_bridge_flow(long size, long num_generations, Offspring_law law, Rng& rng)
    -> Bridge_flow {
  if (num_generations < 1) { throw std::invalid_argument{"flow: need at least one generation"}; }
  auto flow = Bridge_flow{};
  flow.generations.reserve(static_cast<std::size_t>(num_generations));
  for (auto g = 0L; g != num_generations; ++g) {
    flow.generations.push_back(sample_offspring_bridge(size, law, rng));
  }
  return flow;
}

auto compose(const Bridge_flow& flow, long m, long n) -> Discrete_bridge {
  if (m < 0 || n > flow.length() || m >= n) {
    throw std::invalid_argument{"compose: need 0 <= m < n <= flow length"};
  }
  auto bridge = flow.generations[static_cast<std::size_t>(m)];
  for (auto g = m + 1; g != n; ++g) {
    bridge = flow.generations[static_cast<std::size_t>(g)].compose_after(bridge);
  }
  return bridge;
}

auto pair_coalescence_generation(const Bridge_flow& flow, long x, long y) -> std::optional<long> {
  auto size = flow.size();
  if (x < 1 || x > size || y < 1 || y > size || x == y) {
    throw std::invalid_argument{"pair coalescence: need distinct labels in 1..N"};
  }
  auto a = x;
  auto b = y;
  for (auto k = 1L; k <= flow.length(); ++k) {
    const auto& bridge = flow.generations[static_cast<std::size_t>(flow.length() - k)];
    a = bridge.inverse(a);
    b = bridge.inverse(b);
    if (a == b) { return k; }
  }
  return std::nullopt;
}

auto sample_pair_coalescence_generation(long size, Offspring_law law, long x, long y, Rng& rng,
                                        long max_generations) -> std::optional<long> {
  if (x < 1 || x > size || y < 1 || y > size || x == y) {
    throw std::invalid_argument{"pair coalescence: need distinct labels in 1..N"};
  }
  if (max_generations < 1) { throw std::invalid_argument{"pair coalescence: budget must be >= 1"}; }
  auto a = x;
  auto b = y;
  for (auto k = 1L; k <= max_generations; ++k) {
    auto bridge = sample_offspring_bridge(size, law, rng);
    a = bridge.inverse(a);
    b = bridge.inverse(b);
    if (a == b) { return k; }
  }
  return std::nullopt;
}

}  // namespace combgen

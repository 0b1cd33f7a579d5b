#include "combgen/comb.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace combgen {

namespace {

auto require(bool ok, const char* message) -> void {
  if (!ok) { throw std::invalid_argument{message}; }
}

}  // namespace

Comb::Comb(std::vector<Comb_atom> atoms, double window_length, double floor)
    : atoms_{std::move(atoms)}, window_length_{window_length}, floor_{floor} {
  require(window_length_ > 0.0 && !std::isnan(window_length_),
          "Comb: window length must be positive");
  require(floor_ >= 0.0 && std::isfinite(floor_), "Comb: floor must be finite and nonnegative");
  for (const auto& [p, h] : atoms_) {
    require(std::isfinite(p) && p >= 0.0 && p < window_length_,
            "Comb: atom positions must lie in [0, window)");
    require(std::isfinite(h) && h > 0.0, "Comb: atom heights must be positive");
    require(h >= floor_, "Comb: atom heights must not fall below the floor");
  }
  std::ranges::sort(atoms_, {}, &Comb_atom::position);
  for (std::size_t i = 1; i < atoms_.size(); ++i) {
    require(atoms_[i - 1].position != atoms_[i].position, "Comb: atom positions must be distinct");
  }
  build_tables();
}

auto Comb::build_tables() -> void {
  auto n = atoms_.size();
  prefix_max_.resize(n);
  auto running = 0.0;
  for (std::size_t i = 0; i != n; ++i) {
    running = std::max(running, atoms_[i].height);
    prefix_max_[i] = running;
  }
  range_table_.clear();
  if (n == 0) { return; }
  auto levels = std::bit_width(n);  // floor(log2(n)) + 1
  range_table_.reserve(levels);
  auto& base = range_table_.emplace_back(n);
  for (std::size_t i = 0; i != n; ++i) { base[i] = atoms_[i].height; }
  for (auto k = 1; k != static_cast<int>(levels); ++k) {
    auto half = std::size_t{1} << (k - 1);
    auto rows = n - (std::size_t{1} << k) + 1;
    auto& row = range_table_.emplace_back(rows);
    const auto& prev = range_table_[static_cast<std::size_t>(k) - 1];
    for (std::size_t i = 0; i != rows; ++i) { row[i] = std::max(prev[i], prev[i + half]); }
  }
}

auto Comb::is_bounded() const -> bool {
  return std::isfinite(window_length_);
}

auto Comb::max_height() const -> double {
  return prefix_max_.empty() ? 0.0 : prefix_max_.back();
}

auto Comb::atom_index_at(double x) const -> std::optional<std::size_t> {
  auto it = std::ranges::lower_bound(atoms_, x, {}, &Comb_atom::position);
  if (it != atoms_.end() && it->position == x) {
    return static_cast<std::size_t>(it - atoms_.begin());
  }
  return std::nullopt;
}

auto Comb::range_max(double lo, double hi) const -> double {
  if (!(lo < hi)) { return 0.0; }
  // First atom strictly right of lo, last strictly left of hi.
  auto first = std::ranges::upper_bound(atoms_, lo, {}, &Comb_atom::position) - atoms_.begin();
  auto last = std::ranges::lower_bound(atoms_, hi, {}, &Comb_atom::position) - atoms_.begin() - 1;
  if (first > last) { return 0.0; }
  auto i = static_cast<std::size_t>(first);
  auto j = static_cast<std::size_t>(last);
  auto k = std::bit_width(j - i + 1) - 1;  // largest power of two fitting the span
  auto width = std::size_t{1} << k;
  const auto& row = range_table_[static_cast<std::size_t>(k)];
  return std::max(row[i], row[j + 1 - width]);
}

auto Comb::has_atom_at(double x) const -> bool {
  return atom_index_at(x).has_value();
}

auto Comb::metric(double x, double y) const -> double {
  auto check_point = [&](double v) {
    require(std::isfinite(v) && v >= 0.0 && v <= window_length_,
            "Comb::metric: points must lie within the window");
    require(!atom_index_at(v).has_value(),
            "Comb::metric: atom positions are not zero-set points");
  };
  check_point(x);
  check_point(y);
  if (x == y) { return 0.0; }
  return range_max(std::min(x, y), std::max(x, y));
}

auto Comb::kill(double t) const -> Comb {
  require(t > 0.0 && !std::isnan(t), "Comb::kill: cut must be positive");
  if (t >= window_length_) { return *this; }
  auto cut = std::ranges::lower_bound(atoms_, t, {}, &Comb_atom::position);
  auto kept = std::vector<Comb_atom>{atoms_.begin(), cut};
  return Comb{std::move(kept), t, floor_};
}

auto Comb::scale(double a) const -> Comb {
  require(a > 0.0 && std::isfinite(a), "Comb::scale: factor must be positive and finite");
  auto scaled = std::vector<Comb_atom>{};
  scaled.reserve(atoms_.size());
  for (const auto& [p, h] : atoms_) { scaled.push_back({a * p, h / a}); }
  auto window = is_bounded() ? a * window_length_ : window_length_;
  return Comb{std::move(scaled), window, floor_ / a};
}

auto Comb::first_exceed(double x) const -> std::optional<double> {
  require(x > 0.0 && !std::isnan(x), "Comb::first_exceed: threshold must be positive");
  require(x >= floor_, "Comb::first_exceed: threshold below the floor is undecidable");
  auto it = std::ranges::upper_bound(prefix_max_, x);
  if (it == prefix_max_.end()) { return std::nullopt; }
  return atoms_[static_cast<std::size_t>(it - prefix_max_.begin())].position;
}

auto Comb::to_point_measure() const -> std::vector<Comb_atom> {
  auto points = atoms_;
  std::ranges::sort(points, [](const Comb_atom& a, const Comb_atom& b) {
    return a.height != b.height ? a.height > b.height : a.position < b.position;
  });
  return points;
}

auto to_json(nlohmann::json& j, const Comb& comb) -> void {
  j = nlohmann::json::object();
  if (comb.is_bounded()) {
    j["window"] = comb.window_length();
  } else {
    j["window"] = nullptr;
  }
  j["floor"] = comb.floor();
  auto atoms = nlohmann::json::array();
  for (const auto& [p, h] : comb.atoms()) { atoms.push_back(nlohmann::json::array({p, h})); }
  j["atoms"] = std::move(atoms);
}

auto from_json(const nlohmann::json& j, Comb& comb) -> void {
  if (!j.is_object() || !j.contains("atoms") || !j.contains("floor") || !j.contains("window")) {
    throw std::invalid_argument{"Comb: expected an object with window, floor and atoms"};
  }
  auto window = std::numeric_limits<double>::infinity();
  if (!j.at("window").is_null()) { window = j.at("window").get<double>(); }
  auto floor = j.at("floor").get<double>();
  auto atoms = std::vector<Comb_atom>{};
  for (const auto& entry : j.at("atoms")) {
    if (!entry.is_array() || entry.size() != 2) {
      throw std::invalid_argument{"Comb: each atom must be a [position, height] pair"};
    }
    atoms.push_back({entry.at(0).get<double>(), entry.at(1).get<double>()});
  }
  comb = Comb{std::move(atoms), window, floor};
}

}  // namespace combgen

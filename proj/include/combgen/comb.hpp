#ifndef COMBGEN_COMB_HPP
#define COMBGEN_COMB_HPP

#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

#include "json.hpp"

namespace combgen {

struct Comb_atom {
  double position{};
  double height{};
  friend auto operator==(const Comb_atom&, const Comb_atom&) -> bool = default;
};

// A finite planar representation of an ultrametric: finitely many atoms
// (position, height) on a window [0, W), zero elsewhere.  The distance between
// two zero-set points is the tallest atom strictly between them.  Immutable
// after construction; range maxima are answered from a sparse table built once.
class Comb {
 public:
  // An empty comb on an unbounded window with floor 0.
  Comb() = default;

  // Atoms may arrive unsorted; they are sorted by position.  Duplicate
  // positions are invalid.  Heights must be finite, positive and >= floor.
  // window_length may be +infinity for combs with no declared window.
  Comb(std::vector<Comb_atom> atoms, double window_length, double floor = 0.0);

  auto atoms() const -> const std::vector<Comb_atom>& { return atoms_; }
  auto window_length() const -> double { return window_length_; }
  auto floor() const -> double { return floor_; }
  auto is_bounded() const -> bool;
  auto size() const -> std::size_t { return atoms_.size(); }
  auto empty() const -> bool { return atoms_.empty(); }
  auto max_height() const -> double;  // 0 for an empty comb

  // Ultrametric distance between zero-set points x and y in [0, W].
  // Querying an atom position is an error: those points carry mass.
  auto metric(double x, double y) const -> double;

  auto has_atom_at(double x) const -> bool;

  // Max atom height at positions strictly inside (lo, hi); 0 if none.
  auto range_max(double lo, double hi) const -> double;

  // Restriction to [0, t): keeps atoms left of t.  t beyond the window is a
  // no-op; t must be positive.
  auto kill(double t) const -> Comb;

  // Mass rescaling by a > 0: atom (p, h) -> (a p, h / a), window a W,
  // floor / a.
  auto scale(double a) const -> Comb;

  // Position of the first atom with height strictly above x; nullopt when the
  // comb never exceeds x.  x must be positive and at least the floor: below
  // the floor, unrepresented atoms could change the answer.
  auto first_exceed(double x) const -> std::optional<double>;

  // The atoms as a point collection, tallest first (height-sorted view).
  auto to_point_measure() const -> std::vector<Comb_atom>;

 private:
  std::vector<Comb_atom> atoms_;
  double window_length_{std::numeric_limits<double>::infinity()};
  double floor_{0.0};
  std::vector<std::vector<double>> range_table_;  // sparse table over heights
  std::vector<double> prefix_max_;

  auto build_tables() -> void;
  auto atom_index_at(double x) const -> std::optional<std::size_t>;
};

// JSON interchange: {"window": W or null, "floor": d, "atoms": [[p, h], ...]}.
auto to_json(nlohmann::json& j, const Comb& comb) -> void;
auto from_json(const nlohmann::json& j, Comb& comb) -> void;

}  // namespace combgen

#endif  // COMBGEN_COMB_HPP

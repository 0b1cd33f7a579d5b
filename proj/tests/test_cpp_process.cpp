#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"

#include "combgen/cpp_process.hpp"
#include "combgen/intensity.hpp"
#include "combgen/rng.hpp"
#include "combgen/stats.hpp"

using combgen::Intensity_measure;
using combgen::Rng;

TEST_SUITE("cpp_process") {

TEST_CASE("intensity measures expose the right tails") {
  auto brownian = Intensity_measure::brownian();
  CHECK(brownian.tail(0.5) == 4.0);
  CHECK(brownian.tail_inverse(4.0) == 0.5);
  CHECK_FALSE(brownian.support_upper.has_value());

  auto capped = Intensity_measure::by_name("brownian-capped-1");
  CHECK(capped.tail(0.5) == 2.0);
  CHECK(capped.tail(1.0) == 0.0);
  CHECK(capped.support_upper == 1.0);
  CHECK(capped.tail_inverse(2.0) == doctest::Approx(0.5));

  auto wide = Intensity_measure::by_name("brownian-capped:4");
  CHECK(wide.tail(2.0) == doctest::Approx(0.5));

  CHECK_THROWS_AS(Intensity_measure::by_name("nope"), std::invalid_argument);
}

TEST_CASE("atom count is Poisson with mean window times tail") {
  auto rng = Rng{21};
  auto reps = 4000;
  auto counts = std::vector<long>{};
  for (auto i = 0; i != reps; ++i) {
    auto sample = combgen::sample_cpp(Intensity_measure::brownian(), 1.0, 0.5, rng);
    counts.push_back(static_cast<long>(sample.comb.size()));
  }
  auto report = combgen::poisson_count_test("cpp-count", counts, 4.0, 0.01, 21);
  CHECK(report.pass);
}

TEST_CASE("heights follow the normalized tail law") {
  auto rng = Rng{22};
  auto total = 0L;
  auto above = 0L;
  for (auto i = 0; i != 3000; ++i) {
    auto sample = combgen::sample_cpp(Intensity_measure::brownian(), 1.0, 0.5, rng);
    for (const auto& atom : sample.comb.atoms()) {
      REQUIRE(atom.height >= 0.5);
      ++total;
      if (atom.height >= 1.0) { ++above; }
    }
  }
  // P(H >= 1 | H >= 0.5) = tail(1)/tail(0.5) = 1/2.
  auto fraction = static_cast<double>(above) / static_cast<double>(total);
  CHECK(std::abs(fraction - 0.5) < 4.0 * 0.5 / std::sqrt(static_cast<double>(total)));
}

TEST_CASE("killed brownian cpp: kill time is Exp(2) and heights stay below one") {
  auto rng = Rng{23};
  auto reps = 2000;
  auto kills = std::vector<double>{};
  for (auto i = 0; i != reps; ++i) {
    auto [sample, kill] = combgen::sample_killed_brownian_cpp(0.2, rng);
    CHECK(sample.comb.window_length() == kill);
    for (const auto& atom : sample.comb.atoms()) { REQUIRE(atom.height < 1.0); }
    kills.push_back(kill);
  }
  auto cdf = [](double t) { return t > 0.0 ? 1.0 - std::exp(-2.0 * t) : 0.0; };
  auto report = combgen::ks_one_sample("kill-time", kills, cdf, 0.05, 23);
  CHECK(report.pass);
}

TEST_CASE("size-biased kill length has the Gamma(n + 1, 2) mean") {
  auto rng = Rng{24};
  auto reps = 4000;
  auto sum = 0.0;
  for (auto i = 0; i != reps; ++i) {
    auto sample = combgen::sample_size_biased_killed_cpp(2, 0.2, rng);
    CHECK(sample.order == 2);
    CHECK(sample.comb.window_length() == sample.kill_length);
    sum += sample.kill_length;
  }
  // Gamma(3, 2): mean 1.5, sd sqrt(3)/2.
  CHECK(std::abs(sum / reps - 1.5) < 4.0 * std::sqrt(0.75 / reps));
}

TEST_CASE("exact interval sups invert the tail") {
  auto rng = Rng{25};
  auto reps = 20000;
  auto below_brownian = 0;
  auto below_capped = 0;
  auto widths = std::vector<double>{1.0};
  for (auto i = 0; i != reps; ++i) {
    auto sup = combgen::exact_interval_sups(widths, Intensity_measure::brownian(), rng).front();
    if (sup <= 0.5) { ++below_brownian; }
    auto capped =
        combgen::exact_interval_sups(widths, Intensity_measure::brownian_capped(1.0), rng).front();
    REQUIRE(capped < 1.0);
    if (capped <= 0.5) { ++below_capped; }
  }
  // P(S <= 0.5) = exp(-tail(0.5)): e^-4 uncapped, e^-2 capped at 1.
  auto p1 = std::exp(-4.0);
  auto p2 = std::exp(-2.0);
  CHECK(std::abs(below_brownian / static_cast<double>(reps) - p1) <
        4.0 * std::sqrt(p1 * (1 - p1) / reps));
  CHECK(std::abs(below_capped / static_cast<double>(reps) - p2) <
        4.0 * std::sqrt(p2 * (1 - p2) / reps));
}

TEST_CASE("lowering the floor and thinning preserves the law") {
  auto rng = Rng{26};
  auto reps = 3000;
  auto coarse = std::vector<long>{};
  auto thinned = std::vector<long>{};
  for (auto i = 0; i != reps; ++i) {
    auto a = combgen::sample_cpp(Intensity_measure::brownian(), 1.0, 0.3, rng);
    coarse.push_back(static_cast<long>(a.comb.size()));
    auto b = combgen::sample_cpp(Intensity_measure::brownian(), 1.0, 0.15, rng);
    auto kept = 0L;
    for (const auto& atom : b.comb.atoms()) {
      if (atom.height >= 0.3) { ++kept; }
    }
    thinned.push_back(kept);
  }
  auto report = combgen::chi_square_homogeneity("floor-thinning", coarse, thinned, 0.01, 26);
  CHECK(report.pass);
}

TEST_CASE("self-similarity: scaling a brownian cpp matches direct sampling") {
  auto rng = Rng{27};
  auto reps = 1500;
  auto scaled = std::vector<double>{};
  auto direct = std::vector<double>{};
  for (auto i = 0; i != reps; ++i) {
    auto a = combgen::sample_cpp(Intensity_measure::brownian(), 1.0, 0.25, rng);
    scaled.push_back(a.comb.scale(2.0).max_height());
    // scale(2) divides heights by 2, so the matching direct law sits on the
    // half-length window: both suprema have P(M <= g) = exp(-1/g).
    auto b = combgen::sample_cpp(Intensity_measure::brownian(), 0.5, 0.125, rng);
    direct.push_back(b.comb.max_height());
  }
  auto report = combgen::ks_two_sample("self-similarity", scaled, direct, 0.07, 27);
  CHECK(report.pass);
}

TEST_CASE("sups over disjoint intervals are uncorrelated") {
  auto rng = Rng{28};
  auto reps = 3000;
  auto left = std::vector<double>{};
  auto right = std::vector<double>{};
  for (auto i = 0; i != reps; ++i) {
    auto sample = combgen::sample_cpp(Intensity_measure::brownian(), 2.0, 0.2, rng);
    left.push_back(sample.comb.range_max(0.0, 1.0));
    right.push_back(sample.comb.range_max(1.0, 2.0));
  }
  auto report = combgen::correlation_check("disjoint-sups", left, right, 0.08, 28);
  CHECK(report.pass);
}

TEST_CASE("invalid arguments are rejected") {
  auto rng = Rng{29};
  auto brownian = Intensity_measure::brownian();
  CHECK_THROWS_AS(combgen::sample_cpp(brownian, 0.0, 0.5, rng), std::invalid_argument);
  CHECK_THROWS_AS(combgen::sample_cpp(brownian, 1.0, 0.0, rng), std::invalid_argument);
  CHECK_THROWS_AS(combgen::sample_killed_brownian_cpp(0.0, rng), std::invalid_argument);
  CHECK_THROWS_AS(combgen::sample_killed_brownian_cpp(1.5, rng), std::invalid_argument);
  CHECK_THROWS_AS(combgen::sample_size_biased_killed_cpp(-1, 0.2, rng), std::invalid_argument);
  auto bad_width = std::vector<double>{0.0};
  CHECK_THROWS_AS(combgen::exact_interval_sups(bad_width, brownian, rng), std::invalid_argument);
}

}  // TEST_SUITE

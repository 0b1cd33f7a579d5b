#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "doctest.h"

#include "combgen/conditional.hpp"
#include "combgen/errors.hpp"
#include "combgen/rng.hpp"
#include "combgen/stats.hpp"

using combgen::Rng;

TEST_SUITE("conditional") {

TEST_CASE("quenched samples satisfy their structural invariants") {
  auto rng = Rng{31};
  for (auto i = 0; i != 500; ++i) {
    auto sample = combgen::quenched_conditional_sample(3, 0.05, rng, 0.2);
    CHECK(sample.order == 3);
    CHECK(sample.eps == 0.05);
    CHECK(sample.attempts == 1);
    CHECK(sample.block_length > 0.0);
    CHECK(sample.block_length <= 1.0);
    CHECK(sample.block_comb.window_length() == doctest::Approx(sample.block_length));
    REQUIRE(sample.coalescence_times.size() == 2);
    for (auto t : sample.coalescence_times) {
      CHECK(t >= 0.0);
      CHECK(t <= 0.05);
    }
  }
}

TEST_CASE("size-biased block length scales to Gamma(2, 2)") {
  auto rng = Rng{32};
  auto eps = 0.02;
  auto scaled = std::vector<double>{};
  for (auto i = 0; i != 4000; ++i) {
    auto sample = combgen::quenched_conditional_sample(1, eps, rng, 1.0);
    scaled.push_back(sample.block_length / eps);
  }
  auto cdf = [](double t) { return combgen::erlang_cdf(2, 2.0, t); };
  auto report = combgen::ks_one_sample("block-length-gamma", scaled, cdf, 0.05, 32);
  CHECK(report.pass);
}

TEST_CASE("averaged times are strictly increasing in (0, 1)") {
  auto rng = Rng{33};
  for (auto i = 0; i != 300; ++i) {
    auto sample = combgen::averaged_conditional_sample(4, 0.1, rng);
    REQUIRE(sample.ranked_times.size() == 3);
    CHECK(sample.attempts >= 1);
    auto prev = 0.0;
    for (auto t : sample.ranked_times) {
      CHECK(t > prev);
      CHECK(t < 1.0);
      prev = t;
    }
  }
}

TEST_CASE("averaged n = 2 matches the exact conditioned exponential") {
  auto rng = Rng{34};
  auto eps = 0.1;
  auto times = std::vector<double>{};
  for (auto i = 0; i != 4000; ++i) {
    times.push_back(combgen::averaged_conditional_sample(2, eps, rng).ranked_times.front());
  }
  // T_2 ~ Exp(1) given T_2 < eps; rescaled cdf (1 - e^{-eps t}) / (1 - e^{-eps}).
  auto cdf = [eps](double t) { return (1.0 - std::exp(-eps * t)) / (1.0 - std::exp(-eps)); };
  auto report = combgen::ks_one_sample("averaged-n2", times, cdf, 0.035, 34);
  CHECK(report.pass);
}

TEST_CASE("averaged n = 3 pooled rescaled times are near-uniform") {
  auto rng = Rng{35};
  auto pooled = std::vector<double>{};
  for (auto i = 0; i != 2000; ++i) {
    auto sample = combgen::averaged_conditional_sample(3, 0.03, rng, 80'000);
    pooled.insert(pooled.end(), sample.ranked_times.begin(), sample.ranked_times.end());
  }
  auto report = combgen::ks_one_sample(
      "averaged-n3-pooled", pooled, [](double t) { return std::clamp(t, 0.0, 1.0); }, 0.05, 35);
  CHECK(report.pass);
}

TEST_CASE("limit order statistics are sorted uniforms") {
  auto rng = Rng{36};
  auto reps = 4000;
  auto min_sum = 0.0;
  for (auto i = 0; i != reps; ++i) {
    auto times = combgen::limit_order_statistics(5, rng);
    REQUIRE(times.size() == 4);
    CHECK(std::is_sorted(times.begin(), times.end()));
    CHECK(times.front() > 0.0);
    CHECK(times.back() < 1.0);
    min_sum += times.front();
  }
  // min of 4 uniforms ~ Beta(1, 4): mean 1/5, var 4/150.
  CHECK(std::abs(min_sum / reps - 0.2) < 4.0 * std::sqrt(4.0 / 150.0 / reps));
}

TEST_CASE("limit quenched samples satisfy their structural invariants") {
  auto rng = Rng{37};
  for (auto i = 0; i != 500; ++i) {
    auto sample = combgen::limit_quenched_sample(3, rng);
    CHECK(sample.order == 3);
    REQUIRE(sample.spacings.size() == 4);
    REQUIRE(sample.coalescence_times.size() == 2);
    auto sum = std::accumulate(sample.spacings.begin(), sample.spacings.end(), 0.0);
    CHECK(sum == doctest::Approx(sample.kill_length).epsilon(1e-12));
    for (auto t : sample.coalescence_times) {
      CHECK(t > 0.0);
      CHECK(t < 1.0);
    }
  }
}

TEST_CASE("limit coalescence times have uniform marginals") {
  auto rng = Rng{38};
  auto firsts = std::vector<double>{};
  auto seconds = std::vector<double>{};
  for (auto i = 0; i != 4000; ++i) {
    auto sample = combgen::limit_quenched_sample(3, rng);
    firsts.push_back(sample.coalescence_times[0]);
    seconds.push_back(sample.coalescence_times[1]);
  }
  auto uniform = [](double t) { return std::clamp(t, 0.0, 1.0); };
  CHECK(combgen::ks_one_sample("limit-h1", firsts, uniform, 0.03, 38).pass);
  CHECK(combgen::ks_one_sample("limit-h2", seconds, uniform, 0.03, 38).pass);
}

TEST_CASE("rejection scheme agrees with the direct size-biased sampler") {
  auto direct_rng = Rng{39};
  auto rejection_rng = Rng{40};
  auto reps = 1500;
  auto direct_lengths = std::vector<double>{};
  auto rejection_lengths = std::vector<double>{};
  auto direct_times = std::vector<double>{};
  auto rejection_times = std::vector<double>{};
  for (auto i = 0; i != reps; ++i) {
    auto a = combgen::quenched_conditional_sample(2, 0.2, direct_rng, 0.05);
    direct_lengths.push_back(a.block_length / 0.2);
    direct_times.push_back(a.coalescence_times.front() / 0.2);
    auto b = combgen::quenched_conditional_sample_rejection(2, 0.2, rejection_rng, 0.05);
    CHECK(b.attempts >= 1);
    rejection_lengths.push_back(b.block_length / 0.2);
    rejection_times.push_back(b.coalescence_times.front() / 0.2);
  }
  CHECK(combgen::ks_two_sample("lengths", direct_lengths, rejection_lengths, 0.07, 39).pass);
  CHECK(combgen::ks_two_sample("times", direct_times, rejection_times, 0.07, 39).pass);
}

TEST_CASE("block moment statistic has mean n factorial") {
  auto rng = Rng{41};
  auto reps = 3000;
  auto z1 = std::vector<double>{};
  auto z2 = std::vector<double>{};
  for (auto i = 0; i != reps; ++i) {
    z1.push_back(combgen::block_moment_statistic(1, 0.003, rng));
    z2.push_back(combgen::block_moment_statistic(2, 0.003, rng));
  }
  CHECK(combgen::mean_within_se("z1", z1, 1.0, 4.0, 41).pass);
  CHECK(combgen::mean_within_se("z2", z2, 2.0, 4.0, 41).pass);
}

TEST_CASE("invalid arguments are rejected") {
  auto rng = Rng{42};
  CHECK_THROWS_AS(combgen::quenched_conditional_sample(0, 0.05, rng), std::invalid_argument);
  CHECK_THROWS_AS(combgen::quenched_conditional_sample(2, 0.0, rng), std::invalid_argument);
  CHECK_THROWS_AS(combgen::quenched_conditional_sample(2, 0.05, rng, 1.5), std::invalid_argument);
  CHECK_THROWS_AS(combgen::quenched_conditional_sample(2, 0.05, rng, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(combgen::averaged_conditional_sample(1, 0.1, rng), std::invalid_argument);
  CHECK_THROWS_AS(combgen::averaged_conditional_sample(2, -0.1, rng), std::invalid_argument);
  CHECK_THROWS_AS(combgen::block_moment_statistic(0, 0.01, rng), std::invalid_argument);
  CHECK_THROWS_AS(combgen::limit_order_statistics(1, rng), std::invalid_argument);
  CHECK_THROWS_AS(combgen::limit_quenched_sample(0, rng), std::invalid_argument);
}

TEST_CASE("hopeless rejection budgets trip the resource cap") {
  auto rng = Rng{43};
  CHECK_THROWS_AS(combgen::quenched_conditional_sample_rejection(3, 1e-5, rng),
                  combgen::Resource_cap_error);
  CHECK_THROWS_AS(combgen::averaged_conditional_sample(3, 1e-4, rng, 5),
                  combgen::Resource_cap_error);
}

}  // TEST_SUITE

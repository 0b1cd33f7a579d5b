#include <atomic>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"

#include "combgen/rng.hpp"

using combgen::Rng;

TEST_SUITE("rng") {

TEST_CASE("substreams are deterministic and index-separated") {
  auto a1 = Rng::substream(42, 7);
  auto a2 = Rng::substream(42, 7);
  auto b = Rng::substream(42, 8);
  auto differs = false;
  for (auto i = 0; i != 5; ++i) {
    auto v = a1.runif();
    CHECK(v == a2.runif());
    if (v != b.runif()) { differs = true; }
  }
  CHECK(differs);
}

TEST_CASE("runif stays strictly inside the unit interval") {
  auto rng = Rng{1};
  for (auto i = 0; i != 20000; ++i) {
    auto u = rng.runif();
    REQUIRE(u > 0.0);
    REQUIRE(u < 1.0);
  }
}

TEST_CASE("runif(lo, hi) respects its bounds") {
  auto rng = Rng{2};
  for (auto i = 0; i != 1000; ++i) {
    auto u = rng.runif(-2.0, 3.0);
    REQUIRE(u > -2.0);
    REQUIRE(u < 3.0);
  }
}

TEST_CASE("rexp matches its mean") {
  auto rng = Rng{3};
  auto n = 20000;
  auto sum = 0.0;
  for (auto i = 0; i != n; ++i) { sum += rng.rexp(2.0); }
  auto mean = sum / n;
  // mean 1/2, sd 1/2: four standard errors.
  CHECK(std::abs(mean - 0.5) < 4.0 * 0.5 / std::sqrt(n));
}

TEST_CASE("rgamma_int matches Gamma moments") {
  auto rng = Rng{4};
  auto n = 20000;
  auto sum = 0.0;
  auto sum_sq = 0.0;
  for (auto i = 0; i != n; ++i) {
    auto g = rng.rgamma_int(3, 2.0);
    sum += g;
    sum_sq += g * g;
  }
  auto mean = sum / n;
  auto var = sum_sq / n - mean * mean;
  CHECK(std::abs(mean - 1.5) < 4.0 * std::sqrt(0.75 / n));
  CHECK(std::abs(var - 0.75) < 0.075);
}

TEST_CASE("rpois matches its mean") {
  auto rng = Rng{5};
  auto n = 20000;
  auto sum = 0.0;
  for (auto i = 0; i != n; ++i) { sum += static_cast<double>(rng.rpois(4.0)); }
  CHECK(std::abs(sum / n - 4.0) < 4.0 * 2.0 / std::sqrt(n));
  CHECK(rng.rpois(0.0) == 0);
}

TEST_CASE("rint covers [0, bound)") {
  auto rng = Rng{6};
  auto seen_zero = false;
  auto seen_top = false;
  for (auto i = 0; i != 2000; ++i) {
    auto v = rng.rint(10);
    REQUIRE(v < 10);
    seen_zero = seen_zero || v == 0;
    seen_top = seen_top || v == 9;
  }
  CHECK(seen_zero);
  CHECK(seen_top);
}

TEST_CASE("invalid arguments are rejected") {
  auto rng = Rng{7};
  CHECK_THROWS_AS(rng.rexp(0.0), std::invalid_argument);
  CHECK_THROWS_AS(rng.rgamma_int(0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(rng.rgamma(-1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(rng.rpois(-1.0), std::invalid_argument);
  CHECK_THROWS_AS(rng.rint(0), std::invalid_argument);
}

TEST_CASE("run_replicates is deterministic across thread counts") {
  auto reps = 64L;
  auto serial = std::vector<double>(64);
  auto parallel = std::vector<double>(64);
  combgen::run_replicates(reps, 99, 1, [&](long r, Rng& rng) {
    serial[static_cast<std::size_t>(r)] = rng.runif() + rng.rexp(1.0);
  });
  combgen::run_replicates(reps, 99, 4, [&](long r, Rng& rng) {
    parallel[static_cast<std::size_t>(r)] = rng.runif() + rng.rexp(1.0);
  });
  CHECK(serial == parallel);
}

TEST_CASE("run_replicates honors the index offset") {
  auto direct = std::vector<double>(8);
  auto offset = std::vector<double>(4);
  combgen::run_replicates(8, 123, 1, [&](long r, Rng& rng) {
    direct[static_cast<std::size_t>(r)] = rng.runif();
  });
  combgen::run_replicates(
      4, 123, 1, [&](long r, Rng& rng) { offset[static_cast<std::size_t>(r)] = rng.runif(); }, 4);
  for (auto r = 0; r != 4; ++r) { CHECK(offset[r] == direct[r + 4]); }
}

TEST_CASE("run_replicates propagates body exceptions") {
  auto body = [](long r, Rng&) {
    if (r == 5) { throw std::runtime_error{"boom"}; }
  };
  CHECK_THROWS_AS(combgen::run_replicates(10, 1, 1, body), std::runtime_error);
  CHECK_THROWS_AS(combgen::run_replicates(10, 1, 3, body), std::runtime_error);
}

}  // TEST_SUITE

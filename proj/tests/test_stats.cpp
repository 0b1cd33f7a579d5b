#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "doctest.h"

#include "combgen/rng.hpp"
#include "combgen/stats.hpp"

using combgen::Rng;

namespace {

auto uniform_cdf(double t) -> double { return std::clamp(t, 0.0, 1.0); }

auto uniform_samples(std::uint64_t seed, int count) -> std::vector<double> {
  auto rng = Rng{seed};
  auto samples = std::vector<double>{};
  samples.reserve(static_cast<std::size_t>(count));
  for (auto i = 0; i != count; ++i) { samples.push_back(rng.runif()); }
  return samples;
}

}  // namespace

TEST_SUITE("stats") {

TEST_CASE("one-sample ks accepts uniforms and rejects a point mass") {
  auto good = combgen::ks_one_sample("uniforms", uniform_samples(71, 1000), uniform_cdf, 0.05, 71);
  CHECK(good.pass);
  CHECK(good.statistic < 0.05);
  CHECK(good.sample_size == 1000);
  REQUIRE(good.p_value.has_value());
  CHECK(*good.p_value > 0.01);

  auto constant = std::vector<double>(500, 0.5);
  auto bad = combgen::ks_one_sample("point-mass", constant, uniform_cdf, 0.05, 71);
  CHECK_FALSE(bad.pass);
  CHECK(bad.statistic == doctest::Approx(0.5));
}

TEST_CASE("two-sample ks is zero on identical samples and catches shifts") {
  auto samples = uniform_samples(72, 800);
  auto same = combgen::ks_two_sample("identical", samples, samples, 0.05, 72);
  CHECK(same.pass);
  CHECK(same.statistic == 0.0);

  auto shifted = samples;
  for (auto& s : shifted) { s += 0.2; }
  auto off = combgen::ks_two_sample("shifted", samples, shifted, 0.05, 72);
  CHECK_FALSE(off.pass);
  CHECK(off.statistic > 0.15);
}

TEST_CASE("ks refuses tiny or empty inputs") {
  auto few = uniform_samples(73, 99);
  CHECK_THROWS_AS(combgen::ks_one_sample("few", few, uniform_cdf, 0.05, 73),
                  std::invalid_argument);
  auto enough = uniform_samples(73, 100);
  CHECK_THROWS_AS(combgen::ks_two_sample("few", enough, few, 0.05, 73), std::invalid_argument);
  auto empty = std::vector<double>{};
  CHECK_THROWS_AS(combgen::ks_one_sample("empty", empty, uniform_cdf, 0.05, 73),
                  std::invalid_argument);
}

TEST_CASE("chi-square statistic and p-value match hand computations") {
  auto observed = std::vector<long>{30, 50, 20};
  auto expected = std::vector<double>{25.0, 50.0, 25.0};
  auto report = combgen::chi_square_counts("frozen", observed, expected, 0.01, 74);
  // (5^2/25 + 0 + 5^2/25) = 2 on 2 dof: p = e^{-1}.
  CHECK(report.statistic == doctest::Approx(2.0));
  REQUIRE(report.p_value.has_value());
  CHECK(*report.p_value == doctest::Approx(std::exp(-1.0)).epsilon(1e-6));
  CHECK(report.pass);

  CHECK(combgen::chi_square_p_value(3.84, 1) == doctest::Approx(0.05).epsilon(0.01));
  CHECK(combgen::regularized_gamma_upper(1.0, 2.0) == doctest::Approx(std::exp(-2.0)));
}

TEST_CASE("erlang cdf closed form") {
  CHECK(combgen::erlang_cdf(1, 2.0, 0.5) == doctest::Approx(1.0 - std::exp(-1.0)));
  CHECK(combgen::erlang_cdf(3, 2.0, 1.0) == doctest::Approx(1.0 - 5.0 * std::exp(-2.0)));
  CHECK(combgen::erlang_cdf(2, 2.0, 0.0) == 0.0);
  CHECK(combgen::erlang_cdf(2, 2.0, -1.0) == 0.0);
}

TEST_CASE("poisson count test separates close means") {
  auto rng = Rng{75};
  auto counts = std::vector<long>{};
  for (auto i = 0; i != 4000; ++i) { counts.push_back(rng.rpois(4.0)); }
  CHECK(combgen::poisson_count_test("right-mean", counts, 4.0, 0.01, 75).pass);
  CHECK_FALSE(combgen::poisson_count_test("wrong-mean", counts, 5.0, 0.01, 75).pass);
}

TEST_CASE("correlation check flags dependence") {
  auto xs = uniform_samples(76, 2000);
  auto ys = uniform_samples(77, 2000);
  CHECK(combgen::correlation_check("independent", xs, ys, 0.08, 76).pass);
  CHECK_FALSE(combgen::correlation_check("self", xs, xs, 0.08, 76).pass);
  auto constant = std::vector<double>(2000, 1.0);
  CHECK_THROWS_AS(combgen::correlation_check("degenerate", xs, constant, 0.08, 76),
                  std::invalid_argument);
}

TEST_CASE("homogeneity accepts equal laws and rejects different ones") {
  auto rng = Rng{78};
  auto a = std::vector<long>{};
  auto b = std::vector<long>{};
  auto c = std::vector<long>{};
  for (auto i = 0; i != 3000; ++i) {
    a.push_back(rng.rpois(3.0));
    b.push_back(rng.rpois(3.0));
    c.push_back(rng.rpois(5.0));
  }
  CHECK(combgen::chi_square_homogeneity("same", a, b, 0.01, 78).pass);
  CHECK_FALSE(combgen::chi_square_homogeneity("different", a, c, 0.01, 78).pass);
}

TEST_CASE("mean check uses the sample standard error") {
  auto samples = uniform_samples(79, 4000);
  CHECK(combgen::mean_within_se("right", samples, 0.5, 4.0, 79).pass);
  CHECK_FALSE(combgen::mean_within_se("wrong", samples, 0.6, 4.0, 79).pass);
}

TEST_CASE("ecdf csv is sorted with terminal cdf one") {
  auto out = std::ostringstream{};
  combgen::write_ecdf_csv(out, std::vector<double>{0.3, 0.1});
  CHECK(out.str() == "value,cdf\n0.1,0.5\n0.3,1\n");
}

TEST_CASE("kolmogorov p-value decreases in the distance") {
  auto p1 = combgen::kolmogorov_p_value(0.02, 1000.0);
  auto p2 = combgen::kolmogorov_p_value(0.05, 1000.0);
  auto p3 = combgen::kolmogorov_p_value(0.10, 1000.0);
  CHECK(p1 > p2);
  CHECK(p2 > p3);
  CHECK(p1 <= 1.0);
  CHECK(p3 >= 0.0);
}

TEST_CASE("reports serialize and summarize") {
  auto report = combgen::ks_one_sample("demo", uniform_samples(80, 500), uniform_cdf, 0.05, 80);
  auto j = nlohmann::json{};
  to_json(j, report);
  CHECK(j["name"] == "demo");
  CHECK(j["pass"].is_boolean());
  CHECK(j["p_value"].is_number());

  auto no_p = combgen::Test_report{};
  no_p.name = "bare";
  no_p.statistic = 0.1;
  no_p.threshold = 0.2;
  no_p.criterion = "statistic < threshold";
  no_p.pass = true;
  auto k = nlohmann::json{};
  to_json(k, no_p);
  CHECK(k["p_value"].is_null());

  auto line = summary_line(report);
  CHECK(line.find("demo") != std::string::npos);
  CHECK(line.find(report.pass ? "PASS" : "FAIL") != std::string::npos);
}

}  // TEST_SUITE

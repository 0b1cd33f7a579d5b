#ifndef COMBGEN_STATS_HPP
#define COMBGEN_STATS_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

namespace combgen {

// One statistical check, serializable and self-describing: `pass` is exactly
// the stated criterion applied to `statistic` and `threshold`; p-values are
// informational where the null law is implemented.
struct Test_report {
  std::string name;
  std::size_t sample_size{};
  double statistic{};
  double threshold{};
  std::optional<double> p_value;
  std::string criterion;  // e.g. "statistic < threshold"
  bool pass{};
  std::uint64_t seed{};
  nlohmann::json parameters = nlohmann::json::object();
};

auto to_json(nlohmann::json& j, const Test_report& report) -> void;
auto summary_line(const Test_report& report) -> std::string;

using Cdf = std::function<double(double)>;

// Sup distance between the empirical CDF of samples and cdf.
auto ks_distance(std::vector<double> samples, const Cdf& cdf) -> double;

// Requires at least 100 samples; pass iff distance < threshold.  The
// asymptotic Kolmogorov p-value is attached for information.
auto ks_one_sample(std::string name, std::vector<double> samples, const Cdf& cdf,
                   double threshold, std::uint64_t seed,
                   nlohmann::json parameters = nlohmann::json::object()) -> Test_report;

auto ks_two_sample(std::string name, std::vector<double> a, std::vector<double> b,
                   double threshold, std::uint64_t seed,
                   nlohmann::json parameters = nlohmann::json::object()) -> Test_report;

// Chi-square with bins of expected count < 5 merged into their right
// neighbor (tail bins leftward); pass iff p_value > p_threshold.
auto chi_square_counts(std::string name, const std::vector<long>& observed,
                       const std::vector<double>& expected, double p_threshold,
                       std::uint64_t seed,
                       nlohmann::json parameters = nlohmann::json::object()) -> Test_report;

// Chi-square goodness of fit of integer counts against Poisson(mean), support
// tail-merged so every expected bin is >= 5.
auto poisson_count_test(std::string name, const std::vector<long>& counts, double mean,
                        double p_threshold, std::uint64_t seed,
                        nlohmann::json parameters = nlohmann::json::object()) -> Test_report;

// Two-sample chi-square homogeneity over a shared integer support.
auto chi_square_homogeneity(std::string name, const std::vector<long>& a,
                            const std::vector<long>& b, double p_threshold, std::uint64_t seed,
                            nlohmann::json parameters = nlohmann::json::object()) -> Test_report;

// Pearson correlation; pass iff |r| < bound.
auto correlation_check(std::string name, const std::vector<double>& xs,
                       const std::vector<double>& ys, double bound, std::uint64_t seed,
                       nlohmann::json parameters = nlohmann::json::object()) -> Test_report;

// |sample mean - target| in standard-error units; pass iff below se_multiple.
auto mean_within_se(std::string name, const std::vector<double>& samples, double target,
                    double se_multiple, std::uint64_t seed,
                    nlohmann::json parameters = nlohmann::json::object()) -> Test_report;

// "value,cdf" rows of the empirical CDF, for plotting.
auto write_ecdf_csv(std::ostream& out, std::vector<double> samples) -> void;

// Null-distribution helpers.
auto kolmogorov_p_value(double distance, double n_effective) -> double;
auto chi_square_p_value(double statistic, int dof) -> double;  // upper tail
auto regularized_gamma_upper(double a, double x) -> double;

// CDF of the sum of `shape` i.i.d. Exp(rate) variables (closed-form series).
auto erlang_cdf(int shape, double rate, double x) -> double;

}  // namespace combgen

#endif  // COMBGEN_STATS_HPP

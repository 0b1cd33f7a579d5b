#include "combgen/stats.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace combgen {

namespace {

constexpr auto k_min_ks_samples = std::size_t{100};

auto make_report(std::string name, std::size_t sample_size, double statistic, double threshold,
                 std::optional<double> p_value, std::string criterion, bool pass,
                 std::uint64_t seed, nlohmann::json parameters) -> Test_report {
  return Test_report{.name = std::move(name),
                     .sample_size = sample_size,
                     .statistic = statistic,
                     .threshold = threshold,
                     .p_value = p_value,
                     .criterion = std::move(criterion),
                     .pass = pass,
                     .seed = seed,
                     .parameters = std::move(parameters)};
}

// Chi-square over pre-binned counts; bins with expected < 5 are merged
// rightward (the trailing remainder into the last kept bin).
auto chi_square_merged(const std::vector<long>& observed, const std::vector<double>& expected)
    -> std::pair<double, int> {
  if (observed.size() != expected.size() || observed.empty()) {
    throw std::invalid_argument{"chi-square: observed and expected must align and be non-empty"};
  }
  auto merged_obs = std::vector<double>{};
  auto merged_exp = std::vector<double>{};
  auto acc_obs = 0.0;
  auto acc_exp = 0.0;
  for (std::size_t i = 0; i != observed.size(); ++i) {
    acc_obs += static_cast<double>(observed[i]);
    acc_exp += expected[i];
    if (acc_exp >= 5.0) {
      merged_obs.push_back(acc_obs);
      merged_exp.push_back(acc_exp);
      acc_obs = 0.0;
      acc_exp = 0.0;
    }
  }
  if (acc_exp > 0.0 || acc_obs > 0.0) {
    if (merged_exp.empty()) { throw std::invalid_argument{"chi-square: all bins degenerate"}; }
    merged_obs.back() += acc_obs;
    merged_exp.back() += acc_exp;
  }
  if (merged_exp.size() < 2) { throw std::invalid_argument{"chi-square: fewer than two usable bins"}; }
  auto statistic = 0.0;
  for (std::size_t i = 0; i != merged_exp.size(); ++i) {
    auto diff = merged_obs[i] - merged_exp[i];
    statistic += diff * diff / merged_exp[i];
  }
  return {statistic, static_cast<int>(merged_exp.size()) - 1};
}

}  // namespace

auto to_json(nlohmann::json& j, const Test_report& report) -> void {
  j = nlohmann::json{{"name", report.name},
                     {"sample_size", report.sample_size},
                     {"statistic", report.statistic},
                     {"threshold", report.threshold},
                     {"criterion", report.criterion},
                     {"pass", report.pass},
                     {"seed", report.seed},
                     {"parameters", report.parameters}};
  if (report.p_value) {
    j["p_value"] = *report.p_value;
  } else {
    j["p_value"] = nullptr;
  }
}

auto summary_line(const Test_report& report) -> std::string {
  auto out = std::ostringstream{};
  out << (report.pass ? "PASS" : "FAIL") << "  " << report.name << "  statistic="
      << report.statistic << "  threshold=" << report.threshold << "  (" << report.criterion
      << ", n=" << report.sample_size;
  if (report.p_value) { out << ", p=" << *report.p_value; }
  out << ")";
  return out.str();
}

auto ks_distance(std::vector<double> samples, const Cdf& cdf) -> double {
  if (samples.empty()) { throw std::invalid_argument{"ks_distance: no samples"}; }
  std::ranges::sort(samples);
  auto n = static_cast<double>(samples.size());
  auto distance = 0.0;
  for (std::size_t i = 0; i != samples.size(); ++i) {
    auto f = cdf(samples[i]);
    distance = std::max(distance, f - static_cast<double>(i) / n);
    distance = std::max(distance, static_cast<double>(i + 1) / n - f);
  }
  return distance;
}

auto kolmogorov_p_value(double distance, double n_effective) -> double {
  auto root = std::sqrt(n_effective);
  auto lambda = (root + 0.12 + 0.11 / root) * distance;
  auto sum = 0.0;
  auto sign = 1.0;
  for (auto j = 1; j <= 100; ++j) {
    auto term = std::exp(-2.0 * lambda * lambda * j * j);
    sum += sign * term;
    if (term < 1e-12) { break; }
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

auto ks_one_sample(std::string name, std::vector<double> samples, const Cdf& cdf,
                   double threshold, std::uint64_t seed, nlohmann::json parameters)
    -> Test_report {
  if (samples.size() < k_min_ks_samples) {
    throw std::invalid_argument{"ks_one_sample: need at least 100 samples"};
  }
  auto n = samples.size();
  auto distance = ks_distance(std::move(samples), cdf);
  auto p = kolmogorov_p_value(distance, static_cast<double>(n));
  return make_report(std::move(name), n, distance, threshold, p, "statistic < threshold",
                     distance < threshold, seed, std::move(parameters));
}

auto ks_two_sample(std::string name, std::vector<double> a, std::vector<double> b,
                   double threshold, std::uint64_t seed, nlohmann::json parameters)
    -> Test_report {
  if (a.size() < k_min_ks_samples || b.size() < k_min_ks_samples) {
    throw std::invalid_argument{"ks_two_sample: need at least 100 samples on each side"};
  }
  std::ranges::sort(a);
  std::ranges::sort(b);
  auto na = static_cast<double>(a.size());
  auto nb = static_cast<double>(b.size());
  auto distance = 0.0;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() && j < b.size()) {
    // Advance past one distinct value on both sides, then compare the ECDFs
    // there; this keeps tied values from creating spurious gaps.
    auto v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == v) { ++i; }
    while (j < b.size() && b[j] == v) { ++j; }
    distance = std::max(distance,
                        std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  auto n_eff = na * nb / (na + nb);
  auto p = kolmogorov_p_value(distance, n_eff);
  return make_report(std::move(name), a.size() + b.size(), distance, threshold, p,
                     "statistic < threshold", distance < threshold, seed, std::move(parameters));
}

auto regularized_gamma_upper(double a, double x) -> double {
  if (a <= 0.0 || x < 0.0) { throw std::invalid_argument{"regularized_gamma_upper: bad arguments"}; }
  if (x == 0.0) { return 1.0; }
  auto log_prefactor = a * std::log(x) - x - std::lgamma(a);
  if (x < a + 1.0) {
    // Lower series: P(a,x) = x^a e^-x / Gamma(a) * sum x^k / (a (a+1) ... (a+k)).
    auto term = 1.0 / a;
    auto sum = term;
    for (auto k = 1; k != 1000; ++k) {
      term *= x / (a + k);
      sum += term;
      if (term < sum * 1e-15) { break; }
    }
    return 1.0 - std::exp(log_prefactor) * sum;
  }
  // Upper continued fraction (Lentz).
  auto tiny = 1e-300;
  auto b = x + 1.0 - a;
  auto c = 1.0 / tiny;
  auto d = 1.0 / b;
  auto h = d;
  for (auto k = 1; k != 1000; ++k) {
    auto an = -static_cast<double>(k) * (static_cast<double>(k) - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) { d = tiny; }
    c = b + an / c;
    if (std::abs(c) < tiny) { c = tiny; }
    d = 1.0 / d;
    auto delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-15) { break; }
  }
  return std::exp(log_prefactor) * h;
}

auto chi_square_p_value(double statistic, int dof) -> double {
  if (dof < 1) { throw std::invalid_argument{"chi_square_p_value: dof must be >= 1"}; }
  return regularized_gamma_upper(0.5 * dof, std::max(0.0, 0.5 * statistic));
}

auto chi_square_counts(std::string name, const std::vector<long>& observed,
                       const std::vector<double>& expected, double p_threshold,
                       std::uint64_t seed, nlohmann::json parameters) -> Test_report {
  auto [statistic, dof] = chi_square_merged(observed, expected);
  auto p = chi_square_p_value(statistic, dof);
  auto total = 0L;
  for (auto o : observed) { total += o; }
  parameters["dof"] = dof;
  return make_report(std::move(name), static_cast<std::size_t>(total), statistic, p_threshold, p,
                     "p_value > threshold", p > p_threshold, seed, std::move(parameters));
}

auto poisson_count_test(std::string name, const std::vector<long>& counts, double mean,
                        double p_threshold, std::uint64_t seed, nlohmann::json parameters)
    -> Test_report {
  if (counts.empty()) { throw std::invalid_argument{"poisson_count_test: no samples"}; }
  if (!(mean > 0.0)) { throw std::invalid_argument{"poisson_count_test: mean must be positive"}; }
  auto max_count = *std::ranges::max_element(counts);
  if (max_count < 0) { throw std::invalid_argument{"poisson_count_test: negative counts"}; }
  auto observed = std::vector<long>(static_cast<std::size_t>(max_count) + 2, 0L);
  for (auto c : counts) { ++observed[static_cast<std::size_t>(c)]; }
  auto n = static_cast<double>(counts.size());
  auto expected = std::vector<double>(observed.size());
  auto pmf = std::exp(-mean);
  auto cumulative = 0.0;
  for (std::size_t k = 0; k + 1 < expected.size(); ++k) {
    expected[k] = n * pmf;
    cumulative += pmf;
    pmf *= mean / static_cast<double>(k + 1);
  }
  expected.back() = n * std::max(0.0, 1.0 - cumulative);  // all mass above max_count
  parameters["mean"] = mean;
  return chi_square_counts(std::move(name), observed, expected, p_threshold, seed,
                           std::move(parameters));
}

auto chi_square_homogeneity(std::string name, const std::vector<long>& a,
                            const std::vector<long>& b, double p_threshold, std::uint64_t seed,
                            nlohmann::json parameters) -> Test_report {
  if (a.empty() || b.empty()) { throw std::invalid_argument{"chi_square_homogeneity: no samples"}; }
  auto max_a = *std::ranges::max_element(a);
  auto max_b = *std::ranges::max_element(b);
  auto min_a = *std::ranges::min_element(a);
  auto min_b = *std::ranges::min_element(b);
  auto lo = std::min(min_a, min_b);
  auto hi = std::max(max_a, max_b);
  auto bins = static_cast<std::size_t>(hi - lo) + 1;
  auto hist_a = std::vector<long>(bins, 0L);
  auto hist_b = std::vector<long>(bins, 0L);
  for (auto v : a) { ++hist_a[static_cast<std::size_t>(v - lo)]; }
  for (auto v : b) { ++hist_b[static_cast<std::size_t>(v - lo)]; }

  // Merge on the pooled histogram so both sides keep expected counts >= 5.
  auto na = static_cast<double>(a.size());
  auto nb = static_cast<double>(b.size());
  auto groups_a = std::vector<double>{};
  auto groups_b = std::vector<double>{};
  auto acc_a = 0.0;
  auto acc_b = 0.0;
  auto small = std::min(na, nb);
  for (std::size_t i = 0; i != bins; ++i) {
    acc_a += static_cast<double>(hist_a[i]);
    acc_b += static_cast<double>(hist_b[i]);
    auto pooled = (acc_a + acc_b) / (na + nb);
    if (pooled * small >= 5.0) {
      groups_a.push_back(acc_a);
      groups_b.push_back(acc_b);
      acc_a = 0.0;
      acc_b = 0.0;
    }
  }
  if (acc_a > 0.0 || acc_b > 0.0) {
    if (groups_a.empty()) { throw std::invalid_argument{"chi_square_homogeneity: degenerate bins"}; }
    groups_a.back() += acc_a;
    groups_b.back() += acc_b;
  }
  if (groups_a.size() < 2) { throw std::invalid_argument{"chi_square_homogeneity: fewer than two bins"}; }
  auto statistic = 0.0;
  for (std::size_t i = 0; i != groups_a.size(); ++i) {
    auto pooled = (groups_a[i] + groups_b[i]) / (na + nb);
    auto ea = na * pooled;
    auto eb = nb * pooled;
    statistic += (groups_a[i] - ea) * (groups_a[i] - ea) / ea;
    statistic += (groups_b[i] - eb) * (groups_b[i] - eb) / eb;
  }
  auto dof = static_cast<int>(groups_a.size()) - 1;
  auto p = chi_square_p_value(statistic, dof);
  parameters["dof"] = dof;
  return make_report(std::move(name), a.size() + b.size(), statistic, p_threshold, p,
                     "p_value > threshold", p > p_threshold, seed, std::move(parameters));
}

auto correlation_check(std::string name, const std::vector<double>& xs,
                       const std::vector<double>& ys, double bound, std::uint64_t seed,
                       nlohmann::json parameters) -> Test_report {
  if (xs.size() != ys.size() || xs.size() < 2) {
    throw std::invalid_argument{"correlation_check: need two aligned samples of size >= 2"};
  }
  auto n = static_cast<double>(xs.size());
  auto mean_x = 0.0;
  auto mean_y = 0.0;
  for (std::size_t i = 0; i != xs.size(); ++i) {
    mean_x += xs[i];
    mean_y += ys[i];
  }
  mean_x /= n;
  mean_y /= n;
  auto sxx = 0.0;
  auto syy = 0.0;
  auto sxy = 0.0;
  for (std::size_t i = 0; i != xs.size(); ++i) {
    auto dx = xs[i] - mean_x;
    auto dy = ys[i] - mean_y;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw std::invalid_argument{"correlation_check: degenerate sample variance"};
  }
  auto r = sxy / std::sqrt(sxx * syy);
  return make_report(std::move(name), xs.size(), std::abs(r), bound, std::nullopt,
                     "statistic < threshold", std::abs(r) < bound, seed, std::move(parameters));
}

auto mean_within_se(std::string name, const std::vector<double>& samples, double target,
                    double se_multiple, std::uint64_t seed, nlohmann::json parameters)
    -> Test_report {
  if (samples.size() < 2) { throw std::invalid_argument{"mean_within_se: need >= 2 samples"}; }
  auto n = static_cast<double>(samples.size());
  auto mean = 0.0;
  for (auto v : samples) { mean += v; }
  mean /= n;
  auto var = 0.0;
  for (auto v : samples) { var += (v - mean) * (v - mean); }
  var /= n - 1.0;
  auto se = std::sqrt(var / n);
  if (se == 0.0) { throw std::invalid_argument{"mean_within_se: degenerate sample"}; }
  auto statistic = std::abs(mean - target) / se;
  auto p = std::erfc(statistic / std::sqrt(2.0));
  parameters["mean"] = mean;
  parameters["target"] = target;
  return make_report(std::move(name), samples.size(), statistic, se_multiple, p,
                     "statistic < threshold", statistic < se_multiple, seed,
                     std::move(parameters));
}

auto write_ecdf_csv(std::ostream& out, std::vector<double> samples) -> void {
  if (samples.empty()) { throw std::invalid_argument{"write_ecdf_csv: no samples"}; }
  std::ranges::sort(samples);
  out << "value,cdf\n";
  auto n = static_cast<double>(samples.size());
  for (std::size_t i = 0; i != samples.size(); ++i) {
    out << samples[i] << ',' << static_cast<double>(i + 1) / n << '\n';
  }
}

auto erlang_cdf(int shape, double rate, double x) -> double {
  if (shape < 1 || !(rate > 0.0)) { throw std::invalid_argument{"erlang_cdf: bad parameters"}; }
  if (x <= 0.0) { return 0.0; }
  // 1 - e^{-rx} sum_{k<shape} (rx)^k / k!.
  auto rx = rate * x;
  auto term = 1.0;
  auto sum = 1.0;
  for (auto k = 1; k != shape; ++k) {
    term *= rx / static_cast<double>(k);
    sum += term;
  }
  return 1.0 - std::exp(-rx) * sum;
}

}  // namespace combgen

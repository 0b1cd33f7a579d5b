#include "combgen/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "combgen/cannings.hpp"
#include "combgen/comb.hpp"
#include "combgen/conditional.hpp"
#include "combgen/cpp_process.hpp"
#include "combgen/diffusion.hpp"
#include "combgen/intensity.hpp"
#include "combgen/rng.hpp"

namespace combgen {

namespace {

using nlohmann::json;

auto uniform01_cdf() -> Cdf {
  return [](double t) { return std::clamp(t, 0.0, 1.0); };
}

auto exponential_cdf(double rate) -> Cdf {
  return [rate](double t) { return t > 0.0 ? 1.0 - std::exp(-rate * t) : 0.0; };
}

// P(sup <= s) for the Brownian coalescent point process over a unit-width
// window after rescaling: exp(-2 / s).
auto brownian_sup_cdf() -> Cdf {
  return [](double t) { return t > 0.0 ? std::exp(-2.0 / t) : 0.0; };
}

auto sample_mean(const std::vector<double>& xs) -> double {
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

auto sample_variance(const std::vector<double>& xs) -> double {
  if (xs.size() < 2) { throw std::invalid_argument{"sample_variance: need at least 2 values"}; }
  auto mean = sample_mean(xs);
  auto ss = 0.0;
  for (auto x : xs) { ss += (x - mean) * (x - mean); }
  return ss / static_cast<double>(xs.size() - 1);
}

auto factorial(int n) -> double {
  auto f = 1.0;
  for (auto i = 2; i <= n; ++i) { f *= i; }
  return f;
}

auto format_value(double v) -> std::string {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

// A report whose criterion is a plain bound on the statistic.
auto bounded_check(std::string name, double statistic, double threshold, std::size_t sample_size,
                   std::uint64_t seed, json parameters) -> Test_report {
  auto report = Test_report{};
  report.name = std::move(name);
  report.sample_size = sample_size;
  report.statistic = statistic;
  report.threshold = threshold;
  report.criterion = "statistic < threshold";
  report.pass = statistic < threshold;
  report.seed = seed;
  report.parameters = std::move(parameters);
  return report;
}

// A report counting violations of an exact (integer or bitwise) identity.
auto exact_check(std::string name, long violations, std::size_t sample_size, std::uint64_t seed,
                 json parameters) -> Test_report {
  auto report = Test_report{};
  report.name = std::move(name);
  report.sample_size = sample_size;
  report.statistic = static_cast<double>(violations);
  report.threshold = 0.0;
  report.criterion = "statistic <= threshold";
  report.pass = violations <= 0;
  report.seed = seed;
  report.parameters = std::move(parameters);
  return report;
}

auto base_params(const Experiment_options& opts) -> json {
  return json{{"reps", opts.reps},
              {"threads", opts.threads},
              {"tail_mode", to_string(opts.tail_mode)}};
}

}  // namespace

auto verify_kingman_comb_law(const Experiment_options& opts) -> std::vector<Test_report> {
  auto depth_cut = opts.eps.value_or(1e-3);
  auto samples = std::vector<double>(static_cast<std::size_t>(opts.reps));
  run_replicates(opts.reps, opts.seed, opts.threads, [&](long r, Rng& rng) {
    auto kc = sample_kingman_comb(depth_cut, rng, opts.tail_mode);
    auto draw_point = [&] {
      auto p = rng.runif();
      while (kc.comb.has_atom_at(p)) { p = rng.runif(); }
      return p;
    };
    auto x = draw_point();
    auto y = draw_point();
    samples[static_cast<std::size_t>(r)] = kc.comb.metric(x, y);
  });
  auto params = base_params(opts);
  params["depth_cut"] = depth_cut;
  return {ks_one_sample("kingman-pairwise-coalescence-vs-exp1", std::move(samples),
                        exponential_cdf(1.0), 0.02, opts.seed, params)};
}

auto verify_block_count(const Experiment_options& opts) -> std::vector<Test_report> {
  auto fine_eps = opts.eps.value_or(1e-3);
  auto grid = std::vector<double>{10.0 * fine_eps, fine_eps};
  auto reports = std::vector<Test_report>{};
  auto sds = std::vector<double>{};
  for (auto eps : grid) {
    auto scaled = std::vector<double>(static_cast<std::size_t>(opts.reps));
    run_replicates(opts.reps, opts.seed, opts.threads, [&](long r, Rng& rng) {
      auto count = sample_block_count(eps, rng, opts.tail_mode);
      scaled[static_cast<std::size_t>(r)] = eps * static_cast<double>(count);
    });
    auto mean = sample_mean(scaled);
    auto sd = std::sqrt(sample_variance(scaled));
    sds.push_back(sd);
    auto params = base_params(opts);
    params["eps"] = eps;
    params["mean"] = mean;
    params["sd"] = sd;
    params["target"] = 2.0;
    reports.push_back(bounded_check("block-count-scaled-mean-eps" + format_value(eps),
                                    std::abs(mean - 2.0), 0.1, scaled.size(), opts.seed, params));
  }
  auto params = base_params(opts);
  params["eps_grid"] = grid;
  params["sd_coarse"] = sds[0];
  params["sd_fine"] = sds[1];
  reports.push_back(bounded_check("block-count-scaled-sd-decreasing", sds[1] / sds[0], 1.0,
                                  static_cast<std::size_t>(opts.reps), opts.seed, params));
  return reports;
}

auto verify_cvc2(const Experiment_options& opts) -> std::vector<Test_report> {
  auto eps = opts.eps.value_or(1e-3);
  // Levels below 0.1 * eps cannot move either rescaled sup by more than
  // exp(-2 / 0.1) ~ 2e-9 of CDF mass, so the stream is cut there.
  auto depth_cut = 0.1 * eps;
  auto reps = static_cast<std::size_t>(opts.reps);
  auto first_window = std::vector<double>(reps);
  auto second_window = std::vector<double>(reps);
  run_replicates(opts.reps, opts.seed, opts.threads, [&](long r, Rng& rng) {
    auto levels = sample_levels(depth_cut, rng, opts.tail_mode);
    auto m1 = 0.0;
    auto m2 = 0.0;
    for (auto level : levels) {
      auto v = rng.runif();
      if (v > eps && v < 2.0 * eps) {
        m1 = std::max(m1, level);
      } else if (v > 2.0 * eps && v < 3.0 * eps) {
        m2 = std::max(m2, level);
      }
    }
    first_window[static_cast<std::size_t>(r)] = m1 / eps;
    second_window[static_cast<std::size_t>(r)] = m2 / eps;
  });
  auto params = base_params(opts);
  params["eps"] = eps;
  params["depth_cut"] = depth_cut;
  params["windows"] = json::array({json::array({1, 2}), json::array({2, 3})});
  auto reports = std::vector<Test_report>{};
  reports.push_back(ks_one_sample("cvc2-rescaled-sup-vs-brownian-cpp", first_window,
                                  brownian_sup_cdf(), 0.03, opts.seed, params));
  reports.push_back(correlation_check("cvc2-disjoint-windows-uncorrelated", first_window,
                                      second_window, 0.05, opts.seed, params));
  return reports;
}

auto verify_cvc(const Experiment_options& opts) -> std::vector<Test_report> {
  auto eps = opts.eps.value_or(1e-3);
  auto orders = opts.n ? std::vector<int>{*opts.n} : std::vector<int>{1, 2, 3};
  auto reports = std::vector<Test_report>{};
  for (auto n : orders) {
    auto scaled = std::vector<double>(static_cast<std::size_t>(opts.reps));
    run_replicates(opts.reps, opts.seed, opts.threads, [&](long r, Rng& rng) {
      // Fidelity 1 keeps only levels >= eps: the block length law does not
      // depend on the sub-eps atoms.
      auto sample = quenched_conditional_sample(n, eps, rng, 1.0, opts.tail_mode);
      scaled[static_cast<std::size_t>(r)] = sample.block_length / eps;
    });
    auto params = base_params(opts);
    params["eps"] = eps;
    params["n"] = n;
    auto cdf = [n](double t) { return erlang_cdf(n + 1, 2.0, t); };
    reports.push_back(ks_one_sample("cvc-scaled-block-length-vs-gamma-n" + std::to_string(n),
                                    std::move(scaled), cdf, 0.03, opts.seed, params));
  }
  return reports;
}

auto verify_ui(const Experiment_options& opts) -> std::vector<Test_report> {
  auto eps = opts.eps.value_or(1e-3);
  auto orders = opts.n ? std::vector<int>{*opts.n} : std::vector<int>{1, 2, 3};
  auto reports = std::vector<Test_report>{};
  for (auto n : orders) {
    auto zs = std::vector<double>(static_cast<std::size_t>(opts.reps));
    run_replicates(opts.reps, opts.seed, opts.threads, [&](long r, Rng& rng) {
      zs[static_cast<std::size_t>(r)] = block_moment_statistic(n, eps, rng, opts.tail_mode);
    });
    auto params = base_params(opts);
    params["eps"] = eps;
    params["n"] = n;
    reports.push_back(mean_within_se("ui-block-moment-mean-n" + std::to_string(n), zs,
                                     factorial(n), 3.0, opts.seed, params));
  }
  if (!opts.n) {
    auto grid = std::vector<double>{1e-2, 3e-3, 1e-3};
    auto variances = std::vector<double>{};
    for (auto grid_eps : grid) {
      auto zs = std::vector<double>(static_cast<std::size_t>(opts.reps));
      run_replicates(opts.reps, opts.seed, opts.threads, [&](long r, Rng& rng) {
        zs[static_cast<std::size_t>(r)] = block_moment_statistic(2, grid_eps, rng, opts.tail_mode);
      });
      variances.push_back(sample_variance(zs));
    }
    auto worst_ratio = 0.0;
    for (std::size_t i = 1; i < variances.size(); ++i) {
      worst_ratio = std::max(worst_ratio, variances[i] / variances[i - 1]);
    }
    auto params = base_params(opts);
    params["eps_grid"] = grid;
    params["variances"] = variances;
    params["n"] = 2;
    reports.push_back(bounded_check("ui-block-moment-variance-decreasing", worst_ratio, 1.0,
                                    static_cast<std::size_t>(opts.reps), opts.seed, params));
  }
  return reports;
}

auto verify_teo1(const Experiment_options& opts) -> std::vector<Test_report> {
  auto n = opts.n.value_or(3);
  if (n < 2) { throw std::invalid_argument{"teo1 verification: order must be >= 2"}; }
  auto eps = opts.eps.value_or(1e-3);
  auto reps = static_cast<std::size_t>(opts.reps);
  auto columns =
      std::vector<std::vector<double>>(static_cast<std::size_t>(n) - 1, std::vector<double>(reps));
  run_replicates(opts.reps, opts.seed, opts.threads, [&](long r, Rng& rng) {
    auto sample = quenched_conditional_sample(n, eps, rng, k_default_fidelity, opts.tail_mode);
    for (std::size_t k = 0; k != columns.size(); ++k) {
      columns[k][static_cast<std::size_t>(r)] = sample.coalescence_times[k] / eps;
    }
  });
  auto params = base_params(opts);
  params["eps"] = eps;
  params["n"] = n;
  params["fidelity"] = k_default_fidelity;
  auto reports = std::vector<Test_report>{};
  for (std::size_t k = 0; k != columns.size(); ++k) {
    reports.push_back(ks_one_sample("teo1-rescaled-time-k" + std::to_string(k + 1) + "-uniform",
                                    columns[k], uniform01_cdf(), 0.03, opts.seed, params));
  }
  for (std::size_t i = 0; i != columns.size(); ++i) {
    for (std::size_t j = i + 1; j != columns.size(); ++j) {
      auto name = "teo1-times-uncorrelated-k" + std::to_string(i + 1) + "-k" + std::to_string(j + 1);
      reports.push_back(
          correlation_check(name, columns[i], columns[j], 0.05, opts.seed, params));
    }
  }
  return reports;
}

auto verify_cor_final(const Experiment_options& opts) -> std::vector<Test_report> {
  auto n = opts.n.value_or(3);
  if (n < 1) { throw std::invalid_argument{"cor-final verification: order must be >= 1"}; }
  auto reps = static_cast<std::size_t>(opts.reps);
  auto spacing_columns =
      std::vector<std::vector<double>>(static_cast<std::size_t>(n) + 1, std::vector<double>(reps));
  auto time_columns = std::vector<std::vector<double>>(
      n > 1 ? static_cast<std::size_t>(n) - 1 : 0, std::vector<double>(reps));
  run_replicates(opts.reps, opts.seed, opts.threads, [&](long r, Rng& rng) {
    auto sample = limit_quenched_sample(n, rng);
    for (std::size_t k = 0; k != spacing_columns.size(); ++k) {
      spacing_columns[k][static_cast<std::size_t>(r)] = sample.spacings[k];
    }
    for (std::size_t k = 0; k != time_columns.size(); ++k) {
      time_columns[k][static_cast<std::size_t>(r)] = sample.coalescence_times[k];
    }
  });
  auto params = base_params(opts);
  params["n"] = n;
  auto reports = std::vector<Test_report>{};
  for (std::size_t k = 0; k != spacing_columns.size(); ++k) {
    reports.push_back(ks_one_sample("cor-final-spacing-k" + std::to_string(k) + "-vs-exp2",
                                    spacing_columns[k], exponential_cdf(2.0), 0.02, opts.seed,
                                    params));
  }
  if (time_columns.size() >= 2) {
    // Joint law of the first two rescaled times on a 3x3 grid: the empirical
    // P(H_1 <= s1, H_2 <= s2) must match s1 * s2.
    auto grid = std::vector<double>{0.25, 0.5, 0.75};
    auto worst = 0.0;
    auto cells = json::array();
    for (auto s1 : grid) {
      for (auto s2 : grid) {
        auto count = 0L;
        for (std::size_t r = 0; r != reps; ++r) {
          if (time_columns[0][r] <= s1 && time_columns[1][r] <= s2) { ++count; }
        }
        auto empirical = static_cast<double>(count) / static_cast<double>(reps);
        auto dev = std::abs(empirical - s1 * s2);
        worst = std::max(worst, dev);
        cells.push_back(json{{"s1", s1}, {"s2", s2}, {"empirical", empirical}});
      }
    }
    auto grid_params = params;
    grid_params["grid"] = grid;
    grid_params["cells"] = cells;
    reports.push_back(
        bounded_check("cor-final-product-form-grid", worst, 0.02, reps, opts.seed, grid_params));
  } else if (time_columns.size() == 1) {
    auto grid = std::vector<double>{0.25, 0.5, 0.75};
    auto worst = 0.0;
    for (auto s1 : grid) {
      auto count = 0L;
      for (std::size_t r = 0; r != reps; ++r) {
        if (time_columns[0][r] <= s1) { ++count; }
      }
      worst = std::max(worst, std::abs(static_cast<double>(count) / static_cast<double>(reps) - s1));
    }
    auto grid_params = params;
    grid_params["grid"] = grid;
    reports.push_back(
        bounded_check("cor-final-product-form-grid", worst, 0.02, reps, opts.seed, grid_params));
  }
  return reports;
}

auto verify_cvh(const Experiment_options& opts) -> std::vector<Test_report> {
  auto n = opts.n.value_or(3);
  if (n < 2) { throw std::invalid_argument{"cvh verification: order must be >= 2"}; }
  auto eps = opts.eps.value_or(1e-3);
  auto reps = static_cast<std::size_t>(opts.reps);
  auto ranks = static_cast<std::size_t>(n) - 1;
  auto quenched = std::vector<std::vector<double>>(ranks, std::vector<double>(reps));
  auto limit = std::vector<std::vector<double>>(ranks, std::vector<double>(reps));
  run_replicates(opts.reps, opts.seed, opts.threads, [&](long r, Rng& rng) {
    auto sample = quenched_conditional_sample(n, eps, rng, k_default_fidelity, opts.tail_mode);
    auto sorted = sample.coalescence_times;
    std::ranges::sort(sorted);
    for (std::size_t k = 0; k != ranks; ++k) {
      quenched[k][static_cast<std::size_t>(r)] = sorted[k] / eps;
    }
  });
  // The limit batch runs on substreams disjoint from the quenched batch so
  // the two-sample comparison sees independent draws.
  run_replicates(
      opts.reps, opts.seed, opts.threads,
      [&](long r, Rng& rng) {
        auto sample = limit_quenched_sample(n, rng);
        auto sorted = sample.coalescence_times;
        std::ranges::sort(sorted);
        for (std::size_t k = 0; k != ranks; ++k) {
          limit[k][static_cast<std::size_t>(r)] = sorted[k];
        }
      },
      static_cast<std::uint64_t>(opts.reps));
  auto params = base_params(opts);
  params["eps"] = eps;
  params["n"] = n;
  params["fidelity"] = k_default_fidelity;
  auto reports = std::vector<Test_report>{};
  for (std::size_t k = 0; k != ranks; ++k) {
    reports.push_back(ks_two_sample("cvh-rank" + std::to_string(k + 1) + "-quenched-vs-limit",
                                    quenched[k], limit[k], 0.05, opts.seed, params));
  }
  return reports;
}

auto verify_petit_calcul(const Experiment_options& opts) -> std::vector<Test_report> {
  auto n = opts.n.value_or(3);
  if (n < 2) { throw std::invalid_argument{"petit-calcul verification: order must be >= 2"}; }
  auto eps = opts.eps.value_or(0.01);
  auto reps = static_cast<std::size_t>(opts.reps);
  // Budget well beyond the ~1/acceptance mean so no replicate exhausts it.
  auto rate_product = 1.0;
  for (auto i = 2; i <= n; ++i) { rate_product *= 0.5 * i * (i - 1); }
  auto acceptance_estimate = std::pow(eps, n - 1) * rate_product / factorial(n - 1);
  auto budget = static_cast<long>(std::ceil(100.0 / acceptance_estimate));
  auto pooled = std::vector<double>(reps * (static_cast<std::size_t>(n) - 1));
  auto attempts = std::vector<double>(reps);
  run_replicates(opts.reps, opts.seed, opts.threads, [&](long r, Rng& rng) {
    auto sample = averaged_conditional_sample(n, eps, rng, budget);
    for (std::size_t k = 0; k + 1 < static_cast<std::size_t>(n); ++k) {
      pooled[static_cast<std::size_t>(r) * (static_cast<std::size_t>(n) - 1) + k] =
          sample.ranked_times[k];
    }
    attempts[static_cast<std::size_t>(r)] = static_cast<double>(sample.attempts);
  });
  auto params = base_params(opts);
  params["eps"] = eps;
  params["n"] = n;
  params["attempt_budget"] = budget;
  auto reports = std::vector<Test_report>{};
  reports.push_back(ks_one_sample("petit-calcul-pooled-times-uniform", pooled, uniform01_cdf(),
                                  0.03, opts.seed, params));
  auto total_attempts = std::accumulate(attempts.begin(), attempts.end(), 0.0);
  auto observed = static_cast<double>(opts.reps) / total_attempts;
  auto params_rate = params;
  params_rate["observed_rate"] = observed;
  params_rate["predicted_rate"] = acceptance_estimate;
  reports.push_back(bounded_check("petit-calcul-acceptance-frequency",
                                  std::abs(observed / acceptance_estimate - 1.0), 0.2, reps,
                                  opts.seed, params_rate));
  return reports;
}

auto verify_id(const Experiment_options& opts) -> std::vector<Test_report> {
  constexpr auto x = 1.0;
  constexpr auto dt = 1e-4;
  auto reps = static_cast<std::size_t>(opts.reps);
  auto times = std::vector<double>(reps);
  auto censored = std::vector<char>(reps, 0);
  run_replicates(opts.reps, opts.seed, opts.threads, [&](long r, Rng& rng) {
    auto hit = feller_hit_time(x, dt, rng);
    times[static_cast<std::size_t>(r)] = hit.time;
    censored[static_cast<std::size_t>(r)] = hit.censored ? 1 : 0;
  });
  auto exact = std::vector<double>(reps);
  run_replicates(
      opts.reps, opts.seed, opts.threads,
      [&](long r, Rng& rng) { exact[static_cast<std::size_t>(r)] = cpp_sup_sample(x, rng); },
      static_cast<std::uint64_t>(opts.reps));

  // Compare on the joint uncensored region [0, budget * dt].
  auto cap = dt * static_cast<double>(k_default_step_budget);
  auto euler = std::vector<double>{};
  for (std::size_t r = 0; r != reps; ++r) {
    if (censored[r] == 0) { euler.push_back(times[r]); }
  }
  auto inverted = std::vector<double>{};
  for (auto value : exact) {
    if (value <= cap) { inverted.push_back(value); }
  }
  auto censored_count = static_cast<long>(reps - euler.size());
  auto params = base_params(opts);
  params["x"] = x;
  params["dt"] = dt;
  params["time_cap"] = cap;
  params["censored"] = censored_count;
  auto reports = std::vector<Test_report>{};
  reports.push_back(ks_two_sample("id-hitting-times-vs-exact-dual", std::move(euler),
                                  std::move(inverted), 0.03, opts.seed, params));
  auto fraction = static_cast<double>(censored_count) / static_cast<double>(reps);
  reports.push_back(
      bounded_check("id-censored-fraction", fraction, 0.01, reps, opts.seed, params));
  return reports;
}

auto verify_cannings(const Experiment_options& opts) -> std::vector<Test_report> {
  constexpr auto flow_count = 100L;
  constexpr auto flow_size = 50L;
  constexpr auto flow_length = 100L;
  auto cocycle = std::vector<long>(flow_count, 0);
  auto backward = std::vector<long>(flow_count, 0);
  auto planar = std::vector<long>(flow_count, 0);
  run_replicates(flow_count, opts.seed, opts.threads, [&](long r, Rng& rng) {
    auto flow = sample_bridge_flow(flow_size, flow_length, Offspring_law::wright_fisher, rng);
    auto slot = static_cast<std::size_t>(r);
    for (auto trial = 0; trial != 5; ++trial) {
      // Three distinct epochs k < m < n in [0, length].
      auto k = 0L;
      auto m = 0L;
      auto n = 0L;
      do {
        k = static_cast<long>(rng.rint(flow_length + 1));
        m = static_cast<long>(rng.rint(flow_length + 1));
        n = static_cast<long>(rng.rint(flow_length + 1));
      } while (k == m || m == n || k == n);
      if (k > m) { std::swap(k, m); }
      if (m > n) { std::swap(m, n); }
      if (k > m) { std::swap(k, m); }

      auto outer = compose(flow, m, n);
      auto inner = compose(flow, k, m);
      auto direct = compose(flow, k, n);
      if (!(direct == outer.compose_after(inner))) { ++cocycle[slot]; }
      for (auto individual = 1L; individual <= flow_size; ++individual) {
        if (direct.inverse(individual) != inner.inverse(outer.inverse(individual))) {
          ++backward[slot];
        }
      }
    }
    // Backward ancestral labels never cross: the inverse flow applied one
    // generation at a time keeps 1..N sorted.
    auto labels = std::vector<long>(static_cast<std::size_t>(flow_size));
    std::iota(labels.begin(), labels.end(), 1L);
    for (auto g = flow_length; g-- > 0;) {
      const auto& bridge = flow.generations[static_cast<std::size_t>(g)];
      for (auto& label : labels) { label = bridge.inverse(label); }
      if (!std::ranges::is_sorted(labels)) { ++planar[slot]; }
    }
  });
  auto sum = [](const std::vector<long>& v) { return std::accumulate(v.begin(), v.end(), 0L); };
  auto params = base_params(opts);
  params["flows"] = flow_count;
  params["population"] = flow_size;
  params["generations"] = flow_length;
  params["law"] = to_string(Offspring_law::wright_fisher);
  auto reports = std::vector<Test_report>{};
  reports.push_back(exact_check("cannings-cocycle-identity", sum(cocycle),
                                static_cast<std::size_t>(flow_count), opts.seed, params));
  reports.push_back(exact_check("cannings-backward-lineage-identity", sum(backward),
                                static_cast<std::size_t>(flow_count), opts.seed, params));
  reports.push_back(exact_check("cannings-planar-consistency", sum(planar),
                                static_cast<std::size_t>(flow_count), opts.seed, params));

  constexpr auto population = 200L;
  auto reps = static_cast<std::size_t>(opts.reps);
  auto scaled = std::vector<double>(reps);
  auto missing = std::vector<char>(reps, 0);
  run_replicates(
      opts.reps, opts.seed, opts.threads,
      [&](long r, Rng& rng) {
        // The Exp(1) limit is for an exchangeable pair; fixed adjacent labels
        // would see the planar adjacency law instead.
        auto x = 1 + static_cast<long>(rng.rint(static_cast<std::uint64_t>(population)));
        auto y = 1 + static_cast<long>(rng.rint(static_cast<std::uint64_t>(population - 1)));
        if (y >= x) { ++y; }
        auto generation = sample_pair_coalescence_generation(
            population, Offspring_law::wright_fisher, x, y, rng, 1000 * population);
        if (generation) {
          scaled[static_cast<std::size_t>(r)] =
              static_cast<double>(*generation) / static_cast<double>(population);
        } else {
          missing[static_cast<std::size_t>(r)] = 1;
        }
      },
      static_cast<std::uint64_t>(flow_count));
  auto kept = std::vector<double>{};
  kept.reserve(reps);
  for (std::size_t r = 0; r != reps; ++r) {
    if (missing[r] == 0) { kept.push_back(scaled[r]); }
  }
  auto pair_params = base_params(opts);
  pair_params["population"] = population;
  pair_params["unresolved"] = static_cast<long>(reps - kept.size());
  reports.push_back(ks_one_sample("cannings-pair-coalescence-vs-exp1", std::move(kept),
                                  exponential_cdf(1.0), 0.05, opts.seed, pair_params));
  return reports;
}

auto verify_core_invariants(const Experiment_options& opts) -> std::vector<Test_report> {
  auto reps = static_cast<std::size_t>(opts.reps);
  auto ultrametric = std::vector<long>(reps, 0);
  auto commutation = std::vector<long>(reps, 0);
  auto first_exceed = std::vector<long>(reps, 0);
  auto range_query = std::vector<long>(reps, 0);
  auto combs_equal = [](const Comb& a, const Comb& b) {
    return a.atoms() == b.atoms() && a.window_length() == b.window_length() &&
           a.floor() == b.floor();
  };
  run_replicates(opts.reps, opts.seed, opts.threads, [&](long r, Rng& rng) {
    auto slot = static_cast<std::size_t>(r);
    auto atom_count = static_cast<std::size_t>(rng.rint(51));
    auto window = rng.runif(0.1, 10.0);
    auto atoms = std::vector<Comb_atom>{};
    atoms.reserve(atom_count);
    for (std::size_t i = 0; i != atom_count; ++i) {
      auto height = std::exp(rng.runif(std::log(1e-3), std::log(10.0)));
      atoms.push_back({rng.runif(0.0, window), height});
    }
    auto by_position = [](const Comb_atom& a, const Comb_atom& b) {
      return a.position < b.position;
    };
    std::ranges::sort(atoms, by_position);
    for (auto clean = false; !clean;) {
      clean = true;
      for (std::size_t i = 1; i < atoms.size(); ++i) {
        if (atoms[i - 1].position == atoms[i].position) {
          atoms[i].position = rng.runif(0.0, window);
          clean = false;
        }
      }
      if (!clean) { std::ranges::sort(atoms, by_position); }
    }
    auto comb = Comb{std::move(atoms), window, 0.0};

    auto draw_point = [&] {
      auto p = rng.runif(0.0, window);
      while (comb.has_atom_at(p)) { p = rng.runif(0.0, window); }
      return p;
    };
    for (auto trial = 0; trial != 5; ++trial) {
      auto points = std::vector<double>{draw_point(), draw_point(), draw_point()};
      std::ranges::sort(points);
      auto left = comb.metric(points[0], points[1]);
      auto right = comb.metric(points[1], points[2]);
      auto outer = comb.metric(points[0], points[2]);
      if (outer != std::max(left, right)) { ++ultrametric[slot]; }
      if (comb.metric(points[1], points[0]) != left) { ++ultrametric[slot]; }
    }
    for (auto trial = 0; trial != 3; ++trial) {
      auto cut = rng.runif(0.0, 1.2 * window);
      auto factor = std::exp(rng.runif(-std::log(4.0), std::log(4.0)));
      if (!combs_equal(comb.kill(cut).scale(factor), comb.scale(factor).kill(factor * cut))) {
        ++commutation[slot];
      }
    }
    for (auto trial = 0; trial != 3; ++trial) {
      auto threshold = rng.runif(0.0, 1.1 * comb.max_height() + 0.5);
      auto factor = std::exp(rng.runif(-std::log(4.0), std::log(4.0)));
      auto scaled = comb.scale(factor);
      auto hit = comb.first_exceed(threshold);
      auto scaled_hit = scaled.first_exceed(threshold / factor);
      if (hit.has_value() != scaled_hit.has_value()) {
        ++first_exceed[slot];
        continue;
      }
      auto left = (hit ? comb.kill(*hit) : comb).scale(factor);
      auto right = scaled_hit ? scaled.kill(*scaled_hit) : scaled;
      if (!combs_equal(left, right)) { ++first_exceed[slot]; }
    }
    for (auto trial = 0; trial != 5; ++trial) {
      auto a = rng.runif(0.0, window);
      auto b = rng.runif(0.0, window);
      auto lo = std::min(a, b);
      auto hi = std::max(a, b);
      auto expected = 0.0;
      for (const auto& atom : comb.atoms()) {
        if (atom.position > lo && atom.position < hi) {
          expected = std::max(expected, atom.height);
        }
      }
      if (comb.range_max(lo, hi) != expected) { ++range_query[slot]; }
    }
  });
  auto sum = [](const std::vector<long>& v) { return std::accumulate(v.begin(), v.end(), 0L); };
  auto params = base_params(opts);
  auto reports = std::vector<Test_report>{};
  reports.push_back(exact_check("core-ultrametric-symmetry", sum(ultrametric), reps, opts.seed,
                                params));
  reports.push_back(exact_check("core-kill-scale-commutation", sum(commutation), reps, opts.seed,
                                params));
  reports.push_back(exact_check("core-first-exceed-commutation", sum(first_exceed), reps,
                                opts.seed, params));
  reports.push_back(exact_check("core-range-max-oracle", sum(range_query), reps, opts.seed,
                                params));
  return reports;
}

auto run_verification(std::string_view id, const Experiment_options& opts)
    -> std::vector<Test_report> {
  if (id == "cvc2") { return verify_cvc2(opts); }
  if (id == "cvc") { return verify_cvc(opts); }
  if (id == "teo1") { return verify_teo1(opts); }
  if (id == "petit-calcul") { return verify_petit_calcul(opts); }
  if (id == "ui") { return verify_ui(opts); }
  if (id == "id") { return verify_id(opts); }
  if (id == "cor-final") { return verify_cor_final(opts); }
  if (id == "block-count") { return verify_block_count(opts); }
  throw std::invalid_argument{"unknown verification id: " + std::string{id}};
}

auto verification_ids() -> const std::vector<std::string>& {
  static const auto ids = std::vector<std::string>{
      "cvc2", "cvc", "teo1", "petit-calcul", "ui", "id", "cor-final", "block-count"};
  return ids;
}

}  // namespace combgen

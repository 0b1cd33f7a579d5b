#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "combgen/cannings.hpp"
#include "combgen/comb.hpp"
#include "combgen/conditional.hpp"
#include "combgen/cpp_process.hpp"
#include "combgen/diffusion.hpp"
#include "combgen/errors.hpp"
#include "combgen/experiments.hpp"
#include "combgen/intensity.hpp"
#include "combgen/kingman.hpp"
#include "combgen/rng.hpp"
#include "combgen/stats.hpp"

namespace {

using nlohmann::json;

struct Common_options {
  long reps = 1;
  std::uint64_t seed = 42;
  bool fresh_seed = false;
  int threads = 0;
  std::string out;
  std::string format = "jsonl";
  std::string tail_mode = "mean";
};

auto add_common(CLI::App* sub, Common_options& common) -> void {
  sub->add_option("--reps", common.reps, "Number of replicates")->capture_default_str();
  sub->add_option("--seed", common.seed, "Master seed (64-bit)")->capture_default_str();
  sub->add_flag("--fresh-seed", common.fresh_seed,
                "Draw the master seed from the OS entropy source instead of --seed");
  sub->add_option("--threads", common.threads, "Worker threads (0 = all hardware threads)")
      ->capture_default_str();
  sub->add_option("--out", common.out,
                  "Output file; default is stdout.  A relative path resolves under "
                  "$COMBGEN_OUTPUT_DIR when that variable is set.");
  sub->add_option("--format", common.format, "Output format")
      ->check(CLI::IsMember({"json", "jsonl", "csv"}))
      ->capture_default_str();
  sub->add_option("--tail-mode", common.tail_mode, "Truncated-tail handling for Kingman levels")
      ->check(CLI::IsMember({"mean", "zero", "sampled-gamma"}))
      ->capture_default_str();
}

auto effective_seed(Common_options& common) -> std::uint64_t {
  if (common.fresh_seed) {
    auto device = std::random_device{};
    common.seed = (static_cast<std::uint64_t>(device()) << 32) ^ device();
  }
  return common.seed;
}

auto now_timestamp() -> std::string {
  auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  auto tm = std::tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

auto base_config(const std::string& subcommand, const Common_options& common) -> json {
  return json{{"subcommand", subcommand},
              {"replicates", common.reps},
              {"master_seed", common.seed},
              {"threads", common.threads},
              {"format", common.format},
              {"tail_mode", common.tail_mode},
              {"timestamp", now_timestamp()}};
}

auto resolve_output_path(const std::string& out) -> std::string {
  if (out.empty() || out.front() == '/') { return out; }
  if (const char* dir = std::getenv("COMBGEN_OUTPUT_DIR")) {
    return std::string{dir} + "/" + out;
  }
  return out;
}

auto csv_field(const json& value) -> std::string {
  if (value.is_null()) { return ""; }
  if (value.is_string()) { return value.get<std::string>(); }
  return value.dump();
}

// One result set, renderable in any of the three formats.  `records` keep the
// natural nesting; `csv_rows` are the flattened long-format rows.
struct Emit_plan {
  json config;
  std::vector<json> records;
  std::vector<json> csv_rows;
  std::vector<std::string> csv_columns;
};

auto render(const Emit_plan& plan, const std::string& format, std::ostream& os) -> void {
  if (format == "json") {
    auto doc = json{{"config", plan.config}, {"records", plan.records}};
    os << doc.dump(2) << "\n";
    return;
  }
  if (format == "jsonl") {
    os << json{{"config", plan.config}}.dump() << "\n";
    for (const auto& record : plan.records) { os << record.dump() << "\n"; }
    return;
  }
  os << "# " << plan.config.dump() << "\n";
  for (std::size_t i = 0; i != plan.csv_columns.size(); ++i) {
    os << (i == 0 ? "" : ",") << plan.csv_columns[i];
  }
  os << "\n";
  for (const auto& row : plan.csv_rows) {
    for (std::size_t i = 0; i != plan.csv_columns.size(); ++i) {
      os << (i == 0 ? "" : ",") << csv_field(row.value(plan.csv_columns[i], json{}));
    }
    os << "\n";
  }
}

auto emit(const Emit_plan& plan, const Common_options& common) -> void {
  auto path = resolve_output_path(common.out);
  if (path.empty()) {
    render(plan, common.format, std::cout);
    return;
  }
  auto file = std::ofstream{path};
  if (!file) { throw std::invalid_argument{"cannot open output file: " + path}; }
  render(plan, common.format, file);
}

auto run_kingman_comb(const Common_options& common, double eps) -> int {
  auto mode = combgen::tail_mode_from_name(common.tail_mode);
  auto combs = std::vector<combgen::Comb>(static_cast<std::size_t>(common.reps));
  combgen::run_replicates(common.reps, common.seed, common.threads,
                          [&](long r, combgen::Rng& rng) {
                            combs[static_cast<std::size_t>(r)] =
                                combgen::sample_kingman_comb(eps, rng, mode).comb;
                          });
  auto plan = Emit_plan{};
  plan.config = base_config("kingman-comb", common);
  plan.config["eps"] = eps;
  plan.csv_columns = {"replicate", "position", "height"};
  for (std::size_t r = 0; r != combs.size(); ++r) {
    auto comb_json = json{};
    to_json(comb_json, combs[r]);
    plan.records.push_back(json{{"replicate", r}, {"comb", comb_json}});
    for (const auto& atom : combs[r].atoms()) {
      plan.csv_rows.push_back(
          json{{"replicate", r}, {"position", atom.position}, {"height", atom.height}});
    }
  }
  emit(plan, common);
  return 0;
}

auto run_cpp(const Common_options& common, const std::string& intensity_name, double window,
             double floor) -> int {
  auto intensity = combgen::Intensity_measure::by_name(intensity_name);
  auto samples = std::vector<combgen::Cpp_sample>(static_cast<std::size_t>(common.reps));
  combgen::run_replicates(common.reps, common.seed, common.threads,
                          [&](long r, combgen::Rng& rng) {
                            samples[static_cast<std::size_t>(r)] =
                                combgen::sample_cpp(intensity, window, floor, rng);
                          });
  auto plan = Emit_plan{};
  plan.config = base_config("cpp", common);
  plan.config["intensity"] = intensity_name;
  plan.config["window"] = window;
  plan.config["floor"] = floor;
  plan.csv_columns = {"replicate", "position", "height"};
  for (std::size_t r = 0; r != samples.size(); ++r) {
    auto comb_json = json{};
    to_json(comb_json, samples[r].comb);
    plan.records.push_back(json{{"replicate", r}, {"comb", comb_json}});
    for (const auto& atom : samples[r].comb.atoms()) {
      plan.csv_rows.push_back(
          json{{"replicate", r}, {"position", atom.position}, {"height", atom.height}});
    }
  }
  emit(plan, common);
  return 0;
}

auto run_quenched(const Common_options& common, int n, double eps, double floor, bool rejection,
                  long budget) -> int {
  auto mode = combgen::tail_mode_from_name(common.tail_mode);
  auto fidelity = floor > 0.0 ? floor / eps : combgen::k_default_fidelity;
  auto samples = std::vector<combgen::Quenched_sample>(static_cast<std::size_t>(common.reps));
  combgen::run_replicates(
      common.reps, common.seed, common.threads, [&](long r, combgen::Rng& rng) {
        samples[static_cast<std::size_t>(r)] =
            rejection ? combgen::quenched_conditional_sample_rejection(
                            n, eps, rng, fidelity, mode, combgen::k_default_level_cap, budget)
                      : combgen::quenched_conditional_sample(n, eps, rng, fidelity, mode);
      });
  auto plan = Emit_plan{};
  plan.config = base_config("quenched", common);
  plan.config["n"] = n;
  plan.config["eps"] = eps;
  plan.config["floor"] = fidelity * eps;
  plan.config["rejection"] = rejection;
  plan.csv_columns = {"replicate", "block_length", "attempts", "rank", "time"};
  for (std::size_t r = 0; r != samples.size(); ++r) {
    const auto& sample = samples[r];
    plan.records.push_back(json{{"replicate", r},
                                {"block_length", sample.block_length},
                                {"attempts", sample.attempts},
                                {"coalescence_times", sample.coalescence_times}});
    if (sample.coalescence_times.empty()) {
      plan.csv_rows.push_back(json{{"replicate", r},
                                   {"block_length", sample.block_length},
                                   {"attempts", sample.attempts}});
    }
    for (std::size_t k = 0; k != sample.coalescence_times.size(); ++k) {
      plan.csv_rows.push_back(json{{"replicate", r},
                                   {"block_length", sample.block_length},
                                   {"attempts", sample.attempts},
                                   {"rank", k + 1},
                                   {"time", sample.coalescence_times[k]}});
    }
  }
  emit(plan, common);
  return 0;
}

auto run_averaged(const Common_options& common, int n, double eps, long budget) -> int {
  auto samples = std::vector<combgen::Averaged_sample>(static_cast<std::size_t>(common.reps));
  combgen::run_replicates(common.reps, common.seed, common.threads,
                          [&](long r, combgen::Rng& rng) {
                            samples[static_cast<std::size_t>(r)] =
                                combgen::averaged_conditional_sample(n, eps, rng, budget);
                          });
  auto plan = Emit_plan{};
  plan.config = base_config("averaged", common);
  plan.config["n"] = n;
  plan.config["eps"] = eps;
  plan.csv_columns = {"replicate", "attempts", "rank", "time"};
  for (std::size_t r = 0; r != samples.size(); ++r) {
    const auto& sample = samples[r];
    plan.records.push_back(json{
        {"replicate", r}, {"attempts", sample.attempts}, {"ranked_times", sample.ranked_times}});
    for (std::size_t k = 0; k != sample.ranked_times.size(); ++k) {
      plan.csv_rows.push_back(json{{"replicate", r},
                                   {"attempts", sample.attempts},
                                   {"rank", k + 1},
                                   {"time", sample.ranked_times[k]}});
    }
  }
  emit(plan, common);
  return 0;
}

auto run_limit(const Common_options& common, int n) -> int {
  auto samples = std::vector<combgen::Limit_quenched_sample>(static_cast<std::size_t>(common.reps));
  combgen::run_replicates(common.reps, common.seed, common.threads,
                          [&](long r, combgen::Rng& rng) {
                            samples[static_cast<std::size_t>(r)] =
                                combgen::limit_quenched_sample(n, rng);
                          });
  auto plan = Emit_plan{};
  plan.config = base_config("limit", common);
  plan.config["n"] = n;
  plan.csv_columns = {"replicate", "kind", "index", "value"};
  for (std::size_t r = 0; r != samples.size(); ++r) {
    const auto& sample = samples[r];
    plan.records.push_back(json{{"replicate", r},
                                {"kill_length", sample.kill_length},
                                {"spacings", sample.spacings},
                                {"coalescence_times", sample.coalescence_times}});
    for (std::size_t k = 0; k != sample.spacings.size(); ++k) {
      plan.csv_rows.push_back(
          json{{"replicate", r}, {"kind", "spacing"}, {"index", k}, {"value", sample.spacings[k]}});
    }
    for (std::size_t k = 0; k != sample.coalescence_times.size(); ++k) {
      plan.csv_rows.push_back(json{{"replicate", r},
                                   {"kind", "time"},
                                   {"index", k + 1},
                                   {"value", sample.coalescence_times[k]}});
    }
  }
  emit(plan, common);
  return 0;
}

auto run_cannings(const Common_options& common, long population, const std::string& law_name,
                  long x, long y, long max_generations) -> int {
  auto law = combgen::offspring_law_from_name(law_name);
  if (max_generations <= 0) { max_generations = 1000 * population; }
  auto generations = std::vector<std::optional<long>>(static_cast<std::size_t>(common.reps));
  combgen::run_replicates(common.reps, common.seed, common.threads,
                          [&](long r, combgen::Rng& rng) {
                            generations[static_cast<std::size_t>(r)] =
                                combgen::sample_pair_coalescence_generation(population, law, x, y,
                                                                            rng, max_generations);
                          });
  auto plan = Emit_plan{};
  plan.config = base_config("cannings", common);
  plan.config["population"] = population;
  plan.config["law"] = law_name;
  plan.config["x"] = x;
  plan.config["y"] = y;
  plan.config["max_generations"] = max_generations;
  plan.csv_columns = {"replicate", "generation"};
  for (std::size_t r = 0; r != generations.size(); ++r) {
    auto value = generations[r] ? json(*generations[r]) : json(nullptr);
    plan.records.push_back(json{{"replicate", r}, {"generation", value}});
    plan.csv_rows.push_back(json{{"replicate", r}, {"generation", value}});
  }
  emit(plan, common);
  return 0;
}

auto run_feller(const Common_options& common, double x, double dt, long max_steps) -> int {
  auto results = std::vector<combgen::Hit_time_result>(static_cast<std::size_t>(common.reps));
  combgen::run_replicates(common.reps, common.seed, common.threads,
                          [&](long r, combgen::Rng& rng) {
                            results[static_cast<std::size_t>(r)] =
                                combgen::feller_hit_time(x, dt, rng, max_steps);
                          });
  auto plan = Emit_plan{};
  plan.config = base_config("feller", common);
  plan.config["x"] = x;
  plan.config["dt"] = dt;
  plan.config["max_steps"] = max_steps;
  plan.csv_columns = {"replicate", "time", "censored", "steps"};
  for (std::size_t r = 0; r != results.size(); ++r) {
    auto row = json{{"replicate", r},
                    {"time", results[r].time},
                    {"censored", results[r].censored},
                    {"steps", results[r].steps}};
    plan.records.push_back(row);
    plan.csv_rows.push_back(row);
  }
  emit(plan, common);
  return 0;
}

auto run_verify(const Common_options& common, const std::string& id, std::optional<int> n,
                std::optional<double> eps) -> int {
  auto opts = combgen::Experiment_options{};
  opts.reps = common.reps;
  opts.seed = common.seed;
  opts.threads = common.threads;
  opts.n = n;
  opts.eps = eps;
  opts.tail_mode = combgen::tail_mode_from_name(common.tail_mode);
  auto reports = combgen::run_verification(id, opts);

  auto all_pass = true;
  for (const auto& report : reports) {
    std::cout << combgen::summary_line(report) << "\n";
    all_pass = all_pass && report.pass;
  }
  if (!common.out.empty()) {
    auto plan = Emit_plan{};
    plan.config = base_config("verify", common);
    plan.config["id"] = id;
    if (n) { plan.config["n"] = *n; }
    if (eps) { plan.config["eps"] = *eps; }
    plan.csv_columns = {"name",      "pass",        "statistic", "threshold",
                        "p_value",   "sample_size", "criterion"};
    for (const auto& report : reports) {
      auto record = json{};
      to_json(record, report);
      plan.records.push_back(record);
      plan.csv_rows.push_back(record);
    }
    emit(plan, common);
  }
  return all_pass ? 0 : 1;
}

}  // namespace

auto main(int argc, char** argv) -> int {
  auto app = CLI::App{"Sampling and verification tools for comb-encoded genealogies"};
  app.require_subcommand(1);

  auto common = Common_options{};

  auto* kingman_cmd =
      app.add_subcommand("kingman-comb", "Sample the Kingman comb truncated at depth eps");
  auto kingman_eps = 1e-3;
  kingman_cmd->add_option("--eps", kingman_eps, "Truncation depth")->capture_default_str();
  add_common(kingman_cmd, common);

  auto* cpp_cmd = app.add_subcommand("cpp", "Sample a coalescent point process comb");
  auto cpp_intensity = std::string{"brownian"};
  auto cpp_window = 1.0;
  auto cpp_floor = 1e-3;
  cpp_cmd->add_option("--intensity", cpp_intensity, "brownian, brownian-capped-1, ...")
      ->capture_default_str();
  cpp_cmd->add_option("--window", cpp_window, "Window length")->capture_default_str();
  cpp_cmd->add_option("--floor", cpp_floor, "Generation floor (heights below are dropped)")
      ->capture_default_str();
  add_common(cpp_cmd, common);

  auto* quenched_cmd =
      app.add_subcommand("quenched", "Quenched conditional sample: n uniforms in one depth-eps block");
  auto quenched_n = 0;
  auto quenched_eps = 0.0;
  auto quenched_floor = 0.0;
  auto quenched_rejection = false;
  auto quenched_budget = 0L;
  quenched_cmd->add_option("--n", quenched_n, "Sample size")->required();
  quenched_cmd->add_option("--eps", quenched_eps, "Conditioning depth")->required();
  quenched_cmd->add_option("--floor", quenched_floor,
                           "Comb truncation depth (default eps / 100)");
  quenched_cmd->add_flag("--rejection", quenched_rejection,
                         "Use literal rejection sampling instead of the size-biased draw");
  quenched_cmd->add_option("--budget", quenched_budget,
                           "Rejection attempt budget (0 = automatic)");
  add_common(quenched_cmd, common);

  auto* averaged_cmd =
      app.add_subcommand("averaged", "Averaged conditional sample: n-coalescent given depth < eps");
  auto averaged_n = 0;
  auto averaged_eps = 0.0;
  auto averaged_budget = 0L;
  averaged_cmd->add_option("--n", averaged_n, "Sample size")->required();
  averaged_cmd->add_option("--eps", averaged_eps, "Conditioning depth")->required();
  averaged_cmd->add_option("--budget", averaged_budget, "Rejection attempt budget (0 = automatic)");
  add_common(averaged_cmd, common);

  auto* limit_cmd = app.add_subcommand("limit", "Sample the limit law of the quenched genealogy");
  auto limit_n = 0;
  limit_cmd->add_option("--n", limit_n, "Sample size")->required();
  add_common(limit_cmd, common);

  auto* cannings_cmd =
      app.add_subcommand("cannings", "Pair coalescence generations in a Cannings flow of bridges");
  auto cannings_population = 50L;
  auto cannings_law = std::string{"wright-fisher"};
  auto cannings_x = 1L;
  auto cannings_y = 2L;
  auto cannings_max = 0L;
  cannings_cmd->add_option("--population", cannings_population, "Population size")
      ->capture_default_str();
  cannings_cmd->add_option("--law", cannings_law, "wright-fisher or moran")->capture_default_str();
  cannings_cmd->add_option("--x", cannings_x, "First individual (1-based)")->capture_default_str();
  cannings_cmd->add_option("--y", cannings_y, "Second individual (1-based)")->capture_default_str();
  cannings_cmd->add_option("--max-generations", cannings_max,
                           "Backward search cap (0 = 1000 * population)");
  add_common(cannings_cmd, common);

  auto* feller_cmd =
      app.add_subcommand("feller", "Euler-Maruyama hitting times of 0 for the Feller diffusion");
  auto feller_x = 1.0;
  auto feller_dt = 1e-4;
  auto feller_steps = combgen::k_default_step_budget;
  feller_cmd->add_option("--x", feller_x, "Starting point")->capture_default_str();
  feller_cmd->add_option("--dt", feller_dt, "Time step")->capture_default_str();
  feller_cmd->add_option("--max-steps", feller_steps, "Step budget per replicate")
      ->capture_default_str();
  add_common(feller_cmd, common);

  auto* verify_cmd = app.add_subcommand("verify", "Run a verification experiment");
  auto verify_id = std::string{};
  auto verify_n = 0;
  auto verify_eps = 0.0;
  auto ids = combgen::verification_ids();
  verify_cmd->add_option("id", verify_id, "Experiment id")
      ->required()
      ->check(CLI::IsMember(ids));
  auto* verify_n_opt = verify_cmd->add_option("--n", verify_n, "Sample size override");
  auto* verify_eps_opt = verify_cmd->add_option("--eps", verify_eps, "Depth override");
  add_common(verify_cmd, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n";
    auto parsed = app.get_subcommands();
    std::cerr << (parsed.empty() ? app.help() : parsed.front()->help());
    return 2;
  }

  try {
    effective_seed(common);
    if (kingman_cmd->parsed()) { return run_kingman_comb(common, kingman_eps); }
    if (cpp_cmd->parsed()) { return run_cpp(common, cpp_intensity, cpp_window, cpp_floor); }
    if (quenched_cmd->parsed()) {
      return run_quenched(common, quenched_n, quenched_eps, quenched_floor, quenched_rejection,
                          quenched_budget);
    }
    if (averaged_cmd->parsed()) {
      return run_averaged(common, averaged_n, averaged_eps, averaged_budget);
    }
    if (limit_cmd->parsed()) { return run_limit(common, limit_n); }
    if (cannings_cmd->parsed()) {
      return run_cannings(common, cannings_population, cannings_law, cannings_x, cannings_y,
                          cannings_max);
    }
    if (feller_cmd->parsed()) { return run_feller(common, feller_x, feller_dt, feller_steps); }
    if (verify_cmd->parsed()) {
      // Verification defaults to acceptance-scale replication.
      if (verify_cmd->get_option("--reps")->count() == 0) { common.reps = 10000; }
      auto n = verify_n_opt->count() > 0 ? std::optional<int>{verify_n} : std::nullopt;
      auto eps = verify_eps_opt->count() > 0 ? std::optional<double>{verify_eps} : std::nullopt;
      return run_verify(common, verify_id, n, eps);
    }
  } catch (const combgen::Resource_cap_error& e) {
    std::cerr << "resource cap: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

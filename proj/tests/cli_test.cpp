// End-to-end checks of the command line tool: spawns the real binary (path in
// argv[1]) and inspects exit codes and emitted files.
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

namespace fs = std::filesystem;

auto failures = 0;

auto expect(bool condition, const std::string& what) -> void {
  if (condition) {
    std::cout << "ok: " << what << '\n';
  } else {
    std::cout << "FAILED: " << what << '\n';
    ++failures;
  }
}

struct Run_result {
  int exit_code{};
  std::string output;  // stdout and stderr combined
};

auto run(const std::string& command, const fs::path& capture) -> Run_result {
  auto full = command + " > " + capture.string() + " 2>&1";
  auto status = std::system(full.c_str());
  auto code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  auto in = std::ifstream{capture};
  auto buffer = std::ostringstream{};
  buffer << in.rdbuf();
  return {.exit_code = code, .output = buffer.str()};
}

auto file_lines_without_timestamp(const fs::path& path) -> std::vector<std::string> {
  auto in = std::ifstream{path};
  auto lines = std::vector<std::string>{};
  auto line = std::string{};
  while (std::getline(in, line)) {
    if (line.find("timestamp") == std::string::npos) { lines.push_back(line); }
  }
  return lines;
}

}  // namespace

auto main(int argc, char** argv) -> int {
  if (argc < 2) {
    std::cerr << "usage: cli_test <path-to-combgen>\n";
    return 2;
  }
  auto binary = std::string{argv[1]};
  auto dir = fs::temp_directory_path() / "combgen-cli-test";
  fs::remove_all(dir);
  fs::create_directories(dir);
  auto log = dir / "run.log";

  {
    auto first = dir / "a.jsonl";
    auto second = dir / "b.jsonl";
    auto base = binary + " kingman-comb --eps 0.2 --seed 7 --reps 3 --format jsonl --out ";
    auto r1 = run(base + first.string(), log);
    auto r2 = run(base + second.string(), log);
    expect(r1.exit_code == 0 && r2.exit_code == 0, "kingman-comb runs succeed");
    auto lines1 = file_lines_without_timestamp(first);
    auto lines2 = file_lines_without_timestamp(second);
    expect(!lines1.empty() && lines1 == lines2, "same seed gives identical output");
    auto in = std::ifstream{first};
    auto raw = std::string{std::istreambuf_iterator<char>{in}, {}};
    expect(raw.find("\"master_seed\":7") != std::string::npos ||
               raw.find("\"master_seed\": 7") != std::string::npos,
           "config header echoes the seed");
  }

  {
    auto r = run(binary + " kingman-comb --eps 0.5 --seed 1 --format json --out " +
                     (dir / "one.json").string(),
                 log);
    auto in = std::ifstream{dir / "one.json"};
    auto body = std::string{std::istreambuf_iterator<char>{in}, {}};
    expect(r.exit_code == 0 && body.find("\"records\"") != std::string::npos &&
               body.find("\"atoms\"") != std::string::npos,
           "json format wraps records and the comb");
  }

  {
    auto r = run(binary + " quenched --eps 0.1", log);
    expect(r.exit_code == 2, "missing required flag exits 2");
    expect(r.output.find("--n") != std::string::npos, "usage text names the missing flag");
  }

  {
    auto r = run(binary + " averaged --n 3 --eps 1e-5 --reps 1", log);
    expect(r.exit_code == 3, "hopeless acceptance rate exits 3");
  }

  {
    auto csv = dir / "limit.csv";
    auto r = run(binary + " limit --n 2 --reps 5 --seed 9 --format csv --out " + csv.string(),
                 log);
    auto lines = file_lines_without_timestamp(csv);
    expect(r.exit_code == 0 && !lines.empty(), "csv run succeeds");
    auto in = std::ifstream{csv};
    auto first_line = std::string{};
    std::getline(in, first_line);
    expect(!first_line.empty() && first_line.front() == '#', "csv starts with a config comment");
  }

  {
    ::setenv("COMBGEN_OUTPUT_DIR", dir.string().c_str(), 1);
    auto r = run(binary + " cpp --reps 2 --seed 3 --out relative.jsonl", log);
    ::unsetenv("COMBGEN_OUTPUT_DIR");
    expect(r.exit_code == 0 && fs::exists(dir / "relative.jsonl"),
           "relative --out lands in COMBGEN_OUTPUT_DIR");
  }

  {
    auto r = run(binary + " verify block-count --reps 300 --seed 5", log);
    expect(r.exit_code == 0, "quick verify run exits 0");
    expect(r.output.find("PASS") != std::string::npos, "verify prints summary lines");
  }

  {
    auto r = run(binary + " verify no-such-experiment --reps 10", log);
    expect(r.exit_code == 2, "unknown verification id exits 2");
  }

  fs::remove_all(dir);
  if (failures != 0) {
    std::cout << failures << " cli check(s) failed\n";
    return 1;
  }
  std::cout << "all cli checks passed\n";
  return 0;
}

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace kernmetric::cli {

// Stable exit-code contract.
inline constexpr int kExitOk = 0;
inline constexpr int kExitSelfcheckFailed = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitData = 3;

enum class Command { gram, mmd, test2, score, power, selfcheck };

struct RunConfig {
  Command command = Command::selfcheck;
  std::optional<std::filesystem::path> kernel_spec;
  std::optional<std::filesystem::path> points;
  std::optional<std::filesystem::path> x;
  std::optional<std::filesystem::path> y;
  std::optional<std::filesystem::path> x_weights;
  std::optional<std::filesystem::path> y_weights;
  std::optional<std::filesystem::path> forecast;
  std::optional<std::filesystem::path> forecast_weights;
  std::optional<std::filesystem::path> obs;
  std::optional<std::filesystem::path> grid;
  std::optional<std::filesystem::path> scenario;
  std::optional<std::filesystem::path> out;
  std::size_t n_perm = 999;
  double alpha = 0.05;
  std::uint64_t seed = 0;
  std::size_t trials = 1000;
  bool inject_fault = false;
};

// Parses argv (including --config RUN.json). On failure prints to err and
// returns the exit code instead of a config.
struct ParseOutcome {
  std::optional<RunConfig> config;
  int exit_code = kExitOk;
};
ParseOutcome parse_args(int argc, const char* const* argv, std::ostream& out, std::ostream& err,
                        bool allow_fault_injection);

int run_gram(const RunConfig& cfg, std::ostream& out);
int run_mmd(const RunConfig& cfg, std::ostream& out);
int run_test2(const RunConfig& cfg, std::ostream& out);
int run_score(const RunConfig& cfg, std::ostream& out);
int run_power(const RunConfig& cfg, std::ostream& out);
int run_selfcheck(const RunConfig& cfg, std::ostream& out);

// Dispatches and maps library errors to exit codes: ParseError -> 2, every
// other library error -> 3.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

int main_entry(int argc, const char* const* argv, bool allow_fault_injection);

}  // namespace kernmetric::cli

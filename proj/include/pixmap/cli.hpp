#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "pixmap/reducers.hpp"
#include "pixmap/synthgen.hpp"
#include "pixmap/trainer.hpp"

namespace pixmap {

inline constexpr const char* kToolVersion = "0.1.0";

struct GenCommand {
  BenchmarkSpec bench;
  std::filesystem::path out;
};

struct MapCommand {
  enum class Mode { kFixed, kRandom, kHighpass, kShuffle, kNpr };
  Mode mode = Mode::kFixed;
  std::optional<std::uint64_t> seed;
  std::filesystem::path in;
  std::filesystem::path out;
  double cutoff = 0.25;
  int patch = 8;
  int block = 2;
  std::optional<std::filesystem::path> table_csv;
};

struct SpectrumCommand {
  std::filesystem::path in;
  ReducerSpec reducer;
  std::uint64_t seed = 0;
  std::filesystem::path out;
  std::optional<std::filesystem::path> heatmap;
  bool log_scale = false;
};

struct TrainCommand {
  std::filesystem::path data;
  TrainConfig config;
  std::filesystem::path out;
};

struct EvalCommand {
  std::filesystem::path model;
  std::filesystem::path data;
  std::optional<ReducerSpec> reducer;
  std::optional<std::filesystem::path> breakdown;
};

struct ReportCommand {
  std::filesystem::path data;  // benchmark root holding train/ and test/
  TrainConfig base;            // reducer field is ignored
  std::filesystem::path out;
};

/// Re-runs the argv recorded in a run manifest.
struct ReplayCommand {
  std::filesystem::path manifest;
};

struct HelpRequest {
  std::string text;
};

using Command = std::variant<GenCommand, MapCommand, SpectrumCommand, TrainCommand,
                             EvalCommand, ReportCommand, ReplayCommand,
                             HelpRequest>;

/// Parses and validates arguments (program name excluded). Unknown flags,
/// missing required flags and inconsistent combinations throw
/// Error(kUsage) or Error(kInvalidArgument).
Command parse_args(const std::vector<std::string>& args);

/// Reducers compared by run_experiment, in row order.
std::vector<std::pair<std::string, ReducerSpec>> experiment_reducers();

struct ExperimentRow {
  std::string reducer;
  double train_acc = 0.0;
  double test_acc = 0.0;
  double test_ap = 0.0;
};

/// Trains and evaluates one detector per reducer on the same data and seed.
std::vector<ExperimentRow> run_experiment(const Dataset& train_set,
                                          const Dataset& test_set,
                                          const TrainConfig& base);

/// "reducer,train_acc,test_acc,test_ap" with six decimals.
std::string experiment_csv(const std::vector<ExperimentRow>& rows);

/// Executes a parsed command. `argv` is recorded in run manifests.
void run_command(const Command& command, const std::vector<std::string>& argv,
                 std::ostream& out);

/// Full CLI entry point: returns the process exit code and prints errors as
/// a single "pixmap: error: <code>: <message>" line on `err`.
int cli_main(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err);

}  // namespace pixmap

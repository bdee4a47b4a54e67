#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace tvm {

enum class Mode { kSimulate, kCouple, kSweep, kBallgame, kOracle, kLdp };

std::string_view mode_name(Mode mode) noexcept;
/// Throws ValidationError for an unknown name.
Mode parse_mode(std::string_view name);

struct ExperimentSpec {
  Mode mode = Mode::kSimulate;
  std::vector<int> dims{1};
  int side = 2;
  std::vector<double> densities{0.5};
  double horizon = 1.0;
  std::uint64_t replicas = 1;
  std::uint64_t seed = 1;
  /// Number of reporting intervals; the grid has grid + 1 points on [0, T].
  int grid = 10;
  std::string out = "out";
  /// Fixed initial state as a 0/1 string in vertex order (simulate, couple, oracle).
  std::string init;
  /// Upper density for the monotone coupling; absent selects the eta/zeta coupling.
  std::optional<double> p2;
  /// 0 means available parallelism. Never affects the output.
  unsigned workers = 0;
};

/// Throws ValidationError naming every offending field.
void validate(const ExperimentSpec& spec);

/// Applies one key=value setting using the CLI flag names (d, r, p, T,
/// replicas, seed, grid, out, init, p2, workers, mode). Lists are
/// comma separated. Throws ValidationError on unknown keys or bad values.
void apply_setting(ExperimentSpec& spec, std::string_view key, std::string_view value);

/// Reads a flat key=value file ('#' starts a comment) on top of `base`.
/// Throws IoError if unreadable, ValidationError on bad content.
ExperimentSpec load_config(const std::filesystem::path& path, ExperimentSpec base = {});

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Index of a header column; throws std::out_of_range if missing.
  std::size_t column(std::string_view name) const;
  std::string to_string() const;
};

/// 17 significant digits, '.' decimal; NaN is written as an empty field.
std::string format_number(double x);

/// Throws IoError if unreadable.
CsvTable read_csv(const std::filesystem::path& path);

struct ExperimentResult {
  CsvTable rows;
  nlohmann::ordered_json summary;
  /// (file name, table) pairs for dominance reports.
  std::vector<std::pair<std::string, CsvTable>> dominance;
};

/// Runs every (d, p) combination of the spec. Replica i of combination c
/// draws from stream id i, substream c (ballgame: stream id c * replicas + i).
/// Deterministic given the spec, independent of the worker count.
ExperimentResult run_experiment(const ExperimentSpec& spec);

/// Writes rows.csv, summary.json and any dominance reports under `dir`,
/// creating it if needed. Throws IoError with the failing path.
void write_result(const ExperimentResult& result, const std::filesystem::path& dir);

}  // namespace tvm

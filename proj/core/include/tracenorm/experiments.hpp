#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "tracenorm/report.hpp"

namespace tracenorm {

/// Everything a run needs. Lists are repeated keys in config files.
struct ExperimentConfig {
  std::string experiment;
  std::vector<std::string> curves;
  std::vector<double> s_values;
  std::vector<int> levels;
  /// Spectral mode counts.
  std::vector<int> n_values;
  /// "p1", "p0" or "both".
  std::string element = "p1";
  std::uint64_t seed = 20170119;
  std::string output;
  /// Domain block / Schur inner solver: "cholesky", "cg" or "multigrid".
  std::string inner = "cholesky";
  double tolerance = 1e-12;
  bool relative = false;
  int max_iterations = 1000;
  bool dirichlet_with_mass = false;
  bool allow_large = false;
  /// Nonmatching 3d: refine the curve past the domain mesh (h > H).
  bool violate_ratio = false;
  int jobs = 1;
};

const std::vector<std::string>& experiment_names();
bool is_experiment(const std::string& name);

/// Defaults for a named experiment; throws on unknown names.
ExperimentConfig default_config(const std::string& experiment);

/// Applies one key=value assignment. List keys append; the first assignment to a list key in a
/// config replaces the defaults.
void apply_setting(ExperimentConfig& config, const std::string& key, const std::string& value,
                   std::vector<std::string>& touched_lists);

/// Reads `key = value` lines ('#' starts a comment).
void load_config_file(ExperimentConfig& config, const std::string& path);

/// Parses "2..5", "2,3,4" or "3"; an empty string gives an empty list.
std::vector<int> parse_int_list(const std::string& text);
std::vector<double> parse_double_list(const std::string& text);

struct TimedEntry {
  std::string label;
  double seconds = 0.0;
};

struct ExperimentResult {
  StudyReport report;
  /// Factorization and eigendecomposition costs per cell.
  std::vector<TimedEntry> setup;
};

ExperimentResult run_experiment(const ExperimentConfig& config);

/// Mesh sizes used by the 3d nonmatching runs: 16 level - 1 cubes per axis (odd).
int nonmatching_3d_cells(int level);
/// Curve segment count for a 3d nonmatching level (multiple of 4 for the square loop).
int nonmatching_3d_segments(const std::string& curve, int level, bool violate_ratio);

/// Manifest with config, seed, version, wall time and setup costs.
std::string run_manifest_json(const ExperimentConfig& config, const ExperimentResult& result, double wall_seconds,
                              const std::string& csv_path);

}  // namespace tracenorm

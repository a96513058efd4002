#pragma once

// Independent seeded runs, summary statistics and CSV/JSON output.

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "vch/engine.hpp"

namespace vch {

struct ExperimentConfig {
  std::string problem_name = "spring";
  GAConfig ga;
  int num_runs = 20;
  std::uint64_t base_seed = 0;
  bool parallel = false;

  std::uint64_t seed_for_run(int run) const noexcept {
    return base_seed + static_cast<std::uint64_t>(run);
  }
};

/// Statistics over the best objective of every run that ended feasible. When no
/// run is feasible, `no_feasible_runs` is set and the statistics describe the
/// final cv values instead.
struct ExperimentSummary {
  double best_f = 0.0;
  double mean_f = 0.0;
  double median_f = 0.0;
  double worst_f = 0.0;
  double std_f = 0.0;
  double mean_evaluations = 0.0;
  double mean_wall_ms = 0.0;
  int feasible_run_count = 0;
  int num_runs = 0;
  bool no_feasible_runs = false;

  bool operator==(const ExperimentSummary&) const = default;
};

struct SampleStats {
  double min = 0.0;
  double mean = 0.0;
  double median = 0.0;
  double max = 0.0;
  double stddev = 0.0;  // n - 1 denominator, 0 for a single sample
};

SampleStats describe(std::vector<double> values);

ExperimentSummary summarize(const std::vector<RunResult>& results);

struct Experiment {
  std::vector<RunResult> runs;
  ExperimentSummary summary;
};

/// Throws UnknownProblem for an unresolvable problem name.
Experiment run_experiment(const ExperimentConfig& cfg);

class OutputError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct OutputPaths {
  std::filesystem::path runs_csv;
  std::filesystem::path trace_csv;
  std::filesystem::path summary_json;

  static OutputPaths in(const std::filesystem::path& dir);
};

/// Shortest decimal string that round-trips to the same double.
std::string format_double(double value);

std::string runs_csv(const ExperimentConfig& cfg, const std::vector<RunResult>& runs);
std::string trace_csv(const std::vector<RunResult>& runs);
std::string summary_json(const ExperimentConfig& cfg, const ExperimentSummary& summary);

void emit_results(const ExperimentConfig& cfg, const Experiment& experiment,
                  const OutputPaths& paths);

}  // namespace vch

#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "rdr/estimator.hpp"
#include "rdr/model.hpp"
#include "rdr/random.hpp"
#include "rdr/tuning.hpp"

namespace rdr {

enum class Algorithm { rdr, ddr, mlmc, mc, longrun };

std::string to_string(Algorithm a);
/// Throws ConfigError on unknown names.
Algorithm parse_algorithm(const std::string& name);

enum class OutputFormat { csv, json };

struct ExperimentConfig {
  std::string model;
  nlohmann::json params = nlohmann::json::object();
  Algorithm algorithm = Algorithm::rdr;
  std::size_t replications = 1000;
  double budget_multiplier = 10.0;
  std::size_t tuning_samples = 1000;
  std::uint64_t master_seed = 1;
  std::string output;
  std::size_t var_f_samples = 10000;
  OutputFormat format = OutputFormat::csv;
  bool include_tuning_cost = false;
  /// Worker threads; 0 uses the OpenMP default.
  int threads = 0;
  /// Long-run average period; 0 uses the model default.
  std::size_t period = 0;
};

/// Reads the recognised keys of `j` on top of `base`. Unknown keys and bad
/// values raise ConfigError naming the key.
ExperimentConfig parse_config(const nlohmann::json& j, ExperimentConfig base = {});

/// Checks the invariants (known model, replications >= 2, budget > 0, ...).
void validate(const ExperimentConfig& config);

struct RunReport {
  std::string model;
  std::size_t d = 0;
  Algorithm algorithm = Algorithm::rdr;
  /// Iterations per replication; sum of n_l for MLMC.
  std::size_t n = 0;
  std::vector<std::size_t> level_n;
  std::size_t replications = 0;
  double estimate = 0.0;
  double ci90 = 0.0;
  double std = 0.0;
  double cost_mean = 0.0;
  double cost_ci90 = 0.0;
  double cost_times_var = 0.0;
  double vrf = 0.0;
  double var_f = 0.0;
  double tuning_cost = 0.0;
  std::uint64_t seed = 0;
  double wall_seconds = 0.0;
};

/// n = floor(budget / t_d) independent evaluations.
EstimateResult baseline_mc(PrefixModel& model, double budget, Stream& rng);

/// Stream ids for the phases of one experiment. Tuning and var(f) depend on
/// the model only, so every algorithm on a model shares them.
struct ExperimentIds {
  std::uint64_t tune;
  std::uint64_t var_f;
  std::uint64_t levels;
  std::uint64_t run;
};
ExperimentIds experiment_ids(const ExperimentConfig& config);

/// Tunes once, runs the replications in parallel and reduces them in index
/// order. Output is independent of the thread count.
RunReport run_experiment(const ExperimentConfig& config);

/// Tuning phase alone, on the same stream run_experiment uses.
TunedPlan tune_experiment(const ExperimentConfig& config);

nlohmann::json plan_to_json(const TunedPlan& plan);

/// Six significant digits.
std::string format_number(double x);

/// Sorted by (model, d, algorithm).
std::string format_csv(std::vector<RunReport> reports);
std::string format_json(std::vector<RunReport> reports);

/// Writes to `path`, or to stdout when the path is empty or "-".
void emit_report(const std::vector<RunReport>& reports, OutputFormat format, const std::string& path);

}  // namespace rdr

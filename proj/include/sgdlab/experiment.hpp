// Batch experiment driver: strict JSON config parsing, ensemble execution,
// CSV/report/manifest emission, and re-analysis of existing CSV series.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sgdlab/engine.hpp"
#include "sgdlab/rates.hpp"

namespace sgdlab {

struct RateCheckSpec {
  Quantity quantity = Quantity::FGap;
  Regime regime = Regime::Global;
  double delta = 0.25;
  // NaN fields fall back to landscape certificate / oracle constants where
  // possible; a check that still misses a required parameter is reported
  // inconclusive rather than guessed.
  double beta = std::numeric_limits<double>::quiet_NaN();
  double zeta = std::numeric_limits<double>::quiet_NaN();
  double kappa = std::numeric_limits<double>::quiet_NaN();
  double rho = std::numeric_limits<double>::quiet_NaN();
  double sigma = std::numeric_limits<double>::quiet_NaN();
  double tolerance = 0.2;
  double window_decades = 1.0;
};

struct ExperimentConfig {
  std::string landscape_name;
  std::map<std::string, double> landscape_params;
  OracleKind oracle_kind = OracleKind::Unbiased;
  double bias_scale = 1.0;
  double noise_level = 0.0;
  ScheduleFamily schedule_family = ScheduleFamily::Poly;
  double gamma0 = 1.0;
  double shift_c = 0.0;
  double shift_cprime = 0.0;
  double s = 1.0;
  double schedule_alpha = 1.0;
  ThetaInit theta0;
  std::int64_t n_steps = 1;
  int replicates = 1;
  std::uint64_t base_seed = 0;
  RecordGrid grid = RecordGrid::LogSpaced;
  int points_per_decade = 32;
  std::vector<RateCheckSpec> rate_checks;
  bool override_assumptions = false;
};

// Strict parse: unknown keys and malformed values are rejected; catalog
// references are resolved eagerly; schedule assumptions are checked against
// the landscape's smoothness exponent unless override_assumptions is set.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);

struct ExperimentOutcome {
  int exit_code = 0;     // 0 pass, 2 rate-check fail, 3 inconclusive, 4 divergence
  std::string report_json;
};

// Runs the ensemble and writes series.csv, report.json, manifest.json into
// out_dir.  seed_override replaces the config's base_seed; jobs <= 0 uses
// machine parallelism.  The manifest alone reproduces series.csv.
ExperimentOutcome run_experiment(const ExperimentConfig& cfg, const std::string& out_dir,
                                 int jobs = 0,
                                 std::optional<std::uint64_t> seed_override = std::nullopt);

// Re-analyzes an existing series.csv against the config's rate checks and
// returns the same report shape (series-only quantities; iterate checks are
// inconclusive because raw iterates are not in the CSV).
ExperimentOutcome analyze_csv(const ExperimentConfig& cfg, const std::string& csv_path,
                              const std::string& out_dir);

// Compute ceiling on n_steps * replicates (SGDLAB_COMPUTE_CEILING overrides).
std::int64_t compute_ceiling();

}  // namespace sgdlab

// Recursion driver: runs theta_n = theta_{n-1} - gamma_n g_n(theta_{n-1}),
// records log-thinned trajectories, accumulates the summability and
// martingale diagnostics over every step, and fans replicates out to a
// worker pool.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <variant>
#include <vector>

#include "sgdlab/landscapes.hpp"
#include "sgdlab/oracles.hpp"
#include "sgdlab/schedules.hpp"

namespace sgdlab {

struct GaussianBall {
  std::vector<double> center;
  double stddev = 0.0;
};

// Deterministic point by default; the Gaussian ball draws theta0 from the
// replicate's own stream before the first step.
using ThetaInit = std::variant<std::vector<double>, GaussianBall>;

enum class RecordGrid { All, LogSpaced };

struct RunConfig {
  const Landscape* landscape = nullptr;
  const Oracle* oracle = nullptr;
  const Schedule* schedule = nullptr;
  ThetaInit theta0;
  std::int64_t n_steps = 0;
  std::uint64_t seed = 0;
  RecordGrid grid = RecordGrid::LogSpaced;
  int points_per_decade = 32;
};

struct Record {
  std::int64_t n = 0;
  std::vector<double> theta;
  double gamma = 0.0;
  double f_gap = 0.0;      // F(theta_n) - inf F
  double grad_norm = 0.0;  // ||grad F(theta_n)||
};

struct MartingaleRecord {
  std::int64_t n = 0;
  std::vector<double> m;  // M_n = sum_{k<=n} gamma_k (g_k - b(theta_{k-1}))
};

struct AccumRecord {
  std::int64_t n = 0;
  double sum_gamma_gradsq = 0.0;
  double sum_step_1alpha = 0.0;
};

struct Diagnostics {
  double sum_gamma_gradsq = 0.0;  // sum gamma_k ||grad F(theta_{k-1})||^2
  double sum_step_1alpha = 0.0;   // sum ||theta_k - theta_{k-1}||^{1+alpha}
  std::vector<MartingaleRecord> martingale_partial;  // on the record grid
  std::vector<AccumRecord> accum_partial;            // on the record grid
};

struct Trajectory {
  std::vector<Record> records;              // sorted by n
  std::vector<double> running_min_gap;      // inf_{k<=n} F_gap, grid-aligned,
  std::vector<double> running_min_gradsq;   //   both including k = 0
  Diagnostics diag;
  std::uint64_t seed = 0;
};

struct Ensemble {
  RunConfig config;
  std::vector<Trajectory> replicates;
};

// The recorded step indices for a config (always includes n_steps).
std::vector<std::int64_t> record_steps(const RunConfig& cfg);

// Single trajectory, bitwise-reproducible from (config, seed).
Trajectory run(const RunConfig& cfg);

// R independent trajectories; replicate i is reproducible in isolation from
// (base seed, i) regardless of jobs.  jobs <= 0 means machine parallelism.
Ensemble replicate(const RunConfig& cfg, int R, int jobs = 0);

// max ||theta_m - theta_n|| over recorded indices m, n >= from_n.
double tail_diameter(const Trajectory& traj, std::int64_t from_n);

// Index of the record whose n is closest to the request (ties toward the
// smaller n).
std::size_t nearest_record_index(const Trajectory& traj, std::int64_t n);

// CSV with header n,rep,F_gap,grad_norm,theta_norm,gamma,min_F_gap,
// min_gradsq,M_norm at 17 significant digits, replicate-major.
void write_csv(std::ostream& os, const Ensemble& ens);

}  // namespace sgdlab

#include "sgdlab/engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <ostream>
#include <thread>

#include "sgdlab/errors.hpp"
#include "sgdlab/rng.hpp"

namespace sgdlab {

namespace {

constexpr std::int64_t kGammaCacheLimit = 10000000;  // precompute limit, 80 MB

void check_config(const RunConfig& cfg) {
  if (cfg.landscape == nullptr || cfg.oracle == nullptr || cfg.schedule == nullptr) {
    throw InvalidParamError("run: config must reference landscape, oracle and schedule");
  }
  if (&cfg.oracle->landscape() != cfg.landscape) {
    throw InvalidParamError("run: oracle was built for a different landscape");
  }
  if (cfg.n_steps < 1) throw InvalidParamError("run: n_steps must be >= 1");
  if (cfg.grid == RecordGrid::LogSpaced && cfg.points_per_decade < 1) {
    throw InvalidParamError("run: points_per_decade must be >= 1");
  }
  const std::size_t m = static_cast<std::size_t>(cfg.landscape->dim());
  if (const auto* pt = std::get_if<std::vector<double>>(&cfg.theta0)) {
    if (pt->size() != m) throw InvalidParamError("run: theta0 dimension mismatch");
    for (double x : *pt) {
      if (!std::isfinite(x)) throw InvalidParamError("run: theta0 must be finite");
    }
  } else {
    const auto& ball = std::get<GaussianBall>(cfg.theta0);
    if (ball.center.size() != m) throw InvalidParamError("run: theta0 dimension mismatch");
    for (double x : ball.center) {
      if (!std::isfinite(x)) throw InvalidParamError("run: theta0 center must be finite");
    }
    if (!(ball.stddev >= 0.0) || !std::isfinite(ball.stddev)) {
      throw InvalidParamError("run: theta0 stddev must be finite and >= 0");
    }
  }
}

Trajectory run_one(const RunConfig& cfg, std::uint64_t seed, std::int64_t replicate_index,
                   const std::vector<double>& gamma_cache) {
  const Landscape& land = *cfg.landscape;
  const Oracle& orc = *cfg.oracle;
  const Schedule& sch = *cfg.schedule;
  const std::size_t m = static_cast<std::size_t>(land.dim());
  const double alpha = land.holder().alpha;
  const double inf_f = land.inf_value();

  rng::Stream stream(seed);

  std::vector<double> theta;
  if (const auto* pt = std::get_if<std::vector<double>>(&cfg.theta0)) {
    theta = *pt;
  } else {
    const auto& ball = std::get<GaussianBall>(cfg.theta0);
    theta = ball.center;
    for (double& x : theta) x += ball.stddev * stream.gaussian();
  }

  std::vector<double> grad(m), g(m), bias(m), mart(m, 0.0);
  double f_here = land.value(theta);
  if (!std::isfinite(f_here)) {
    throw DivergenceError("non-finite objective at theta0", 0, replicate_index);
  }
  land.gradient(theta, grad);
  double gradsq = 0.0;
  for (double gi : grad) gradsq += gi * gi;

  Trajectory traj;
  traj.seed = seed;
  double min_gap = f_here - inf_f;
  double min_gradsq = gradsq;

  const std::vector<std::int64_t> grid = record_steps(cfg);
  traj.records.reserve(grid.size());
  traj.running_min_gap.reserve(grid.size());
  traj.running_min_gradsq.reserve(grid.size());
  traj.diag.martingale_partial.reserve(grid.size());
  traj.diag.accum_partial.reserve(grid.size());
  std::size_t grid_pos = 0;

  double sum_gamma_gradsq = 0.0;
  double sum_step_1alpha = 0.0;

  for (std::int64_t n = 1; n <= cfg.n_steps; ++n) {
    const double gam = gamma_cache.empty() ? sch.gamma(n)
                                           : gamma_cache[static_cast<std::size_t>(n - 1)];
    // Quantities at theta_{n-1}.
    orc.sample_gradient(theta, f_here - inf_f, grad, stream, g);
    orc.bias_map(theta, grad, bias);
    sum_gamma_gradsq += gam * gradsq;
    double stepsq = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double step_i = gam * g[i];
      stepsq += step_i * step_i;
      mart[i] += gam * (g[i] - bias[i]);
      theta[i] -= step_i;
    }
    sum_step_1alpha += std::pow(stepsq, 0.5 * (1.0 + alpha));

    f_here = land.value(theta);
    if (!std::isfinite(f_here)) {
      throw DivergenceError("trajectory diverged (non-finite objective)", n, replicate_index);
    }
    land.gradient(theta, grad);
    gradsq = 0.0;
    for (double gi : grad) gradsq += gi * gi;

    const double f_gap = f_here - inf_f;
    if (f_gap < min_gap) min_gap = f_gap;
    if (gradsq < min_gradsq) min_gradsq = gradsq;

    if (grid_pos < grid.size() && n == grid[grid_pos]) {
      Record rec;
      rec.n = n;
      rec.theta = theta;
      rec.gamma = gam;
      rec.f_gap = f_gap;
      rec.grad_norm = std::sqrt(gradsq);
      traj.records.push_back(std::move(rec));
      traj.running_min_gap.push_back(min_gap);
      traj.running_min_gradsq.push_back(min_gradsq);
      traj.diag.martingale_partial.push_back({n, mart});
      traj.diag.accum_partial.push_back({n, sum_gamma_gradsq, sum_step_1alpha});
      ++grid_pos;
    }
  }

  traj.diag.sum_gamma_gradsq = sum_gamma_gradsq;
  traj.diag.sum_step_1alpha = sum_step_1alpha;
  return traj;
}

std::vector<double> build_gamma_cache(const RunConfig& cfg) {
  std::vector<double> cache;
  if (cfg.n_steps <= kGammaCacheLimit) {
    cache.resize(static_cast<std::size_t>(cfg.n_steps));
    for (std::int64_t n = 1; n <= cfg.n_steps; ++n) {
      cache[static_cast<std::size_t>(n - 1)] = cfg.schedule->gamma(n);
    }
  }
  return cache;
}

}  // namespace

std::vector<std::int64_t> record_steps(const RunConfig& cfg) {
  std::vector<std::int64_t> grid;
  if (cfg.grid == RecordGrid::All) {
    grid.resize(static_cast<std::size_t>(cfg.n_steps));
    for (std::int64_t n = 1; n <= cfg.n_steps; ++n) grid[static_cast<std::size_t>(n - 1)] = n;
    return grid;
  }
  for (int k = 0;; ++k) {
    const double v = std::pow(10.0, static_cast<double>(k) / cfg.points_per_decade);
    if (v >= static_cast<double>(cfg.n_steps)) break;
    const std::int64_t n = std::max<std::int64_t>(1, std::llround(v));
    if (grid.empty() || n > grid.back()) grid.push_back(n);
  }
  if (grid.empty() || grid.back() < cfg.n_steps) grid.push_back(cfg.n_steps);
  return grid;
}

Trajectory run(const RunConfig& cfg) {
  check_config(cfg);
  return run_one(cfg, cfg.seed, -1, build_gamma_cache(cfg));
}

Ensemble replicate(const RunConfig& cfg, int R, int jobs) {
  check_config(cfg);
  if (R < 1) throw InvalidParamError("replicate: R must be >= 1");
  if (jobs <= 0) {
    jobs = static_cast<int>(std::thread::hardware_concurrency());
    if (jobs < 1) jobs = 1;
  }
  jobs = std::min(jobs, R);

  const std::vector<double> gamma_cache = build_gamma_cache(cfg);
  Ensemble ens;
  ens.config = cfg;
  ens.replicates.resize(static_cast<std::size_t>(R));

  std::atomic<int> next{0};
  std::mutex err_mutex;
  std::exception_ptr first_error;

  auto worker = [&]() {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= R) return;
      try {
        ens.replicates[static_cast<std::size_t>(i)] =
            run_one(cfg, rng::replicate_seed(cfg.seed, static_cast<std::uint64_t>(i)), i,
                    gamma_cache);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    }
  };

  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(jobs));
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (first_error) std::rethrow_exception(first_error);
  return ens;
}

double tail_diameter(const Trajectory& traj, std::int64_t from_n) {
  std::size_t first = traj.records.size();
  for (std::size_t i = 0; i < traj.records.size(); ++i) {
    if (traj.records[i].n >= from_n) {
      first = i;
      break;
    }
  }
  if (first == traj.records.size()) {
    throw DomainError("tail_diameter: no recorded steps at or after the requested index");
  }
  double best = 0.0;
  for (std::size_t i = first; i < traj.records.size(); ++i) {
    for (std::size_t j = i + 1; j < traj.records.size(); ++j) {
      const auto& a = traj.records[i].theta;
      const auto& b = traj.records[j].theta;
      double d2 = 0.0;
      for (std::size_t k = 0; k < a.size(); ++k) {
        const double d = a[k] - b[k];
        d2 += d * d;
      }
      best = std::max(best, d2);
    }
  }
  return std::sqrt(best);
}

std::size_t nearest_record_index(const Trajectory& traj, std::int64_t n) {
  if (traj.records.empty()) throw DomainError("nearest_record_index: empty trajectory");
  std::size_t best = 0;
  std::int64_t best_dist = std::abs(traj.records[0].n - n);
  for (std::size_t i = 1; i < traj.records.size(); ++i) {
    const std::int64_t d = std::abs(traj.records[i].n - n);
    if (d < best_dist) {
      best = i;
      best_dist = d;
    }
  }
  return best;
}

void write_csv(std::ostream& os, const Ensemble& ens) {
  os << "n,rep,F_gap,grad_norm,theta_norm,gamma,min_F_gap,min_gradsq,M_norm\n";
  char buf[512];
  for (std::size_t r = 0; r < ens.replicates.size(); ++r) {
    const Trajectory& traj = ens.replicates[r];
    for (std::size_t i = 0; i < traj.records.size(); ++i) {
      const Record& rec = traj.records[i];
      double tn = 0.0;
      for (double x : rec.theta) tn += x * x;
      double mn = 0.0;
      for (double x : traj.diag.martingale_partial[i].m) mn += x * x;
      std::snprintf(buf, sizeof(buf),
                    "%lld,%zu,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                    static_cast<long long>(rec.n), r, rec.f_gap, rec.grad_norm, std::sqrt(tn),
                    rec.gamma, traj.running_min_gap[i], traj.running_min_gradsq[i],
                    std::sqrt(mn));
      os << buf;
    }
  }
}

}  // namespace sgdlab

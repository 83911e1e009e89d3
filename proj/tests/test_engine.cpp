#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include "sgdlab/engine.hpp"
#include "sgdlab/errors.hpp"

using namespace sgdlab;

namespace {

struct Fixture {
  Landscape land = catalog("quadratic");
  Oracle quiet{land, OracleKind::Unbiased};
  Schedule harmonic = Schedule::poly(1.0, 0.0, 1.0);

  RunConfig config(std::int64_t n_steps, double theta0 = 1.0) const {
    RunConfig cfg;
    cfg.landscape = &land;
    cfg.oracle = &quiet;
    cfg.schedule = &harmonic;
    cfg.theta0 = std::vector<double>{theta0};
    cfg.n_steps = n_steps;
    cfg.seed = 7;
    return cfg;
  }
};

}  // namespace

TEST_CASE("noise-free quadratic contraction is exact") {
  // theta_n = theta_{n-1} (1 - 1/n): theta_1 = 0 for the harmonic schedule,
  // so use s = 0.5 where the products stay positive.
  Fixture fx;
  Schedule half = Schedule::poly(0.5, 0.0, 1.0);  // gamma_n = 1/(2n)
  RunConfig cfg = fx.config(3);
  cfg.schedule = &half;
  cfg.grid = RecordGrid::All;
  const Trajectory traj = run(cfg);
  REQUIRE(traj.records.size() == 3);
  // theta_1 = 1*(1 - 1/2) = 1/2; theta_2 = 1/2*(1 - 1/4) = 3/8;
  // theta_3 = 3/8*(1 - 1/6) = 5/16.
  CHECK(traj.records[0].theta[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(traj.records[1].theta[0] == doctest::Approx(0.375).epsilon(1e-15));
  CHECK(traj.records[2].theta[0] == doctest::Approx(0.3125).epsilon(1e-15));
  CHECK(traj.records[2].n == 3);
  CHECK(traj.records[1].gamma == doctest::Approx(0.25));
  CHECK(traj.records[2].f_gap == doctest::Approx(0.3125 * 0.3125 / 2.0));

  // Zero noise keeps the martingale at exactly zero.
  for (const auto& mr : traj.diag.martingale_partial) {
    for (double v : mr.m) CHECK(v == 0.0);
  }
  // The gradient-weighted sum counts gradients at theta_0..theta_2.
  const double expect = 0.5 * 1.0 + 0.25 * 0.25 + (1.0 / 6.0) * 0.140625;
  CHECK(traj.diag.sum_gamma_gradsq == doctest::Approx(expect).epsilon(1e-15));
}

TEST_CASE("running minima include the starting point") {
  Fixture fx;
  // gamma_1 = 4 overshoots: F(theta_1) > F(theta_0), so the running minimum
  // at n = 1 must still be the starting value.
  Schedule big = Schedule::poly(4.0, 0.0, 1.0);
  RunConfig cfg = fx.config(2);
  cfg.schedule = &big;
  cfg.grid = RecordGrid::All;
  const Trajectory traj = run(cfg);
  // theta_1 = 1 - 4 = -3, F_gap = 4.5 > 0.5 = F_gap(theta_0).
  CHECK(traj.records[0].f_gap == doctest::Approx(4.5));
  CHECK(traj.running_min_gap[0] == doctest::Approx(0.5));
  CHECK(traj.running_min_gradsq[0] == doctest::Approx(1.0));
  // theta_2 = -3 + 2*3 = 3 keeps the same value; minimum unchanged.
  CHECK(traj.running_min_gap[1] == doctest::Approx(0.5));
}

TEST_CASE("log grid thins records and always keeps the last step") {
  Fixture fx;
  RunConfig cfg = fx.config(100000);
  cfg.points_per_decade = 8;
  const auto steps = record_steps(cfg);
  CHECK(steps.front() == 1);
  CHECK(steps.back() == 100000);
  CHECK(steps.size() < 60);
  for (std::size_t i = 1; i < steps.size(); ++i) CHECK(steps[i] > steps[i - 1]);

  cfg.grid = RecordGrid::All;
  const auto dense = record_steps(cfg);
  CHECK(dense.size() == 100000);

  const Trajectory traj = run(fx.config(1000));
  const auto want = record_steps(fx.config(1000));
  REQUIRE(traj.records.size() == want.size());
  for (std::size_t i = 0; i < want.size(); ++i) CHECK(traj.records[i].n == want[i]);
  CHECK(traj.running_min_gap.size() == want.size());
  CHECK(traj.diag.martingale_partial.size() == want.size());
  CHECK(traj.diag.accum_partial.size() == want.size());
}

TEST_CASE("replicate equals run for the matching seed and is jobs-invariant") {
  Fixture fx;
  Landscape land = catalog("quadratic");
  Oracle noisy(land, OracleKind::Unbiased, 1.0, 0.5);
  RunConfig cfg = fx.config(2000);
  cfg.landscape = &land;
  cfg.oracle = &noisy;

  const Ensemble serial = replicate(cfg, 8, 1);
  const Ensemble parallel = replicate(cfg, 8, 4);
  REQUIRE(serial.replicates.size() == 8);
  for (int r = 0; r < 8; ++r) {
    const auto& a = serial.replicates[static_cast<std::size_t>(r)];
    const auto& b = parallel.replicates[static_cast<std::size_t>(r)];
    REQUIRE(a.records.size() == b.records.size());
    for (std::size_t i = 0; i < a.records.size(); ++i) {
      CHECK(a.records[i].theta[0] == b.records[i].theta[0]);
      CHECK(a.records[i].f_gap == b.records[i].f_gap);
    }
    // Each replicate is reproducible in isolation.
    RunConfig single = cfg;
    single.seed = a.seed;
    const Trajectory alone = run(single);
    CHECK(alone.records.back().theta[0] == a.records.back().theta[0]);
  }
  // Distinct replicates see distinct noise.
  CHECK(serial.replicates[0].records.back().theta[0] !=
        serial.replicates[1].records.back().theta[0]);
}

TEST_CASE("gaussian ball start draws theta0 from the replicate stream") {
  Fixture fx;
  // gamma_1 = 1 would send every quadratic start to zero in one step and
  // mask the per-replicate draw, so use a half-size schedule.
  Schedule half = Schedule::poly(0.5, 0.0, 1.0);
  RunConfig cfg = fx.config(10);
  cfg.schedule = &half;
  cfg.theta0 = GaussianBall{{1.0}, 0.5};
  const Ensemble ens = replicate(cfg, 4, 1);
  CHECK(ens.replicates[0].records[0].theta[0] != ens.replicates[1].records[0].theta[0]);
  const Trajectory again = run([&] {
    RunConfig c = cfg;
    c.seed = ens.replicates[2].seed;
    return c;
  }());
  CHECK(again.records.back().theta[0] == ens.replicates[2].records.back().theta[0]);
}

TEST_CASE("divergence raises with the offending step") {
  Landscape land = catalog("quadratic");
  Oracle quiet(land, OracleKind::Unbiased);
  Schedule wild = Schedule::poly(1e200, 0.0, 1.0);
  RunConfig cfg;
  cfg.landscape = &land;
  cfg.oracle = &quiet;
  cfg.schedule = &wild;
  cfg.theta0 = std::vector<double>{1.0};
  cfg.n_steps = 50;
  cfg.seed = 1;
  CHECK_THROWS_AS(run(cfg), DivergenceError);
  try {
    run(cfg);
  } catch (const DivergenceError& err) {
    CHECK(err.step >= 1);
    CHECK(err.step <= 50);
  }
  // A non-finite starting value is flagged as step 0.
  cfg.theta0 = std::vector<double>{1e200};
  try {
    run(cfg);
    CHECK(false);
  } catch (const DivergenceError& err) {
    CHECK(err.step == 0);
  }
}

TEST_CASE("config validation names the broken field") {
  Fixture fx;
  RunConfig cfg = fx.config(10);
  cfg.landscape = nullptr;
  CHECK_THROWS_AS(run(cfg), InvalidParamError);

  cfg = fx.config(10);
  cfg.n_steps = 0;
  CHECK_THROWS_AS(run(cfg), InvalidParamError);

  cfg = fx.config(10);
  cfg.theta0 = std::vector<double>{1.0, 2.0};  // dim mismatch
  CHECK_THROWS_AS(run(cfg), InvalidParamError);

  cfg = fx.config(10);
  cfg.theta0 = std::vector<double>{std::nan("")};
  CHECK_THROWS_AS(run(cfg), InvalidParamError);

  cfg = fx.config(10);
  cfg.points_per_decade = 0;
  CHECK_THROWS_AS(run(cfg), InvalidParamError);

  // Oracle built against a different landscape instance is rejected.
  Landscape other = catalog("quadratic");
  Oracle stranger(other, OracleKind::Unbiased);
  cfg = fx.config(10);
  cfg.oracle = &stranger;
  CHECK_THROWS_AS(run(cfg), InvalidParamError);

  CHECK_THROWS_AS(replicate(fx.config(10), 0, 1), InvalidParamError);
}

TEST_CASE("tail diameter and nearest record") {
  Fixture fx;
  Schedule half = Schedule::poly(0.5, 0.0, 1.0);
  RunConfig cfg = fx.config(100);
  cfg.schedule = &half;
  cfg.grid = RecordGrid::All;
  const Trajectory traj = run(cfg);
  // Monotone decay toward zero: the tail diameter from n is
  // |theta_n - theta_100|.
  const double d = tail_diameter(traj, 50);
  CHECK(d == doctest::Approx(traj.records[49].theta[0] - traj.records[99].theta[0]));
  CHECK(tail_diameter(traj, 100) == 0.0);
  CHECK_THROWS_AS(tail_diameter(traj, 101), DomainError);

  CHECK(nearest_record_index(traj, 42) == 41);
  CHECK(traj.records[nearest_record_index(traj, 42)].n == 42);

  RunConfig thin = fx.config(100000);
  const Trajectory t2 = run(thin);
  const std::size_t idx = nearest_record_index(t2, 31623);  // 10^4.5
  const std::int64_t got = t2.records[idx].n;
  // The nearest recorded index is within one grid spacing.
  CHECK(std::fabs(std::log10(static_cast<double>(got)) - 4.5) < 1.5 / 32.0);
}

TEST_CASE("csv format is stable and replicate-major") {
  Fixture fx;
  Landscape land = catalog("quadratic");
  Oracle noisy(land, OracleKind::Unbiased, 1.0, 0.3);
  RunConfig cfg = fx.config(10);
  cfg.landscape = &land;
  cfg.oracle = &noisy;
  cfg.grid = RecordGrid::All;
  const Ensemble ens = replicate(cfg, 2, 1);
  std::ostringstream os;
  write_csv(os, ens);
  std::istringstream is(os.str());
  std::string line;
  REQUIRE(std::getline(is, line));
  CHECK(line == "n,rep,F_gap,grad_norm,theta_norm,gamma,min_F_gap,min_gradsq,M_norm");
  int rows = 0;
  int rep_switches = 0;
  int prev_rep = 0;
  while (std::getline(is, line)) {
    ++rows;
    const auto c1 = line.find(',');
    const auto c2 = line.find(',', c1 + 1);
    const int rep = std::stoi(line.substr(c1 + 1, c2 - c1 - 1));
    if (rep != prev_rep) {
      ++rep_switches;
      prev_rep = rep;
    }
  }
  CHECK(rows == 20);
  CHECK(rep_switches == 1);

  // 17 significant digits round-trip doubles exactly.
  std::ostringstream os2;
  write_csv(os2, ens);
  CHECK(os.str() == os2.str());
  const std::string text = os.str();
  const auto line2_start = text.find('\n') + 1;
  const auto line2 = text.substr(line2_start, text.find('\n', line2_start) - line2_start);
  std::istringstream fields(line2);
  std::string tok;
  std::getline(fields, tok, ',');  // n
  std::getline(fields, tok, ',');  // rep
  std::getline(fields, tok, ',');  // F_gap
  CHECK(std::stod(tok) == ens.replicates[0].records[0].f_gap);
}

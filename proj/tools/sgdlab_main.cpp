// Command-line driver: run experiments, re-analyze series, compute budgets,
// audit landscapes and oracles, and smoke-test the inequality kernels.
#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sgdlab/audit.hpp"
#include "sgdlab/engine.hpp"
#include "sgdlab/errors.hpp"
#include "sgdlab/experiment.hpp"
#include "sgdlab/kernels.hpp"
#include "sgdlab/landscapes.hpp"
#include "sgdlab/oracles.hpp"
#include "sgdlab/rates.hpp"
#include "sgdlab/rng.hpp"
#include "sgdlab/schedules.hpp"
#include "sgdlab/value_grad.hpp"

namespace {

using ojson = nlohmann::ordered_json;

std::map<std::string, double> parse_kv_params(const std::vector<std::string>& items) {
  std::map<std::string, double> out;
  for (const std::string& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw sgdlab::ValidationError("--param expects key=value, got '" + item + "'");
    }
    std::size_t pos = 0;
    const double v = std::stod(item.substr(eq + 1), &pos);
    if (eq + 1 + pos != item.size()) {
      throw sgdlab::ValidationError("--param value is not a number in '" + item + "'");
    }
    out[item.substr(0, eq)] = v;
  }
  return out;
}

int cmd_run(const std::string& config_path, const std::string& out_dir, int jobs,
            std::optional<std::uint64_t> seed) {
  const sgdlab::ExperimentConfig cfg = sgdlab::parse_config_file(config_path);
  const sgdlab::ExperimentOutcome outcome = sgdlab::run_experiment(cfg, out_dir, jobs, seed);
  std::cout << outcome.report_json;
  return outcome.exit_code;
}

int cmd_rates(const std::string& config_path, const std::string& csv_path,
              const std::string& out_dir) {
  const sgdlab::ExperimentConfig cfg = sgdlab::parse_config_file(config_path);
  const sgdlab::ExperimentOutcome outcome = sgdlab::analyze_csv(cfg, csv_path, out_dir);
  std::cout << outcome.report_json;
  return outcome.exit_code;
}

struct BudgetArgs {
  double eps = 0.1;
  double delta = 0.25;
  double alpha = 1.0;
  double beta = 0.5;
  double rho = 2.0;
  double sigma = std::numeric_limits<double>::quiet_NaN();
  std::string family = "poly";
  double s = 1.0;
  double gamma0 = 1.0;
  double c = 0.0;
  double cprime = 0.0;
  double sched_alpha = 1.0;
  std::string regime = "global";
  std::string quantity = "min_fgap";
};

int cmd_budget(const BudgetArgs& args) {
  const sgdlab::Schedule sch(sgdlab::schedule_family_from_name(args.family), args.gamma0, args.c,
                             args.cprime, args.s, args.sched_alpha);
  sgdlab::BudgetParams params;
  params.alpha = args.alpha;
  params.beta = args.beta;
  params.rho = args.rho;
  params.sigma = args.sigma;
  params.regime = sgdlab::regime_from_name(args.regime);
  params.quantity = sgdlab::quantity_from_name(args.quantity);
  const sgdlab::Budget b = sgdlab::budget(args.eps, args.delta, params, sch);
  ojson out;
  out["epsilon"] = b.epsilon;
  out["delta"] = b.delta;
  out["regime"] = sgdlab::regime_name(b.regime);
  out["quantity"] = sgdlab::quantity_name(b.quantity);
  out["n"] = b.n;
  out["formula"] = b.formula_tag;
  out["saturated"] = b.saturated;
  std::cout << out.dump(2) << "\n";
  return 0;
}

struct AuditArgs {
  std::string landscape = "quadratic";
  std::vector<std::string> params;
  std::string oracle = "unbiased";
  double bias_scale = 1.0;
  double noise = 0.0;
  std::uint64_t seed = 1;
  double box = 5.0;
  double radius = 0.5;
  int pairs = 20000;
  int points = 20000;
  int draws = 2000;
};

int cmd_audit(const AuditArgs& args) {
  const sgdlab::Landscape land =
      sgdlab::catalog(args.landscape, parse_kv_params(args.params));
  const sgdlab::ValueGrad vg = sgdlab::make_value_grad(land);
  sgdlab::rng::Stream stream(args.seed);
  ojson out;
  out["landscape"] = land.name();
  out["dim"] = land.dim();

  try {
    const sgdlab::audit::Box box = sgdlab::audit::Box::symmetric(land.dim(), args.box);
    const sgdlab::audit::HolderEstimate h =
        sgdlab::audit::estimate_holder(vg, box, args.pairs, stream);
    out["holder"] = {{"L_hat", h.L_hat},
                     {"alpha_hat", h.alpha_hat},
                     {"n_pairs", h.n_pairs},
                     {"max_violation", h.max_violation}};
  } catch (const std::exception& err) {
    out["holder"] = {{"error", err.what()}};
  }

  ojson loj = ojson::array();
  for (const std::vector<double>& point : land.stationary_points()) {
    ojson entry;
    entry["point"] = point;
    try {
      const double f_star = land.value(point);
      const sgdlab::audit::LojasiewiczEstimate est = sgdlab::audit::estimate_lojasiewicz(
          vg, point, f_star, args.radius, args.points, stream);
      entry["beta_hat"] = est.beta_hat;
      entry["zeta_hat"] = est.zeta_hat;
      entry["r2"] = est.r2;
      entry["radius"] = est.radius;
      entry["n_used"] = est.n_used;
      entry["n_discarded"] = est.n_discarded;
    } catch (const std::exception& err) {
      entry["error"] = err.what();
    }
    loj.push_back(std::move(entry));
  }
  out["lojasiewicz"] = std::move(loj);

  try {
    const sgdlab::Oracle orc(land, sgdlab::oracle_kind_from_name(args.oracle), args.bias_scale,
                             args.noise);
    std::vector<std::vector<double>> pts;
    for (int i = 0; i < 32; ++i) {
      std::vector<double> p(static_cast<std::size_t>(land.dim()));
      for (double& x : p) x = stream.uniform(-args.box, args.box);
      pts.push_back(std::move(p));
    }
    const sgdlab::audit::AbcEstimate abc = sgdlab::audit::check_abc(orc, pts, args.draws, stream);
    out["abc"] = {{"C_hat", abc.C_hat},
                  {"kappa_hat", abc.kappa_hat},
                  {"c_hat", abc.c_hat},
                  {"n_points", abc.n_points},
                  {"n_draws", abc.n_draws},
                  {"violations", abc.violations},
                  {"skipped", abc.skipped.size()}};
  } catch (const std::exception& err) {
    out["abc"] = {{"error", err.what()}};
  }

  std::cout << out.dump(2) << "\n";
  return 0;
}

// Brute-force crossing counter used to cross-check extract_crossings.
std::vector<sgdlab::kernels::CrossingPair> reference_crossings(const std::vector<double>& u,
                                                               double lo, double hi) {
  std::vector<sgdlab::kernels::CrossingPair> out;
  std::int64_t below = -1;
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(u.size()); ++i) {
    const auto idx = static_cast<std::size_t>(i);
    if (u[idx] < lo) below = i;
    if (u[idx] > hi && below >= 0) {
      out.push_back({below, i});
      below = -1;
    }
  }
  return out;
}

int cmd_kernels_selftest() {
  using namespace sgdlab;
  rng::Stream stream(20240817);
  int violations = 0;
  const double tol = -1e-12;

  const std::vector<std::pair<std::string, std::map<std::string, double>>> specs = {
      {"quadratic", {}}, {"power_well", {{"q", 1.5}}}, {"spliced_quartic", {}},
      {"double_well", {}}, {"quantile", {{"mu", 0.5}}}};
  for (const auto& [name, params] : specs) {
    const Landscape land = catalog(name, params);
    const ValueGrad vg = make_value_grad(land);
    const auto& h = land.holder();
    for (int i = 0; i < 2000; ++i) {
      std::vector<double> a(static_cast<std::size_t>(land.dim()));
      std::vector<double> b(a.size());
      for (std::size_t d = 0; d < a.size(); ++d) {
        a[d] = stream.uniform(-4.0, 4.0);
        b[d] = stream.uniform(-4.0, 4.0);
      }
      if (kernels::descent_gap(vg, h.L, h.alpha, a, b) < tol) ++violations;
      if (land.inf_attained() &&
          kernels::grad_bound_gap(vg, h.L, h.alpha, land.inf_value(), a) < tol) {
        ++violations;
      }
    }
  }

  for (int i = 0; i < 20000; ++i) {
    const double y = stream.uniform(1e-6, 10.0);
    const double x = stream.uniform01() * y;
    const double sigma = stream.uniform(1e-3, 1.0 - 1e-3);
    if (kernels::concave_gap(x, y, sigma) < tol) ++violations;
    if (x > 0.0 && kernels::log_concave_gap(x, y) < tol) ++violations;
  }

  const Schedule harmonic = Schedule::poly(1.0, 0.0, 1.0);
  const double a_series = kernels::gamma_series(harmonic, 2.0, 1.0, 100000);
  const bool series_ok = a_series >= 0.99 && a_series <= 1.01;

  int crossing_mismatches = 0;
  for (int rep = 0; rep < 1000; ++rep) {
    const auto len = static_cast<std::size_t>(2 + stream.next_u64() % 40);
    std::vector<double> u(len);
    for (double& v : u) v = stream.uniform01();
    const auto got = kernels::extract_crossings(u, 0.3, 0.8);
    const auto want = reference_crossings(u, 0.3, 0.8);
    if (got.size() != want.size()) {
      ++crossing_mismatches;
      continue;
    }
    for (std::size_t k = 0; k < got.size(); ++k) {
      if (got[k].chi != want[k].chi || got[k].psi != want[k].psi) {
        ++crossing_mismatches;
        break;
      }
    }
  }

  ojson out;
  out["inequality_violations"] = violations;
  out["gamma_series_value"] = a_series;
  out["gamma_series_ok"] = series_ok;
  out["crossing_mismatches"] = crossing_mismatches;
  const bool ok = violations == 0 && series_ok && crossing_mismatches == 0;
  out["ok"] = ok;
  std::cout << out.dump(2) << "\n";
  return ok ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sgdlab: convergence laboratory for biased stochastic gradient descent"};
  app.require_subcommand(1);

  std::string config_path, out_dir, csv_path;
  int jobs = 0;
  std::uint64_t seed_value = 0;

  CLI::App* run = app.add_subcommand("run", "Run an experiment config and emit series + report");
  run->add_option("--config", config_path, "Experiment config (JSON)")->required();
  run->add_option("--out", out_dir, "Output directory")->required();
  run->add_option("--jobs", jobs, "Worker threads (default: machine parallelism)");
  CLI::Option* seed_opt = run->add_option("--seed", seed_value, "Override the base seed");

  std::string rates_out;
  CLI::App* rates = app.add_subcommand("rates", "Re-analyze an existing series.csv");
  rates->add_option("--config", config_path, "Experiment config (JSON)")->required();
  rates->add_option("--csv", csv_path, "series.csv produced by a run")->required();
  rates->add_option("--out", rates_out, "Optional directory for report.json");

  BudgetArgs ba;
  CLI::App* budget = app.add_subcommand("budget", "Iteration budget for a target accuracy");
  budget->add_option("--eps", ba.eps, "Target accuracy")->required();
  budget->add_option("--delta", ba.delta, "Failure probability");
  budget->add_option("--alpha", ba.alpha, "Gradient Holder exponent");
  budget->add_option("--beta", ba.beta, "Lojasiewicz exponent");
  budget->add_option("--rho", ba.rho, "Step-sum growth exponent");
  budget->add_option("--sigma", ba.sigma, "Averaging exponent (iterate budgets)");
  budget->add_option("--family", ba.family, "Schedule family (poly|polylog|logpower)");
  budget->add_option("--s", ba.s, "Schedule decay exponent");
  budget->add_option("--gamma0", ba.gamma0, "Initial step size");
  budget->add_option("--c", ba.c, "Schedule index shift");
  budget->add_option("--cprime", ba.cprime, "Schedule log shift");
  budget->add_option("--sched-alpha", ba.sched_alpha, "Schedule family exponent (logpower)");
  budget->add_option("--regime", ba.regime, "local_a|local_b|unified|global")->required();
  budget->add_option("--quantity", ba.quantity, "min_fgap|fgap|iterate_gap");

  AuditArgs aa;
  CLI::App* audit = app.add_subcommand("audit", "Estimate landscape/oracle constants");
  audit->add_option("--landscape", aa.landscape, "Catalog landscape name")->required();
  audit->add_option("--param", aa.params, "Landscape parameter key=value (repeatable)");
  audit->add_option("--oracle", aa.oracle, "Oracle kind for the moment check");
  audit->add_option("--bias-scale", aa.bias_scale, "Oracle bias scale");
  audit->add_option("--noise", aa.noise, "Oracle noise level");
  audit->add_option("--seed", aa.seed, "Sampling seed");
  audit->add_option("--box", aa.box, "Half-width of the sampling box");
  audit->add_option("--radius", aa.radius, "Ball radius for the exponent fit");
  audit->add_option("--pairs", aa.pairs, "Sample pairs for the smoothness fit");
  audit->add_option("--points", aa.points, "Sample points for the exponent fit");
  audit->add_option("--draws", aa.draws, "Oracle draws per point");

  CLI::App* selftest = app.add_subcommand("kernels-selftest", "Randomized kernel smoke test");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (run->parsed()) {
      std::optional<std::uint64_t> seed;
      if (seed_opt->count() > 0) seed = seed_value;
      return cmd_run(config_path, out_dir, jobs, seed);
    }
    if (rates->parsed()) return cmd_rates(config_path, csv_path, rates_out);
    if (budget->parsed()) return cmd_budget(ba);
    if (audit->parsed()) return cmd_audit(aa);
    if (selftest->parsed()) return cmd_kernels_selftest();
  } catch (const sgdlab::DivergenceError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 4;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
  return 1;
}

#include "sgdlab/experiment.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <sstream>

#include "sgdlab/errors.hpp"
#include "sgdlab/rng.hpp"

namespace sgdlab {

namespace {

using nlohmann::json;
using ojson = nlohmann::ordered_json;

constexpr const char* kVersion = "1.0.0";
constexpr std::int64_t kDefaultCeiling = 1000000000;  // total steps across replicates

int line_of_byte(const std::string& text, std::size_t byte) {
  int line = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') ++line;
  }
  return line;
}

void check_keys(const json& obj, std::initializer_list<const char*> allowed,
                const std::string& where) {
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* key : allowed) {
      if (item.key() == key) {
        known = true;
        break;
      }
    }
    if (!known) {
      throw ValidationError("config: unknown key '" + item.key() + "' in " + where);
    }
  }
}

const json& need(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw ValidationError("config: missing key '" + std::string(key) + "' in " + where);
  }
  return *it;
}

double as_num(const json& v, const std::string& field) {
  if (!v.is_number()) throw ValidationError("config: '" + field + "' must be a number");
  return v.get<double>();
}

double opt_num(const json& obj, const char* key, double fallback, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return fallback;
  return as_num(*it, where + "." + key);
}

std::string as_str(const json& v, const std::string& field) {
  if (!v.is_string()) throw ValidationError("config: '" + field + "' must be a string");
  return v.get<std::string>();
}

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

RateCheckSpec parse_rate_check(const json& obj, std::size_t index) {
  const std::string where = "rate_checks[" + std::to_string(index) + "]";
  if (!obj.is_object()) throw ValidationError("config: " + where + " must be an object");
  check_keys(obj,
             {"quantity", "regime", "delta", "beta", "zeta", "kappa", "rho", "sigma",
              "tolerance", "window_decades"},
             where);
  RateCheckSpec spec;
  try {
    spec.quantity = quantity_from_name(as_str(need(obj, "quantity", where), where + ".quantity"));
    spec.regime = regime_from_name(as_str(need(obj, "regime", where), where + ".regime"));
  } catch (const CatalogError& err) {
    throw ValidationError("config: " + where + ": " + err.what());
  }
  spec.delta = opt_num(obj, "delta", spec.delta, where);
  spec.beta = opt_num(obj, "beta", kNaN, where);
  spec.zeta = opt_num(obj, "zeta", kNaN, where);
  spec.kappa = opt_num(obj, "kappa", kNaN, where);
  spec.rho = opt_num(obj, "rho", kNaN, where);
  spec.sigma = opt_num(obj, "sigma", kNaN, where);
  spec.tolerance = opt_num(obj, "tolerance", spec.tolerance, where);
  spec.window_decades = opt_num(obj, "window_decades", spec.window_decades, where);
  if (!(spec.delta > 0.0 && spec.delta < 1.0)) {
    throw ValidationError("config: " + where + ".delta must be in (0, 1)");
  }
  if (!(spec.tolerance >= 0.0)) {
    throw ValidationError("config: " + where + ".tolerance must be >= 0");
  }
  if (!(spec.window_decades > 0.0)) {
    throw ValidationError("config: " + where + ".window_decades must be > 0");
  }
  return spec;
}

ThetaInit parse_theta0(const json& v) {
  if (v.is_array()) {
    std::vector<double> point;
    for (const auto& x : v) point.push_back(as_num(x, "theta0[]"));
    if (point.empty()) throw ValidationError("config: 'theta0' must be nonempty");
    return point;
  }
  if (v.is_object()) {
    check_keys(v, {"center", "stddev"}, "theta0");
    const json& center = need(v, "center", "theta0");
    if (!center.is_array() || center.empty()) {
      throw ValidationError("config: 'theta0.center' must be a nonempty array");
    }
    GaussianBall ball;
    for (const auto& x : center) ball.center.push_back(as_num(x, "theta0.center[]"));
    ball.stddev = as_num(need(v, "stddev", "theta0"), "theta0.stddev");
    if (!(ball.stddev >= 0.0)) throw ValidationError("config: 'theta0.stddev' must be >= 0");
    return ball;
  }
  throw ValidationError("config: 'theta0' must be an array or {center, stddev} object");
}

// Heap storage keeps the oracle's landscape reference valid when the bundle
// is returned by value.
struct BuiltObjects {
  std::unique_ptr<Landscape> landscape;
  std::unique_ptr<Schedule> schedule;
  std::unique_ptr<Oracle> oracle;
};

// Resolves catalog references; throws ValidationError on bad references and
// AssumptionError when the schedule fails the step-size assumptions for the
// landscape's smoothness exponent (unless overridden).
BuiltObjects build_objects(const ExperimentConfig& cfg) {
  try {
    BuiltObjects out;
    out.landscape =
        std::make_unique<Landscape>(catalog(cfg.landscape_name, cfg.landscape_params));
    out.schedule = std::make_unique<Schedule>(cfg.schedule_family, cfg.gamma0, cfg.shift_c,
                                              cfg.shift_cprime, cfg.s, cfg.schedule_alpha);
    out.oracle = std::make_unique<Oracle>(*out.landscape, cfg.oracle_kind, cfg.bias_scale,
                                          cfg.noise_level);
    const double alpha = out.landscape->holder().alpha;
    // Any positive rho works here; only the rho-independent fields are gated.
    const ValidityReport rep = validate(*out.schedule, alpha, std::max(2.0, 2.0 / alpha));
    if (!(rep.h3_ok && rep.h6ii_ok) && !cfg.override_assumptions) {
      std::string msg = "config: schedule fails the step-size assumptions for alpha = " +
                        std::to_string(alpha);
      for (const auto& m : rep.messages) msg += "; " + m;
      msg += " (set override_assumptions to run anyway)";
      throw AssumptionError(msg);
    }
    return out;
  } catch (const CatalogError& err) {
    throw ValidationError(std::string("config: ") + err.what());
  } catch (const InvalidParamError& err) {
    throw ValidationError(std::string("config: ") + err.what());
  }
}

ojson serialize_config(const ExperimentConfig& cfg) {
  ojson root;
  root["landscape"] = {{"name", cfg.landscape_name}, {"params", cfg.landscape_params}};
  root["oracle"] = {{"kind", oracle_kind_name(cfg.oracle_kind)},
                    {"bias_scale", cfg.bias_scale},
                    {"noise_level", cfg.noise_level}};
  ojson sched;
  sched["family"] = schedule_family_name(cfg.schedule_family);
  sched["gamma0"] = cfg.gamma0;
  sched["c"] = cfg.shift_c;
  sched["cprime"] = cfg.shift_cprime;
  sched["s"] = cfg.s;
  sched["alpha"] = cfg.schedule_alpha;
  root["schedule"] = sched;
  if (const auto* pt = std::get_if<std::vector<double>>(&cfg.theta0)) {
    root["theta0"] = *pt;
  } else {
    const auto& ball = std::get<GaussianBall>(cfg.theta0);
    root["theta0"] = {{"center", ball.center}, {"stddev", ball.stddev}};
  }
  root["n_steps"] = cfg.n_steps;
  root["replicates"] = cfg.replicates;
  root["base_seed"] = cfg.base_seed;
  root["record"] = {{"grid", cfg.grid == RecordGrid::All ? "all" : "log"},
                    {"points_per_decade", cfg.points_per_decade}};
  ojson checks = ojson::array();
  for (const RateCheckSpec& spec : cfg.rate_checks) {
    ojson c;
    c["quantity"] = quantity_name(spec.quantity);
    c["regime"] = regime_name(spec.regime);
    c["delta"] = spec.delta;
    auto set_opt = [&c](const char* key, double v) {
      if (std::isfinite(v)) c[key] = v;
    };
    set_opt("beta", spec.beta);
    set_opt("zeta", spec.zeta);
    set_opt("kappa", spec.kappa);
    set_opt("rho", spec.rho);
    set_opt("sigma", spec.sigma);
    c["tolerance"] = spec.tolerance;
    c["window_decades"] = spec.window_decades;
    checks.push_back(std::move(c));
  }
  root["rate_checks"] = std::move(checks);
  root["override_assumptions"] = cfg.override_assumptions;
  return root;
}

// nullopt means the quantity cannot be produced; the string says why.
using SeriesProvider = std::function<std::optional<std::vector<SeriesPoint>>(
    Quantity, double delta, std::string* why_not)>;

struct CheckTally {
  int pass = 0, fail = 0, inconclusive = 0;
};

ojson side_conditions_json(const PredictedRate& pred) {
  ojson arr = ojson::array();
  for (const SideCondition& cond : pred.side_conditions) {
    arr.push_back({{"description", cond.description}, {"satisfied", cond.satisfied}});
  }
  return arr;
}

ojson run_checks(const std::vector<RateCheckSpec>& checks, const Schedule& sch,
                 const Landscape& land, double oracle_kappa, std::int64_t last_n,
                 const SeriesProvider& provider, CheckTally* tally) {
  ojson out = ojson::array();
  for (const RateCheckSpec& spec : checks) {
    ojson entry;
    entry["quantity"] = quantity_name(spec.quantity);
    entry["regime"] = regime_name(spec.regime);
    entry["delta"] = spec.delta;
    entry["tolerance"] = spec.tolerance;
    std::string verdict = "inconclusive";
    std::string message;

    // Fill defaults from the landscape certificate and oracle constants.
    double beta = spec.beta, zeta = spec.zeta, kappa = spec.kappa;
    if (!land.certs().empty()) {
      if (std::isnan(beta)) beta = land.certs().front().beta;
      if (std::isnan(zeta)) zeta = land.certs().front().zeta;
    }
    if (std::isnan(kappa)) kappa = oracle_kappa;

    std::optional<PredictedRate> pred;
    try {
      switch (spec.quantity) {
        case Quantity::FGap:
          if (std::isnan(beta) || std::isnan(zeta) || std::isnan(spec.rho)) {
            message = "missing beta/zeta/rho and no landscape certificate to fall back on";
          } else {
            pred = predict_fvalue_rate(land.holder().alpha, beta, zeta, kappa, sch, spec.rho,
                                       spec.regime, land.holder().L);
          }
          break;
        case Quantity::MinFGap:
          if (std::isnan(beta)) {
            message = "missing beta and no landscape certificate to fall back on";
          } else {
            pred = predict_min_fgap_rate(beta, spec.regime, sch);
          }
          break;
        case Quantity::MinGradSq:
          pred = predict_min_gradsq_rate(sch);
          break;
        case Quantity::IterateGap:
          if (std::isnan(beta) || std::isnan(zeta) || std::isnan(spec.rho)) {
            message = "missing beta/zeta/rho and no landscape certificate to fall back on";
          } else {
            pred = predict_iterate_rate(land.holder().alpha, beta, zeta, kappa, sch, spec.rho,
                                        spec.sigma, spec.regime, land.holder().L);
          }
          break;
      }
    } catch (const InvalidParamError& err) {
      message = err.what();
    }

    if (pred) {
      ojson pj;
      pj["base"] = rate_base_name(pred->base);
      pj["exponent"] = pred->exponent;
      pj["valid"] = pred->valid;
      if (!std::isnan(pred->sigma_min)) pj["sigma_min"] = pred->sigma_min;
      pj["side_conditions"] = side_conditions_json(*pred);
      entry["predicted"] = std::move(pj);
    }

    if (pred && spec.quantity == Quantity::IterateGap) {
      // The averaged iterate of the theory is not recorded; raw-iterate
      // distances decay differently, so no verdict is issued.
      message = "averaged-iterate series is not recorded; prediction reported without a fit";
      entry["verdict"] = "inconclusive";
      entry["message"] = message;
      ++tally->inconclusive;
      out.push_back(std::move(entry));
      continue;
    }

    if (pred) {
      std::optional<PredictedRate> pred_n;
      try {
        pred_n = rate_over_n(*pred, sch);
      } catch (const DomainError& err) {
        message = err.what();
      }
      if (pred_n) {
        entry["predicted"]["base_over_n"] = rate_base_name(pred_n->base);
        entry["predicted"]["exponent_over_n"] = pred_n->exponent;
        std::string why;
        auto series = provider(spec.quantity, spec.delta, &why);
        if (!series) {
          message = why;
        } else {
          const std::int64_t n_hi = last_n;
          const auto lo_real =
              static_cast<double>(n_hi) / std::pow(10.0, spec.window_decades);
          const std::int64_t n_lo = std::max<std::int64_t>(1, std::llround(lo_real));
          try {
            const RateFit fit = fit_decay(*series, n_lo, n_hi, pred_n->base, sch);
            entry["fitted"] = {{"slope", fit.slope},
                               {"intercept", fit.intercept},
                               {"n_lo", fit.n_lo},
                               {"n_hi", fit.n_hi},
                               {"rms_residual", fit.rms_residual},
                               {"n_points", fit.n_points},
                               {"n_clipped", fit.n_clipped}};
            if (!pred_n->valid) {
              message = "theorem hypotheses unsatisfied; no verdict issued";
            } else {
              const bool ok = fit.slope <= -pred_n->exponent + spec.tolerance;
              verdict = ok ? "pass" : "fail";
            }
          } catch (const InsufficientDataError& err) {
            message = err.what();
          }
        }
      }
    }

    entry["verdict"] = verdict;
    if (!message.empty()) entry["message"] = message;
    if (verdict == "pass") ++tally->pass;
    else if (verdict == "fail") ++tally->fail;
    else ++tally->inconclusive;
    out.push_back(std::move(entry));
  }
  return out;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ValidationError("cannot open " + path.string() + " for writing");
  os << text;
}

ojson version_block() {
  return ojson{{"sgdlab", kVersion},
               {"compiler", __VERSION__},
               {"json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                            std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                            std::to_string(NLOHMANN_JSON_VERSION_PATCH)}};
}

}  // namespace

std::int64_t compute_ceiling() {
  const char* env = std::getenv("SGDLAB_COMPUTE_CEILING");
  if (env == nullptr || *env == '\0') return kDefaultCeiling;
  char* end = nullptr;
  const double v = std::strtod(env, &end);
  if (end == env || *end != '\0' || !(v >= 1.0)) {
    throw ValidationError("SGDLAB_COMPUTE_CEILING must be a number >= 1");
  }
  return static_cast<std::int64_t>(std::min(v, 9.0e18));
}

ExperimentConfig parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& err) {
    throw ParseError("config: line " + std::to_string(line_of_byte(text, err.byte)) + ": " +
                     err.what());
  }
  if (!root.is_object()) throw ValidationError("config: top level must be an object");
  check_keys(root,
             {"landscape", "oracle", "schedule", "theta0", "n_steps", "replicates",
              "base_seed", "record", "rate_checks", "override_assumptions"},
             "the top level");

  ExperimentConfig cfg;

  const json& land = need(root, "landscape", "the top level");
  if (!land.is_object()) throw ValidationError("config: 'landscape' must be an object");
  check_keys(land, {"name", "params"}, "landscape");
  cfg.landscape_name = as_str(need(land, "name", "landscape"), "landscape.name");
  if (auto it = land.find("params"); it != land.end()) {
    if (!it->is_object()) throw ValidationError("config: 'landscape.params' must be an object");
    for (const auto& item : it->items()) {
      cfg.landscape_params[item.key()] = as_num(item.value(), "landscape.params." + item.key());
    }
  }

  const json& orc = need(root, "oracle", "the top level");
  if (!orc.is_object()) throw ValidationError("config: 'oracle' must be an object");
  check_keys(orc, {"kind", "bias_scale", "noise_level"}, "oracle");
  try {
    cfg.oracle_kind = oracle_kind_from_name(as_str(need(orc, "kind", "oracle"), "oracle.kind"));
  } catch (const CatalogError& err) {
    throw ValidationError(std::string("config: ") + err.what());
  }
  cfg.bias_scale = opt_num(orc, "bias_scale", cfg.bias_scale, "oracle");
  cfg.noise_level = opt_num(orc, "noise_level", cfg.noise_level, "oracle");

  const json& sched = need(root, "schedule", "the top level");
  if (!sched.is_object()) throw ValidationError("config: 'schedule' must be an object");
  check_keys(sched, {"family", "gamma0", "c", "cprime", "s", "alpha"}, "schedule");
  try {
    cfg.schedule_family =
        schedule_family_from_name(as_str(need(sched, "family", "schedule"), "schedule.family"));
  } catch (const CatalogError& err) {
    throw ValidationError(std::string("config: ") + err.what());
  }
  cfg.gamma0 = as_num(need(sched, "gamma0", "schedule"), "schedule.gamma0");
  cfg.shift_c = opt_num(sched, "c", 0.0, "schedule");
  cfg.shift_cprime = opt_num(sched, "cprime", 0.0, "schedule");
  cfg.s = as_num(need(sched, "s", "schedule"), "schedule.s");
  cfg.schedule_alpha = opt_num(sched, "alpha", 1.0, "schedule");

  cfg.theta0 = parse_theta0(need(root, "theta0", "the top level"));

  const json& n_steps = need(root, "n_steps", "the top level");
  if (!n_steps.is_number_integer() || n_steps.get<std::int64_t>() < 1) {
    throw ValidationError("config: 'n_steps' must be a positive integer");
  }
  cfg.n_steps = n_steps.get<std::int64_t>();

  const json& reps = need(root, "replicates", "the top level");
  if (!reps.is_number_integer() || reps.get<std::int64_t>() < 1 ||
      reps.get<std::int64_t>() > 1000000) {
    throw ValidationError("config: 'replicates' must be a positive integer (at most 1e6)");
  }
  cfg.replicates = static_cast<int>(reps.get<std::int64_t>());

  const json& seed = need(root, "base_seed", "the top level");
  if (!seed.is_number_integer()) {
    throw ValidationError("config: 'base_seed' must be an integer");
  }
  cfg.base_seed = seed.is_number_unsigned() ? seed.get<std::uint64_t>()
                                            : static_cast<std::uint64_t>(seed.get<std::int64_t>());

  if (auto it = root.find("record"); it != root.end()) {
    if (!it->is_object()) throw ValidationError("config: 'record' must be an object");
    check_keys(*it, {"grid", "points_per_decade"}, "record");
    const std::string grid = as_str(need(*it, "grid", "record"), "record.grid");
    if (grid == "all") {
      cfg.grid = RecordGrid::All;
    } else if (grid == "log") {
      cfg.grid = RecordGrid::LogSpaced;
    } else {
      throw ValidationError("config: 'record.grid' must be \"log\" or \"all\"");
    }
    const double ppd = opt_num(*it, "points_per_decade", 32.0, "record");
    if (!(ppd >= 1.0 && ppd <= 100000.0) || ppd != std::floor(ppd)) {
      throw ValidationError("config: 'record.points_per_decade' must be a positive integer");
    }
    cfg.points_per_decade = static_cast<int>(ppd);
  }

  if (auto it = root.find("rate_checks"); it != root.end()) {
    if (!it->is_array()) throw ValidationError("config: 'rate_checks' must be an array");
    for (std::size_t i = 0; i < it->size(); ++i) {
      cfg.rate_checks.push_back(parse_rate_check((*it)[i], i));
    }
  }

  if (auto it = root.find("override_assumptions"); it != root.end()) {
    if (!it->is_boolean()) {
      throw ValidationError("config: 'override_assumptions' must be a boolean");
    }
    cfg.override_assumptions = it->get<bool>();
  }

  // Resolve references and gate the assumptions now so a bad config fails
  // before any compute is spent.
  (void)build_objects(cfg);

  const std::int64_t ceiling = compute_ceiling();
  if (cfg.n_steps > ceiling / cfg.replicates) {
    throw ValidationError(
        "config: n_steps * replicates exceeds the compute ceiling of " +
        std::to_string(ceiling) + " total steps (set SGDLAB_COMPUTE_CEILING to raise it)");
  }
  return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ParseError("config: cannot open '" + path + "'");
  std::ostringstream ss;
  ss << is.rdbuf();
  return parse_config(ss.str());
}

ExperimentOutcome run_experiment(const ExperimentConfig& cfg_in, const std::string& out_dir,
                                 int jobs, std::optional<std::uint64_t> seed_override) {
  ExperimentConfig cfg = cfg_in;
  if (seed_override) cfg.base_seed = *seed_override;
  const auto t0 = std::chrono::steady_clock::now();

  BuiltObjects objs = build_objects(cfg);
  std::filesystem::create_directories(out_dir);
  const std::filesystem::path dir(out_dir);

  RunConfig rc;
  rc.landscape = objs.landscape.get();
  rc.oracle = objs.oracle.get();
  rc.schedule = objs.schedule.get();
  rc.theta0 = cfg.theta0;
  rc.n_steps = cfg.n_steps;
  rc.seed = cfg.base_seed;
  rc.grid = cfg.grid;
  rc.points_per_decade = cfg.points_per_decade;

  ojson manifest;
  manifest["config"] = serialize_config(cfg);
  manifest["effective_base_seed"] = cfg.base_seed;
  manifest["versions"] = version_block();
  manifest["note"] =
      "series.csv is a pure function of the config block (replicate i is seeded by "
      "base_seed ^ splitmix64(i + 1); the jobs count does not affect results)";

  ojson report;
  ExperimentOutcome outcome;

  try {
    Ensemble ens = replicate(rc, cfg.replicates, jobs);

    std::ostringstream csv;
    write_csv(csv, ens);
    write_file(dir / "series.csv", csv.str());

    ojson seeds = ojson::array();
    for (const Trajectory& traj : ens.replicates) seeds.push_back(traj.seed);
    manifest["replicate_seeds"] = std::move(seeds);
    manifest["files"] = {"series.csv", "report.json"};

    SeriesProvider provider = [&ens](Quantity q, double delta,
                                     std::string* why) -> std::optional<std::vector<SeriesPoint>> {
      try {
        if (q == Quantity::MinGradSq) return mean_series(ens, q);
        return quantile_series(ens, delta, q);
      } catch (const DomainError& err) {
        *why = err.what();
        return std::nullopt;
      }
    };

    CheckTally tally;
    report["checks"] = run_checks(cfg.rate_checks, *objs.schedule, *objs.landscape,
                                  objs.oracle->constants().kappa, cfg.n_steps, provider, &tally);
    const int exit_code = (tally.fail > 0) ? 2 : (tally.inconclusive > 0 ? 3 : 0);
    report["summary"] = {{"pass", tally.pass},
                         {"fail", tally.fail},
                         {"inconclusive", tally.inconclusive},
                         {"exit_code", exit_code}};
    outcome.exit_code = exit_code;
  } catch (const DivergenceError& err) {
    report["divergence"] = {{"message", err.what()},
                            {"step", err.step},
                            {"replicate", err.replicate}};
    report["summary"] = {{"pass", 0}, {"fail", 0}, {"inconclusive", 0}, {"exit_code", 4}};
    manifest["files"] = {"report.json"};
    outcome.exit_code = 4;
  }

  const auto t1 = std::chrono::steady_clock::now();
  manifest["wall_time_seconds"] =
      std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count() / 1000.0;

  outcome.report_json = report.dump(2) + "\n";
  write_file(dir / "report.json", outcome.report_json);
  write_file(dir / "manifest.json", manifest.dump(2) + "\n");
  return outcome;
}

namespace {

struct CsvSeries {
  // Column series per replicate, all on the shared record grid.
  std::vector<std::int64_t> grid;
  std::vector<std::vector<double>> f_gap, min_f_gap, min_gradsq;  // [rep][idx]
};

CsvSeries read_csv_series(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ValidationError("csv: cannot open '" + path + "'");
  std::string line;
  if (!std::getline(is, line)) throw ValidationError("csv: empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "n,rep,F_gap,grad_norm,theta_norm,gamma,min_F_gap,min_gradsq,M_norm") {
    throw ValidationError("csv: unexpected header '" + line + "'");
  }
  CsvSeries out;
  std::size_t line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    double fields[9];
    const char* p = line.c_str();
    for (int f = 0; f < 9; ++f) {
      char* end = nullptr;
      fields[f] = std::strtod(p, &end);
      if (end == p) {
        throw ValidationError("csv: malformed row at line " + std::to_string(line_no));
      }
      p = end;
      if (f < 8) {
        if (*p != ',') {
          throw ValidationError("csv: malformed row at line " + std::to_string(line_no));
        }
        ++p;
      }
    }
    const auto rep = static_cast<std::size_t>(fields[1]);
    if (rep >= out.f_gap.size()) {
      out.f_gap.resize(rep + 1);
      out.min_f_gap.resize(rep + 1);
      out.min_gradsq.resize(rep + 1);
    }
    if (rep == 0) out.grid.push_back(static_cast<std::int64_t>(fields[0]));
    out.f_gap[rep].push_back(fields[2]);
    out.min_f_gap[rep].push_back(fields[6]);
    out.min_gradsq[rep].push_back(fields[7]);
  }
  if (out.grid.empty()) throw ValidationError("csv: no data rows");
  for (const auto& v : out.f_gap) {
    if (v.size() != out.grid.size()) {
      throw ValidationError("csv: replicates disagree on the record grid");
    }
  }
  return out;
}

}  // namespace

ExperimentOutcome analyze_csv(const ExperimentConfig& cfg, const std::string& csv_path,
                              const std::string& out_dir) {
  BuiltObjects objs = build_objects(cfg);
  const CsvSeries series = read_csv_series(csv_path);
  const std::size_t reps = series.f_gap.size();

  auto column = [&](Quantity q) -> const std::vector<std::vector<double>>* {
    switch (q) {
      case Quantity::FGap: return &series.f_gap;
      case Quantity::MinFGap: return &series.min_f_gap;
      case Quantity::MinGradSq: return &series.min_gradsq;
      default: return nullptr;
    }
  };

  SeriesProvider provider = [&](Quantity q, double delta,
                                std::string* why) -> std::optional<std::vector<SeriesPoint>> {
    const auto* col = column(q);
    if (col == nullptr) {
      *why = "quantity not reconstructible from series.csv";
      return std::nullopt;
    }
    std::vector<SeriesPoint> out(series.grid.size());
    std::vector<double> values(reps);
    for (std::size_t i = 0; i < series.grid.size(); ++i) {
      for (std::size_t r = 0; r < reps; ++r) values[r] = (*col)[r][i];
      double v;
      if (q == Quantity::MinGradSq) {
        v = 0.0;
        for (double x : values) v += x;
        v /= static_cast<double>(reps);
      } else {
        std::sort(values.begin(), values.end());
        const double raw = std::ceil((1.0 - delta) * static_cast<double>(reps));
        const auto idx = static_cast<std::size_t>(std::max(1.0, raw));
        v = values[std::min(idx, reps) - 1];
      }
      out[i] = {series.grid[i], v};
    }
    return out;
  };

  CheckTally tally;
  ojson report;
  report["checks"] = run_checks(cfg.rate_checks, *objs.schedule, *objs.landscape,
                                objs.oracle->constants().kappa, series.grid.back(), provider,
                                &tally);
  const int exit_code = (tally.fail > 0) ? 2 : (tally.inconclusive > 0 ? 3 : 0);
  report["summary"] = {{"pass", tally.pass},
                       {"fail", tally.fail},
                       {"inconclusive", tally.inconclusive},
                       {"exit_code", exit_code}};

  ExperimentOutcome outcome;
  outcome.exit_code = exit_code;
  outcome.report_json = report.dump(2) + "\n";
  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    write_file(std::filesystem::path(out_dir) / "report.json", outcome.report_json);
  }
  return outcome;
}

}  // namespace sgdlab

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "sgdlab/errors.hpp"
#include "sgdlab/rates.hpp"

using namespace sgdlab;

namespace {

bool all_satisfied(const PredictedRate& p) {
  for (const auto& c : p.side_conditions) {
    if (!c.satisfied) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("global small-beta f-gap rate tracks gamma_n^alpha") {
  const Schedule sch = Schedule::poly(1.0, 0.0, 1.0);
  const PredictedRate p =
      predict_fvalue_rate(1.0, 0.5, std::sqrt(0.5), 1.0, sch, 2.0, Regime::Global, 1.0);
  CHECK(p.base == RateBase::GammaN);
  CHECK(p.exponent == doctest::Approx(1.0));
  CHECK(p.valid);
  CHECK(all_satisfied(p));

  // Rough gradient: exponent alpha.
  const Schedule mild = Schedule::poly(1.0, 0.0, 0.8);
  const PredictedRate q =
      predict_fvalue_rate(0.5, 0.4, 1.0, 1.0, mild, 3.0, Regime::Global, 2.0);
  CHECK(q.exponent == doctest::Approx(0.5));
  CHECK(q.base == RateBase::GammaN);

  // At s = 1 the plateau threshold bites: tiny kappa gamma* invalidates.
  const Schedule small = Schedule::poly(0.2, 0.0, 1.0);
  const PredictedRate r =
      predict_fvalue_rate(1.0, 0.5, std::sqrt(0.5), 1.0, small, 2.0, Regime::Global, 1.0);
  CHECK_FALSE(r.valid);
}

TEST_CASE("global large-beta f-gap rate over the step sum") {
  const Schedule sch = Schedule::poly(1.0, 0.0, 0.75);
  const PredictedRate p =
      predict_fvalue_rate(1.0, 0.75, 1.0, 1.0, sch, 3.0, Regime::Global, 1.0);
  CHECK(p.base == RateBase::SumGamma);
  CHECK(p.exponent == doctest::Approx(2.0).epsilon(1e-12));  // min(1/(2b-1), a rho - 1)
  CHECK(p.valid);
  const PredictedRate over_n = rate_over_n(p, sch);
  CHECK(over_n.base == RateBase::N);
  CHECK(over_n.exponent == doctest::Approx(0.5).epsilon(1e-12));

  // Continuity toward beta = 1/2: with s = 2 beta/(4 beta - 1) and the
  // matching rho, the n-exponent is 1/(4 beta - 1).
  const double beta = 0.5001;
  const double s = 2.0 * beta / (4.0 * beta - 1.0);
  const double rho = 1.0 / (2.0 * beta - 1.0) + 1.0;
  const Schedule tuned = Schedule::poly(1.0, 0.0, s);
  const PredictedRate c =
      predict_fvalue_rate(1.0, beta, 1.0, 1.0, tuned, rho, Regime::Global, 1.0);
  const PredictedRate cn = rate_over_n(c, tuned);
  CHECK(cn.exponent == doctest::Approx(1.0 / (4.0 * beta - 1.0)).epsilon(1e-9));
  CHECK(cn.exponent == doctest::Approx(0.999600159936).epsilon(1e-9));
}

TEST_CASE("beta floor for global certificates") {
  const Schedule sch = Schedule::poly(1.0, 0.0, 0.75);
  // beta below alpha/(1+alpha) cannot certify a global landscape.
  const PredictedRate p =
      predict_fvalue_rate(1.0, 0.3, 1.0, 1.0, sch, 2.0, Regime::Global, 1.0);
  CHECK_FALSE(p.valid);
  // Equality with alpha < 1 is excluded too.
  const PredictedRate q =
      predict_fvalue_rate(0.5, 0.5 / 1.5, 1.0, 1.0, sch, 2.5, Regime::Global, 1.0);
  CHECK_FALSE(q.valid);
}

TEST_CASE("local and unified f-gap rates") {
  const Schedule sch = Schedule::poly(1.0, 0.0, 1.0);
  const PredictedRate a =
      predict_fvalue_rate(1.0, 0.5, 0.5, 1.0, sch, 2.0, Regime::LocalA, 1.0);
  CHECK(a.base == RateBase::GammaN);
  CHECK(a.exponent == doctest::Approx(0.5));  // min(alpha, 1/2)
  CHECK(a.valid);                             // kappa gamma* = 1 > zeta^2 * 1 = 0.25

  // LocalA threshold scales with zeta^{1/beta}: a large zeta invalidates.
  // kappa gamma* = 1.3 clears the normalized threshold 1 but not zeta^2 = 1.44.
  const Schedule wide = Schedule::poly(1.3, 0.0, 1.0);
  const PredictedRate tight =
      predict_fvalue_rate(1.0, 0.5, 1.2, 1.0, wide, 2.0, Regime::LocalA, 1.0);
  CHECK_FALSE(tight.valid);
  // LocalB and Unified use the normalized threshold, so zeta drops out.
  const PredictedRate b =
      predict_fvalue_rate(1.0, 0.5, 1.2, 1.0, wide, 2.0, Regime::LocalB, 1.0);
  CHECK(b.valid);
  CHECK(b.exponent == doctest::Approx(0.5));
  const PredictedRate u =
      predict_fvalue_rate(1.0, 0.5, 1.2, 1.0, wide, 2.0, Regime::Unified, 1.0);
  CHECK(u.valid);
  // The threshold is strict: kappa gamma* exactly at the boundary fails.
  CHECK_FALSE(
      predict_fvalue_rate(1.0, 0.5, 1.2, 1.0, sch, 2.0, Regime::LocalB, 1.0).valid);

  // Large beta local: min(1/(2b-1), a rho - 1, (rho-1)/2).
  const Schedule slow = Schedule::poly(1.0, 0.0, 0.8);
  const PredictedRate big =
      predict_fvalue_rate(1.0, 0.75, 1.0, 1.0, slow, 4.0, Regime::LocalA, 1.0);
  CHECK(big.base == RateBase::SumGamma);
  CHECK(big.exponent == doctest::Approx(1.5));
}

TEST_CASE("running-minimum rates") {
  const Schedule sch = Schedule::poly(1.0, 0.0, 1.0);
  CHECK(predict_min_fgap_rate(0.75, Regime::LocalA, sch).exponent ==
        doctest::Approx(2.0 / 3.0));
  CHECK(predict_min_fgap_rate(0.4, Regime::LocalA, sch).exponent == doctest::Approx(1.0));
  CHECK(predict_min_fgap_rate(0.75, Regime::Global, sch).exponent ==
        doctest::Approx(2.0 / 3.0));
  CHECK(predict_min_fgap_rate(0.4, Regime::Global, sch).exponent == doctest::Approx(1.25));
  CHECK(predict_min_fgap_rate(0.5, Regime::Global, sch).base == RateBase::SumGamma);

  const PredictedRate g = predict_min_gradsq_rate(sch);
  CHECK(g.base == RateBase::SumGamma);
  CHECK(g.exponent == doctest::Approx(1.0));
  CHECK(g.valid);

  // Summable schedules void the statement.
  CHECK_FALSE(predict_min_gradsq_rate(Schedule::poly(1.0, 0.0, 1.5)).valid);
}

TEST_CASE("averaged-iterate rates match worked examples") {
  // Global, beta = 1/2, s = 0.9: sigma_min = 0.625, exponent 0.15 over n.
  const Schedule sch = Schedule::poly(1.0, 0.0, 0.9);
  const PredictedRate p = predict_iterate_rate(
      1.0, 0.5, 1.0, 1.0, sch, 4.0, std::numeric_limits<double>::quiet_NaN(), Regime::Global,
      1.0);
  CHECK(p.sigma_min == doctest::Approx(0.625).epsilon(1e-12));
  CHECK(p.base == RateBase::N);
  CHECK(p.exponent == doctest::Approx(0.15).epsilon(1e-12));
  CHECK(p.valid);

  // Requesting sigma below sigma_min invalidates the prediction.
  const PredictedRate low =
      predict_iterate_rate(1.0, 0.5, 1.0, 1.0, sch, 4.0, 0.5, Regime::Global, 1.0);
  CHECK_FALSE(low.valid);
  // A larger sigma trades rate for admissibility.
  const PredictedRate hi =
      predict_iterate_rate(1.0, 0.5, 1.0, 1.0, sch, 4.0, 0.8, Regime::Global, 1.0);
  CHECK(hi.valid);
  CHECK(hi.exponent == doctest::Approx(0.4 * 0.2).epsilon(1e-12));

  // Plateau schedule with beta > 1/2: log-rate (ln n)^{-r(1-sigma)}.
  const Schedule harmonic = Schedule::poly(1.0, 0.0, 1.0);
  const PredictedRate logp = predict_iterate_rate(
      1.0, 0.75, 1.0, 1.0, harmonic, 4.0, std::numeric_limits<double>::quiet_NaN(),
      Regime::Global, 1.0);
  CHECK(logp.base == RateBase::LogN);
  CHECK(logp.sigma_min == doctest::Approx(0.75).epsilon(1e-12));  // (1+r)/(2r), r = 2
  CHECK(logp.exponent == doctest::Approx(0.5).epsilon(1e-12));    // r (1 - sigma)

  // rho too small for the iterate theory.
  const PredictedRate shallow = predict_iterate_rate(
      1.0, 0.5, 1.0, 1.0, sch, 2.0, std::numeric_limits<double>::quiet_NaN(), Regime::Global,
      1.0);
  CHECK_FALSE(shallow.valid);
  // s below rho/(1+rho) leaves the admissible window.
  const Schedule fast = Schedule::poly(1.0, 0.0, 0.75);
  const PredictedRate outside = predict_iterate_rate(
      1.0, 0.5, 1.0, 1.0, fast, 4.0, std::numeric_limits<double>::quiet_NaN(), Regime::Global,
      1.0);
  CHECK_FALSE(outside.valid);
}

TEST_CASE("rate_over_n rewrites bases") {
  const Schedule s075 = Schedule::poly(1.0, 0.0, 0.75);
  PredictedRate p;
  p.base = RateBase::GammaN;
  p.exponent = 0.8;
  p.valid = true;
  const PredictedRate a = rate_over_n(p, s075);
  CHECK(a.base == RateBase::N);
  CHECK(a.exponent == doctest::Approx(0.6));

  p.base = RateBase::SumGamma;
  const PredictedRate b = rate_over_n(p, s075);
  CHECK(b.base == RateBase::N);
  CHECK(b.exponent == doctest::Approx(0.2));

  const Schedule s1 = Schedule::poly(1.0, 0.0, 1.0);
  const PredictedRate c = rate_over_n(p, s1);
  CHECK(c.base == RateBase::LogN);
  CHECK(c.exponent == doctest::Approx(0.8));

  CHECK_THROWS_AS(rate_over_n(p, Schedule::polylog(1.0, 0.0, 0.0, 1.0)), DomainError);
}

TEST_CASE("fit_decay recovers synthetic slopes") {
  std::vector<SeriesPoint> series;
  for (int k = 0; k < 64; ++k) {
    const auto n = static_cast<std::int64_t>(std::llround(std::pow(10.0, 1.0 + k * 0.05)));
    series.push_back({n, 3.0 * std::pow(static_cast<double>(n), -0.7)});
  }
  const Schedule sch = Schedule::poly(1.0, 0.0, 1.0);
  const RateFit fit = fit_decay(series, 10, 100000, RateBase::N, sch);
  CHECK(fit.slope == doctest::Approx(-0.7).epsilon(1e-10));
  CHECK(fit.intercept == doctest::Approx(std::log(3.0)).epsilon(1e-9));
  CHECK(fit.rms_residual < 1e-10);
  CHECK(fit.n_points >= 60);
  CHECK(fit.n_clipped == 0);

  // Oscillating multiplicative perturbation moves the slope only slightly.
  std::vector<SeriesPoint> wavy = series;
  for (auto& pt : wavy) {
    pt.value = std::pow(static_cast<double>(pt.n), -0.5) *
               (1.0 + 0.05 * std::sin(std::log(static_cast<double>(pt.n))));
  }
  const RateFit wfit = fit_decay(wavy, 10, 100000, RateBase::N, sch);
  CHECK(wfit.slope == doctest::Approx(-0.5).epsilon(0.05));

  // Base GammaN regresses on log gamma_n itself, which also decays, so a
  // gamma_n^e series fits slope +e in that base.
  const Schedule root = Schedule::poly(1.0, 0.0, 0.5);
  std::vector<SeriesPoint> gpow;
  for (const auto& pt : series) {
    gpow.push_back({pt.n, std::pow(root.gamma(pt.n), 1.3)});
  }
  const RateFit gfit = fit_decay(gpow, 10, 100000, RateBase::GammaN, root);
  CHECK(gfit.slope == doctest::Approx(1.3).epsilon(1e-10));

  // Clipping: zeros are removed and counted.
  std::vector<SeriesPoint> holed = series;
  holed[5].value = 0.0;
  holed[9].value = -1.0;
  const RateFit hfit = fit_decay(holed, 10, 100000, RateBase::N, sch);
  CHECK(hfit.n_clipped == 2);
  CHECK(hfit.slope == doctest::Approx(-0.7).epsilon(1e-6));

  // Too few points in the window.
  CHECK_THROWS_AS(fit_decay(series, 99000, 100000, RateBase::N, sch),
                  InsufficientDataError);
  // Window narrower than a decade.
  std::vector<SeriesPoint> narrow;
  for (int k = 0; k < 30; ++k) narrow.push_back({100 + k, 1.0 / (100.0 + k)});
  CHECK_THROWS_AS(fit_decay(narrow, 100, 129, RateBase::N, sch), InsufficientDataError);
}

TEST_CASE("ensemble quantiles use the nearest-rank convention") {
  Landscape land = catalog("quadratic");
  Oracle noisy(land, OracleKind::Unbiased, 1.0, 0.5);
  Schedule sch = Schedule::poly(1.0, 0.0, 1.0);
  RunConfig cfg;
  cfg.landscape = &land;
  cfg.oracle = &noisy;
  cfg.schedule = &sch;
  cfg.theta0 = std::vector<double>{3.0};
  cfg.n_steps = 200;
  cfg.seed = 11;
  cfg.grid = RecordGrid::All;
  const Ensemble ens = replicate(cfg, 8, 2);

  std::int64_t used = 0;
  const double q = hp_quantile(ens, 0.25, Quantity::FGap, 150, &used);
  CHECK(used == 150);
  std::vector<double> vals;
  for (const auto& t : ens.replicates) vals.push_back(t.records[149].f_gap);
  std::sort(vals.begin(), vals.end());
  CHECK(q == vals[5]);  // ceil(0.75 * 8) = 6th smallest

  const auto series = quantile_series(ens, 0.25, Quantity::FGap);
  REQUIRE(series.size() == 200);
  CHECK(series[149].value == q);
  CHECK(series[149].n == 150);

  const auto means = mean_series(ens, Quantity::MinGradSq);
  double acc = 0.0;
  for (const auto& t : ens.replicates) acc += t.running_min_gradsq[49];
  CHECK(means[49].value == doctest::Approx(acc / 8.0).epsilon(1e-15));

  // IterateGap distance uses the landscape's stationary points.
  const auto iter = quantile_series(ens, 0.25, Quantity::IterateGap);
  CHECK(iter[199].value >= 0.0);

  CHECK_THROWS_AS(hp_quantile(ens, 0.0, Quantity::FGap, 100), DomainError);
  CHECK_THROWS_AS(hp_quantile(ens, 1.0, Quantity::FGap, 100), DomainError);
}

TEST_CASE("budgets reproduce the closed-form examples") {
  const Schedule harmonic = Schedule::poly(1.0, 0.0, 1.0);
  BudgetParams p;
  p.alpha = 1.0;
  p.beta = 0.5;
  p.rho = 2.0;
  p.regime = Regime::Global;
  p.quantity = Quantity::MinFGap;
  const Budget b = budget(0.1, 0.25, p, harmonic);
  CHECK(b.n == 8104);
  CHECK_FALSE(b.saturated);
  CHECK(b.formula_tag.find("sum-inverse") != std::string::npos);

  // Last-iterate global small beta: gamma-inverse of eps^{1/alpha}.
  p.quantity = Quantity::FGap;
  CHECK(budget(0.01, 0.25, p, harmonic).n == 100);
  const Schedule root = Schedule::poly(1.0, 0.0, 0.5);
  p.rho = 1.0;
  CHECK(budget(0.01, 0.25, p, root).n == 10000);  // ceil((1/eps)^{1/s})
  p.rho = 2.0;

  // Local variant squares the target for beta <= 1/2 when alpha = 1.
  p.regime = Regime::LocalA;
  CHECK(budget(0.1, 0.25, p, harmonic).n ==
        harmonic.gamma_inverse(0.01));

  // Large beta falls back to the sum inverse with r.
  p.regime = Regime::Global;
  p.beta = 0.75;
  p.rho = 3.0;
  const Schedule s075 = Schedule::poly(1.0, 0.0, 0.75);
  const Budget big = budget(0.1, 0.25, p, s075);
  // r = 2: sum must reach eps^{-1/2} ~ 3.162; profile 4 n^{1/4} >= t.
  CHECK(big.n == s075.sigma_inverse(std::pow(0.1, -0.5)));

  // Monotone in eps.
  std::int64_t prev = 0;
  for (double eps : {0.5, 0.2, 0.1, 0.05, 0.02}) {
    const std::int64_t n = budget(eps, 0.25, p, s075).n;
    CHECK(n >= prev);
    prev = n;
  }

  // Gradient minima have no budget statement.
  p.quantity = Quantity::MinGradSq;
  CHECK_THROWS_AS(budget(0.1, 0.25, p, harmonic), UnsupportedRegimeError);

  // Validation.
  p.quantity = Quantity::MinFGap;
  CHECK_THROWS_AS(budget(0.0, 0.25, p, harmonic), InvalidParamError);
  CHECK_THROWS_AS(budget(0.1, 0.0, p, harmonic), InvalidParamError);
  CHECK_THROWS_AS(budget(-1.0, 0.25, p, harmonic), InvalidParamError);
}

TEST_CASE("iterate budgets: power form, exp form, saturation") {
  BudgetParams p;
  p.alpha = 1.0;
  p.beta = 0.5;
  p.rho = 4.0;
  p.regime = Regime::Global;
  p.quantity = Quantity::IterateGap;

  const Schedule s09 = Schedule::poly(1.0, 0.0, 0.9);
  const Budget a = budget(0.5, 0.25, p, s09);
  CHECK(a.n >= 1);
  CHECK_FALSE(a.saturated);
  // Tighter accuracy costs more.
  CHECK(budget(0.25, 0.25, p, s09).n > a.n);

  // Explicit sigma below the minimum is rejected.
  p.sigma = 0.5;
  CHECK_THROWS_AS(budget(0.5, 0.25, p, s09), UnsupportedRegimeError);
  p.sigma = std::numeric_limits<double>::quiet_NaN();

  // beta > 1/2 on the plateau: exponential form; small eps saturates.
  p.beta = 0.75;
  const Schedule harmonic = Schedule::poly(1.0, 0.0, 1.0);
  const Budget e = budget(0.9, 0.25, p, harmonic);
  CHECK(e.formula_tag.find("exp") != std::string::npos);
  const Budget sat = budget(1e-3, 0.25, p, harmonic);
  CHECK(sat.saturated);
  CHECK(sat.formula_tag.find("saturated") != std::string::npos);

  // Outside the (rho, s) window.
  const Schedule fast = Schedule::poly(1.0, 0.0, 0.7);
  CHECK_THROWS_AS(budget(0.5, 0.25, p, fast), UnsupportedRegimeError);
}

TEST_CASE("name maps round-trip") {
  for (Regime r : {Regime::LocalA, Regime::LocalB, Regime::Unified, Regime::Global}) {
    CHECK(regime_from_name(regime_name(r)) == r);
  }
  for (Quantity q :
       {Quantity::MinFGap, Quantity::FGap, Quantity::MinGradSq, Quantity::IterateGap}) {
    CHECK(quantity_from_name(quantity_name(q)) == q);
  }
  CHECK_THROWS_AS(regime_from_name("cosmic"), CatalogError);
  CHECK_THROWS_AS(quantity_from_name("entropy"), CatalogError);
  CHECK(rate_base_name(RateBase::GammaN) == "gamma_n");
  CHECK(rate_base_name(RateBase::LogN) == "log_n");
}

// Theory-side rate predictions (exponents, side conditions, iteration
// budgets) and the empirical side (slope fits, high-probability quantiles)
// used to confront them.  All theorem constants are unknown, so the
// confrontation is one-sided: fitted slope <= -(predicted exponent) + tol.
#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "sgdlab/engine.hpp"
#include "sgdlab/schedules.hpp"

namespace sgdlab {

enum class Regime {
  LocalA,   // local certificate with general zeta
  LocalB,   // local certificate normalized to zeta = 1
  Unified,  // high-probability exponent beta_delta
  Global    // global certificate
};

enum class Quantity { MinFGap, FGap, MinGradSq, IterateGap };

enum class RateBase { GammaN, SumGamma, N, LogN };

struct SideCondition {
  std::string description;
  bool satisfied = true;
};

struct PredictedRate {
  Regime regime = Regime::Global;
  Quantity quantity = Quantity::FGap;
  RateBase base = RateBase::N;
  double exponent = 0.0;
  std::vector<SideCondition> side_conditions;
  bool valid = false;
  // IterateGap only: minimal admissible averaging exponent sigma.
  double sigma_min = std::numeric_limits<double>::quiet_NaN();
};

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  std::int64_t n_lo = 0, n_hi = 0;
  double rms_residual = 0.0;
  int n_points = 0;
  int n_clipped = 0;  // values at or below 1e-300 removed
};

struct SeriesPoint {
  std::int64_t n = 0;
  double value = 0.0;
};

struct BudgetParams {
  double alpha = 1.0;
  double beta = 0.5;
  double rho = 2.0;
  Regime regime = Regime::Global;
  Quantity quantity = Quantity::MinFGap;
  // IterateGap only; NaN selects the minimal admissible sigma.
  double sigma = std::numeric_limits<double>::quiet_NaN();
};

struct Budget {
  double epsilon = 0.0;
  double delta = 0.0;
  Regime regime = Regime::Global;
  Quantity quantity = Quantity::MinFGap;
  std::int64_t n = 1;
  std::string formula_tag;
  bool saturated = false;  // true when the exact index exceeds the int64 range
};

// F(theta_n) - inf F rate for the last-iterate statements.  holder_L feeds
// the global small-beta threshold at s = 1 (which needs the gradient
// smoothness constant); pass NaN when unknown and the condition is reported
// unverifiable.
PredictedRate predict_fvalue_rate(double alpha, double beta, double zeta, double kappa,
                                  const Schedule& sch, double rho, Regime regime,
                                  double holder_L = std::numeric_limits<double>::quiet_NaN());

// inf_{k<=n} F(theta_k) - inf F over base SumGamma.
PredictedRate predict_min_fgap_rate(double beta, Regime regime, const Schedule& sch);

// inf_{k<=n} E||grad F(theta_k)||^2 = O(Sigma_n^{-1}).
PredictedRate predict_min_gradsq_rate(const Schedule& sch);

// Averaged-iterate distance rate; sigma = NaN selects the minimal
// admissible value, which is always reported in sigma_min.
PredictedRate predict_iterate_rate(double alpha, double beta, double zeta, double kappa,
                                   const Schedule& sch, double rho, double sigma, Regime regime,
                                   double holder_L = std::numeric_limits<double>::quiet_NaN());

// Rewrites a GammaN/SumGamma-based prediction over base N (or LogN when the
// sum grows logarithmically).  Poly schedules only.
PredictedRate rate_over_n(const PredictedRate& pred, const Schedule& sch);

// Least-squares slope of log(value) on log(base variable) inside the step
// window [n_lo, n_hi].  Requires >= 8 usable points spanning >= 1 decade of
// the base variable.
RateFit fit_decay(std::span<const SeriesPoint> series, std::int64_t n_lo, std::int64_t n_hi,
                  RateBase base, const Schedule& sch);

// Empirical (1-delta) quantile across replicates at the recorded step
// nearest to n (nearest-rank convention, index ceil((1-delta) R)).
double hp_quantile(const Ensemble& ens, double delta, Quantity quantity, std::int64_t n,
                   std::int64_t* used_n = nullptr);

// Quantile (or mean) of the quantity at every recorded step.
std::vector<SeriesPoint> quantile_series(const Ensemble& ens, double delta, Quantity quantity);
std::vector<SeriesPoint> mean_series(const Ensemble& ens, Quantity quantity);

// Iteration budget with proportionality constant fixed to 1.
Budget budget(double eps, double delta, const BudgetParams& params, const Schedule& sch);

Regime regime_from_name(const std::string& name);
std::string regime_name(Regime regime);
Quantity quantity_from_name(const std::string& name);
std::string quantity_name(Quantity quantity);
std::string rate_base_name(RateBase base);

}  // namespace sgdlab

#include "sgdlab/rates.hpp"

#include <algorithm>
#include <cmath>

#include "sgdlab/errors.hpp"

namespace sgdlab {

namespace {

constexpr std::int64_t kBudgetCap = std::int64_t{4} * 1000000000000000000;  // 4e18

void check_core_params(double alpha, double beta) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw InvalidParamError("rates: alpha must be in (0, 1]");
  if (!(beta > 0.0 && beta < 1.0)) throw InvalidParamError("rates: beta must be in (0, 1)");
}

bool is_local(Regime regime) {
  return regime == Regime::LocalA || regime == Regime::LocalB || regime == Regime::Unified;
}

void push(PredictedRate& pred, std::string text, bool ok) {
  pred.side_conditions.push_back({std::move(text), ok});
}

// Common hypotheses shared by the polynomial-schedule rate statements.
void push_schedule_conditions(PredictedRate& pred, const Schedule& sch, double alpha,
                              double rho, bool needs_poly) {
  const ValidityReport rep = validate(sch, alpha, rho);
  push(pred, "step sizes diverge in sum while their (1+alpha) powers sum", rep.h3_ok);
  push(pred, "rho admissible for the schedule family (rho <= sup rho)", rep.rho_admissible);
  push(pred, "rho > 1/alpha", rho > 1.0 / alpha);
  if (needs_poly) {
    push(pred, "step sizes are Theta(1/n^s) (poly family)",
         sch.family() == ScheduleFamily::Poly);
  }
}

// r = 1/(2 beta - 1) ^ (alpha rho - 1) [^ (rho-1)/2 for the local regimes].
double large_beta_r(double alpha, double beta, double rho, bool local) {
  double r = std::min(1.0 / (2.0 * beta - 1.0), alpha * rho - 1.0);
  if (local) r = std::min(r, (rho - 1.0) / 2.0);
  return r;
}

// Threshold kappa gamma* must clear at s = 1 for the global small-beta rate:
// zeta^{2 + lambda(1+alpha)/alpha} ((1+alpha) L^{1/alpha} / alpha)^lambda alpha,
// lambda = (1-2beta) / ((1+alpha) beta / alpha - 1) (zero at beta = 1/2).
double global_small_beta_threshold(double alpha, double beta, double zeta, double holder_L) {
  const double lambda =
      (beta == 0.5) ? 0.0 : (1.0 - 2.0 * beta) / ((1.0 + alpha) * beta / alpha - 1.0);
  if (lambda == 0.0) return zeta * zeta * alpha;
  const double growth = (1.0 + alpha) * std::pow(holder_L, 1.0 / alpha) / alpha;
  return std::pow(zeta, 2.0 + lambda * (1.0 + alpha) / alpha) * std::pow(growth, lambda) *
         alpha;
}

// Global certificates only exist for beta >= alpha/(1+alpha); the boundary
// value is excluded unless alpha = 1 (where it coincides with beta = 1/2).
void push_global_beta_window(PredictedRate& pred, double alpha, double beta) {
  const double floor_beta = alpha / (1.0 + alpha);
  push(pred, "beta above the global-certificate floor alpha/(1+alpha)", beta >= floor_beta);
  if (beta == floor_beta && alpha < 1.0) {
    push(pred, "beta equal to alpha/(1+alpha) with alpha < 1 is excluded", false);
  }
}

void finalize(PredictedRate& pred) {
  bool ok = pred.exponent > 0.0 && std::isfinite(pred.exponent);
  for (const auto& cond : pred.side_conditions) ok = ok && cond.satisfied;
  pred.valid = ok;
}

struct IterateCase {
  double sigma_min = std::numeric_limits<double>::quiet_NaN();
  double exponent_factor = std::numeric_limits<double>::quiet_NaN();  // multiplies (1 - sigma)
  RateBase base = RateBase::N;
  bool defined = false;
};

IterateCase iterate_case(double alpha, double beta, double rho, double s, Regime regime) {
  IterateCase out;
  const bool local = is_local(regime);
  const double two_s = 2.0 * s - 1.0;
  const double pow_s = (1.0 + alpha) * s - 1.0;
  if (!(two_s > 0.0) || !(pow_s > 0.0)) return out;  // outside the s window
  const double half_min = std::min(alpha, 0.5);
  if (beta <= 0.5) {
    double sig = std::max(1.0 / (2.0 * two_s), alpha * s / (2.0 * pow_s));
    if (local) {
      sig = std::max(sig, (1.0 - std::max(1.0 - alpha, 0.5) * s) / (2.0 * half_min * s));
    }
    out.sigma_min = sig;
    const double cap = local ? half_min * s : alpha * s;
    out.exponent_factor = std::min({cap, two_s / 2.0, pow_s});
    out.base = RateBase::N;
    out.defined = true;
    return out;
  }
  const double r = large_beta_r(alpha, beta, rho, local);
  if (!(r > 0.0)) return out;
  if (s == 1.0) {
    out.sigma_min = (1.0 + r) / (2.0 * r);
    out.exponent_factor = r;
    out.base = RateBase::LogN;
    out.defined = true;
    return out;
  }
  out.sigma_min = std::max({1.0 / (2.0 * two_s), alpha * s / (2.0 * pow_s),
                            (1.0 + r) / (2.0 * r)});
  out.exponent_factor = std::min({r * (1.0 - s), two_s / 2.0, pow_s});
  out.base = RateBase::N;
  out.defined = true;
  return out;
}

double checked_pow(double base, double exp) { return std::pow(base, exp); }

std::int64_t saturating_index(double x, bool* saturated) {
  if (!(x < static_cast<double>(kBudgetCap))) {
    *saturated = true;
    return kBudgetCap;
  }
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(x)));
}

std::int64_t inverse_or_saturate(const Schedule& sch, bool sum, double t, bool* saturated) {
  try {
    return sum ? sch.sigma_inverse(t) : sch.gamma_inverse(t);
  } catch (const DomainError&) {
    *saturated = true;
    return kBudgetCap;
  }
}

}  // namespace

PredictedRate predict_fvalue_rate(double alpha, double beta, double zeta, double kappa,
                                  const Schedule& sch, double rho, Regime regime,
                                  double holder_L) {
  check_core_params(alpha, beta);
  if (!(zeta > 0.0)) throw InvalidParamError("rates: zeta must be > 0");
  if (!(kappa > 0.0)) throw InvalidParamError("rates: kappa must be > 0");
  PredictedRate pred;
  pred.regime = regime;
  pred.quantity = Quantity::FGap;
  push_schedule_conditions(pred, sch, alpha, rho, /*needs_poly=*/true);
  const auto gamma_star = sch.gamma_star();
  const bool plateau = gamma_star.has_value();

  if (is_local(regime)) {
    if (beta <= 0.5) {
      pred.base = RateBase::GammaN;
      pred.exponent = std::min(alpha, 0.5);
      if (plateau) {
        const double hump = std::max(alpha, 0.5);
        const double threshold = (regime == Regime::LocalA)
                                     ? std::pow(zeta, 1.0 / beta) * hump
                                     : hump;
        push(pred,
             "kappa gamma* clears the plateau threshold " + std::to_string(threshold),
             kappa * *gamma_star > threshold);
      }
    } else {
      const double r = large_beta_r(alpha, beta, rho, /*local=*/true);
      pred.base = RateBase::SumGamma;
      pred.exponent = r;
      push(pred, "r = min(1/(2beta-1), alpha rho - 1, (rho-1)/2) positive", r > 0.0);
    }
  } else {
    push_global_beta_window(pred, alpha, beta);
    if (beta <= 0.5) {
      pred.base = RateBase::GammaN;
      pred.exponent = alpha;
      if (plateau) {
        if (beta < 0.5 && !std::isfinite(holder_L)) {
          push(pred,
               "plateau threshold needs the gradient smoothness constant L (not provided)",
               false);
        } else {
          const double threshold = global_small_beta_threshold(alpha, beta, zeta, holder_L);
          push(pred,
               "kappa gamma* clears the plateau threshold " + std::to_string(threshold),
               kappa * *gamma_star > threshold);
        }
      }
    } else {
      const double r = large_beta_r(alpha, beta, rho, /*local=*/false);
      pred.base = RateBase::SumGamma;
      pred.exponent = r;
      push(pred, "r = min(1/(2beta-1), alpha rho - 1) positive", r > 0.0);
    }
  }
  finalize(pred);
  return pred;
}

PredictedRate predict_min_fgap_rate(double beta, Regime regime, const Schedule& sch) {
  if (!(beta > 0.0 && beta < 1.0)) throw InvalidParamError("rates: beta must be in (0, 1)");
  PredictedRate pred;
  pred.regime = regime;
  pred.quantity = Quantity::MinFGap;
  pred.base = RateBase::SumGamma;
  pred.exponent = is_local(regime) ? std::min(1.0, 1.0 / (2.0 * beta)) : 1.0 / (2.0 * beta);
  push(pred, "step sizes diverge in sum", sch.sum_diverges());
  finalize(pred);
  return pred;
}

PredictedRate predict_min_gradsq_rate(const Schedule& sch) {
  PredictedRate pred;
  pred.regime = Regime::Unified;
  pred.quantity = Quantity::MinGradSq;
  pred.base = RateBase::SumGamma;
  pred.exponent = 1.0;
  push(pred, "step sizes diverge in sum", sch.sum_diverges());
  finalize(pred);
  return pred;
}

PredictedRate predict_iterate_rate(double alpha, double beta, double zeta, double kappa,
                                   const Schedule& sch, double rho, double sigma, Regime regime,
                                   double holder_L) {
  check_core_params(alpha, beta);
  if (!(zeta > 0.0)) throw InvalidParamError("rates: zeta must be > 0");
  if (!(kappa > 0.0)) throw InvalidParamError("rates: kappa must be > 0");
  PredictedRate pred;
  pred.regime = regime;
  pred.quantity = Quantity::IterateGap;
  push_schedule_conditions(pred, sch, alpha, rho, /*needs_poly=*/true);
  push(pred, "rho > max(3, 2/alpha)", rho > std::max(3.0, 2.0 / alpha));
  const double s = sch.s();
  push(pred, "s within [rho/(1+rho), 1]", s >= rho / (1.0 + rho) && s <= 1.0);
  if (!is_local(regime)) push_global_beta_window(pred, alpha, beta);

  const auto gamma_star = sch.gamma_star();
  if (gamma_star) {
    push(pred, "kappa gamma* > max(1/2, alpha)",
         kappa * *gamma_star > std::max(0.5, alpha));
    if (beta <= 0.5) {
      if (regime == Regime::LocalA) {
        const double threshold = std::pow(zeta, 1.0 / beta) * std::max(alpha, 0.5);
        push(pred, "kappa gamma* clears the plateau threshold " + std::to_string(threshold),
             kappa * *gamma_star > threshold);
      } else if (regime == Regime::Global) {
        if (beta < 0.5 && !std::isfinite(holder_L)) {
          push(pred,
               "plateau threshold needs the gradient smoothness constant L (not provided)",
               false);
        } else {
          const double threshold = global_small_beta_threshold(alpha, beta, zeta, holder_L);
          push(pred, "kappa gamma* clears the plateau threshold " + std::to_string(threshold),
               kappa * *gamma_star > threshold);
        }
      }
    }
  }

  const IterateCase cs = iterate_case(alpha, beta, rho, s, regime);
  if (!cs.defined) {
    push(pred, "averaging window exponents are positive for this (s, beta, rho)", false);
    finalize(pred);
    return pred;
  }
  pred.sigma_min = cs.sigma_min;
  if (std::isnan(sigma)) sigma = cs.sigma_min;
  push(pred,
       "sigma within [" + std::to_string(cs.sigma_min) + ", 1)",
       sigma >= cs.sigma_min - 1e-12 && sigma < 1.0);
  pred.base = cs.base;
  pred.exponent = cs.exponent_factor * (1.0 - sigma);
  finalize(pred);
  return pred;
}

PredictedRate rate_over_n(const PredictedRate& pred, const Schedule& sch) {
  if (pred.base == RateBase::N || pred.base == RateBase::LogN) return pred;
  if (sch.family() != ScheduleFamily::Poly) {
    throw DomainError("rate_over_n: base conversion is defined for the poly family");
  }
  PredictedRate out = pred;
  const double s = sch.s();
  if (pred.base == RateBase::GammaN) {
    out.base = RateBase::N;
    out.exponent = pred.exponent * s;
  } else {  // SumGamma
    if (s == 1.0) {
      out.base = RateBase::LogN;
      out.exponent = pred.exponent;
    } else {
      out.base = RateBase::N;
      out.exponent = pred.exponent * (1.0 - s);
    }
  }
  return out;
}

RateFit fit_decay(std::span<const SeriesPoint> series, std::int64_t n_lo, std::int64_t n_hi,
                  RateBase base, const Schedule& sch) {
  if (n_lo > n_hi) throw InvalidParamError("fit_decay: empty window");
  std::vector<double> xs, ys;
  int clipped = 0;
  for (const SeriesPoint& pt : series) {
    if (pt.n < n_lo || pt.n > n_hi) continue;
    if (!(pt.value > 1e-300)) {
      ++clipped;
      continue;
    }
    double x;
    switch (base) {
      case RateBase::N: x = static_cast<double>(pt.n); break;
      case RateBase::LogN: x = std::log(static_cast<double>(pt.n)); break;
      case RateBase::GammaN: x = sch.gamma(pt.n); break;
      case RateBase::SumGamma: x = sch.partial_sum(pt.n); break;
      default: throw std::logic_error("fit_decay: unreachable base");
    }
    if (!(x > 0.0)) continue;
    xs.push_back(std::log(x));
    ys.push_back(std::log(pt.value));
  }
  if (xs.size() < 8) {
    throw InsufficientDataError("fit_decay: need at least 8 positive values in the window (" +
                                std::to_string(xs.size()) + " found, " +
                                std::to_string(clipped) + " clipped)");
  }
  const auto [xmin_it, xmax_it] = std::minmax_element(xs.begin(), xs.end());
  if (*xmax_it - *xmin_it < std::log(10.0)) {
    throw InsufficientDataError("fit_decay: window must span at least one decade of the base "
                                "variable");
  }
  const double count = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= count;
  my /= count;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  RateFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.n_lo = n_lo;
  fit.n_hi = n_hi;
  fit.n_points = static_cast<int>(xs.size());
  fit.n_clipped = clipped;
  double ss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (fit.intercept + fit.slope * xs[i]);
    ss += r * r;
  }
  fit.rms_residual = std::sqrt(ss / count);
  return fit;
}

namespace {

double quantity_value(const Ensemble& ens, const Trajectory& traj, std::size_t idx,
                      Quantity quantity) {
  switch (quantity) {
    case Quantity::FGap: return traj.records[idx].f_gap;
    case Quantity::MinFGap: return traj.running_min_gap[idx];
    case Quantity::MinGradSq: return traj.running_min_gradsq[idx];
    case Quantity::IterateGap: {
      const auto& points = ens.config.landscape->stationary_points();
      if (points.empty()) {
        throw DomainError("iterate gap needs a landscape with known stationary points");
      }
      const auto& theta = traj.records[idx].theta;
      double best = std::numeric_limits<double>::infinity();
      for (const auto& p : points) {
        double d2 = 0.0;
        for (std::size_t k = 0; k < theta.size(); ++k) {
          const double d = theta[k] - p[k];
          d2 += d * d;
        }
        best = std::min(best, d2);
      }
      return std::sqrt(best);
    }
  }
  throw std::logic_error("quantity_value: unreachable");
}

std::size_t quantile_rank(double delta, std::size_t count) {
  const double raw = std::ceil((1.0 - delta) * static_cast<double>(count));
  const std::size_t idx = static_cast<std::size_t>(std::max(1.0, raw));
  return std::min(idx, count) - 1;
}

}  // namespace

double hp_quantile(const Ensemble& ens, double delta, Quantity quantity, std::int64_t n,
                   std::int64_t* used_n) {
  if (!(delta > 0.0 && delta < 1.0)) throw DomainError("hp_quantile: delta must be in (0, 1)");
  if (ens.replicates.empty()) throw DomainError("hp_quantile: empty ensemble");
  const std::size_t idx = nearest_record_index(ens.replicates.front(), n);
  if (used_n != nullptr) *used_n = ens.replicates.front().records[idx].n;
  std::vector<double> values;
  values.reserve(ens.replicates.size());
  for (const Trajectory& traj : ens.replicates) {
    values.push_back(quantity_value(ens, traj, idx, quantity));
  }
  std::sort(values.begin(), values.end());
  return values[quantile_rank(delta, values.size())];
}

std::vector<SeriesPoint> quantile_series(const Ensemble& ens, double delta, Quantity quantity) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw DomainError("quantile_series: delta must be in (0, 1)");
  }
  if (ens.replicates.empty()) throw DomainError("quantile_series: empty ensemble");
  const std::size_t n_records = ens.replicates.front().records.size();
  std::vector<SeriesPoint> out(n_records);
  std::vector<double> values(ens.replicates.size());
  for (std::size_t i = 0; i < n_records; ++i) {
    for (std::size_t r = 0; r < ens.replicates.size(); ++r) {
      values[r] = quantity_value(ens, ens.replicates[r], i, quantity);
    }
    std::sort(values.begin(), values.end());
    out[i] = {ens.replicates.front().records[i].n, values[quantile_rank(delta, values.size())]};
  }
  return out;
}

std::vector<SeriesPoint> mean_series(const Ensemble& ens, Quantity quantity) {
  if (ens.replicates.empty()) throw DomainError("mean_series: empty ensemble");
  const std::size_t n_records = ens.replicates.front().records.size();
  std::vector<SeriesPoint> out(n_records);
  for (std::size_t i = 0; i < n_records; ++i) {
    double sum = 0.0;
    for (const Trajectory& traj : ens.replicates) {
      sum += quantity_value(ens, traj, i, quantity);
    }
    out[i] = {ens.replicates.front().records[i].n,
              sum / static_cast<double>(ens.replicates.size())};
  }
  return out;
}

Budget budget(double eps, double delta, const BudgetParams& params, const Schedule& sch) {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw InvalidParamError("budget: eps must be > 0");
  if (!(delta > 0.0 && delta < 1.0)) throw InvalidParamError("budget: delta must be in (0, 1)");
  check_core_params(params.alpha, params.beta);
  const double alpha = params.alpha;
  const double beta = params.beta;
  const double rho = params.rho;
  Budget out;
  out.epsilon = eps;
  out.delta = delta;
  out.regime = params.regime;
  out.quantity = params.quantity;
  const bool local = is_local(params.regime);

  switch (params.quantity) {
    case Quantity::MinFGap: {
      const double e = local ? std::max(1.0, 2.0 * beta) : 2.0 * beta;
      out.formula_tag = local ? "min-fgap/local/sum-inverse" : "min-fgap/global/sum-inverse";
      out.n = inverse_or_saturate(sch, /*sum=*/true, checked_pow(eps, -e), &out.saturated);
      break;
    }
    case Quantity::FGap: {
      if (!local) {
        const double floor_beta = alpha / (1.0 + alpha);
        if (beta < floor_beta || (beta == floor_beta && alpha < 1.0)) {
          throw UnsupportedRegimeError(
              "budget: no global certificate at or below beta = alpha/(1+alpha)");
        }
      }
      if (beta <= 0.5) {
        const double e = local ? std::max(2.0, 1.0 / alpha) : 1.0 / alpha;
        out.formula_tag = local ? "fgap/local/small-beta/gamma-inverse"
                                : "fgap/global/small-beta/gamma-inverse";
        out.n = inverse_or_saturate(sch, /*sum=*/false, checked_pow(eps, e), &out.saturated);
      } else {
        const double r = large_beta_r(alpha, beta, rho, local);
        if (!(r > 0.0)) {
          throw UnsupportedRegimeError("budget: nonpositive decay exponent r; raise rho");
        }
        out.formula_tag = local ? "fgap/local/large-beta/sum-inverse"
                                : "fgap/global/large-beta/sum-inverse";
        out.n = inverse_or_saturate(sch, /*sum=*/true, checked_pow(eps, -1.0 / r),
                                    &out.saturated);
      }
      break;
    }
    case Quantity::IterateGap: {
      if (sch.family() != ScheduleFamily::Poly) {
        throw UnsupportedRegimeError("budget: iterate budgets need the poly family");
      }
      if (!local) {
        const double floor_beta = alpha / (1.0 + alpha);
        if (beta < floor_beta || (beta == floor_beta && alpha < 1.0)) {
          throw UnsupportedRegimeError(
              "budget: no global certificate at or below beta = alpha/(1+alpha)");
        }
      }
      const double s = sch.s();
      if (!(rho > std::max(3.0, 2.0 / alpha)) || s < rho / (1.0 + rho) || s > 1.0) {
        throw UnsupportedRegimeError(
            "budget: iterate budgets need rho > max(3, 2/alpha) and s in [rho/(1+rho), 1]");
      }
      const IterateCase cs = iterate_case(alpha, beta, rho, s, params.regime);
      if (!cs.defined) {
        throw UnsupportedRegimeError("budget: iterate exponents undefined for these inputs");
      }
      double sigma = params.sigma;
      if (std::isnan(sigma)) sigma = cs.sigma_min;
      if (!(sigma >= cs.sigma_min - 1e-12 && sigma < 1.0)) {
        throw UnsupportedRegimeError("budget: sigma outside the admissible interval");
      }
      if (beta > 0.5 && s == 1.0) {
        const double r = large_beta_r(alpha, beta, rho, local);
        const double inner = checked_pow(eps, -1.0 / (r * (1.0 - sigma)));
        out.formula_tag = local ? "iterate/local/large-beta/exp"
                                : "iterate/global/large-beta/exp";
        if (inner > 42.5) {
          out.saturated = true;
          out.n = kBudgetCap;
        } else {
          out.n = saturating_index(std::exp(inner), &out.saturated);
        }
      } else {
        const double two_s = 2.0 * s - 1.0;
        const double pow_s = (1.0 + alpha) * s - 1.0;
        double lead;
        if (beta <= 0.5) {
          lead = local ? std::max(2.0, 1.0 / alpha) / s : 1.0 / (alpha * s);
        } else {
          const double r = large_beta_r(alpha, beta, rho, local);
          lead = 1.0 / (r * (1.0 - s));
        }
        const double a_exp = std::max({lead, 2.0 / two_s, 1.0 / pow_s});
        out.formula_tag = local ? "iterate/local/power" : "iterate/global/power";
        out.n = saturating_index(checked_pow(eps, -a_exp / (1.0 - sigma)), &out.saturated);
      }
      break;
    }
    case Quantity::MinGradSq:
      throw UnsupportedRegimeError(
          "budget: no iteration budget is stated for the min-gradient quantity");
  }
  if (out.saturated) out.formula_tag += " (saturated)";
  return out;
}

Regime regime_from_name(const std::string& name) {
  if (name == "local_a") return Regime::LocalA;
  if (name == "local_b") return Regime::LocalB;
  if (name == "unified") return Regime::Unified;
  if (name == "global") return Regime::Global;
  throw CatalogError("unknown regime '" + name + "'");
}

std::string regime_name(Regime regime) {
  switch (regime) {
    case Regime::LocalA: return "local_a";
    case Regime::LocalB: return "local_b";
    case Regime::Unified: return "unified";
    case Regime::Global: return "global";
  }
  return "unknown";
}

Quantity quantity_from_name(const std::string& name) {
  if (name == "min_fgap") return Quantity::MinFGap;
  if (name == "fgap") return Quantity::FGap;
  if (name == "min_gradsq") return Quantity::MinGradSq;
  if (name == "iterate_gap") return Quantity::IterateGap;
  throw CatalogError("unknown quantity '" + name + "'");
}

std::string quantity_name(Quantity quantity) {
  switch (quantity) {
    case Quantity::MinFGap: return "min_fgap";
    case Quantity::FGap: return "fgap";
    case Quantity::MinGradSq: return "min_gradsq";
    case Quantity::IterateGap: return "iterate_gap";
  }
  return "unknown";
}

std::string rate_base_name(RateBase base) {
  switch (base) {
    case RateBase::GammaN: return "gamma_n";
    case RateBase::SumGamma: return "sum_gamma";
    case RateBase::N: return "n";
    case RateBase::LogN: return "log_n";
  }
  return "unknown";
}

}  // namespace sgdlab

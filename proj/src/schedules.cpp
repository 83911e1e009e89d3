#include "sgdlab/schedules.hpp"

#include <cmath>
#include <stdexcept>

#include "sgdlab/errors.hpp"

namespace sgdlab {

namespace {

constexpr std::int64_t kExactSumTerms = 100000000;   // 1e8
constexpr std::int64_t kExactSumBase = 1000000;      // Kahan prefix for the tail formula
constexpr std::int64_t kIndexCap = std::int64_t{4} * 1000000000000000000;  // 4e18

double kahan_sum(const Schedule& sch, std::int64_t first, std::int64_t last) {
  double sum = 0.0, comp = 0.0;
  for (std::int64_t k = first; k <= last; ++k) {
    const double y = sch.gamma(k) - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  return sum;
}

}  // namespace

Schedule::Schedule(ScheduleFamily family, double gamma0, double shift_c, double shift_cprime,
                   double s, double family_alpha)
    : family_(family), gamma0_(gamma0), c_(shift_c), cprime_(shift_cprime), s_(s),
      family_alpha_(family_alpha) {
  if (!(gamma0 > 0.0) || !std::isfinite(gamma0)) {
    throw InvalidParamError("schedule: gamma0 must be finite and > 0");
  }
  if (!(shift_c >= 0.0) || !std::isfinite(shift_c)) {
    throw InvalidParamError("schedule: shift c must be finite and >= 0");
  }
  if (!(shift_cprime >= 0.0) || !std::isfinite(shift_cprime)) {
    throw InvalidParamError("schedule: shift c' must be finite and >= 0");
  }
  if (!(s > 0.0) || !std::isfinite(s)) {
    throw InvalidParamError("schedule: exponent s must be finite and > 0");
  }
  if (family == ScheduleFamily::LogPower) {
    if (!(family_alpha > 0.0) || !std::isfinite(family_alpha)) {
      throw InvalidParamError("schedule: logpower needs its own alpha > 0");
    }
    if (!(s > 1.0)) {
      throw InvalidParamError("schedule: logpower needs s > 1 so the log factor sums");
    }
  }
}

double Schedule::gamma(std::int64_t n) const {
  if (n < 1) throw DomainError("schedule: gamma_n is defined for n >= 1");
  const double x = static_cast<double>(n) + c_;
  switch (family_) {
    case ScheduleFamily::Poly:
      return gamma0_ * std::pow(x, -s_);
    case ScheduleFamily::PolyLog:
      return gamma0_ / (x * std::pow(std::log(1.0 + cprime_ + static_cast<double>(n)), s_));
    case ScheduleFamily::LogPower:
      return gamma0_ /
             std::pow(x * std::pow(std::log(1.0 + cprime_ + static_cast<double>(n)), s_),
                      1.0 / (1.0 + family_alpha_));
  }
  throw std::logic_error("schedule: unreachable family");
}

double Schedule::partial_sum(std::int64_t n) const {
  if (n < 0) throw DomainError("schedule: partial_sum needs n >= 0");
  const std::int64_t terms = n + 1;
  if (terms <= kExactSumTerms) return kahan_sum(*this, 1, terms);
  if (family_ != ScheduleFamily::Poly) {
    throw DomainError(
        "schedule: partial_sum beyond 1e8 terms is supported for the poly family only");
  }
  // Euler-Maclaurin tail over [a, b]: integral + (f(a)+f(b))/2 + (f'(b)-f'(a))/12.
  // The next correction term is below gamma0 * s(s+1)(s+2) * a^{-s-3} / 720,
  // which at a ~ 1e6 is smaller than 1e-14 of the retained value.
  const double head = kahan_sum(*this, 1, kExactSumBase);
  const double a = static_cast<double>(kExactSumBase + 1) + c_;
  const double b = static_cast<double>(terms) + c_;
  double integral;
  if (s_ == 1.0) {
    integral = gamma0_ * std::log(b / a);
  } else {
    integral = gamma0_ * (std::pow(b, 1.0 - s_) - std::pow(a, 1.0 - s_)) / (1.0 - s_);
  }
  const double fa = gamma0_ * std::pow(a, -s_);
  const double fb = gamma0_ * std::pow(b, -s_);
  const double dfa = -s_ * gamma0_ * std::pow(a, -s_ - 1.0);
  const double dfb = -s_ * gamma0_ * std::pow(b, -s_ - 1.0);
  return head + integral + 0.5 * (fa + fb) + (dfb - dfa) / 12.0;
}

std::int64_t Schedule::gamma_inverse(double t) const {
  if (!(t > 0.0) || !std::isfinite(t)) {
    throw DomainError("schedule: gamma_inverse needs t > 0");
  }
  if (gamma(1) <= t) return 1;
  if (family_ != ScheduleFamily::Poly) return gamma_inverse_generic(t);
  // Solve gamma0 (n + c)^{-s} <= t, then repair double rounding exactly.
  const double x = std::pow(gamma0_ / t, 1.0 / s_) - c_;
  std::int64_t n = (x < 1.0) ? 1 : static_cast<std::int64_t>(std::ceil(std::min(
                                       x, static_cast<double>(kIndexCap))));
  while (n > 1 && gamma(n - 1) <= t) --n;
  while (gamma(n) > t) {
    if (n >= kIndexCap) throw DomainError("schedule: gamma_inverse target beyond index range");
    ++n;
  }
  return n;
}

std::int64_t Schedule::gamma_inverse_generic(double t) const {
  if (!(t > 0.0) || !std::isfinite(t)) {
    throw DomainError("schedule: gamma_inverse needs t > 0");
  }
  if (gamma(1) <= t) return 1;
  std::int64_t lo = 1, hi = 2;
  while (gamma(hi) > t) {
    lo = hi;
    if (hi > kIndexCap / 2) throw DomainError("schedule: gamma_inverse target beyond index range");
    hi *= 2;
  }
  while (hi - lo > 1) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    if (gamma(mid) <= t) hi = mid; else lo = mid;
  }
  return hi;
}

double Schedule::sum_profile(std::int64_t n) const {
  if (family_ != ScheduleFamily::Poly) {
    throw DomainError("schedule: the divergent-sum profile is defined for the poly family");
  }
  if (n < 1) throw DomainError("schedule: sum_profile needs n >= 1");
  const double x = static_cast<double>(n) + c_;
  if (s_ == 1.0) return gamma0_ * (1.0 + std::log(x / (1.0 + c_)));
  return gamma0_ * std::pow(x, 1.0 - s_) / (1.0 - s_);
}

std::int64_t Schedule::sigma_inverse(double t) const {
  if (!(t > 0.0) || !std::isfinite(t)) {
    throw DomainError("schedule: sigma_inverse needs t > 0");
  }
  if (family_ != ScheduleFamily::Poly) return forward_scan_inverse(t);
  if (s_ > 1.0) {
    throw DomainError("schedule: sigma_inverse needs a divergent schedule (s <= 1)");
  }
  if (sum_profile(1) >= t) return 1;
  double x;
  if (s_ == 1.0) {
    const double e = t / gamma0_ - 1.0;
    x = (e > 43.0) ? static_cast<double>(kIndexCap) + 1.0
                   : (1.0 + c_) * std::exp(e) - c_;
  } else {
    x = std::pow((1.0 - s_) * t / gamma0_, 1.0 / (1.0 - s_)) - c_;
  }
  if (!(x < static_cast<double>(kIndexCap))) {
    throw DomainError("schedule: sigma_inverse target beyond index range");
  }
  std::int64_t n = (x < 1.0) ? 1 : static_cast<std::int64_t>(std::ceil(x));
  while (n > 1 && sum_profile(n - 1) >= t) --n;
  while (sum_profile(n) < t) {
    if (n >= kIndexCap) throw DomainError("schedule: sigma_inverse target beyond index range");
    ++n;
  }
  return n;
}

std::int64_t Schedule::sigma_inverse_generic(double t) const {
  if (!(t > 0.0) || !std::isfinite(t)) {
    throw DomainError("schedule: sigma_inverse needs t > 0");
  }
  if (family_ != ScheduleFamily::Poly) return forward_scan_inverse(t);
  if (s_ > 1.0) {
    throw DomainError("schedule: sigma_inverse needs a divergent schedule (s <= 1)");
  }
  if (sum_profile(1) >= t) return 1;
  std::int64_t lo = 1, hi = 2;
  while (sum_profile(hi) < t) {
    lo = hi;
    if (hi > kIndexCap / 2) throw DomainError("schedule: sigma_inverse target beyond index range");
    hi *= 2;
  }
  while (hi - lo > 1) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    if (sum_profile(mid) >= t) hi = mid; else lo = mid;
  }
  return hi;
}

std::int64_t Schedule::forward_scan_inverse(double t) const {
  // True compensated partial sums, extended one term at a time.
  double sum = 0.0, comp = 0.0;
  auto add = [&](double g) {
    const double y = g - comp;
    const double tt = sum + y;
    comp = (tt - sum) - y;
    sum = tt;
  };
  add(gamma(1));
  add(gamma(2));
  std::int64_t n = 1;
  while (sum < t) {
    if (n >= kExactSumTerms) {
      throw DomainError("schedule: sigma_inverse target not reached within 1e8 terms");
    }
    ++n;
    add(gamma(n + 1));
  }
  return n;
}

std::optional<double> Schedule::gamma_star() const {
  if (family_ == ScheduleFamily::Poly && s_ == 1.0) return gamma0_;
  return std::nullopt;
}

double Schedule::rho_sup() const {
  constexpr double inf = std::numeric_limits<double>::infinity();
  switch (family_) {
    case ScheduleFamily::Poly:
      return (s_ < 1.0) ? s_ / (1.0 - s_) : inf;
    case ScheduleFamily::PolyLog:
      // gamma_n ~ 1/n decays faster than any power of the (logarithmic) sum.
      return inf;
    case ScheduleFamily::LogPower:
      return 1.0 / family_alpha_;
  }
  throw std::logic_error("schedule: unreachable family");
}

bool Schedule::sum_diverges() const {
  switch (family_) {
    case ScheduleFamily::Poly:
    case ScheduleFamily::PolyLog:
      return s_ <= 1.0;
    case ScheduleFamily::LogPower:
      return true;  // exponent of n is 1/(1+a) < 1
  }
  throw std::logic_error("schedule: unreachable family");
}

ScheduleFamily schedule_family_from_name(const std::string& name) {
  if (name == "poly") return ScheduleFamily::Poly;
  if (name == "polylog") return ScheduleFamily::PolyLog;
  if (name == "logpower") return ScheduleFamily::LogPower;
  throw CatalogError("unknown schedule family '" + name + "'");
}

std::string schedule_family_name(ScheduleFamily family) {
  switch (family) {
    case ScheduleFamily::Poly: return "poly";
    case ScheduleFamily::PolyLog: return "polylog";
    case ScheduleFamily::LogPower: return "logpower";
  }
  return "unknown";
}

ValidityReport validate(const Schedule& sch, double alpha, double rho) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw InvalidParamError("validate: alpha must lie in (0, 1]");
  }
  if (!(rho > 0.0) || !std::isfinite(rho)) {
    throw InvalidParamError("validate: rho must be finite and > 0");
  }
  ValidityReport rep;
  const double s = sch.s();
  switch (sch.family()) {
    case ScheduleFamily::Poly: {
      const bool diverges = s <= 1.0;
      const bool power_sums = s * (1.0 + alpha) > 1.0;
      rep.h3_ok = diverges && power_sums;
      if (!diverges) rep.messages.push_back("sum gamma_n converges (s > 1)");
      if (!power_sums) {
        rep.messages.push_back("sum gamma_n^(1+alpha) diverges (s(1+alpha) <= 1)");
      }
      rep.h6_regime = (s == 1.0) ? H6Regime::Ib : H6Regime::Ia;
      break;
    }
    case ScheduleFamily::PolyLog: {
      // gamma_n^(1+alpha) ~ n^{-(1+alpha)} always sums; divergence of the
      // plain sum needs s <= 1.
      rep.h3_ok = s <= 1.0;
      if (s > 1.0) rep.messages.push_back("sum gamma_n converges (log power s > 1)");
      // ln(gamma_{n-1}/gamma_n) ~ 1/n is neither o(gamma_n) nor ~ gamma_n/gamma*.
      rep.h6_regime = H6Regime::Neither;
      rep.messages.push_back(
          "polylog: step ratios decay like 1/n while gamma_n decays faster, so neither "
          "slow-variation regime applies");
      break;
    }
    case ScheduleFamily::LogPower: {
      const double a = sch.family_alpha();
      rep.h3_ok = (alpha > a) || (alpha == a && s > 1.0);
      if (!rep.h3_ok) {
        rep.messages.push_back(
            "sum gamma_n^(1+alpha) diverges: logpower needs alpha > a (or alpha == a with "
            "s > 1)");
      }
      rep.h6_regime = H6Regime::Ia;
      break;
    }
  }
  rep.h6ii_ok = sch.sum_diverges();
  if (!rep.h6ii_ok) {
    rep.messages.push_back("sum gamma_n / Sigma_n converges because sum gamma_n does");
  }
  rep.max_rho = sch.rho_sup();
  rep.rho_admissible = rho <= rep.max_rho;
  if (!rep.rho_admissible) {
    rep.messages.push_back("rho exceeds the family bound sup rho = " +
                           std::to_string(rep.max_rho));
  }
  rep.rho_usable = rep.rho_admissible && rho > 1.0 / alpha;
  if (rho <= 1.0 / alpha) {
    rep.messages.push_back("rho must exceed 1/alpha for the rate statements");
  }
  if (sch.family() == ScheduleFamily::Poly) {
    // s-window in which this rho stays admissible; the summability part of
    // the assumptions additionally needs s > 1/(1+alpha).
    rep.s_range_lo = rho / (1.0 + rho);
    rep.s_range_hi = 1.0;
  } else {
    rep.messages.push_back("the admissible s window is reported for the poly family only");
  }
  return rep;
}

}  // namespace sgdlab

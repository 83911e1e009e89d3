// Step-size schedules, their partial sums, inverse maps, and the validity
// report for the divergence/summability and regularity assumptions.
#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace sgdlab {

enum class ScheduleFamily {
  Poly,      // gamma0 / (n + c)^s
  PolyLog,   // gamma0 / ((n + c) * ln^s(1 + cprime + n))
  LogPower   // gamma0 / ((n + c) * ln^s(1 + cprime + n))^(1/(1+a))
};

class Schedule {
 public:
  // family_alpha is the `a` in LogPower; ignored by the other families.
  Schedule(ScheduleFamily family, double gamma0, double shift_c, double shift_cprime,
           double s, double family_alpha = 1.0);

  static Schedule poly(double gamma0, double shift_c, double s) {
    return Schedule(ScheduleFamily::Poly, gamma0, shift_c, 0.0, s);
  }
  static Schedule polylog(double gamma0, double shift_c, double shift_cprime, double s) {
    return Schedule(ScheduleFamily::PolyLog, gamma0, shift_c, shift_cprime, s);
  }
  static Schedule logpower(double gamma0, double shift_c, double shift_cprime, double s,
                           double family_alpha) {
    return Schedule(ScheduleFamily::LogPower, gamma0, shift_c, shift_cprime, s, family_alpha);
  }

  ScheduleFamily family() const { return family_; }
  double gamma0() const { return gamma0_; }
  double shift_c() const { return c_; }
  double shift_cprime() const { return cprime_; }
  double s() const { return s_; }
  double family_alpha() const { return family_alpha_; }

  // gamma_n for n >= 1.
  double gamma(std::int64_t n) const;

  // Sigma_n = sum_{k=1}^{n+1} gamma_k.  Compensated summation up to 1e8
  // terms; beyond that the Poly family switches to an Euler-Maclaurin tail
  // (relative error below 1e-14 at that size) and other families refuse.
  double partial_sum(std::int64_t n) const;

  // Smallest n >= 1 with gamma_n <= t (t > 0).  Exact integer answer.
  std::int64_t gamma_inverse(double t) const;
  // Reference search path for gamma_inverse: monotone doubling + bisection
  // on gamma_n itself, no closed-form seed.  Used for cross-checking.
  std::int64_t gamma_inverse_generic(double t) const;

  // Smallest n >= 1 with the divergent-sum profile >= t (t > 0).  For the
  // Poly family this inverts the leading profile
  //   s < 1:  gamma0 * (n + c)^(1-s) / (1 - s)
  //   s = 1:  gamma0 * (1 + ln((n + c) / (1 + c)))
  // in closed form; other families scan the true compensated sums.
  std::int64_t sigma_inverse(double t) const;
  // Reference search path: doubling + bisection on the same profile (Poly),
  // or the same forward scan (others).
  std::int64_t sigma_inverse_generic(double t) const;

  // Step-size plateau constant gamma* when s == 1 and the schedule is
  // asymptotically gamma*/n (Poly family only).
  std::optional<double> gamma_star() const;

  // Supremum of admissible rho in gamma_n = O(Sigma_n^{-rho}); +inf when
  // every rho works.
  double rho_sup() const;

  bool sum_diverges() const;

  // The Poly profile described above (exposed for tests).
  double sum_profile(std::int64_t n) const;

 private:
  ScheduleFamily family_;
  double gamma0_, c_, cprime_, s_, family_alpha_;

  std::int64_t profile_inverse(double t) const;
  std::int64_t forward_scan_inverse(double t) const;
};

ScheduleFamily schedule_family_from_name(const std::string& name);
std::string schedule_family_name(ScheduleFamily family);

enum class H6Regime { Ia, Ib, Neither };

struct ValidityReport {
  bool h3_ok = false;            // Sigma gamma = inf and Sigma gamma^(1+alpha) < inf
  H6Regime h6_regime = H6Regime::Neither;
  bool h6ii_ok = false;          // Sigma gamma_n / Sigma_n = inf
  double max_rho = 0.0;          // sup of admissible rho (may be +inf)
  bool rho_admissible = false;   // requested rho <= max_rho
  bool rho_usable = false;       // additionally rho > 1/alpha, as the rate
                                 // statements require
  double s_range_lo = std::numeric_limits<double>::quiet_NaN();
  double s_range_hi = std::numeric_limits<double>::quiet_NaN();
  std::vector<std::string> messages;

  bool ok() const { return h3_ok && h6ii_ok && rho_admissible; }
};

// Checks the schedule against gradient-Holder exponent alpha and the
// requested growth exponent rho.
ValidityReport validate(const Schedule& sch, double alpha, double rho);

}  // namespace sgdlab

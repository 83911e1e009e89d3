#include "sgdlab/kernels.hpp"

#include <cmath>

#include "sgdlab/errors.hpp"
#include "sgdlab/landscapes.hpp"

namespace sgdlab {

ValueGrad make_value_grad(const Landscape& land) {
  ValueGrad vg;
  vg.dim = land.dim();
  vg.value = [&land](std::span<const double> theta) { return land.value(theta); };
  vg.gradient = [&land](std::span<const double> theta, std::span<double> out) {
    land.gradient(theta, out);
  };
  return vg;
}

namespace kernels {

namespace {

double norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace

double descent_gap(const ValueGrad& vg, double L, double alpha,
                   std::span<const double> theta, std::span<const double> theta_prime) {
  std::vector<double> grad(theta.size());
  vg.gradient(theta, grad);
  double dot = 0.0, dist2 = 0.0;
  for (std::size_t i = 0; i < theta.size(); ++i) {
    const double d = theta_prime[i] - theta[i];
    dot += grad[i] * d;
    dist2 += d * d;
  }
  const double dist = std::sqrt(dist2);
  const double bound = L / (1.0 + alpha) * std::pow(dist, 1.0 + alpha);
  const double excess = std::fabs(vg.value(theta_prime) - vg.value(theta) - dot);
  return bound - excess;
}

double grad_bound_gap(const ValueGrad& vg, double L, double alpha, double inf_value,
                      std::span<const double> theta) {
  std::vector<double> grad(theta.size());
  vg.gradient(theta, grad);
  const double lhs = std::pow(norm(grad), (1.0 + alpha) / alpha);
  const double rhs =
      (1.0 + alpha) * std::pow(L, 1.0 / alpha) / alpha * (vg.value(theta) - inf_value);
  return rhs - lhs;
}

std::vector<CrossingPair> extract_crossings(std::span<const double> u, double ell_minus,
                                            double ell_plus) {
  if (!(ell_minus < ell_plus)) {
    throw DomainError("extract_crossings: need ell_minus < ell_plus");
  }
  std::vector<CrossingPair> pairs;
  std::int64_t last_below = -1;
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (u[i] < ell_minus) {
      last_below = static_cast<std::int64_t>(i);
    } else if (u[i] > ell_plus && last_below >= 0) {
      pairs.push_back({last_below, static_cast<std::int64_t>(i)});
      last_below = -1;
    }
  }
  return pairs;
}

double gamma_series(const Schedule& sch, double mu, double alpha, std::int64_t n) {
  if (!(mu > 0.0) || !std::isfinite(mu)) throw DomainError("gamma_series: mu must be > 0");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("gamma_series: alpha must be in (0, 1]");
  if (n < 1) throw DomainError("gamma_series: n must be >= 1");
  if (auto gs = sch.gamma_star(); gs && !(mu * *gs > alpha)) {
    throw HypothesisError(
        "gamma_series: a plateau schedule (gamma ~ gamma*/n) needs mu * gamma* > alpha");
  }
  double a = sch.gamma(1);
  double prev = a;
  for (std::int64_t k = 2; k <= n; ++k) {
    const double g = sch.gamma(k);
    a = std::pow(prev / g, alpha) * std::exp(-mu * g) * a + g;
    prev = g;
  }
  return a;
}

double concave_gap(double x, double y, double sigma) {
  if (!(sigma > 0.0 && sigma < 1.0)) throw DomainError("concave_gap: sigma must be in (0, 1)");
  if (!(x >= 0.0) || !(x <= y)) throw DomainError("concave_gap: need 0 <= x <= y");
  if (!(y > 0.0)) throw DomainError("concave_gap: need y > 0");
  const double rhs = (std::pow(y, 1.0 - sigma) - std::pow(x, 1.0 - sigma)) / (1.0 - sigma);
  const double lhs = (y - x) / std::pow(y, sigma);
  return rhs - lhs;
}

double log_concave_gap(double x, double y) {
  if (!(x > 0.0) || !(x <= y)) throw DomainError("log_concave_gap: need 0 < x <= y");
  return (std::log(y) - std::log(x)) - (y - x) / y;
}

}  // namespace kernels
}  // namespace sgdlab

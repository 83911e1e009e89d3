#include "sgdlab/landscapes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sgdlab {

namespace {

double sq(double x) { return x * x; }

void check_dim(const char* what, std::size_t got, int want) {
  if (got != static_cast<std::size_t>(want)) {
    throw DomainError(std::string(what) + ": point has dimension " + std::to_string(got) +
                      ", landscape has dimension " + std::to_string(want));
  }
}

double require_param(const std::map<std::string, double>& params, const std::string& key,
                     double fallback, bool required, const std::string& family) {
  auto it = params.find(key);
  if (it == params.end()) {
    if (required) {
      throw InvalidParamError(family + ": missing required parameter '" + key + "'");
    }
    return fallback;
  }
  return it->second;
}

void reject_unknown_params(const std::map<std::string, double>& params,
                           std::initializer_list<const char*> known, const std::string& family) {
  for (const auto& [key, _] : params) {
    if (std::find_if(known.begin(), known.end(),
                     [&](const char* k) { return key == k; }) == known.end()) {
      throw InvalidParamError(family + ": unknown parameter '" + key + "'");
    }
  }
}

}  // namespace

double Landscape::value1(double t) const {
  switch (family_) {
    case Family::PowerWell:
      return std::pow(std::fabs(t), q_);
    case Family::SplicedQuartic: {
      const double u = std::fabs(t);
      if (u <= 1.0) return sq(sq(t));
      return 6.0 * sq(u - 1.0) + 4.0 * (u - 1.0) + 1.0;
    }
    case Family::DoubleWell: {
      const double u = std::fabs(t);
      if (u <= 2.0) return sq(t * t - 1.0);
      return 9.0 + 24.0 * (u - 2.0) + 22.0 * sq(u - 2.0);
    }
    case Family::LogisticTail:
      return t > 0.0 ? std::log1p(std::exp(-t)) : -t + std::log1p(std::exp(t));
    case Family::Quantile: {
      if (t < 0.0) return t + (0.5 - t) / (1.0 - mu_);
      if (t <= 1.0) return t + sq(1.0 - t) / (2.0 * (1.0 - mu_));
      return t;
    }
    case Family::SineTrap:
      return t * t + a_ * (1.0 - std::cos(t));
    case Family::Quadratic:
      return 0.5 * t * t;
  }
  return 0.0;
}

double Landscape::grad1(double t) const {
  switch (family_) {
    case Family::PowerWell:
      if (t == 0.0) return 0.0;
      return q_ * std::copysign(std::pow(std::fabs(t), q_ - 1.0), t);
    case Family::SplicedQuartic: {
      const double u = std::fabs(t);
      if (u <= 1.0) return 4.0 * t * t * t;
      return std::copysign(12.0 * (u - 1.0) + 4.0, t);
    }
    case Family::DoubleWell: {
      const double u = std::fabs(t);
      if (u <= 2.0) return 4.0 * t * (t * t - 1.0);
      return std::copysign(24.0 + 44.0 * (u - 2.0), t);
    }
    case Family::LogisticTail:
      return t > 0.0 ? -std::exp(-t) / (1.0 + std::exp(-t)) : -1.0 / (1.0 + std::exp(t));
    case Family::Quantile:
      return (std::clamp(t, 0.0, 1.0) - mu_) / (1.0 - mu_);
    case Family::SineTrap:
      return 2.0 * t + a_ * std::sin(t);
    case Family::Quadratic:
      return t;
  }
  return 0.0;
}

double Landscape::value(std::span<const double> theta) const {
  check_dim("value", theta.size(), dim_);
  if (family_ == Family::Quadratic) {
    double acc = 0.0;
    for (double t : theta) acc += t * t;
    return 0.5 * acc;
  }
  return value1(theta[0]);
}

void Landscape::gradient(std::span<const double> theta, std::span<double> out) const {
  check_dim("gradient", theta.size(), dim_);
  check_dim("gradient output", out.size(), dim_);
  if (family_ == Family::Quadratic) {
    std::copy(theta.begin(), theta.end(), out.begin());
    return;
  }
  out[0] = grad1(theta[0]);
}

std::vector<double> Landscape::gradient(std::span<const double> theta) const {
  std::vector<double> out(theta.size());
  gradient(theta, out);
  return out;
}

double Landscape::grad_norm(std::span<const double> theta) const {
  check_dim("grad_norm", theta.size(), dim_);
  if (family_ == Family::Quadratic) {
    double acc = 0.0;
    for (double t : theta) acc += t * t;
    return std::sqrt(acc);
  }
  return std::fabs(grad1(theta[0]));
}

double Landscape::grad_bound_constant() const {
  // From the Holder gradient bound: ||grad F||^((1+a)/a) <= (1+a) L^(1/a) / a * (F - inf F),
  // hence ||grad F||^2 <= K^(2a/(1+a)) * ((F - inf F) + 1) with K the constant above
  // (the exponent 2a/(1+a) <= 1 absorbs into the +1).
  const double a = holder_.alpha;
  const double big_k = (1.0 + a) * std::pow(holder_.L, 1.0 / a) / a;
  return std::pow(big_k, 2.0 * a / (1.0 + a));
}

namespace {

// Log-spaced radial grid shared by derived-certificate construction:
// n_radii radii in [1e-8, 10], both signs in dimension one.
std::vector<double> radial_grid_1d(int n_radii) {
  std::vector<double> pts;
  pts.reserve(2 * static_cast<std::size_t>(n_radii));
  const double lo = -8.0, hi = 1.0;
  for (int i = 0; i < n_radii; ++i) {
    const double e = lo + (hi - lo) * static_cast<double>(i) / (n_radii - 1);
    const double r = std::pow(10.0, e);
    pts.push_back(r);
    pts.push_back(-r);
  }
  return pts;
}

// sup over the grid of |F - ref|^beta / ||grad F||, with a relative cushion so
// the certificate holds with margin at its own grid points.
double derived_zeta(const Landscape& land, double beta, double ref) {
  double sup = 0.0;
  for (double t : radial_grid_1d(5000)) {
    const double theta[1] = {t};
    const double g = land.grad_norm(theta);
    if (g == 0.0) continue;
    sup = std::max(sup, std::pow(std::fabs(land.value(theta) - ref), beta) / g);
  }
  if (sup <= 0.0) throw InvalidParamError("derived_zeta: ratio vanished on the whole grid");
  return sup * (1.0 + 1e-9);
}

}  // namespace

Landscape catalog(const std::string& name, const std::map<std::string, double>& params) {
  Landscape land;
  land.name_ = name;

  if (name == "quadratic") {
    reject_unknown_params(params, {"dim"}, name);
    const double dim = require_param(params, "dim", 1.0, false, name);
    if (dim < 1.0 || dim != std::floor(dim) || dim > 1024.0) {
      throw InvalidParamError("quadratic: dim must be an integer in [1, 1024]");
    }
    land.family_ = Landscape::Family::Quadratic;
    land.dim_ = static_cast<int>(dim);
    land.params_["dim"] = dim;
    land.holder_ = {1.0, 1.0};
    land.certs_.push_back({0.5, std::sqrt(0.5), CertScope::Global, {}, 0.0, 0.0});
    land.stationary_points_.push_back(std::vector<double>(land.dim_, 0.0));
  } else if (name == "power_well") {
    reject_unknown_params(params, {"q"}, name);
    const double q = require_param(params, "q", 0.0, true, name);
    if (!(q > 1.0 && q <= 2.0)) {
      throw InvalidParamError(
          "power_well: q must lie in (1, 2]; q > 2 breaks global Holder continuity of the "
          "gradient and q <= 1 breaks differentiability at 0");
    }
    land.family_ = Landscape::Family::PowerWell;
    land.q_ = q;
    land.params_["q"] = q;
    // q * 2^(2-q) is the exact Holder-ratio supremum; pairs straddling 0
    // attain it, so the nominal one-sided constant q would be violated there.
    land.holder_ = {q * std::pow(2.0, 2.0 - q), q - 1.0};
    land.certs_.push_back({(q - 1.0) / q, 1.0 / q, CertScope::Global, {}, 0.0, 0.0});
    land.stationary_points_.push_back({0.0});
  } else if (name == "spliced_quartic") {
    reject_unknown_params(params, {}, name);
    land.family_ = Landscape::Family::SplicedQuartic;
    land.holder_ = {12.0, 1.0};
    land.stationary_points_.push_back({0.0});
    LojasiewiczCert cert{0.75, 0.0, CertScope::Global, {}, 0.0, 0.0};
    cert.zeta = derived_zeta(land, cert.beta, cert.reference_level);
    land.certs_.push_back(cert);
  } else if (name == "double_well") {
    reject_unknown_params(params, {}, name);
    land.family_ = Landscape::Family::DoubleWell;
    land.holder_ = {44.0, 1.0};
    // Exact constants on radius-1/2 balls: the ratio |F - F(p)|^(1/2) / |F'|
    // equals 1/(4|t|) near +/-1 and sqrt(2 - t^2)/(4(1 - t^2)) near 0; both
    // are maximized at the ball boundary.
    land.certs_.push_back({0.5, 0.5, CertScope::Local, {1.0}, 0.5, 0.0});
    land.certs_.push_back({0.5, 0.5, CertScope::Local, {-1.0}, 0.5, 0.0});
    land.certs_.push_back({0.5, std::sqrt(7.0) / 6.0, CertScope::Local, {0.0}, 0.5, 1.0});
    land.stationary_points_ = {{-1.0}, {0.0}, {1.0}};
  } else if (name == "logistic_tail") {
    reject_unknown_params(params, {}, name);
    land.family_ = Landscape::Family::LogisticTail;
    land.holder_ = {0.25, 1.0};
    land.coercive_ = false;
    land.inf_attained_ = false;
  } else if (name == "quantile") {
    reject_unknown_params(params, {"mu"}, name);
    const double mu = require_param(params, "mu", 0.0, true, name);
    if (!(mu > 0.0 && mu < 1.0)) throw InvalidParamError("quantile: mu must lie in (0, 1)");
    land.family_ = Landscape::Family::Quantile;
    land.mu_ = mu;
    land.params_["mu"] = mu;
    land.holder_ = {1.0 / (1.0 - mu), 1.0};
    land.inf_value_ = (1.0 + mu) / 2.0;
    land.certs_.push_back({0.5, std::sqrt((1.0 - mu) / 2.0), CertScope::Local, {mu},
                           std::min(mu, 1.0 - mu), (1.0 + mu) / 2.0});
    land.stationary_points_.push_back({mu});
  } else if (name == "sine_trap") {
    reject_unknown_params(params, {"a"}, name);
    const double a = require_param(params, "a", 0.0, true, name);
    if (!(a > 0.0 && a < 2.0)) throw InvalidParamError("sine_trap: a must lie in (0, 2)");
    land.family_ = Landscape::Family::SineTrap;
    land.a_ = a;
    land.params_["a"] = a;
    land.holder_ = {2.0 + a, 1.0};
    land.stationary_points_.push_back({0.0});
  } else {
    throw CatalogError("unknown landscape '" + name + "'");
  }

  // Internal consistency of global certificates.
  for (const auto& cert : land.certs_) {
    if (cert.scope == CertScope::Global &&
        cert.beta < land.holder_.alpha / (1.0 + land.holder_.alpha) - 1e-15) {
      throw InvalidParamError(land.name_ + ": global certificate beta below alpha/(1+alpha)");
    }
  }
  return land;
}

double lojasiewicz_residual(const Landscape& land, std::size_t cert_index,
                            std::span<const double> theta) {
  if (cert_index >= land.certs().size()) {
    throw DomainError(land.name() + ": certificate index " + std::to_string(cert_index) +
                      " out of range");
  }
  const LojasiewiczCert& cert = land.certs()[cert_index];
  if (cert.scope == CertScope::Local) {
    check_dim("lojasiewicz_residual", theta.size(), land.dim());
    double dist_sq = 0.0;
    for (std::size_t i = 0; i < theta.size(); ++i) dist_sq += sq(theta[i] - cert.point[i]);
    if (std::sqrt(dist_sq) > cert.radius) {
      throw OutOfScopeError(land.name() + ": point outside the certified ball (radius " +
                            std::to_string(cert.radius) + ")");
    }
  }
  return cert.zeta * land.grad_norm(theta) -
         std::pow(std::fabs(land.value(theta) - cert.reference_level), cert.beta);
}

}  // namespace sgdlab

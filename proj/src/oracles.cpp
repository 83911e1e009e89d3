#include "sgdlab/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sgdlab/errors.hpp"

namespace sgdlab {

Oracle::Oracle(const Landscape& land, OracleKind kind, double bias_scale, double noise_level)
    : land_(&land), kind_(kind), bias_scale_(bias_scale), noise_level_(noise_level) {
  if (!(noise_level >= 0.0) || !std::isfinite(noise_level)) {
    throw InvalidParamError("oracle: noise_level must be finite and >= 0");
  }
  if (kind == OracleKind::ScaledBias) {
    if (!(bias_scale > 0.0) || !std::isfinite(bias_scale)) {
      throw InvalidParamError(
          "oracle: scaled_bias needs bias_scale > 0; a nonpositive scale has no positive "
          "correlation constant");
    }
  }
  const double m = static_cast<double>(land.dim());
  const double tau2 = noise_level * noise_level;
  // ||grad F||^2 <= K ((F - inf F) + 1) with K from the gradient growth bound.
  const double K = land.grad_bound_constant();
  switch (kind) {
    case OracleKind::Unbiased:
      constants_ = {K + m * tau2, 1.0, 1.0};
      break;
    case OracleKind::ScaledBias:
      constants_ = {bias_scale * bias_scale * K + m * tau2, bias_scale, bias_scale};
      break;
    case OracleKind::MultiplicativeNoise:
      // E(1 + xi)^2 = 1 + tau^2/3 for xi ~ U[-tau, tau].
      constants_ = {(1.0 + tau2 / 3.0) * K + m * tau2, 1.0, 1.0};
      break;
    case OracleKind::QuantileIndicator: {
      if (land.name() != "quantile") {
        throw InvalidParamError("oracle: quantile_indicator requires the quantile landscape");
      }
      quantile_mu_ = land.params().at("mu");
      // g takes the two values 1 and 1 - 1/(1 - mu) = -mu/(1 - mu).
      const double lo = quantile_mu_ / (1.0 - quantile_mu_);
      constants_ = {std::max(1.0, lo * lo), 1.0, 1.0};
      break;
    }
  }
}

std::vector<double> Oracle::sample_gradient(std::span<const double> theta,
                                            rng::Stream& stream) const {
  std::vector<double> grad = land_->gradient(theta);
  const double f_gap = land_->value(theta) - land_->inf_value();
  std::vector<double> out(theta.size());
  sample_gradient(theta, f_gap, grad, stream, out);
  return out;
}

void Oracle::sample_gradient(std::span<const double> theta, double f_gap,
                             std::span<const double> grad, rng::Stream& stream,
                             std::span<double> out) const {
  const std::size_t m = out.size();
  if (kind_ == OracleKind::QuantileIndicator) {
    const double x = stream.uniform01();
    out[0] = (x > theta[0]) ? 1.0 - 1.0 / (1.0 - quantile_mu_) : 1.0;
    return;
  }
  double scale = 1.0;
  if (kind_ == OracleKind::ScaledBias) scale = bias_scale_;
  if (kind_ == OracleKind::MultiplicativeNoise) {
    scale = 1.0 + stream.uniform(-noise_level_, noise_level_);
  }
  const double sd = noise_level_ * std::sqrt(std::max(f_gap, 0.0) + 1.0);
  for (std::size_t i = 0; i < m; ++i) {
    double gi = scale * grad[i];
    if (noise_level_ > 0.0) gi += sd * stream.gaussian();
    out[i] = gi;
  }
}

std::vector<double> Oracle::bias_map(std::span<const double> theta) const {
  std::vector<double> grad = land_->gradient(theta);
  std::vector<double> out(theta.size());
  bias_map(theta, grad, out);
  return out;
}

void Oracle::bias_map(std::span<const double> theta, std::span<const double> grad,
                      std::span<double> out) const {
  (void)theta;
  // For QuantileIndicator, E[g] = (P(X <= theta) - mu)/(1 - mu) with X
  // uniform, which is exactly grad F(theta); the generic copy covers it.
  const double scale = (kind_ == OracleKind::ScaledBias) ? bias_scale_ : 1.0;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = scale * grad[i];
}

OracleKind oracle_kind_from_name(const std::string& name) {
  if (name == "unbiased") return OracleKind::Unbiased;
  if (name == "scaled_bias") return OracleKind::ScaledBias;
  if (name == "multiplicative_noise") return OracleKind::MultiplicativeNoise;
  if (name == "quantile_indicator") return OracleKind::QuantileIndicator;
  throw CatalogError("unknown oracle kind '" + name + "'");
}

std::string oracle_kind_name(OracleKind kind) {
  switch (kind) {
    case OracleKind::Unbiased: return "unbiased";
    case OracleKind::ScaledBias: return "scaled_bias";
    case OracleKind::MultiplicativeNoise: return "multiplicative_noise";
    case OracleKind::QuantileIndicator: return "quantile_indicator";
  }
  return "unknown";
}

}  // namespace sgdlab

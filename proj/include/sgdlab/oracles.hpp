// Stochastic gradient oracles: one draw of g(X, theta), the exact bias map
// b(theta) = E[g(X, theta)], and the certified (C, kappa, c) constants for
//   E||g||^2 <= C ((F - inf F) + 1),   b . grad F >= kappa ||grad F||^2,
//   ||b|| <= c ||grad F||.
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sgdlab/landscapes.hpp"
#include "sgdlab/rng.hpp"

namespace sgdlab {

enum class OracleKind {
  Unbiased,             // g = grad F + noise
  ScaledBias,           // g = bias_scale * grad F + noise
  MultiplicativeNoise,  // g = (1 + xi) grad F + noise, xi ~ U[-tau, tau]
  QuantileIndicator     // g = 1 - 1{X > theta}/(1 - mu), X ~ U(0, 1)
};

struct OracleConstants {
  double C = 0.0;      // second-moment constant
  double kappa = 0.0;  // correlation lower bound
  double c = 0.0;      // bias norm upper bound
};

// The additive noise in the first three kinds is tau * sqrt(F_gap + 1) * Z
// with Z standard normal per coordinate; its scale matches the growth allowed
// by the second-moment bound so the certified C stays finite.
//
// Draw order per sample is part of the reproducibility contract:
// MultiplicativeNoise consumes one uniform (xi) first, then, when tau > 0,
// one gaussian per coordinate; Unbiased/ScaledBias consume the gaussians
// only; QuantileIndicator consumes exactly one uniform.
class Oracle {
 public:
  // bias_scale is used by ScaledBias only (must be > 0); noise_level is the
  // tau above, ignored by QuantileIndicator whose randomness is intrinsic.
  Oracle(const Landscape& land, OracleKind kind, double bias_scale = 1.0,
         double noise_level = 0.0);

  const Landscape& landscape() const { return *land_; }
  OracleKind kind() const { return kind_; }
  double bias_scale() const { return bias_scale_; }
  double noise_level() const { return noise_level_; }
  const OracleConstants& constants() const { return constants_; }

  // One sample of g(X, theta); evaluates F and grad F at theta internally.
  std::vector<double> sample_gradient(std::span<const double> theta, rng::Stream& stream) const;

  // Fast path for the driver loop: f_gap = F(theta) - inf F and grad are
  // already available.  theta is still needed by QuantileIndicator.
  void sample_gradient(std::span<const double> theta, double f_gap,
                       std::span<const double> grad, rng::Stream& stream,
                       std::span<double> out) const;

  // b(theta) in closed form.
  std::vector<double> bias_map(std::span<const double> theta) const;
  void bias_map(std::span<const double> theta, std::span<const double> grad,
                std::span<double> out) const;

 private:
  const Landscape* land_;
  OracleKind kind_;
  double bias_scale_;
  double noise_level_;
  double quantile_mu_ = 0.0;  // QuantileIndicator only
  OracleConstants constants_;
};

OracleKind oracle_kind_from_name(const std::string& name);
std::string oracle_kind_name(OracleKind kind);

}  // namespace sgdlab

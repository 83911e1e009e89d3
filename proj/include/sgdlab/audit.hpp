// Statistical estimation of assumption constants from black-box access:
// gradient smoothness (L, alpha), the gradient-dominance certificate
// (beta, zeta), and the oracle moment/bias constants (C, kappa, c).
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sgdlab/oracles.hpp"
#include "sgdlab/rng.hpp"
#include "sgdlab/value_grad.hpp"

namespace sgdlab::audit {

struct Box {
  std::vector<double> lo, hi;
  static Box symmetric(int dim, double halfwidth);
};

struct HolderEstimate {
  double L_hat = 0.0;
  double alpha_hat = 0.0;
  int n_pairs = 0;          // usable sampled pairs
  double max_violation = 0.0;  // max of ||dgrad|| - L_hat ||dtheta||^alpha_hat (<= 0)
};

struct LojasiewiczEstimate {
  double beta_hat = 0.0;
  double zeta_hat = 0.0;
  double r2 = 0.0;
  double radius = 0.0;
  int n_used = 0;
  int n_discarded = 0;  // points with F = f_star or vanishing gradient
};

struct AbcEstimate {
  double C_hat = 0.0;
  double kappa_hat = 0.0;
  double c_hat = 0.0;
  int n_points = 0;  // points actually used
  int n_draws = 0;
  int violations = 0;               // points with nonpositive correlation ratio
  std::vector<std::size_t> skipped;  // stationary points excluded from ratios
};

struct AuditReport {
  HolderEstimate holder;
  LojasiewiczEstimate lojasiewicz;
  AbcEstimate abc;
};

// Fits log||grad F(x') - grad F(x)|| against log||x' - x|| over random pairs
// (log-uniform anchor radii about the box center, log-uniform separations).
// The slope comes from the per-bin upper envelope so mixtures of smooth and
// kink regions report the binding exponent; L_hat is the empirical sup ratio,
// so the fitted pair (L_hat, alpha_hat) has zero violations on the sample.
HolderEstimate estimate_holder(const ValueGrad& vg, const Box& box, int n_pairs,
                               rng::Stream& stream);

// Fits log|F - f_star| against log||grad F|| in the punctured ball around
// theta_star; beta_hat is the inverse slope, zeta_hat the empirical sup of
// |F - f_star|^beta_hat / ||grad F||.
LojasiewiczEstimate estimate_lojasiewicz(const ValueGrad& vg,
                                         std::span<const double> theta_star, double f_star,
                                         double radius, int n_points, rng::Stream& stream);

// Monte Carlo check of the oracle constants over the given points:
// C_hat = max second moment ratio, kappa_hat = min correlation ratio,
// c_hat = max bias-to-gradient ratio.  Stationary points are skipped (their
// ratios are undefined) and reported.
AbcEstimate check_abc(const Oracle& orc, const std::vector<std::vector<double>>& theta_points,
                      int n_draws, rng::Stream& stream);

}  // namespace sgdlab::audit

#include "sgdlab/audit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sgdlab/errors.hpp"

namespace sgdlab::audit {

namespace {

void random_direction(rng::Stream& stream, std::span<double> out) {
  if (out.size() == 1) {
    out[0] = (stream.uniform01() < 0.5) ? -1.0 : 1.0;
    return;
  }
  double norm2 = 0.0;
  do {
    norm2 = 0.0;
    for (double& x : out) {
      x = stream.gaussian();
      norm2 += x * x;
    }
  } while (norm2 == 0.0);
  const double inv = 1.0 / std::sqrt(norm2);
  for (double& x : out) x *= inv;
}

double log_uniform(rng::Stream& stream, double lo, double hi) {
  return lo * std::exp(stream.uniform01() * std::log(hi / lo));
}

struct LsqFit {
  double slope = 0.0;
  double r2 = 1.0;
  bool usable = false;
};

LsqFit least_squares(const std::vector<double>& xs, const std::vector<double>& ys) {
  LsqFit fit;
  const double count = static_cast<double>(xs.size());
  if (xs.size() < 2) return fit;
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= count;
  my /= count;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    syy += (ys[i] - my) * (ys[i] - my);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (sxx == 0.0) return fit;
  fit.slope = sxy / sxx;
  fit.r2 = (syy > 0.0) ? (sxy * sxy) / (sxx * syy) : 1.0;
  fit.usable = true;
  return fit;
}

}  // namespace

Box Box::symmetric(int dim, double halfwidth) {
  Box box;
  box.lo.assign(static_cast<std::size_t>(dim), -halfwidth);
  box.hi.assign(static_cast<std::size_t>(dim), halfwidth);
  return box;
}

HolderEstimate estimate_holder(const ValueGrad& vg, const Box& box, int n_pairs,
                               rng::Stream& stream) {
  if (n_pairs < 100) throw InvalidParamError("estimate_holder: need n_pairs >= 100");
  const std::size_t m = box.lo.size();
  if (m == 0 || box.hi.size() != m || m != static_cast<std::size_t>(vg.dim)) {
    throw InvalidParamError("estimate_holder: box dimension mismatch");
  }
  double min_half = std::numeric_limits<double>::infinity();
  std::vector<double> center(m);
  for (std::size_t i = 0; i < m; ++i) {
    if (!(box.lo[i] < box.hi[i])) {
      throw InvalidParamError("estimate_holder: box must have positive extent");
    }
    center[i] = 0.5 * (box.lo[i] + box.hi[i]);
    min_half = std::min(min_half, 0.5 * (box.hi[i] - box.lo[i]));
  }

  std::vector<double> theta(m), theta_p(m), dir(m), ga(m), gb(m);
  std::vector<double> log_h, log_d;
  log_h.reserve(static_cast<std::size_t>(n_pairs));
  log_d.reserve(static_cast<std::size_t>(n_pairs));
  for (int it = 0; it < n_pairs; ++it) {
    random_direction(stream, dir);
    const double r = log_uniform(stream, 1e-6 * min_half, min_half);
    for (std::size_t i = 0; i < m; ++i) {
      theta[i] = std::clamp(center[i] + r * dir[i], box.lo[i], box.hi[i]);
    }
    random_direction(stream, dir);
    const double h = log_uniform(stream, 1e-5 * min_half, min_half);
    bool inside = true;
    for (std::size_t i = 0; i < m; ++i) {
      theta_p[i] = theta[i] + h * dir[i];
      inside = inside && theta_p[i] >= box.lo[i] && theta_p[i] <= box.hi[i];
    }
    if (!inside) {
      for (std::size_t i = 0; i < m; ++i) {
        theta_p[i] = std::clamp(theta[i] - h * dir[i], box.lo[i], box.hi[i]);
      }
    }
    double h2 = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double d = theta_p[i] - theta[i];
      h2 += d * d;
    }
    if (h2 == 0.0) continue;
    vg.gradient(theta, ga);
    vg.gradient(theta_p, gb);
    double d2 = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double d = gb[i] - ga[i];
      d2 += d * d;
    }
    if (d2 == 0.0) continue;
    log_h.push_back(0.5 * std::log(h2));
    log_d.push_back(0.5 * std::log(d2));
  }
  if (log_h.size() < 10) {
    throw DegenerateSampleError(
        "estimate_holder: gradient differences vanish on the sample (constant gradient?)");
  }

  // Upper envelope: best (largest) gradient difference per separation bin.
  constexpr int kBins = 25;
  const auto [hmin_it, hmax_it] = std::minmax_element(log_h.begin(), log_h.end());
  const double hmin = *hmin_it, hmax = *hmax_it;
  if (!(hmax > hmin)) {
    throw DegenerateSampleError("estimate_holder: degenerate separation range");
  }
  std::vector<double> bin_h(kBins), bin_d(kBins, -std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < log_h.size(); ++i) {
    int b = static_cast<int>((log_h[i] - hmin) / (hmax - hmin) * kBins);
    b = std::clamp(b, 0, kBins - 1);
    if (log_d[i] > bin_d[b]) {
      bin_d[b] = log_d[i];
      bin_h[b] = log_h[i];
    }
  }
  std::vector<double> xs, ys;
  for (int b = 0; b < kBins; ++b) {
    if (bin_d[b] > -std::numeric_limits<double>::infinity()) {
      xs.push_back(bin_h[b]);
      ys.push_back(bin_d[b]);
    }
  }
  const LsqFit fit = least_squares(xs, ys);
  if (!fit.usable || !(fit.slope > 0.0)) {
    throw DegenerateSampleError("estimate_holder: no increasing smoothness signal");
  }

  HolderEstimate est;
  est.alpha_hat = std::min(fit.slope, 1.0);
  double max_log_ratio = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < log_h.size(); ++i) {
    max_log_ratio = std::max(max_log_ratio, log_d[i] - est.alpha_hat * log_h[i]);
  }
  est.L_hat = std::exp(max_log_ratio);
  est.n_pairs = static_cast<int>(log_h.size());
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < log_h.size(); ++i) {
    worst = std::max(worst,
                     std::exp(log_d[i]) - est.L_hat * std::exp(est.alpha_hat * log_h[i]));
  }
  est.max_violation = worst;
  return est;
}

LojasiewiczEstimate estimate_lojasiewicz(const ValueGrad& vg,
                                         std::span<const double> theta_star, double f_star,
                                         double radius, int n_points, rng::Stream& stream) {
  if (n_points < 100) throw InvalidParamError("estimate_lojasiewicz: need n_points >= 100");
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw InvalidParamError("estimate_lojasiewicz: radius must be finite and > 0");
  }
  const std::size_t m = theta_star.size();
  if (m != static_cast<std::size_t>(vg.dim)) {
    throw InvalidParamError("estimate_lojasiewicz: theta_star dimension mismatch");
  }
  std::vector<double> theta(m), dir(m), grad(m);
  std::vector<double> log_g, log_x;
  int discarded = 0;
  for (int it = 0; it < n_points; ++it) {
    random_direction(stream, dir);
    const double r = log_uniform(stream, 1e-6 * radius, radius);
    for (std::size_t i = 0; i < m; ++i) theta[i] = theta_star[i] + r * dir[i];
    const double x = std::fabs(vg.value(theta) - f_star);
    vg.gradient(theta, grad);
    double g2 = 0.0;
    for (double gi : grad) g2 += gi * gi;
    if (x == 0.0 || g2 == 0.0) {
      ++discarded;
      continue;
    }
    log_x.push_back(std::log(x));
    log_g.push_back(0.5 * std::log(g2));
  }
  if (discarded * 2 > n_points) {
    throw InsufficientDataError(
        "estimate_lojasiewicz: more than half the sampled points sit at the reference level");
  }
  const LsqFit fit = least_squares(log_g, log_x);
  if (!fit.usable || !(fit.slope > 0.0)) {
    throw InsufficientDataError("estimate_lojasiewicz: no usable gradient-value relation");
  }
  LojasiewiczEstimate est;
  est.beta_hat = 1.0 / fit.slope;
  est.r2 = std::clamp(fit.r2, 0.0, 1.0);
  est.radius = radius;
  est.n_used = static_cast<int>(log_x.size());
  est.n_discarded = discarded;
  double max_log = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < log_x.size(); ++i) {
    max_log = std::max(max_log, est.beta_hat * log_x[i] - log_g[i]);
  }
  est.zeta_hat = std::exp(max_log);
  return est;
}

AbcEstimate check_abc(const Oracle& orc, const std::vector<std::vector<double>>& theta_points,
                      int n_draws, rng::Stream& stream) {
  if (n_draws < 1000) throw InvalidParamError("check_abc: need n_draws >= 1000");
  if (theta_points.empty()) throw InvalidParamError("check_abc: need at least one point");
  const Landscape& land = orc.landscape();
  const std::size_t m = static_cast<std::size_t>(land.dim());

  AbcEstimate est;
  est.n_draws = n_draws;
  est.C_hat = -std::numeric_limits<double>::infinity();
  est.kappa_hat = std::numeric_limits<double>::infinity();
  est.c_hat = -std::numeric_limits<double>::infinity();

  std::vector<double> grad(m), g(m), mean(m);
  for (std::size_t p = 0; p < theta_points.size(); ++p) {
    const std::vector<double>& theta = theta_points[p];
    if (theta.size() != m) throw InvalidParamError("check_abc: point dimension mismatch");
    const double f_gap = land.value(theta) - land.inf_value();
    land.gradient(theta, grad);
    double gnorm2 = 0.0;
    for (double gi : grad) gnorm2 += gi * gi;
    if (gnorm2 == 0.0) {
      est.skipped.push_back(p);
      continue;
    }
    std::fill(mean.begin(), mean.end(), 0.0);
    double m2 = 0.0;
    for (int d = 0; d < n_draws; ++d) {
      orc.sample_gradient(theta, f_gap, grad, stream, g);
      for (std::size_t i = 0; i < m; ++i) {
        mean[i] += g[i];
        m2 += g[i] * g[i];
      }
    }
    const double inv = 1.0 / static_cast<double>(n_draws);
    m2 *= inv;
    double dot = 0.0, bnorm2 = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      mean[i] *= inv;
      dot += mean[i] * grad[i];
      bnorm2 += mean[i] * mean[i];
    }
    const double kappa_p = dot / gnorm2;
    est.C_hat = std::max(est.C_hat, m2 / (f_gap + 1.0));
    est.kappa_hat = std::min(est.kappa_hat, kappa_p);
    est.c_hat = std::max(est.c_hat, std::sqrt(bnorm2 / gnorm2));
    if (kappa_p <= 0.0) ++est.violations;
    ++est.n_points;
  }
  if (est.n_points == 0) {
    throw InsufficientDataError("check_abc: every supplied point was stationary");
  }
  return est;
}

}  // namespace sgdlab::audit

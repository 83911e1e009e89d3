// Numeric inequality kernels.  Residual convention everywhere: bound minus
// quantity, so a valid certificate yields a nonnegative result.
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sgdlab/schedules.hpp"
#include "sgdlab/value_grad.hpp"

namespace sgdlab::kernels {

// L/(1+alpha) ||d||^{1+alpha} - |F(theta') - F(theta) - grad F(theta).d|
// with d = theta' - theta.
double descent_gap(const ValueGrad& vg, double L, double alpha,
                   std::span<const double> theta, std::span<const double> theta_prime);

// ((1+alpha) L^{1/alpha} / alpha) (F(theta) - inf_value)
//   - ||grad F(theta)||^{(1+alpha)/alpha}.
double grad_bound_gap(const ValueGrad& vg, double L, double alpha, double inf_value,
                      std::span<const double> theta);

struct CrossingPair {
  std::int64_t chi = 0;  // last index below ell_minus before the jump
  std::int64_t psi = 0;  // first index above ell_plus after chi
};

// All (chi, psi) with u[chi] < ell_minus, u[psi] > ell_plus, and every value
// strictly between the two indices inside [ell_minus, ell_plus].
std::vector<CrossingPair> extract_crossings(std::span<const double> u, double ell_minus,
                                            double ell_plus);

// a_n = gamma_n^{-alpha} sum_{k=1}^{n} gamma_k^{1+alpha} exp(-mu sum_{j=k+1}^{n} gamma_j),
// by the stable forward recursion a_n = (gamma_{n-1}/gamma_n)^alpha e^{-mu gamma_n} a_{n-1}
// + gamma_n.  When the schedule has a plateau constant gamma* (gamma_n ~
// gamma*/n), the limit 1/(mu - alpha/gamma*) requires mu gamma* > alpha.
double gamma_series(const Schedule& sch, double mu, double alpha, std::int64_t n);

// (y^{1-sigma} - x^{1-sigma})/(1-sigma) - (y - x)/y^sigma for 0 <= x <= y,
// y > 0, sigma in (0,1).
double concave_gap(double x, double y, double sigma);

// (ln y - ln x) - (y - x)/y for 0 < x <= y.
double log_concave_gap(double x, double y);

}  // namespace sgdlab::kernels

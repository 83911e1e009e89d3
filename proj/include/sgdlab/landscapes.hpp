#pragma once

// Catalog of closed-form loss landscapes with certified smoothness and
// Lojasiewicz constants.  Landscapes are immutable after construction and
// safe to evaluate concurrently.

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "sgdlab/errors.hpp"

namespace sgdlab {

// Gradient regularity data: ||grad F(x) - grad F(y)|| <= L * ||x - y||^alpha.
struct HolderData {
  double L = 0.0;        // > 0
  double alpha = 0.0;    // in (0, 1]
};

enum class CertScope { Global, Local };

// Gradient-domination certificate: |F(t) - reference_level|^beta <= zeta * ||grad F(t)||
// on the certified region (everywhere for Global, a ball for Local).
struct LojasiewiczCert {
  double beta = 0.0;               // in (0, 1)
  double zeta = 0.0;               // > 0
  CertScope scope = CertScope::Global;
  std::vector<double> point;       // center of the certified ball (Local only)
  double radius = 0.0;             // ball radius (Local only)
  double reference_level = 0.0;    // F at the certified point; inf F when Global
};

class Landscape {
 public:
  double value(std::span<const double> theta) const;
  void gradient(std::span<const double> theta, std::span<double> out) const;
  std::vector<double> gradient(std::span<const double> theta) const;
  double grad_norm(std::span<const double> theta) const;

  const std::string& name() const { return name_; }
  int dim() const { return dim_; }
  const HolderData& holder() const { return holder_; }
  double inf_value() const { return inf_value_; }
  // True when inf F is attained at a finite point; logistic_tail attains it
  // only in the limit ||theta|| -> infinity.
  bool inf_attained() const { return inf_attained_; }
  bool coercive() const { return coercive_; }
  const std::vector<LojasiewiczCert>& certs() const { return certs_; }
  const std::vector<std::vector<double>>& stationary_points() const { return stationary_points_; }
  // Constructor parameters as passed to catalog() (with defaults filled in).
  const std::map<std::string, double>& params() const { return params_; }

  // Squared-gradient transfer constant: ||grad F||^2 <= value * ((F - inf F) + 1),
  // derived from the Holder data.
  double grad_bound_constant() const;

 private:
  enum class Family { Quadratic, PowerWell, SplicedQuartic, DoubleWell, LogisticTail, Quantile, SineTrap };

  friend Landscape catalog(const std::string&, const std::map<std::string, double>&);

  Family family_ = Family::Quadratic;
  double q_ = 0.0;    // power_well exponent
  double mu_ = 0.0;   // quantile level
  double a_ = 0.0;    // sine_trap amplitude

  std::string name_;
  int dim_ = 1;
  HolderData holder_;
  double inf_value_ = 0.0;
  bool inf_attained_ = true;
  bool coercive_ = true;
  std::vector<LojasiewiczCert> certs_;
  std::vector<std::vector<double>> stationary_points_;
  std::map<std::string, double> params_;

  double value1(double t) const;   // scalar families
  double grad1(double t) const;
};

// Builds a catalog entry.  Known names: quadratic (params: dim), power_well
// (params: q), spliced_quartic, double_well, logistic_tail, quantile
// (params: mu), sine_trap (params: a).
Landscape catalog(const std::string& name, const std::map<std::string, double>& params = {});

// zeta * ||grad F(theta)|| - |F(theta) - reference_level|^beta for the given
// certificate; nonnegative iff the certificate holds at theta.
double lojasiewicz_residual(const Landscape& land, std::size_t cert_index,
                            std::span<const double> theta);

}  // namespace sgdlab

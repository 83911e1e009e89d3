// Black-box objective interface shared by the numeric kernels and the
// auditor: value and gradient callables plus the ambient dimension.
#pragma once

#include <functional>
#include <span>
#include <vector>

namespace sgdlab {

class Landscape;

struct ValueGrad {
  int dim = 1;
  std::function<double(std::span<const double>)> value;
  std::function<void(std::span<const double>, std::span<double>)> gradient;

  std::vector<double> grad_at(std::span<const double> theta) const {
    std::vector<double> g(theta.size());
    gradient(theta, g);
    return g;
  }
};

ValueGrad make_value_grad(const Landscape& land);

}  // namespace sgdlab

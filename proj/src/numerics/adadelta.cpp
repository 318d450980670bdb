#include "wug/numerics/adadelta.hpp"

#include <cmath>
#include <string>

#include "wug/errors.hpp"

namespace wug::num {

void adadelta_step(Tensor& theta, const Tensor& grad, AdadeltaState& state,
                   const AdadeltaConfig& config, std::string_view name) {
  if (theta.shape() != grad.shape() || theta.shape() != state.sq_grad.shape() ||
      theta.shape() != state.sq_update.shape()) {
    throw DimensionError("adadelta_step: shape mismatch for " + std::string(name));
  }
  if (!grad.all_finite()) {
    throw NumericError("adadelta_step: non-finite gradient for " + std::string(name));
  }
  const double rho = config.rho;
  const double eps = config.epsilon;
  for (std::size_t i = 0; i < theta.size(); ++i) {
    const double g = grad[i];
    double& eg = state.sq_grad[i];
    double& ex = state.sq_update[i];
    eg = rho * eg + (1.0 - rho) * g * g;
    const double dx = -std::sqrt(ex + eps) / std::sqrt(eg + eps) * g;
    ex = rho * ex + (1.0 - rho) * dx * dx;
    theta[i] += dx;
  }
}

}  // namespace wug::num

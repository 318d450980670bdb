#pragma once

#include <string_view>

#include "wug/numerics/tensor.hpp"

namespace wug::num {

struct AdadeltaConfig {
  double rho = 0.9;
  double epsilon = 1e-6;
};

// Running averages of squared gradients and squared updates for one parameter.
struct AdadeltaState {
  Tensor sq_grad;
  Tensor sq_update;

  AdadeltaState() = default;
  explicit AdadeltaState(const Shape& shape) : sq_grad(shape, 0.0), sq_update(shape, 0.0) {}
};

// One elementwise Adadelta update (Zeiler 2012), no global learning rate:
//   E[g^2]  <- rho E[g^2] + (1 - rho) g^2
//   dx      <- -sqrt(E[dx^2] + eps) / sqrt(E[g^2] + eps) * g
//   E[dx^2] <- rho E[dx^2] + (1 - rho) dx^2
//   theta   <- theta + dx
// Throws NumericError naming `name` if the gradient is not finite.
void adadelta_step(Tensor& theta, const Tensor& grad, AdadeltaState& state,
                   const AdadeltaConfig& config, std::string_view name = "parameter");

}  // namespace wug::num

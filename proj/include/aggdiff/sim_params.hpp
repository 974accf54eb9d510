#pragma once

#include <cstdint>

namespace aggdiff {

// Parameters of d/dt rho = eps*Lap(rho^m) + div(rho * grad(W conv rho)).
struct SimParams {
  double m = 3.0;           // nonlinear diffusion exponent, > 1
  double epsilon = 1.0;     // diffusion strength
  double dt = 0.0;          // time step request; 0 means "use dx"
  double newton_tol = 1e-10;      // residual sup-norm
  int newton_max_iter = 50;
  double steady_tol = 1e-7;       // sup|rho^{n+1}-rho^n| / dt_used
  std::int64_t max_steps = 200000;
  double cfl_safety = 0.9;
};

}  // namespace aggdiff

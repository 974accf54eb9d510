#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

#include "aggdiff/convolution.hpp"
#include "aggdiff/energy.hpp"
#include "aggdiff/grid.hpp"
#include "aggdiff/sim_params.hpp"

namespace aggdiff {

struct StepError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct PositivityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct StepReport {
  double dt_used = 0.0;
  double mass_drift = 0.0;   // mass(after) - mass(before)
  double min_value = 0.0;    // most negative cell before the final clip
  int newton_iters = 0;      // max over line solves
  double energy = 0.0;       // E after the step
  std::vector<double> newton_residuals;  // 1D: sup-norm per iteration
};

// One IMEX step: explicit conservative upwind transport with velocity
// u = -grad(W conv rho) and minmod-limited linear reconstruction of the
// interface density, then implicit backward-Euler nonlinear diffusion
// rho - dt*eps*Lap_h(rho^m) = rho* solved by Newton (cyclic tridiagonal in
// 1D, dimension-split line solves in 2D). dt is reduced by the CFL guard
// dt_used = min(dt, 0.5*cfl_safety*dx / sum_axes max|u|); the factor 1/2
// keeps the reconstructed update positivity-preserving. Values in
// [-1e-12, 0) are clipped to 0; anything below -1e-12 throws
// PositivityError; Newton non-convergence throws StepError carrying the
// residual norm.
StepReport step(DensityField& f, const KernelStencil& s, const SimParams& p);

struct TrajectoryRow {
  std::int64_t step = 0;
  double time = 0.0;
  double mass = 0.0;
  double max_density = 0.0;
  double energy = 0.0;
  int newton_iters = 0;
};

struct Trajectory {
  std::vector<TrajectoryRow> rows;
  bool converged = false;
  double final_residual = 0.0;  // sup|delta rho| / dt_used at the last step
  std::int64_t steps = 0;
};

using SnapshotHook =
    std::function<void(std::int64_t step, const DensityField&)>;

// Steps until sup|rho^{n+1}-rho^n|/dt_used < steady_tol or max_steps; hitting
// max_steps is flagged (converged = false), not an error.
Trajectory run_to_stationary(DensityField& f, const KernelStencil& s,
                             const SimParams& p,
                             const SnapshotHook& hook = nullptr);

void write_trajectory_csv(const Trajectory& t, const std::string& path);

// Backward-Euler nonlinear diffusion line solve (periodic):
// rho_i - a/dx^2 * (g_{i+1} - 2 g_i + g_{i-1}) = b_i with g = max(rho,0)^m.
// Exposed for the dense-oracle tests; returns iterations taken and appends
// residual sup-norms to history when given.
int solve_diffusion_line(std::vector<double>& rho, const std::vector<double>& b,
                         double a_over_dx2, double m, double tol, int max_iter,
                         std::vector<double>* history = nullptr);

}  // namespace aggdiff

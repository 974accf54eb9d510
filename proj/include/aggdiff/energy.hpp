#pragma once

#include "aggdiff/convolution.hpp"
#include "aggdiff/grid.hpp"
#include "aggdiff/sim_params.hpp"

namespace aggdiff {

// E[rho] = eps/(m-1) * int rho^m  +  1/2 * int rho (W conv rho).
// The first term is >= 0, the second <= 0 for attractive kernels.
struct EnergyBreakdown {
  double entropy = 0.0;
  double interaction = 0.0;
  double total = 0.0;
};

EnergyBreakdown energy(const DensityField& f, const KernelStencil& s,
                       const SimParams& p);

// Lambda(x) = m*eps/(m-1) * f(x)^{m-1} + (W conv f)(x); constant on each
// support component of a stationary state.
DensityField euler_lagrange_field(const DensityField& f,
                                  const KernelStencil& s, const SimParams& p);

// Cells of a component whose whole distance-dx neighborhood lies in the
// component and whose density exceeds 10% of the component max.
std::vector<int> component_interior(const DensityField& f,
                                    const std::vector<int>& component_cells);

// Mean, standard deviation, and max |Lambda - mean| of a cell set.
struct FlatnessStats {
  double mean = 0.0;
  double std_deviation = 0.0;
  double max_deviation = 0.0;
  int cells = 0;
};
FlatnessStats flatness(const DensityField& lambda,
                       const std::vector<int>& cells);

// Diffusion-dominance functional whose sign classifies stationary states:
// D[rho] = (2/M) E[rho] + eps*(m-2)/(M*(m-1)) * int rho^m.
double diffusion_dominance(const DensityField& f, const KernelStencil& s,
                           const SimParams& p);

}  // namespace aggdiff

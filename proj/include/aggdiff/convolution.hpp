#pragma once

#include "aggdiff/grid.hpp"
#include "aggdiff/kernels.hpp"

namespace aggdiff {

// Discrete convolution weights W(j*dx)*dx^d on integer offsets |j_a| <= reach.
// 1D: weights[j + reach]. 2D: weights[(jy + reach)*(2*reach+1) + (jx + reach)]
// with entries beyond the truncation radius exactly zero. Symmetric under
// offset negation by construction.
struct KernelStencil {
  int dims = 1;
  int reach = 0;
  double dx = 0.0;
  std::vector<double> weights;

  int side() const { return 2 * reach + 1; }
  double w1(int j) const { return weights[size_t(j + reach)]; }
  double w2(int jx, int jy) const {
    return weights[size_t(jy + reach) * side() + size_t(jx + reach)];
  }
  double weight_sum() const;  // = -kernel_l1_norm on the same lattice
};

// truncation defaults to the kernel's effective radius (|omega| < 1e-12);
// compact kernels must not be truncated below their support radius.
KernelStencil build_stencil(const Kernel& k, double dx, int dims);
KernelStencil build_stencil(const Kernel& k, double dx, int dims,
                            double truncation);

enum class ConvolvePath { automatic, direct, transform };

// V = W * f on the periodic grid. Direct lattice sum is the definition; the
// FFT path must agree with it to 1e-10 relative and is selected automatically
// above 256 cells per axis. Throws std::invalid_argument on dims/dx mismatch
// or when the stencil does not fit the grid (side > cells per axis).
DensityField convolve(const KernelStencil& s, const DensityField& f,
                      ConvolvePath path = ConvolvePath::automatic);

// Face-centered advection velocity u_{i+1/2} = -(V_{i+1} - V_i)/dx along the
// given axis (0 = x, 1 = y); entry i holds the face between cells i and i+1
// (periodic), stored on the same shape as V.
std::vector<double> face_velocity(const DensityField& V, int axis);

}  // namespace aggdiff

#pragma once

#include <functional>
#include <limits>
#include <string>
#include <vector>

namespace aggdiff {

enum class KernelKind { compact, unbounded };

// Radial interaction kernel W(x) = omega(||x||). Attractive throughout:
// omega <= 0 and omega' >= 0 on (0, support_radius).
struct Kernel {
  std::string name;
  std::function<double(double)> profile;     // omega(r), r >= 0
  std::function<double(double)> derivative;  // omega'(r), r > 0
  double support_radius = 0.0;               // +inf for unbounded kinds
  int dimension = 1;
  KernelKind kind = KernelKind::compact;
  double l1_norm = 0.0;  // reference ||W||_L1, adaptive quadrature of profile

  bool compact() const { return kind == KernelKind::compact; }
};

Kernel make_bump_kernel(int dimension = 1);
Kernel make_exponential_kernel(int dimension = 1);
Kernel make_parabola_kernel(int dimension = 1);

// Tabulated kernel from a 2-column whitespace file (r, omega(r)); r strictly
// increasing from 0, linear interpolation between samples, zero beyond the
// last r. Throws std::runtime_error naming the offending line on bad input.
Kernel make_tabulated_kernel(const std::string& path, int dimension = 1);

struct KernelCheck {
  bool monotone = false;       // omega' >= 0 on the sampled radii
  bool nonpositive = false;    // omega <= 0 everywhere sampled
  bool vanishes = false;       // compact: omega = omega' = 0 beyond support
  double c_omega = 0.0;        // max omega'(r) * r^{d-1} on (0, min(1,R)]
  bool c_omega_finite = false;
  bool ok() const { return monotone && nonpositive && vanishes && c_omega_finite; }
};

// Samples the profile on a geometric+uniform radius set; samples >= 16.
// Throws std::invalid_argument on samples < 16 and std::runtime_error naming
// the radius if the profile evaluates non-finite.
KernelCheck validate_kernel(const Kernel& k, int samples = 64);

// Midpoint lattice sum sum_j |W(j*dx)| * dx^d over ||j*dx|| <= radius_cap —
// the same lattice the convolution stencil uses. Throws std::invalid_argument
// when dx >= 2*support_radius (stencil too coarse to see the kernel) or when
// an unbounded kernel is capped below radius 30.
double kernel_l1_norm(const Kernel& k, double dx, double radius_cap);
double kernel_l1_norm(const Kernel& k, double dx);  // cap = effective radius

// Radius beyond which |omega| < eps_abs (support_radius for compact kernels).
double effective_radius(const Kernel& k, double eps_abs = 1e-12);

}  // namespace aggdiff

#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "aggdiff/kernels.hpp"

namespace aggdiff {

struct EventBoundaryError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Finite union of disjoint open intervals on the line, each stored as
// (center offset c from the anchor, half-width r > 0), sorted left to right.
struct Interval {
  double c = 0.0;
  double r = 0.0;
  double left() const { return c - r; }
  double right() const { return c + r; }
};

struct IntervalUnion {
  double anchor = 0.0;
  std::vector<Interval> intervals;

  double measure() const;
  bool contains(double x) const;  // x in absolute coordinates
  // Throws std::invalid_argument when intervals overlap or are unsorted.
  void validate() const;
};

// Continuous symmetrization: every interval's center moves toward the anchor
// at unit speed and stops there; intervals that come to share an endpoint
// merge into their union (same measure) and the motion restarts. Implemented
// by exact event arithmetic — no time discretization. Large tau is fine; the
// motion ends after finitely many events.
IntervalUnion symmetrize_union(const IntervalUnion& u, double tau);

// Piecewise-constant nonnegative function described by its superlevel sets:
// f = sum_k (h_k - h_{k-1}) * indicator(levels[k]), h_0 = 0. Input layers are
// nested; evolved layers under a height-dependent speed may lose nesting, the
// weighted sum above stays the meaning.
struct LayerFunction {
  double anchor = 0.0;
  std::vector<double> heights;        // strictly increasing, > 0
  std::vector<IntervalUnion> levels;  // same length as heights

  double value_at(double x) const;
  double integral() const;
  void validate() const;  // heights ordered, each level valid, input nesting
};

// Build the layer decomposition of grid samples: cell i covers
// [x0 + i*dx - dx/2, x0 + i*dx + dx/2), value values[i] >= 0.
LayerFunction layers_from_samples(const std::vector<double>& values, double dx,
                                  double x0, double anchor);

// Speed profile v(h) = 1 for h >= h0, (h/h0)^{m-1} below: slow layers near
// the degenerate height. Used as the optional speed argument below.
std::function<double(double)> plateau_speed(double h0, double m);

// Layer-cake symmetrization: level k evolves by symmetrize_union for the
// effective time v(h_k) * tau (v = 1 when speed is null).
LayerFunction symmetrize_function(
    const LayerFunction& f, double tau,
    const std::function<double(double)>& speed = nullptr);

// Even 1D interaction kernel K with K' < 0 on (0, R) and K' = 0 beyond; the
// derivative callable may be empty, in which case central differences with
// step 1e-6*R are used.
struct Kernel1D {
  std::function<double(double)> K;
  std::function<double(double)> Kp;
  double R = 0.0;

  double deriv(double z) const;
};

// Planar slice of a radial kernel at offset l: K_l(z) = -omega(sqrt(z^2+l^2))/2
// with R = sqrt(1 - l^2). Requires a compact kernel of unit support radius;
// throws std::domain_error for l >= 1.
Kernel1D make_k_slice(const Kernel& k, double l);

// I_K(tau) = int int S^tau(u1)(a) S^tau(u2)(b) K(a-b) db da for indicator
// densities of the two unions, adaptive quadrature at 1e-9 relative.
double interaction_energy(const IntervalUnion& u1, const IntervalUnion& u2,
                          const Kernel1D& K, double tau);

// One-sided (right) derivative of I_K at tau for single-interval unions,
// computed in closed form from K' over the moved rectangle and, separately,
// by Richardson-extrapolated forward differences. The two must agree to 1e-6
// relative; both are returned. Throws EventBoundaryError when tau coincides
// with a center-arrival event (the derivative may jump there) and
// std::invalid_argument when a union has more than one interval.
struct DerivativePair {
  double analytic = 0.0;
  double finite_difference = 0.0;
};
DerivativePair interaction_derivative(const IntervalUnion& u1,
                                      const IntervalUnion& u2,
                                      const Kernel1D& K, double tau);

// The closed-form half of interaction_derivative alone; much cheaper when no
// cross-check is wanted (randomized sweeps).
double interaction_derivative_analytic(const IntervalUnion& u1,
                                       const IntervalUnion& u2,
                                       const Kernel1D& K, double tau);

// min of the three admissibility margins; positive on tuples satisfying the
// separation conditions.
double phi(double c1, double r1, double c2, double r2, double R);

// Claimed quantitative floor for the derivative at tau = 0 on admissible
// opposite-sign tuples: phi/6 times the smallest slope magnitude of K on
// [R/(3*sqrt 2), R/sqrt 2].
double derivative_lower_bound(double c1, double r1, double c2, double r2,
                              const Kernel1D& K);

// Interaction part of the energy along the symmetrization flow,
// tau -> 1/2 int int f_tau(x) f_tau(y) omega(|x-y|) dy dx on a tau grid.
std::vector<std::pair<double, double>> energy_decrease_demo(
    const LayerFunction& f, const Kernel& k, double tau_max, int points);

}  // namespace aggdiff

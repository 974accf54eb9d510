#pragma once

#include <optional>
#include <string>
#include <vector>

#include "aggdiff/energy.hpp"
#include "aggdiff/grid.hpp"
#include "aggdiff/kernels.hpp"
#include "aggdiff/sim_params.hpp"

namespace aggdiff {

// Density ceiling for stationary states, ((m-1)/(m*eps) * ||W||_1)^{1/(m-2)}.
// Throws std::domain_error for m <= 2.
double rho_star(double m, double epsilon, double l1_norm);

// Plateau level of fully merged states, (||W||_1 / (2*eps))^{1/(m-2)}.
// Throws std::domain_error for m <= 2.
double rho_plateau(double m, double epsilon, double l1_norm);

struct MonotonicityVerdict {
  bool pass = false;
  double center[2] = {0.0, 0.0};     // density-weighted center of mass
  double max_increase = 0.0;         // worst bin-mean increase outward
  double max_spread = 0.0;           // worst within-bin (max - min)
  int bins = 0;
};

// Bins the component's cells by periodic distance from its center of mass
// (bin width dx) and checks the bin means are non-increasing within
// 1%*max(rho) with within-bin spread <= 5%*max(rho).
MonotonicityVerdict radial_monotonicity(const DensityField& f,
                                        const std::vector<int>& component);

enum class CheckOutcome { pass, fail, not_applicable };

struct GapVerdict {
  CheckOutcome outcome = CheckOutcome::not_applicable;
  double min_gap = 0.0;      // meaningful when >= 2 components
  double required = 0.0;     // support_radius - dx
};

// Compact kernels only; unbounded kernels get not_applicable, as does a
// single-component state.
GapVerdict gap_check(const DensityField& f, const SupportComponents& comps,
                     const Kernel& k);

struct BoundVerdict {
  CheckOutcome outcome = CheckOutcome::not_applicable;  // n/a when m <= 2
  double max_density = 0.0;
  double rho_star = 0.0;
  double ratio_to_plateau = 0.0;  // max_density / rho_plateau
};

BoundVerdict bound_check(const DensityField& f, const SimParams& p,
                         double l1_norm);

struct ComponentRecord {
  double center[2] = {0.0, 0.0};
  double mass = 0.0;
  double max_density = 0.0;
  double support_measure = 0.0;  // cells * dx^d
  MonotonicityVerdict monotone;
  FlatnessStats lambda;          // Euler-Lagrange level on interior cells
};

struct StationaryReport {
  bool converged = false;
  double residual = 0.0;
  double mass = 0.0;
  double max_density = 0.0;
  std::optional<double> rho_star;     // absent for m <= 2
  std::optional<double> rho_plateau;  // absent for m <= 2
  std::optional<double> min_gap;      // absent with < 2 components
  BoundVerdict bound;
  GapVerdict gap;
  std::vector<ComponentRecord> components;

  std::string text() const;     // human-readable block
  std::string csv_row() const;  // flat row, empty cells for absent values
  static std::string csv_header();
};

StationaryReport analyze_state(const DensityField& f, const Kernel& k,
                               const KernelStencil& s, const SimParams& p,
                               bool converged, double residual);

}  // namespace aggdiff

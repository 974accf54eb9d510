#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "aggdiff/config.hpp"
#include "aggdiff/grid.hpp"
#include "aggdiff/integrator.hpp"
#include "aggdiff/kernels.hpp"
#include "aggdiff/sim_params.hpp"
#include "aggdiff/stationary.hpp"

namespace aggdiff {

struct InitialSpec {
  enum class Type { box, boxes, boxes_grid, random, constant } type = Type::box;
  double mass = 0.0;
  double half_width = 0.0;                     // box, boxes_grid
  std::vector<std::pair<double, double>> boxes;  // (center, half_width), 1D
  int count_per_axis = 0;                      // boxes_grid
  std::uint64_t seed = 0;                      // random
  double fraction = 1.0;                       // random: share of active cells
};

struct ExperimentConfig {
  std::string kernel_name = "bump";            // bump|exponential|parabola|custom
  std::string kernel_file;                     // tabulated profile
  int dims = 1;
  double dx = 0.4;
  double domain_length_x = 80.0;               // defaults: [-40,40], [-20,20]^2
  double domain_length_y = 80.0;
  SimParams params;
  InitialSpec initial;
  std::string output_dir = "out";
  std::int64_t snapshot_every = 0;             // 0 = none
  std::vector<std::pair<double, double>> sweep_points;  // (m, M)

  static ExperimentConfig from_config(const Config& c);
  void validate() const;  // throws ConfigError with field identification
};

// Initial data on the configured grid with total mass matched exactly
// (rescaled, 1e-12 relative).
DensityField build_initial(const InitialSpec& init, const ExperimentConfig& cfg);

Kernel make_kernel(const ExperimentConfig& cfg);

struct RunResult {
  DensityField field;
  Trajectory trajectory;
  StationaryReport report;
  std::vector<std::string> warnings;
  bool hard_assertions_ok = true;  // density bound + gap bound where they apply
};

// Simulate one configuration; artifacts (trajectory.csv, final_state.csv,
// report.txt/csv, PGM snapshots in 2D) land in cfg.output_dir.
RunResult run(const ExperimentConfig& cfg);

struct SweepRow {
  double m = 0.0;
  double mass = 0.0;
  std::string kernel;
  double max_density = 0.0;
  std::optional<double> rho_star;
  std::optional<double> rho_plateau;
  std::optional<double> min_gap;
  bool converged = false;
  std::int64_t steps = 0;
  double energy_final = 0.0;
  std::string failure;  // nonempty when the point errored
};

struct SweepResult {
  std::vector<SweepRow> rows;
  bool all_ok = true;
};

// Runs every (m, M) point (concurrently; each run is self-contained and
// seeded by the config, so sweep.csv is byte-identical across reruns) and
// writes sweep.csv in sweep-list order under cfg.output_dir.
SweepResult sweep(const ExperimentConfig& cfg);

std::string sweep_csv(const SweepResult& r);

}  // namespace aggdiff

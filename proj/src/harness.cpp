#include "aggdiff/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <random>
#include <semaphore>
#include <sstream>

#include "aggdiff/convolution.hpp"

namespace fs = std::filesystem;

namespace aggdiff {

namespace {

std::pair<double, double> parse_pair(const Config& c, const std::string& sec,
                                     const std::string& key,
                                     const std::string& item) {
  size_t colon = item.find(':');
  if (colon == std::string::npos)
    c.fail(sec, key, "expected 'a:b', got '" + item + "'");
  char* end = nullptr;
  double a = std::strtod(item.c_str(), &end);
  if (end != item.c_str() + colon)
    c.fail(sec, key, "bad number in '" + item + "'");
  const char* second = item.c_str() + colon + 1;
  double b = std::strtod(second, &end);
  if (end == second || *end != '\0')
    c.fail(sec, key, "bad number in '" + item + "'");
  return {a, b};
}

int cells_along(double length, double dx, const char* axis) {
  long long n = std::llround(length / dx);
  if (n < 8)
    throw ConfigError(std::string("grid.") + axis +
                      ": fewer than 8 cells on this axis");
  if (std::abs(double(n) * dx - length) > 1e-9 * length)
    throw ConfigError(std::string("grid.dx does not divide grid.") + axis);
  return int(n);
}

// radius the domain has to clear: the support for compact kernels, the
// 1e-3 * |omega(0)| decay radius otherwise
double placement_radius(const Kernel& k) {
  if (k.compact()) return k.support_radius;
  return effective_radius(k, 1e-3 * std::abs(k.profile(0.0)));
}

double unit53(std::mt19937_64& gen) {
  return double(gen() >> 11) * 0x1.0p-53;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace

ExperimentConfig ExperimentConfig::from_config(const Config& c) {
  ExperimentConfig e;
  e.kernel_name = c.get_string("kernel", "name", "bump");
  e.kernel_file = c.get_string("kernel", "file", "");
  e.dims = int(c.get_int("grid", "dims", 1));
  e.dx = c.get_double("grid", "dx", 0.4);
  double fallback_len = e.dims == 2 ? 40.0 : 80.0;
  double len = c.get_double("grid", "length", fallback_len);
  e.domain_length_x = c.get_double("grid", "length_x", len);
  e.domain_length_y = c.get_double("grid", "length_y", len);

  e.params.m = c.get_double("params", "m", e.params.m);
  e.params.epsilon = c.get_double("params", "epsilon", e.params.epsilon);
  e.params.dt = c.get_double("params", "dt", e.params.dt);
  e.params.newton_tol = c.get_double("params", "newton_tol", e.params.newton_tol);
  e.params.newton_max_iter =
      int(c.get_int("params", "newton_max_iter", e.params.newton_max_iter));
  e.params.steady_tol = c.get_double("params", "steady_tol", e.params.steady_tol);
  e.params.max_steps = c.get_int("params", "max_steps", e.params.max_steps);
  e.params.cfl_safety = c.get_double("params", "cfl_safety", e.params.cfl_safety);

  std::string type = c.get_string("initial", "type", "box");
  if (type == "box")
    e.initial.type = InitialSpec::Type::box;
  else if (type == "boxes")
    e.initial.type = InitialSpec::Type::boxes;
  else if (type == "boxes_grid")
    e.initial.type = InitialSpec::Type::boxes_grid;
  else if (type == "random")
    e.initial.type = InitialSpec::Type::random;
  else if (type == "constant")
    e.initial.type = InitialSpec::Type::constant;
  else
    c.fail("initial", "type", "unknown initial type '" + type + "'");
  e.initial.mass = c.get_double("initial", "mass", 0.0);
  e.initial.half_width = c.get_double("initial", "half_width", 10.0);
  if (c.has("initial", "boxes"))
    for (const auto& item : c.get_list("initial", "boxes"))
      e.initial.boxes.push_back(parse_pair(c, "initial", "boxes", item));
  e.initial.count_per_axis = int(c.get_int("initial", "count_per_axis", 0));
  e.initial.seed = std::uint64_t(c.get_int("initial", "seed", 0));
  e.initial.fraction = c.get_double("initial", "fraction", 1.0);

  e.output_dir = c.get_string("output", "dir", "out");
  e.snapshot_every = c.get_int("output", "snapshot_every", 0);

  if (c.has("sweep", "points"))
    for (const auto& item : c.get_list("sweep", "points"))
      e.sweep_points.push_back(parse_pair(c, "sweep", "points", item));
  return e;
}

void ExperimentConfig::validate() const {
  if (dims != 1 && dims != 2) throw ConfigError("grid.dims must be 1 or 2");
  if (dx <= 0.0) throw ConfigError("grid.dx must be > 0");
  cells_along(domain_length_x, dx, "length_x");
  if (dims == 2) cells_along(domain_length_y, dx, "length_y");

  if (!(params.m > 1.0)) throw ConfigError("params.m must be > 1");
  if (!(params.epsilon > 0.0)) throw ConfigError("params.epsilon must be > 0");
  if (params.dt < 0.0) throw ConfigError("params.dt must be >= 0");
  if (!(params.newton_tol > 0.0))
    throw ConfigError("params.newton_tol must be > 0");
  if (params.newton_max_iter < 1)
    throw ConfigError("params.newton_max_iter must be >= 1");
  if (!(params.steady_tol > 0.0))
    throw ConfigError("params.steady_tol must be > 0");
  if (params.max_steps < 1) throw ConfigError("params.max_steps must be >= 1");
  if (!(params.cfl_safety > 0.0) || params.cfl_safety > 1.0)
    throw ConfigError("params.cfl_safety must lie in (0, 1]");

  if (kernel_name != "bump" && kernel_name != "exponential" &&
      kernel_name != "parabola" && kernel_name != "custom")
    throw ConfigError("kernel.name: unknown kernel '" + kernel_name + "'");
  if (kernel_name == "custom" && kernel_file.empty())
    throw ConfigError("kernel.file is required for kernel.name = custom");

  double min_len = dims == 2 ? std::min(domain_length_x, domain_length_y)
                             : domain_length_x;
  switch (initial.type) {
    case InitialSpec::Type::box:
      if (!(initial.half_width > 0.0))
        throw ConfigError("initial.half_width must be > 0");
      if (2.0 * initial.half_width > min_len)
        throw ConfigError("initial.half_width: box wider than the domain");
      break;
    case InitialSpec::Type::boxes:
      if (dims != 1) throw ConfigError("initial.boxes is one-dimensional");
      if (initial.boxes.empty())
        throw ConfigError("initial.boxes must list at least one box");
      for (const auto& [c, h] : initial.boxes) {
        if (!(h > 0.0)) throw ConfigError("initial.boxes: half-width <= 0");
        if (std::abs(c) + h > 0.5 * domain_length_x)
          throw ConfigError("initial.boxes: box leaves the domain");
      }
      break;
    case InitialSpec::Type::boxes_grid:
      if (initial.count_per_axis < 1)
        throw ConfigError("initial.count_per_axis must be >= 1");
      if (!(initial.half_width > 0.0))
        throw ConfigError("initial.half_width must be > 0");
      if (2.0 * initial.half_width > min_len / initial.count_per_axis)
        throw ConfigError("initial.half_width: boxes overlap at this count");
      break;
    case InitialSpec::Type::random:
      if (!(initial.fraction > 0.0) || initial.fraction > 1.0)
        throw ConfigError("initial.fraction must lie in (0, 1]");
      break;
    case InitialSpec::Type::constant:
      break;
  }
  if (sweep_points.empty()) {
    if (!(initial.mass > 0.0)) throw ConfigError("initial.mass must be > 0");
  } else {
    for (const auto& [m, M] : sweep_points) {
      if (!(m > 1.0)) throw ConfigError("sweep.points: m must be > 1");
      if (!(M > 0.0)) throw ConfigError("sweep.points: mass must be > 0");
    }
  }

  Kernel k = make_kernel(*this);
  double radius = placement_radius(k);
  if (min_len < 4.0 * radius)
    throw ConfigError(
        "grid length must be at least 4x the kernel's effective radius (" +
        fmt(radius) + ")");
}

Kernel make_kernel(const ExperimentConfig& cfg) {
  if (cfg.kernel_name == "bump") return make_bump_kernel(cfg.dims);
  if (cfg.kernel_name == "exponential") return make_exponential_kernel(cfg.dims);
  if (cfg.kernel_name == "parabola") return make_parabola_kernel(cfg.dims);
  if (cfg.kernel_name == "custom")
    return make_tabulated_kernel(cfg.kernel_file, cfg.dims);
  throw ConfigError("kernel.name: unknown kernel '" + cfg.kernel_name + "'");
}

DensityField build_initial(const InitialSpec& init,
                           const ExperimentConfig& cfg) {
  if (!(init.mass > 0.0)) throw ConfigError("initial.mass must be > 0");
  int nx = cells_along(cfg.domain_length_x, cfg.dx, "length_x");
  double ox = -0.5 * cfg.domain_length_x + 0.5 * cfg.dx;
  DensityField f;
  if (cfg.dims == 1) {
    f = make_field_1d(nx, cfg.dx, ox);
  } else {
    int ny = cells_along(cfg.domain_length_y, cfg.dx, "length_y");
    double oy = -0.5 * cfg.domain_length_y + 0.5 * cfg.dx;
    f = make_field_2d(nx, ny, cfg.dx, ox, oy);
  }

  switch (init.type) {
    case InitialSpec::Type::box: {
      double a = init.half_width;
      for (int iy = 0; iy < f.ny; ++iy)
        for (int ix = 0; ix < f.nx; ++ix)
          if (std::abs(f.coord_x(ix)) < a &&
              (f.dims == 1 || std::abs(f.coord_y(iy)) < a))
            f.at(ix, iy) = 1.0;
      break;
    }
    case InitialSpec::Type::boxes: {
      for (const auto& [c, h] : init.boxes)
        for (int ix = 0; ix < f.nx; ++ix)
          if (std::abs(f.coord_x(ix) - c) < h) f.at(ix) += 1.0;
      break;
    }
    case InitialSpec::Type::boxes_grid: {
      int k = init.count_per_axis;
      double sx = cfg.domain_length_x / k;
      double sy = cfg.domain_length_y / k;
      for (int jy = 0; jy < (f.dims == 2 ? k : 1); ++jy) {
        double cy = -0.5 * cfg.domain_length_y + (jy + 0.5) * sy;
        for (int jx = 0; jx < k; ++jx) {
          double cx = -0.5 * cfg.domain_length_x + (jx + 0.5) * sx;
          for (int iy = 0; iy < f.ny; ++iy)
            for (int ix = 0; ix < f.nx; ++ix)
              if (std::abs(f.coord_x(ix) - cx) < init.half_width &&
                  (f.dims == 1 ||
                   std::abs(f.coord_y(iy) - cy) < init.half_width))
                f.at(ix, iy) = 1.0;
        }
      }
      break;
    }
    case InitialSpec::Type::random: {
      std::mt19937_64 gen(init.seed);
      for (double& v : f.data) {
        double h = unit53(gen);
        if (init.fraction < 1.0 && unit53(gen) >= init.fraction) h = 0.0;
        v = h;
      }
      break;
    }
    case InitialSpec::Type::constant: {
      std::fill(f.data.begin(), f.data.end(), 1.0);
      break;
    }
  }

  double tm = total_mass(f);
  if (!(tm > 0.0))
    throw ConfigError("initial data came out empty on this grid");
  double scale = init.mass / tm;
  for (double& v : f.data) v *= scale;
  return f;
}

RunResult run(const ExperimentConfig& cfg) {
  cfg.validate();
  Kernel k = make_kernel(cfg);
  KernelCheck chk = validate_kernel(k);
  if (!chk.ok())
    throw std::runtime_error("kernel '" + cfg.kernel_name +
                             "' fails the admissibility checks");

  DensityField f = build_initial(cfg.initial, cfg);
  KernelStencil s = build_stencil(k, cfg.dx, cfg.dims);
  fs::create_directories(cfg.output_dir);

  SnapshotHook hook;
  if (cfg.snapshot_every > 0) {
    hook = [&cfg](std::int64_t step, const DensityField& g) {
      if (step % cfg.snapshot_every != 0) return;
      char name[48];
      std::snprintf(name, sizeof name, "/snapshot_%06lld",
                    static_cast<long long>(step));
      if (g.dims == 2)
        write_field_pgm(g, cfg.output_dir + name + ".pgm");
      else
        write_field_csv(g, cfg.output_dir + name + ".csv");
    };
  }

  RunResult r;
  r.trajectory = run_to_stationary(f, s, cfg.params, hook);
  r.report = analyze_state(f, k, s, cfg.params, r.trajectory.converged,
                           r.trajectory.final_residual);

  write_trajectory_csv(r.trajectory, cfg.output_dir + "/trajectory.csv");
  write_field_csv(f, cfg.output_dir + "/final_state.csv");
  if (cfg.dims == 2) write_field_pgm(f, cfg.output_dir + "/final_state.pgm");
  {
    std::ofstream txt(cfg.output_dir + "/report.txt");
    txt << r.report.text();
    std::ofstream csv(cfg.output_dir + "/report.csv");
    csv << StationaryReport::csv_header() << "\n" << r.report.csv_row() << "\n";
  }

  if (!r.trajectory.converged)
    r.warnings.push_back("run hit max_steps before reaching steady_tol");

  // warn when the support crowds the periodic seam
  double peak = lp_norm(f, std::numeric_limits<double>::infinity());
  if (peak > 0.0) {
    double margin = std::numeric_limits<double>::infinity();
    double thr = 1e-3 * peak;
    double left = f.origin[0] - 0.5 * f.dx;
    double right = left + f.length_x();
    double bottom = f.origin[1] - 0.5 * f.dx;
    double top = bottom + f.length_y();
    for (int iy = 0; iy < f.ny; ++iy)
      for (int ix = 0; ix < f.nx; ++ix)
        if (f.at(ix, iy) > thr) {
          double x = f.coord_x(ix);
          margin = std::min({margin, x - left, right - x});
          if (f.dims == 2) {
            double y = f.coord_y(iy);
            margin = std::min({margin, y - bottom, top - y});
          }
        }
    if (margin < placement_radius(k))
      r.warnings.push_back(
          "support reaches within one kernel radius of the periodic seam; "
          "wrap-around interaction is not negligible");
  }

  r.hard_assertions_ok = r.report.bound.outcome != CheckOutcome::fail &&
                         r.report.gap.outcome != CheckOutcome::fail;
  r.field = std::move(f);
  return r;
}

SweepResult sweep(const ExperimentConfig& cfg) {
  if (cfg.sweep_points.empty())
    throw ConfigError("sweep.points: empty sweep list");
  cfg.validate();

  size_t n = cfg.sweep_points.size();
  unsigned workers =
      std::min(256u, std::max(1u, std::thread::hardware_concurrency()));
  std::counting_semaphore<256> slots(workers);

  std::vector<std::future<std::pair<SweepRow, bool>>> futures;
  futures.reserve(n);
  for (size_t i = 0; i < n; ++i) {
    futures.push_back(std::async(std::launch::async, [&cfg, &slots, i]() {
      slots.acquire();
      auto [m, M] = cfg.sweep_points[i];
      SweepRow row;
      row.m = m;
      row.mass = M;
      row.kernel = cfg.kernel_name;
      bool ok = true;
      try {
        ExperimentConfig pc = cfg;
        pc.sweep_points.clear();
        pc.params.m = m;
        pc.initial.mass = M;
        char sub[32];
        std::snprintf(sub, sizeof sub, "/point_%03zu", i);
        pc.output_dir = cfg.output_dir + sub;
        RunResult r = run(pc);
        row.max_density = r.report.max_density;
        row.rho_star = r.report.rho_star;
        row.rho_plateau = r.report.rho_plateau;
        row.min_gap = r.report.min_gap;
        row.converged = r.report.converged;
        row.steps = r.trajectory.steps;
        row.energy_final = r.trajectory.rows.empty()
                               ? 0.0
                               : r.trajectory.rows.back().energy;
        ok = r.hard_assertions_ok;
      } catch (const std::exception& e) {
        row.failure = e.what();
        ok = false;
      }
      slots.release();
      return std::make_pair(row, ok);
    }));
  }

  SweepResult out;
  for (auto& fut : futures) {
    auto [row, ok] = fut.get();
    out.rows.push_back(std::move(row));
    out.all_ok = out.all_ok && ok;
  }

  fs::create_directories(cfg.output_dir);
  std::ofstream csv(cfg.output_dir + "/sweep.csv");
  csv << sweep_csv(out);
  return out;
}

std::string sweep_csv(const SweepResult& r) {
  std::ostringstream out;
  out << "m,M,kernel,max_density,rho_star,rho_E,min_gap,converged,steps,"
         "energy_final,failure\n";
  for (const auto& row : r.rows) {
    out << fmt(row.m) << "," << fmt(row.mass) << "," << row.kernel << ",";
    if (row.failure.empty()) {
      out << fmt(row.max_density) << ",";
      out << (row.rho_star ? fmt(*row.rho_star) : "") << ",";
      out << (row.rho_plateau ? fmt(*row.rho_plateau) : "") << ",";
      out << (row.min_gap ? fmt(*row.min_gap) : "") << ",";
      out << (row.converged ? 1 : 0) << "," << row.steps << ","
          << fmt(row.energy_final) << ",";
    } else {
      out << ",,,,,,,";
    }
    std::string msg = row.failure;
    std::replace(msg.begin(), msg.end(), ',', ';');
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    out << msg << "\n";
  }
  return out.str();
}

}  // namespace aggdiff

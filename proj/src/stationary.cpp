#include "aggdiff/stationary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace aggdiff {

namespace {

double periodic_delta(double d, double length) {
  d = std::fmod(d, length);
  if (d > 0.5 * length) d -= length;
  if (d < -0.5 * length) d += length;
  return d;
}

}  // namespace

double rho_star(double m, double epsilon, double l1_norm) {
  if (m <= 2.0)
    throw std::domain_error("rho_star is defined for m > 2 only");
  return std::pow((m - 1.0) / (m * epsilon) * l1_norm, 1.0 / (m - 2.0));
}

double rho_plateau(double m, double epsilon, double l1_norm) {
  if (m <= 2.0)
    throw std::domain_error("rho_plateau is defined for m > 2 only");
  return std::pow(l1_norm / (2.0 * epsilon), 1.0 / (m - 2.0));
}

MonotonicityVerdict radial_monotonicity(const DensityField& f,
                                        const std::vector<int>& component) {
  MonotonicityVerdict v;
  if (component.empty()) return v;

  // density-weighted center, coordinates unwrapped around the peak cell
  int peak = component.front();
  for (int i : component)
    if (f.data[size_t(i)] > f.data[size_t(peak)]) peak = i;
  double px = f.coord_x(peak % f.nx), py = f.coord_y(peak / f.nx);
  double lx = f.length_x(), ly = f.length_y();

  double wsum = 0.0, cx = 0.0, cy = 0.0;
  for (int i : component) {
    double w = f.data[size_t(i)];
    double x = px + periodic_delta(f.coord_x(i % f.nx) - px, lx);
    double y = py + periodic_delta(f.coord_y(i / f.nx) - py, ly);
    wsum += w;
    cx += w * x;
    cy += w * y;
  }
  cx /= wsum;
  cy /= wsum;
  v.center[0] = cx;
  v.center[1] = cy;

  double peak_rho = f.data[size_t(peak)];

  // bins of width dx in distance from the center
  std::vector<double> bin_sum, bin_min, bin_max;
  std::vector<int> bin_n;
  for (int i : component) {
    double x = px + periodic_delta(f.coord_x(i % f.nx) - px, lx);
    double dist;
    if (f.dims == 1)
      dist = std::abs(x - cx);
    else {
      double y = py + periodic_delta(f.coord_y(i / f.nx) - py, ly);
      dist = std::hypot(x - cx, y - cy);
    }
    size_t b = size_t(dist / f.dx);
    if (b >= bin_sum.size()) {
      bin_sum.resize(b + 1, 0.0);
      bin_n.resize(b + 1, 0);
      bin_min.resize(b + 1, std::numeric_limits<double>::infinity());
      bin_max.resize(b + 1, 0.0);
    }
    double rho = f.data[size_t(i)];
    bin_sum[b] += rho;
    bin_n[b] += 1;
    bin_min[b] = std::min(bin_min[b], rho);
    bin_max[b] = std::max(bin_max[b], rho);
  }

  double prev_mean = -1.0;
  bool have_prev = false;
  for (size_t b = 0; b < bin_sum.size(); ++b) {
    if (bin_n[b] == 0) continue;
    double mean = bin_sum[b] / bin_n[b];
    if (have_prev)
      v.max_increase = std::max(v.max_increase, mean - prev_mean);
    v.max_spread = std::max(v.max_spread, bin_max[b] - bin_min[b]);
    prev_mean = mean;
    have_prev = true;
    v.bins += 1;
  }
  v.pass = v.max_increase <= 0.01 * peak_rho && v.max_spread <= 0.05 * peak_rho;
  return v;
}

GapVerdict gap_check(const DensityField& f, const SupportComponents& comps,
                     const Kernel& k) {
  GapVerdict v;
  if (!k.compact() || comps.count() < 2) return v;
  v.required = k.support_radius - f.dx;
  double best = std::numeric_limits<double>::infinity();
  for (size_t a = 0; a < comps.count(); ++a)
    for (size_t b = a + 1; b < comps.count(); ++b)
      best = std::min(best, component_gap(f, comps, a, b));
  v.min_gap = best;
  v.outcome = best >= v.required ? CheckOutcome::pass : CheckOutcome::fail;
  return v;
}

BoundVerdict bound_check(const DensityField& f, const SimParams& p,
                         double l1_norm) {
  BoundVerdict v;
  v.max_density = lp_norm(f, std::numeric_limits<double>::infinity());
  if (p.m <= 2.0) return v;
  v.rho_star = rho_star(p.m, p.epsilon, l1_norm);
  v.ratio_to_plateau = v.max_density / rho_plateau(p.m, p.epsilon, l1_norm);
  v.outcome = v.max_density <= v.rho_star * (1.0 + 1e-6) ? CheckOutcome::pass
                                                         : CheckOutcome::fail;
  return v;
}

StationaryReport analyze_state(const DensityField& f, const Kernel& k,
                               const KernelStencil& s, const SimParams& p,
                               bool converged, double residual) {
  StationaryReport r;
  r.converged = converged;
  r.residual = residual;
  r.mass = total_mass(f);
  r.max_density = lp_norm(f, std::numeric_limits<double>::infinity());

  double l1 = kernel_l1_norm(k, f.dx);
  if (p.m > 2.0) {
    r.rho_star = rho_star(p.m, p.epsilon, l1);
    r.rho_plateau = rho_plateau(p.m, p.epsilon, l1);
  }
  r.bound = bound_check(f, p, l1);

  SupportComponents comps = support_components(f);
  r.gap = gap_check(f, comps, k);
  if (comps.count() >= 2) {
    double best = std::numeric_limits<double>::infinity();
    for (size_t a = 0; a < comps.count(); ++a)
      for (size_t b = a + 1; b < comps.count(); ++b)
        best = std::min(best, component_gap(f, comps, a, b));
    r.min_gap = best;
  }

  DensityField lam = euler_lagrange_field(f, s, p);
  for (const auto& cells : comps.components) {
    ComponentRecord c;
    c.monotone = radial_monotonicity(f, cells);
    c.center[0] = c.monotone.center[0];
    c.center[1] = c.monotone.center[1];
    for (int i : cells) {
      c.mass += f.data[size_t(i)];
      c.max_density = std::max(c.max_density, f.data[size_t(i)]);
    }
    c.mass *= f.cell_volume();
    c.support_measure = double(cells.size()) * f.cell_volume();
    c.lambda = flatness(lam, component_interior(f, cells));
    r.components.push_back(std::move(c));
  }
  return r;
}

namespace {
const char* outcome_str(CheckOutcome o) {
  switch (o) {
    case CheckOutcome::pass: return "pass";
    case CheckOutcome::fail: return "FAIL";
    default: return "n/a";
  }
}
}  // namespace

std::string StationaryReport::text() const {
  std::ostringstream o;
  o.precision(8);
  o << "stationary state report\n";
  o << "  converged:    " << (converged ? "yes" : "NO (step budget)")
    << "  (residual " << residual << ")\n";
  o << "  mass:         " << mass << "\n";
  o << "  max density:  " << max_density << "\n";
  if (rho_star)
    o << "  rho_star:     " << *rho_star << "  [density bound, "
      << outcome_str(bound.outcome) << "]\n";
  if (rho_plateau)
    o << "  rho_plateau:  " << *rho_plateau
      << "  (max/plateau = " << bound.ratio_to_plateau << ")\n";
  o << "  components:   " << components.size();
  if (min_gap) o << "  (min gap " << *min_gap << ")";
  o << "\n";
  o << "  gap check:    " << outcome_str(gap.outcome);
  if (gap.outcome != CheckOutcome::not_applicable)
    o << "  (min " << gap.min_gap << ", required " << gap.required << ")";
  o << "\n";
  for (size_t i = 0; i < components.size(); ++i) {
    const auto& c = components[i];
    o << "  component " << i << ": center (" << c.center[0];
    o << ", " << c.center[1];
    o << "), mass " << c.mass << ", max " << c.max_density << ", support "
      << c.support_measure << "\n";
    o << "    radial monotonicity: " << (c.monotone.pass ? "pass" : "FAIL")
      << " (max increase " << c.monotone.max_increase << ", max spread "
      << c.monotone.max_spread << ")\n";
    o << "    multiplier level: " << c.lambda.mean << " +/- "
      << c.lambda.max_deviation << " over " << c.lambda.cells
      << " interior cells\n";
  }
  return o.str();
}

std::string StationaryReport::csv_header() {
  return "converged,residual,mass,max_density,rho_star,rho_plateau,components,"
         "min_gap,bound_check,gap_check,monotone_all,lambda_dev_max";
}

std::string StationaryReport::csv_row() const {
  std::ostringstream o;
  o.precision(12);
  o << (converged ? 1 : 0) << "," << residual << "," << mass << ","
    << max_density << ",";
  if (rho_star) o << *rho_star;
  o << ",";
  if (rho_plateau) o << *rho_plateau;
  o << "," << components.size() << ",";
  if (min_gap) o << *min_gap;
  o << "," << outcome_str(bound.outcome) << "," << outcome_str(gap.outcome);
  bool mono = true;
  double dev = 0.0;
  for (const auto& c : components) {
    mono = mono && c.monotone.pass;
    dev = std::max(dev, c.lambda.max_deviation);
  }
  o << "," << (components.empty() ? "n/a" : (mono ? "pass" : "FAIL")) << ","
    << dev;
  return o.str();
}

}  // namespace aggdiff

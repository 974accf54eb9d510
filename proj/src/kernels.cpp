#include "aggdiff/kernels.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "aggdiff/quadrature.hpp"

namespace aggdiff {

namespace {

constexpr double kBumpEdge = 1.0 - 1e-8;  // profile cut before the r=1 singularity

// ||W||_L1 from the radial profile: 2*int_0^R |omega| dr in 1D,
// 2*pi*int_0^R |omega(r)| r dr in 2D.
double reference_l1(const std::function<double(double)>& profile, double radius,
                    int dimension) {
  if (dimension == 1)
    return 2.0 * integrate([&](double r) { return std::abs(profile(r)); }, 0.0,
                           radius, 1e-10);
  return 2.0 * M_PI *
         integrate([&](double r) { return std::abs(profile(r)) * r; }, 0.0,
                   radius, 1e-10);
}

void check_dimension(int dimension) {
  if (dimension != 1 && dimension != 2)
    throw std::invalid_argument("kernel dimension must be 1 or 2");
}

}  // namespace

Kernel make_bump_kernel(int dimension) {
  check_dimension(dimension);
  Kernel k;
  k.name = "bump";
  k.profile = [](double r) {
    if (r >= kBumpEdge) return 0.0;
    return -5.0 * std::exp(1.0 / (r * r - 1.0));
  };
  k.derivative = [](double r) {
    if (r >= kBumpEdge) return 0.0;
    double d = r * r - 1.0;
    return 10.0 * r * std::exp(1.0 / d) / (d * d);
  };
  k.support_radius = 1.0;
  k.dimension = dimension;
  k.kind = KernelKind::compact;
  k.l1_norm = reference_l1(k.profile, 1.0, dimension);
  return k;
}

Kernel make_exponential_kernel(int dimension) {
  check_dimension(dimension);
  Kernel k;
  k.name = "exponential";
  k.profile = [](double r) { return -std::exp(-r); };
  k.derivative = [](double r) { return std::exp(-r); };
  k.support_radius = std::numeric_limits<double>::infinity();
  k.dimension = dimension;
  k.kind = KernelKind::unbounded;
  // integrable tail; cut at 1e-16 relative for the reference value
  k.l1_norm = reference_l1(k.profile, 40.0, dimension);
  return k;
}

Kernel make_parabola_kernel(int dimension) {
  check_dimension(dimension);
  Kernel k;
  k.name = "parabola";
  k.profile = [](double r) { return r < 1.0 ? -(1.0 - r * r) : 0.0; };
  k.derivative = [](double r) { return r < 1.0 ? 2.0 * r : 0.0; };
  k.support_radius = 1.0;
  k.dimension = dimension;
  k.kind = KernelKind::compact;
  k.l1_norm = reference_l1(k.profile, 1.0, dimension);
  return k;
}

Kernel make_tabulated_kernel(const std::string& path, int dimension) {
  check_dimension(dimension);
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open kernel table: " + path);
  std::vector<double> rs, ws;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    double r, w;
    if (!(ls >> r)) continue;  // blank line
    if (!(ls >> w))
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": expected two columns (r, omega)");
    if (!std::isfinite(r) || !std::isfinite(w))
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": non-finite table entry");
    if (rs.empty()) {
      if (r != 0.0)
        throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                 ": radii must start at 0");
    } else if (r <= rs.back()) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": radii must be strictly increasing");
    }
    rs.push_back(r);
    ws.push_back(w);
  }
  if (rs.size() < 2)
    throw std::runtime_error(path + ": kernel table needs at least 2 rows");

  Kernel k;
  k.name = "table:" + path;
  k.profile = [rs, ws](double r) {
    if (r >= rs.back()) return 0.0;
    size_t hi = std::upper_bound(rs.begin(), rs.end(), r) - rs.begin();
    if (hi == 0) return ws.front();
    double t = (r - rs[hi - 1]) / (rs[hi] - rs[hi - 1]);
    return ws[hi - 1] + t * (ws[hi] - ws[hi - 1]);
  };
  k.derivative = [rs, ws](double r) {
    if (r >= rs.back()) return 0.0;
    size_t hi = std::upper_bound(rs.begin(), rs.end(), r) - rs.begin();
    if (hi == 0) hi = 1;
    return (ws[hi] - ws[hi - 1]) / (rs[hi] - rs[hi - 1]);
  };
  k.support_radius = rs.back();
  k.dimension = dimension;
  k.kind = KernelKind::compact;
  k.l1_norm = reference_l1(k.profile, rs.back(), dimension);
  return k;
}

KernelCheck validate_kernel(const Kernel& k, int samples) {
  if (samples < 16)
    throw std::invalid_argument("validate_kernel needs at least 16 samples");
  double reff = effective_radius(k);
  KernelCheck out;
  out.monotone = true;
  out.nonpositive = true;
  out.vanishes = true;
  out.c_omega_finite = true;

  auto probe = [&](double r) {
    double w = k.profile(r);
    if (!std::isfinite(w))
      throw std::runtime_error("kernel profile non-finite at r = " +
                               std::to_string(r));
    return w;
  };

  // geometric refinement near 0 plus a uniform sweep of the support
  std::vector<double> radii;
  for (int i = 0; i < samples / 2; ++i)
    radii.push_back(reff * std::pow(0.5, samples / 2 - i));
  for (int i = 1; i <= samples / 2; ++i)
    radii.push_back(reff * i / double(samples / 2));
  std::sort(radii.begin(), radii.end());

  double prev_w = probe(0.0);
  if (prev_w > 0.0) out.nonpositive = false;
  for (double r : radii) {
    double w = probe(r);
    if (w > 0.0) out.nonpositive = false;
    if (w < prev_w - 1e-12 * std::max(1.0, std::abs(prev_w)))
      out.monotone = false;  // omega must be non-decreasing
    prev_w = w;
    double d = k.derivative(r);
    if (!std::isfinite(d))
      throw std::runtime_error("kernel derivative non-finite at r = " +
                               std::to_string(r));
    if (d < -1e-12) out.monotone = false;
    if (r <= std::min(1.0, reff)) {
      double c = d * std::pow(r, k.dimension - 1);
      if (!std::isfinite(c)) out.c_omega_finite = false;
      out.c_omega = std::max(out.c_omega, c);
    }
  }

  if (k.compact()) {
    for (double r : {k.support_radius, 1.5 * k.support_radius,
                     4.0 * k.support_radius}) {
      if (probe(r) != 0.0 || k.derivative(r) != 0.0) out.vanishes = false;
    }
  } else {
    // unbounded kinds must decay instead
    if (std::abs(probe(10.0 * reff + 10.0)) > 1e-9) out.vanishes = false;
  }
  return out;
}

double kernel_l1_norm(const Kernel& k, double dx, double radius_cap) {
  if (dx <= 0.0) throw std::invalid_argument("kernel_l1_norm: dx must be > 0");
  if (dx >= 2.0 * k.support_radius)
    throw std::invalid_argument(
        "kernel_l1_norm: dx >= 2*support_radius, stencil too coarse");
  if (!k.compact() && radius_cap < 30.0)
    throw std::invalid_argument(
        "kernel_l1_norm: unbounded kernels need radius_cap >= 30");
  double cell = std::pow(dx, k.dimension);
  int jmax = int(std::floor(radius_cap / dx));
  double sum = 0.0;
  if (k.dimension == 1) {
    for (int j = -jmax; j <= jmax; ++j)
      sum += std::abs(k.profile(std::abs(j) * dx));
  } else {
    for (int jy = -jmax; jy <= jmax; ++jy)
      for (int jx = -jmax; jx <= jmax; ++jx) {
        double r = dx * std::hypot(double(jx), double(jy));
        if (r <= radius_cap) sum += std::abs(k.profile(r));
      }
  }
  return sum * cell;
}

double kernel_l1_norm(const Kernel& k, double dx) {
  double cap = k.compact() ? k.support_radius
                           : std::max(30.0, effective_radius(k));
  return kernel_l1_norm(k, dx, cap);
}

double effective_radius(const Kernel& k, double eps_abs) {
  if (k.compact()) return k.support_radius;
  // bisect the decay radius |omega(r)| < eps_abs
  double lo = 0.0, hi = 1.0;
  while (std::abs(k.profile(hi)) >= eps_abs && hi < 1e6) hi *= 2.0;
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    if (std::abs(k.profile(mid)) >= eps_abs)
      lo = mid;
    else
      hi = mid;
  }
  return hi;
}

}  // namespace aggdiff

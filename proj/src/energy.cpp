#include "aggdiff/energy.hpp"

#include <algorithm>
#include <cmath>

namespace aggdiff {

EnergyBreakdown energy(const DensityField& f, const KernelStencil& s,
                       const SimParams& p) {
  DensityField v = convolve(s, f);
  double cell = f.cell_volume();
  EnergyBreakdown e;
  for (size_t i = 0; i < f.size(); ++i) {
    double rho = std::max(f.data[i], 0.0);
    e.entropy += std::pow(rho, p.m);
    e.interaction += f.data[i] * v.data[i];
  }
  e.entropy *= cell * p.epsilon / (p.m - 1.0);
  e.interaction *= 0.5 * cell;
  e.total = e.entropy + e.interaction;
  return e;
}

DensityField euler_lagrange_field(const DensityField& f,
                                  const KernelStencil& s, const SimParams& p) {
  DensityField lam = convolve(s, f);
  double coef = p.m * p.epsilon / (p.m - 1.0);
  for (size_t i = 0; i < f.size(); ++i)
    lam.data[i] += coef * std::pow(std::max(f.data[i], 0.0), p.m - 1.0);
  return lam;
}

std::vector<int> component_interior(const DensityField& f,
                                    const std::vector<int>& component_cells) {
  auto inside = [&](int idx) {
    return std::binary_search(component_cells.begin(), component_cells.end(),
                              idx);
  };
  double peak = 0.0;
  for (int i : component_cells) peak = std::max(peak, f.data[size_t(i)]);

  std::vector<int> out;
  for (int i : component_cells) {
    if (f.data[size_t(i)] <= 0.10 * peak) continue;
    int ix = i % f.nx, iy = i / f.nx;
    bool ok = inside(iy * f.nx + (ix + 1) % f.nx) &&
              inside(iy * f.nx + (ix + f.nx - 1) % f.nx);
    if (f.dims == 2)
      ok = ok && inside(((iy + 1) % f.ny) * f.nx + ix) &&
           inside(((iy + f.ny - 1) % f.ny) * f.nx + ix);
    if (ok) out.push_back(i);
  }
  return out;
}

FlatnessStats flatness(const DensityField& lambda,
                       const std::vector<int>& cells) {
  FlatnessStats s;
  s.cells = int(cells.size());
  if (cells.empty()) return s;
  for (int i : cells) s.mean += lambda.data[size_t(i)];
  s.mean /= double(cells.size());
  double var = 0.0;
  for (int i : cells) {
    double d = lambda.data[size_t(i)] - s.mean;
    var += d * d;
    s.max_deviation = std::max(s.max_deviation, std::abs(d));
  }
  s.std_deviation = std::sqrt(var / double(cells.size()));
  return s;
}

double diffusion_dominance(const DensityField& f, const KernelStencil& s,
                           const SimParams& p) {
  EnergyBreakdown e = energy(f, s, p);
  double mass = total_mass(f);
  double mnorm = e.entropy * (p.m - 1.0) / p.epsilon;  // int rho^m
  return 2.0 * e.total / mass +
         p.epsilon * (p.m - 2.0) / (mass * (p.m - 1.0)) * mnorm;
}

}  // namespace aggdiff

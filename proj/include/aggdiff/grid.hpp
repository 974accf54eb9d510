#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace aggdiff {

// Cell-centered density on a periodic uniform grid, 1 or 2 dimensions.
// 2D data is row-major with x fastest: data[iy * nx + ix]. Cell (ix, iy) has
// center (origin[0] + ix*dx, origin[1] + iy*dx). Values may dip to -1e-12
// transiently inside a solver; every public operation returns them >= 0.
struct DensityField {
  int dims = 1;
  int nx = 0;
  int ny = 1;  // 1 in 1D
  double dx = 0.0;
  std::array<double, 2> origin = {0.0, 0.0};
  std::vector<double> data;

  size_t size() const { return data.size(); }
  double& at(int ix, int iy = 0) { return data[size_t(iy) * nx + ix]; }
  double at(int ix, int iy = 0) const { return data[size_t(iy) * nx + ix]; }
  double cell_volume() const;
  double coord_x(int ix) const { return origin[0] + ix * dx; }
  double coord_y(int iy) const { return origin[1] + iy * dx; }
  double length_x() const { return nx * dx; }
  double length_y() const { return ny * dx; }
};

// Uniform field construction; shape >= 8 per axis enforced.
DensityField make_field_1d(int nx, double dx, double origin_x,
                           double value = 0.0);
DensityField make_field_2d(int nx, int ny, double dx, double origin_x,
                           double origin_y, double value = 0.0);

double total_mass(const DensityField& f);

// (sum |v|^p dx^d)^(1/p); p = infinity() gives max |v|. p >= 1 required.
double lp_norm(const DensityField& f, double p);

// Connected regions of {rho > threshold}: periodic interval adjacency in 1D,
// periodic 4-connectivity in 2D. Components hold sorted linear cell indices
// and are ordered by smallest x-index cell (then smallest y-index).
struct SupportComponents {
  double threshold = 0.0;
  std::vector<std::vector<int>> components;  // linear cell indices
  size_t count() const { return components.size(); }
};

SupportComponents support_components(const DensityField& f, double threshold);
// threshold default: 1e-3 * max(rho)
SupportComponents support_components(const DensityField& f);

// Minimum periodic distance between cell centers of two distinct components.
// Throws std::domain_error when a == b.
double component_gap(const DensityField& f, const SupportComponents& comps,
                     size_t a, size_t b);

// CSV: "# dims,shape,dx,origin" header carrying the metadata, then one value
// per line (1D) or one comma-separated row per grid row (2D).
void write_field_csv(const DensityField& f, std::ostream& out);
void write_field_csv(const DensityField& f, const std::string& path);
DensityField read_field_csv(std::istream& in);
DensityField read_field_csv(const std::string& path);

// 8-bit grayscale PGM of a 2D field, values scaled by the max.
void write_field_pgm(const DensityField& f, const std::string& path);

}  // namespace aggdiff

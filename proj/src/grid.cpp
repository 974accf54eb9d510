#include "aggdiff/grid.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace aggdiff {

namespace {

void check_shape(int dims, int nx, int ny) {
  if (dims != 1 && dims != 2)
    throw std::invalid_argument("field dims must be 1 or 2");
  if (nx < 8 || (dims == 2 && ny < 8))
    throw std::invalid_argument("field needs at least 8 cells per axis");
}

double periodic_delta(double d, double length) {
  d = std::fmod(d, length);
  if (d > 0.5 * length) d -= length;
  if (d < -0.5 * length) d += length;
  return d;
}

}  // namespace

double DensityField::cell_volume() const {
  return dims == 1 ? dx : dx * dx;
}

DensityField make_field_1d(int nx, double dx, double origin_x, double value) {
  check_shape(1, nx, 1);
  if (dx <= 0.0) throw std::invalid_argument("dx must be > 0");
  DensityField f;
  f.dims = 1;
  f.nx = nx;
  f.ny = 1;
  f.dx = dx;
  f.origin = {origin_x, 0.0};
  f.data.assign(size_t(nx), value);
  return f;
}

DensityField make_field_2d(int nx, int ny, double dx, double origin_x,
                           double origin_y, double value) {
  check_shape(2, nx, ny);
  if (dx <= 0.0) throw std::invalid_argument("dx must be > 0");
  DensityField f;
  f.dims = 2;
  f.nx = nx;
  f.ny = ny;
  f.dx = dx;
  f.origin = {origin_x, origin_y};
  f.data.assign(size_t(nx) * ny, value);
  return f;
}

double total_mass(const DensityField& f) {
  double s = 0.0;
  for (double v : f.data) s += v;
  return s * f.cell_volume();
}

double lp_norm(const DensityField& f, double p) {
  if (p == std::numeric_limits<double>::infinity()) {
    double m = 0.0;
    for (double v : f.data) m = std::max(m, std::abs(v));
    return m;
  }
  if (p < 1.0) throw std::invalid_argument("lp_norm needs p >= 1");
  double s = 0.0;
  for (double v : f.data) s += std::pow(std::abs(v), p);
  return std::pow(s * f.cell_volume(), 1.0 / p);
}

SupportComponents support_components(const DensityField& f, double threshold) {
  if (threshold < 0.0)
    throw std::invalid_argument("support threshold must be >= 0");
  SupportComponents out;
  out.threshold = threshold;
  int n = int(f.size());
  std::vector<int> label(size_t(n), -1);
  auto active = [&](int i) { return f.data[size_t(i)] > threshold; };

  int next = 0;
  for (int start = 0; start < n; ++start) {
    if (!active(start) || label[size_t(start)] >= 0) continue;
    std::vector<int> cells;
    std::deque<int> queue{start};
    label[size_t(start)] = next;
    while (!queue.empty()) {
      int i = queue.front();
      queue.pop_front();
      cells.push_back(i);
      int ix = i % f.nx, iy = i / f.nx;
      int neigh[4];
      int count = 0;
      neigh[count++] = iy * f.nx + (ix + 1) % f.nx;
      neigh[count++] = iy * f.nx + (ix + f.nx - 1) % f.nx;
      if (f.dims == 2) {
        neigh[count++] = ((iy + 1) % f.ny) * f.nx + ix;
        neigh[count++] = ((iy + f.ny - 1) % f.ny) * f.nx + ix;
      }
      for (int t = 0; t < count; ++t) {
        int j = neigh[t];
        if (active(j) && label[size_t(j)] < 0) {
          label[size_t(j)] = next;
          queue.push_back(j);
        }
      }
    }
    std::sort(cells.begin(), cells.end());
    out.components.push_back(std::move(cells));
    ++next;
  }
  std::sort(out.components.begin(), out.components.end(),
            [&](const std::vector<int>& a, const std::vector<int>& b) {
              auto key = [&](const std::vector<int>& c) {
                int mx = f.nx, my = f.ny;
                for (int i : c) {
                  mx = std::min(mx, i % f.nx);
                  my = std::min(my, i / f.nx);
                }
                return std::pair<int, int>(mx, my);
              };
              return key(a) < key(b);
            });
  return out;
}

SupportComponents support_components(const DensityField& f) {
  double m = lp_norm(f, std::numeric_limits<double>::infinity());
  return support_components(f, 1e-3 * m);
}

double component_gap(const DensityField& f, const SupportComponents& comps,
                     size_t a, size_t b) {
  if (a == b) throw std::domain_error("component_gap: a and b are the same");
  if (a >= comps.count() || b >= comps.count())
    throw std::out_of_range("component_gap: component index out of range");
  const auto& ca = comps.components[a];
  const auto& cb = comps.components[b];

  // Only boundary cells can realize the minimum; interior cells are shielded.
  auto in_comp = [&](const std::vector<int>& c, int idx) {
    return std::binary_search(c.begin(), c.end(), idx);
  };
  auto boundary = [&](const std::vector<int>& c) {
    if (f.dims == 1) {
      std::vector<int> out;
      for (int i : c) {
        int ix = i % f.nx;
        if (!in_comp(c, (ix + 1) % f.nx) || !in_comp(c, (ix + f.nx - 1) % f.nx))
          out.push_back(i);
      }
      return out.empty() ? c : out;
    }
    std::vector<int> out;
    for (int i : c) {
      int ix = i % f.nx, iy = i / f.nx;
      bool edge = !in_comp(c, iy * f.nx + (ix + 1) % f.nx) ||
                  !in_comp(c, iy * f.nx + (ix + f.nx - 1) % f.nx) ||
                  !in_comp(c, ((iy + 1) % f.ny) * f.nx + ix) ||
                  !in_comp(c, ((iy + f.ny - 1) % f.ny) * f.nx + ix);
      if (edge) out.push_back(i);
    }
    return out.empty() ? c : out;
  };

  double lx = f.length_x(), ly = f.length_y();
  double best = std::numeric_limits<double>::infinity();
  for (int i : boundary(ca)) {
    double xi = f.coord_x(i % f.nx), yi = f.coord_y(i / f.nx);
    for (int j : boundary(cb)) {
      double dxp = periodic_delta(xi - f.coord_x(j % f.nx), lx);
      double d;
      if (f.dims == 1)
        d = std::abs(dxp);
      else {
        double dyp = periodic_delta(yi - f.coord_y(j / f.nx), ly);
        d = std::hypot(dxp, dyp);
      }
      best = std::min(best, d);
    }
  }
  return best;
}

void write_field_csv(const DensityField& f, std::ostream& out) {
  out.precision(17);
  out << "# " << f.dims << ",";
  if (f.dims == 1)
    out << f.nx;
  else
    out << f.nx << "x" << f.ny;
  out << "," << f.dx << ",";
  if (f.dims == 1)
    out << f.origin[0];
  else
    out << f.origin[0] << "x" << f.origin[1];
  out << "\n";
  if (f.dims == 1) {
    for (int i = 0; i < f.nx; ++i) out << f.data[size_t(i)] << "\n";
  } else {
    for (int iy = 0; iy < f.ny; ++iy) {
      for (int ix = 0; ix < f.nx; ++ix) {
        if (ix) out << ",";
        out << f.at(ix, iy);
      }
      out << "\n";
    }
  }
}

void write_field_csv(const DensityField& f, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  write_field_csv(f, out);
}

DensityField read_field_csv(std::istream& in) {
  std::string header;
  if (!std::getline(in, header) || header.size() < 2 || header[0] != '#')
    throw std::runtime_error("field CSV: missing '# dims,shape,dx,origin' header");
  std::string meta = header.substr(1);
  for (char& ch : meta)
    if (ch == ',') ch = ' ';
  std::istringstream ms(meta);
  int dims;
  std::string shape, originstr;
  double dx;
  if (!(ms >> dims >> shape >> dx >> originstr))
    throw std::runtime_error("field CSV: malformed header: " + header);

  auto split_x = [](const std::string& s, double& a, double& b) {
    auto pos = s.find('x');
    a = std::stod(s.substr(0, pos));
    b = pos == std::string::npos ? 0.0 : std::stod(s.substr(pos + 1));
    return pos != std::string::npos;
  };

  DensityField f;
  if (dims == 1) {
    f = make_field_1d(std::stoi(shape), dx, std::stod(originstr));
    for (int i = 0; i < f.nx; ++i)
      if (!(in >> f.data[size_t(i)]))
        throw std::runtime_error("field CSV: expected " + std::to_string(f.nx) +
                                 " values");
  } else if (dims == 2) {
    double nxd, nyd, ox, oy;
    if (!split_x(shape, nxd, nyd) || !split_x(originstr, ox, oy))
      throw std::runtime_error("field CSV: 2D header needs NxM shape/origin");
    f = make_field_2d(int(nxd), int(nyd), dx, ox, oy);
    std::string line;
    for (int iy = 0; iy < f.ny; ++iy) {
      if (!std::getline(in, line) || line.empty())
        if (!std::getline(in, line))
          throw std::runtime_error("field CSV: missing row " + std::to_string(iy));
      std::istringstream ls(line);
      std::string cell;
      for (int ix = 0; ix < f.nx; ++ix) {
        if (!std::getline(ls, cell, ','))
          throw std::runtime_error("field CSV: short row " + std::to_string(iy));
        f.at(ix, iy) = std::stod(cell);
      }
    }
  } else {
    throw std::runtime_error("field CSV: dims must be 1 or 2");
  }
  return f;
}

DensityField read_field_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_field_csv(in);
}

void write_field_pgm(const DensityField& f, const std::string& path) {
  if (f.dims != 2) throw std::invalid_argument("PGM export is 2D only");
  double m = lp_norm(f, std::numeric_limits<double>::infinity());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "P2\n" << f.nx << " " << f.ny << "\n255\n";
  for (int iy = f.ny - 1; iy >= 0; --iy) {  // top row first
    for (int ix = 0; ix < f.nx; ++ix) {
      int v = m > 0.0 ? int(std::lround(255.0 * std::max(0.0, f.at(ix, iy)) / m))
                      : 0;
      out << std::min(255, v) << (ix + 1 == f.nx ? "" : " ");
    }
    out << "\n";
  }
}

}  // namespace aggdiff

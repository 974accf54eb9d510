#include "aggdiff/convolution.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <stdexcept>

namespace aggdiff {

namespace {

// FFTW's planner is not thread-safe; sweeps may convolve from several threads.
std::mutex fftw_mutex;

int wrap(int i, int n) {
  i %= n;
  return i < 0 ? i + n : i;
}

DensityField convolve_direct(const KernelStencil& s, const DensityField& f) {
  DensityField v = f;
  int n = f.nx, m = f.ny, reach = s.reach;
  if (f.dims == 1) {
    for (int i = 0; i < n; ++i) {
      double acc = 0.0;
      for (int j = -reach; j <= reach; ++j)
        acc += s.w1(j) * f.data[size_t(wrap(i - j, n))];
      v.data[size_t(i)] = acc;
    }
    return v;
  }
  for (int iy = 0; iy < m; ++iy)
    for (int ix = 0; ix < n; ++ix) {
      double acc = 0.0;
      for (int jy = -reach; jy <= reach; ++jy) {
        const size_t row = size_t(wrap(iy - jy, m)) * n;
        for (int jx = -reach; jx <= reach; ++jx)
          acc += s.w2(jx, jy) * f.data[row + size_t(wrap(ix - jx, n))];
      }
      v.data[size_t(iy) * n + size_t(ix)] = acc;
    }
  return v;
}

DensityField convolve_fft(const KernelStencil& s, const DensityField& f) {
  // wrap the stencil onto the grid, circularly convolve via r2c/c2r
  int nx = f.nx, ny = f.dims == 2 ? f.ny : 1;
  size_t real_n = size_t(nx) * ny;
  size_t cplx_n = size_t(ny) * (nx / 2 + 1);
  if (f.dims == 1) {
    cplx_n = size_t(nx / 2 + 1);
  }

  double* a = fftw_alloc_real(real_n);
  double* b = fftw_alloc_real(real_n);
  fftw_complex* fa = fftw_alloc_complex(cplx_n);
  fftw_complex* fb = fftw_alloc_complex(cplx_n);

  for (size_t i = 0; i < real_n; ++i) a[i] = f.data[i];
  for (size_t i = 0; i < real_n; ++i) b[i] = 0.0;
  if (f.dims == 1) {
    for (int j = -s.reach; j <= s.reach; ++j)
      b[size_t(wrap(j, nx))] += s.w1(j);
  } else {
    for (int jy = -s.reach; jy <= s.reach; ++jy)
      for (int jx = -s.reach; jx <= s.reach; ++jx)
        b[size_t(wrap(jy, ny)) * nx + size_t(wrap(jx, nx))] += s.w2(jx, jy);
  }

  fftw_plan pf_a, pf_b, pb;
  {
    std::lock_guard<std::mutex> lock(fftw_mutex);
    if (f.dims == 1) {
      pf_a = fftw_plan_dft_r2c_1d(nx, a, fa, FFTW_ESTIMATE);
      pf_b = fftw_plan_dft_r2c_1d(nx, b, fb, FFTW_ESTIMATE);
      pb = fftw_plan_dft_c2r_1d(nx, fa, a, FFTW_ESTIMATE);
    } else {
      // row-major (ny, nx) layout matches data[iy*nx+ix]
      pf_a = fftw_plan_dft_r2c_2d(ny, nx, a, fa, FFTW_ESTIMATE);
      pf_b = fftw_plan_dft_r2c_2d(ny, nx, b, fb, FFTW_ESTIMATE);
      pb = fftw_plan_dft_c2r_2d(ny, nx, fa, a, FFTW_ESTIMATE);
    }
  }
  fftw_execute(pf_a);
  fftw_execute(pf_b);
  for (size_t i = 0; i < cplx_n; ++i) {
    double re = fa[i][0] * fb[i][0] - fa[i][1] * fb[i][1];
    double im = fa[i][0] * fb[i][1] + fa[i][1] * fb[i][0];
    fa[i][0] = re;
    fa[i][1] = im;
  }
  fftw_execute(pb);

  DensityField v = f;
  double scale = 1.0 / double(real_n);
  for (size_t i = 0; i < real_n; ++i) v.data[i] = a[i] * scale;

  {
    std::lock_guard<std::mutex> lock(fftw_mutex);
    fftw_destroy_plan(pf_a);
    fftw_destroy_plan(pf_b);
    fftw_destroy_plan(pb);
  }
  fftw_free(a);
  fftw_free(b);
  fftw_free(fa);
  fftw_free(fb);
  return v;
}

}  // namespace

double KernelStencil::weight_sum() const {
  double s = 0.0;
  for (double w : weights) s += w;
  return s;
}

KernelStencil build_stencil(const Kernel& k, double dx, int dims,
                            double truncation) {
  if (dx <= 0.0) throw std::invalid_argument("build_stencil: dx must be > 0");
  if (dims != 1 && dims != 2)
    throw std::invalid_argument("build_stencil: dims must be 1 or 2");
  if (k.compact() && truncation < k.support_radius)
    throw std::invalid_argument(
        "build_stencil: compact kernel truncated below its support radius");
  KernelStencil s;
  s.dims = dims;
  s.dx = dx;
  s.reach = int(std::ceil(truncation / dx));
  double cell = std::pow(dx, dims);
  if (dims == 1) {
    s.weights.assign(size_t(s.side()), 0.0);
    for (int j = -s.reach; j <= s.reach; ++j) {
      double r = std::abs(j) * dx;
      if (r <= truncation) s.weights[size_t(j + s.reach)] = k.profile(r) * cell;
    }
  } else {
    s.weights.assign(size_t(s.side()) * s.side(), 0.0);
    for (int jy = -s.reach; jy <= s.reach; ++jy)
      for (int jx = -s.reach; jx <= s.reach; ++jx) {
        double r = dx * std::hypot(double(jx), double(jy));
        if (r <= truncation)
          s.weights[size_t(jy + s.reach) * s.side() + size_t(jx + s.reach)] =
              k.profile(r) * cell;
      }
  }
  return s;
}

KernelStencil build_stencil(const Kernel& k, double dx, int dims) {
  return build_stencil(k, dx, dims, effective_radius(k));
}

DensityField convolve(const KernelStencil& s, const DensityField& f,
                      ConvolvePath path) {
  if (s.dims != f.dims)
    throw std::invalid_argument("convolve: stencil/grid dimension mismatch");
  if (std::abs(s.dx - f.dx) > 1e-12 * f.dx)
    throw std::invalid_argument("convolve: stencil dx does not match grid dx");
  if (s.side() > f.nx || (f.dims == 2 && s.side() > f.ny))
    throw std::invalid_argument("convolve: stencil wider than the grid");
  if (path == ConvolvePath::automatic)
    path = (f.nx > 256 || f.ny > 256) ? ConvolvePath::transform
                                      : ConvolvePath::direct;
  return path == ConvolvePath::direct ? convolve_direct(s, f)
                                      : convolve_fft(s, f);
}

std::vector<double> face_velocity(const DensityField& V, int axis) {
  if (axis < 0 || axis >= V.dims)
    throw std::invalid_argument("face_velocity: bad axis");
  std::vector<double> u(V.size());
  int nx = V.nx, ny = V.ny;
  if (axis == 0) {
    for (int iy = 0; iy < ny; ++iy)
      for (int ix = 0; ix < nx; ++ix)
        u[size_t(iy) * nx + size_t(ix)] =
            -(V.at((ix + 1) % nx, iy) - V.at(ix, iy)) / V.dx;
  } else {
    for (int iy = 0; iy < ny; ++iy)
      for (int ix = 0; ix < nx; ++ix)
        u[size_t(iy) * nx + size_t(ix)] =
            -(V.at(ix, (iy + 1) % ny) - V.at(ix, iy)) / V.dx;
  }
  return u;
}

}  // namespace aggdiff

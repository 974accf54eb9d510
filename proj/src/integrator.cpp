#include "aggdiff/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace aggdiff {

namespace {

// Tridiagonal solve, destructive, no pivoting. The Jacobians here are
// column diagonally dominant M-matrices, so this is stable.
void thomas(std::vector<double>& a, std::vector<double>& b,
            std::vector<double>& c, std::vector<double>& r,
            std::vector<double>& x) {
  size_t n = b.size();
  for (size_t i = 1; i < n; ++i) {
    double w = a[i] / b[i - 1];
    b[i] -= w * c[i - 1];
    r[i] -= w * r[i - 1];
  }
  x[n - 1] = r[n - 1] / b[n - 1];
  for (size_t i = n - 1; i-- > 0;) x[i] = (r[i] - c[i] * x[i + 1]) / b[i];
}

// Cyclic tridiagonal via Sherman-Morrison: a[0] couples to x[n-1], c[n-1] to
// x[0].
void cyclic_thomas(std::vector<double> a, std::vector<double> b,
                   std::vector<double> c, std::vector<double> r,
                   std::vector<double>& x) {
  size_t n = b.size();
  double alpha = a[0], beta = c[n - 1];
  if (alpha == 0.0 && beta == 0.0) {
    thomas(a, b, c, r, x);
    return;
  }
  double gamma = -b[0];
  std::vector<double> bb = b;
  bb[0] = b[0] - gamma;
  bb[n - 1] = b[n - 1] - alpha * beta / gamma;
  std::vector<double> u(n, 0.0);
  u[0] = gamma;
  u[n - 1] = alpha;
  std::vector<double> x1(n), z(n);
  {
    auto a2 = a, b2 = bb, c2 = c, r2 = r;
    thomas(a2, b2, c2, r2, x1);
  }
  {
    auto a2 = a, b2 = bb, c2 = c;
    thomas(a2, b2, c2, u, z);
  }
  double vx = x1[0] + beta / gamma * x1[n - 1];
  double vz = 1.0 + z[0] + beta / gamma * z[n - 1];
  for (size_t i = 0; i < n; ++i) x[i] = x1[i] - z[i] * (vx / vz);
}

double sup_norm(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double minmod(double a, double b) {
  if (a > 0.0 && b > 0.0) return std::min(a, b);
  if (a < 0.0 && b < 0.0) return std::max(a, b);
  return 0.0;
}

}  // namespace

int solve_diffusion_line(std::vector<double>& rho, const std::vector<double>& b,
                         double a_over_dx2, double m, double tol, int max_iter,
                         std::vector<double>* history) {
  const size_t n = rho.size();
  const double kappa = a_over_dx2;
  auto g = [m](double x) { return std::pow(std::max(x, 0.0), m); };
  auto gp = [m](double x) {
    return m * std::pow(std::max(x, 0.0), m - 1.0) + 1e-14;
  };

  std::vector<double> gv(n), R(n), lo(n), di(n), up(n), delta(n), trial(n);
  auto residual = [&](const std::vector<double>& r, std::vector<double>& out) {
    for (size_t i = 0; i < n; ++i) gv[i] = g(r[i]);
    double worst = 0.0;
    for (size_t i = 0; i < n; ++i) {
      size_t ip = i + 1 == n ? 0 : i + 1;
      size_t im = i == 0 ? n - 1 : i - 1;
      out[i] = r[i] - kappa * (gv[ip] - 2.0 * gv[i] + gv[im]) - b[i];
      worst = std::max(worst, std::abs(out[i]));
    }
    return worst;
  };

  double res = residual(rho, R);
  if (history) history->push_back(res);
  for (int iter = 1; iter <= max_iter; ++iter) {
    if (res <= tol) return iter - 1;
    for (size_t i = 0; i < n; ++i) {
      size_t ip = i + 1 == n ? 0 : i + 1;
      size_t im = i == 0 ? n - 1 : i - 1;
      di[i] = 1.0 + 2.0 * kappa * gp(rho[i]);
      up[i] = -kappa * gp(rho[ip]);
      lo[i] = -kappa * gp(rho[im]);
      R[i] = -R[i];
    }
    cyclic_thomas(lo, di, up, R, delta);

    double s = 1.0;
    double new_res = 0.0;
    bool accepted = false;
    for (int bt = 0; bt < 40; ++bt) {
      for (size_t i = 0; i < n; ++i) trial[i] = rho[i] + s * delta[i];
      new_res = residual(trial, R);
      if (new_res < res) {
        accepted = true;
        break;
      }
      s *= 0.5;
    }
    if (!accepted)
      throw StepError("diffusion solve stalled, residual " +
                      std::to_string(res));
    rho.swap(trial);
    res = new_res;
    if (history) history->push_back(res);
  }
  if (res <= tol) return max_iter;
  throw StepError("diffusion solve: no convergence after " +
                  std::to_string(max_iter) + " iterations, residual " +
                  std::to_string(res));
}

StepReport step(DensityField& f, const KernelStencil& s, const SimParams& p) {
  if (p.m <= 1.0) throw std::invalid_argument("step: m must be > 1");
  StepReport rep;
  const double mass_before = total_mass(f);
  const double dt_request = p.dt > 0.0 ? p.dt : f.dx;

  DensityField V = convolve(s, f);
  std::vector<double> ux = face_velocity(V, 0);
  std::vector<double> uy;
  double umax = sup_norm(ux);
  if (f.dims == 2) {
    uy = face_velocity(V, 1);
    umax += sup_norm(uy);
  }
  // reconstructed interface states shrink the positivity-safe CFL window by
  // half compared with cell-constant upwinding
  double dt = dt_request;
  if (umax > 0.0) dt = std::min(dt, 0.5 * p.cfl_safety * f.dx / umax);
  rep.dt_used = dt;

  // explicit conservative upwind transport, minmod-limited linear
  // reconstruction of the interface density; flux 0 where u = 0
  const int nx = f.nx, ny = f.ny;
  std::vector<double> star(f.size());
  auto flux = [](double u, double left_state, double right_state) {
    if (u > 0.0) return u * left_state;
    if (u < 0.0) return u * right_state;
    return 0.0;
  };
  // limited slope along x (axis 0) or y (axis 1) at cell (ix, iy)
  auto slope = [&f, nx, ny](int ix, int iy, int axis) {
    double c = f.at(ix, iy);
    double fwd, bwd;
    if (axis == 0) {
      fwd = f.at((ix + 1) % nx, iy) - c;
      bwd = c - f.at((ix + nx - 1) % nx, iy);
    } else {
      fwd = f.at(ix, (iy + 1) % ny) - c;
      bwd = c - f.at(ix, (iy + ny - 1) % ny);
    }
    return minmod(bwd, fwd);
  };
  for (int iy = 0; iy < ny; ++iy)
    for (int ix = 0; ix < nx; ++ix) {
      size_t i = size_t(iy) * nx + size_t(ix);
      int ixp = (ix + 1) % nx, ixm = (ix + nx - 1) % nx;
      size_t iface_l = size_t(iy) * nx + size_t(ixm);
      double sc = slope(ix, iy, 0);
      double fr = flux(ux[i], f.at(ix, iy) + 0.5 * sc,
                       f.at(ixp, iy) - 0.5 * slope(ixp, iy, 0));
      double fl = flux(ux[iface_l], f.at(ixm, iy) + 0.5 * slope(ixm, iy, 0),
                       f.at(ix, iy) - 0.5 * sc);
      double div = (fr - fl) / f.dx;
      if (f.dims == 2) {
        int iyp = (iy + 1) % ny, iym = (iy + ny - 1) % ny;
        size_t jface_d = size_t(iym) * nx + size_t(ix);
        double scy = slope(ix, iy, 1);
        double fu = flux(uy[i], f.at(ix, iy) + 0.5 * scy,
                         f.at(ix, iyp) - 0.5 * slope(ix, iyp, 1));
        double fd = flux(uy[jface_d], f.at(ix, iym) + 0.5 * slope(ix, iym, 1),
                         f.at(ix, iy) - 0.5 * scy);
        div += (fu - fd) / f.dx;
      }
      star[i] = f.data[i] - dt * div;
    }

  // implicit degenerate diffusion, dimension-split line solves in 2D
  const double kappa = dt * p.epsilon / (f.dx * f.dx);
  if (f.dims == 1) {
    std::vector<double> rho = star;
    rep.newton_iters = solve_diffusion_line(rho, star, kappa, p.m, p.newton_tol,
                                            p.newton_max_iter,
                                            &rep.newton_residuals);
    f.data = std::move(rho);
  } else {
    std::vector<double> line(nx), rhs(nx);
    for (int iy = 0; iy < ny; ++iy) {
      for (int ix = 0; ix < nx; ++ix) rhs[size_t(ix)] = star[size_t(iy) * nx + ix];
      line = rhs;
      int it = solve_diffusion_line(line, rhs, kappa, p.m, p.newton_tol,
                                    p.newton_max_iter);
      rep.newton_iters = std::max(rep.newton_iters, it);
      for (int ix = 0; ix < nx; ++ix) star[size_t(iy) * nx + ix] = line[size_t(ix)];
    }
    std::vector<double> col(ny), crhs(ny);
    for (int ix = 0; ix < nx; ++ix) {
      for (int iy = 0; iy < ny; ++iy) crhs[size_t(iy)] = star[size_t(iy) * nx + ix];
      col = crhs;
      int it = solve_diffusion_line(col, crhs, kappa, p.m, p.newton_tol,
                                    p.newton_max_iter);
      rep.newton_iters = std::max(rep.newton_iters, it);
      for (int iy = 0; iy < ny; ++iy) star[size_t(iy) * nx + ix] = col[size_t(iy)];
    }
    f.data = std::move(star);
  }

  rep.min_value = 0.0;
  for (double v : f.data) rep.min_value = std::min(rep.min_value, v);
  if (rep.min_value < -1e-12) {
    std::ostringstream msg;
    msg << "positivity violated: min value " << rep.min_value;
    throw PositivityError(msg.str());
  }
  for (double& v : f.data)
    if (v < 0.0) v = 0.0;

  rep.mass_drift = total_mass(f) - mass_before;
  rep.energy = energy(f, s, p).total;
  return rep;
}

Trajectory run_to_stationary(DensityField& f, const KernelStencil& s,
                             const SimParams& p, const SnapshotHook& hook) {
  Trajectory t;
  double time = 0.0;
  std::vector<double> prev;
  for (std::int64_t n = 1; n <= p.max_steps; ++n) {
    prev = f.data;
    StepReport rep = step(f, s, p);
    time += rep.dt_used;
    double delta = 0.0;
    for (size_t i = 0; i < f.size(); ++i)
      delta = std::max(delta, std::abs(f.data[i] - prev[i]));
    t.final_residual = delta / rep.dt_used;
    t.steps = n;

    TrajectoryRow row;
    row.step = n;
    row.time = time;
    row.mass = total_mass(f);
    row.max_density = lp_norm(f, std::numeric_limits<double>::infinity());
    row.energy = rep.energy;
    row.newton_iters = rep.newton_iters;
    t.rows.push_back(row);
    if (hook) hook(n, f);

    if (t.final_residual < p.steady_tol) {
      t.converged = true;
      break;
    }
  }
  return t;
}

void write_trajectory_csv(const Trajectory& t, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out.precision(12);
  out << "step,time,mass,max_density,energy,newton_iters\n";
  for (const auto& r : t.rows)
    out << r.step << "," << r.time << "," << r.mass << "," << r.max_density
        << "," << r.energy << "," << r.newton_iters << "\n";
}

}  // namespace aggdiff

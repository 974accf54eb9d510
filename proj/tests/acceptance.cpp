// Acceptance suite: one verdict line per criterion, details indented.
// Exit code = number of failed criteria. All tolerances are pinned here.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "aggdiff/convolution.hpp"
#include "aggdiff/energy.hpp"
#include "aggdiff/grid.hpp"
#include "aggdiff/harness.hpp"
#include "aggdiff/integrator.hpp"
#include "aggdiff/kernels.hpp"
#include "aggdiff/sim_params.hpp"
#include "aggdiff/stationary.hpp"
#include "aggdiff/steiner.hpp"

using namespace aggdiff;
using clk = std::chrono::steady_clock;

namespace {

std::string strf(const char* fmt, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, fmt);
  std::vsnprintf(buf, sizeof buf, fmt, ap);
  va_end(ap);
  return buf;
}

struct Criterion {
  bool pass = true;
  std::vector<std::string> details;
  void check(bool ok, std::string line) {
    pass = pass && ok;
    details.push_back((ok ? "ok   " : "FAIL ") + std::move(line));
  }
  void note(std::string line) { details.push_back("     " + std::move(line)); }
};

// ---------------------------------------------------------------------------
// audited simulation runs: every accepted step of every run feeds the
// invariant tallies of criterion 5

struct AuditTally {
  long long steps = 0;
  double worst_mass_drift = 0.0;   // |mass step drift| / initial mass
  double worst_preclip = 0.0;      // most negative pre-clip cell value
  double worst_energy_jump = 0.0;  // max (E_next - E_prev) / |E_prev|
};

struct RunOutcome {
  DensityField field;
  bool converged = false;
  double residual = 0.0;
  long long steps = 0;
  double seconds = 0.0;
  std::string error;  // nonempty when the run threw
};

RunOutcome audited_run(DensityField f, const KernelStencil& s,
                       const SimParams& p, AuditTally& tally) {
  RunOutcome out;
  auto t0 = clk::now();
  double mass0 = total_mass(f);
  double e_prev = energy(f, s, p).total;
  std::vector<double> prev;
  try {
    for (long long n = 1; n <= p.max_steps; ++n) {
      prev = f.data;
      StepReport rep = step(f, s, p);
      double delta = 0.0;
      for (size_t i = 0; i < f.data.size(); ++i)
        delta = std::max(delta, std::abs(f.data[i] - prev[i]));
      out.residual = delta / rep.dt_used;
      out.steps = n;

      tally.steps += 1;
      tally.worst_mass_drift = std::max(
          tally.worst_mass_drift, std::abs(rep.mass_drift) / mass0);
      tally.worst_preclip = std::min(tally.worst_preclip, rep.min_value);
      tally.worst_energy_jump =
          std::max(tally.worst_energy_jump,
                   (rep.energy - e_prev) / std::abs(e_prev));
      e_prev = rep.energy;

      if (out.residual < p.steady_tol) {
        out.converged = true;
        break;
      }
    }
  } catch (const std::exception& e) {
    out.error = e.what();
  }
  out.field = std::move(f);
  out.seconds = std::chrono::duration<double>(clk::now() - t0).count();
  return out;
}

ExperimentConfig grid_only(int dims, double dx, double len) {
  ExperimentConfig cfg;
  cfg.dims = dims;
  cfg.dx = dx;
  cfg.domain_length_x = len;
  cfg.domain_length_y = len;
  return cfg;
}

DensityField box_start_1d(double mass, double half_width = 10.0) {
  InitialSpec init;
  init.type = InitialSpec::Type::box;
  init.mass = mass;
  init.half_width = half_width;
  return build_initial(init, grid_only(1, 0.4, 80.0));
}

DensityField random_start(int dims, double dx, double len, double mass,
                          std::uint64_t seed) {
  InitialSpec init;
  init.type = InitialSpec::Type::random;
  init.mass = mass;
  init.seed = seed;
  return build_initial(init, grid_only(dims, dx, len));
}

SimParams table_params(double m, double steady_tol) {
  SimParams p;
  p.m = m;
  p.dt = 0.05;
  p.steady_tol = steady_tol;
  return p;
}

struct NamedRun {
  std::string name;
  const Kernel* kernel = nullptr;
  const KernelStencil* stencil = nullptr;
  SimParams params;
  RunOutcome out;
};

void log_run(const NamedRun& r) {
  if (!r.out.error.empty()) {
    std::printf("# run %-14s ERROR: %s\n", r.name.c_str(),
                r.out.error.c_str());
  } else {
    std::printf("# run %-14s %s in %lld steps (%.1fs), max rho %.10g\n",
                r.name.c_str(), r.out.converged ? "converged" : "NOT steady",
                r.out.steps, r.out.seconds,
                lp_norm(r.out.field, std::numeric_limits<double>::infinity()));
  }
  std::fflush(stdout);
}

// ---------------------------------------------------------------------------
// criterion 7 helpers

IntervalUnion single(double c, double r) {
  IntervalUnion u;
  u.intervals = {{c, r}};
  return u;
}

double dyadic(std::mt19937_64& gen, int denom_log2, double lo, double hi) {
  // uniform on the lattice {k / 2^denom_log2} intersected with [lo, hi]
  double step = std::ldexp(1.0, -denom_log2);
  long long n = (long long)std::floor((hi - lo) / step);
  std::uniform_int_distribution<long long> d(0, n);
  return lo + double(d(gen)) * step;
}

}  // namespace

int main() {
  Kernel bump = make_bump_kernel(1);
  Kernel expo = make_exponential_kernel(1);
  Kernel para = make_parabola_kernel(1);
  Kernel para2 = make_parabola_kernel(2);

  KernelStencil s_expo = build_stencil(expo, 0.4, 1);
  KernelStencil s_bump = build_stencil(bump, 0.4, 1);
  KernelStencil s_para = build_stencil(para, 0.4, 1);
  KernelStencil s_expo_fine = build_stencil(expo, 0.1, 1);
  KernelStencil s_bump_fine = build_stencil(bump, 0.1, 1);
  KernelStencil s_para2 = build_stencil(para2, 0.4, 2);
  KernelStencil s_para2_fine = build_stencil(para2, 0.2, 2);

  AuditTally tally;

  // ---- shared simulation fixtures -----------------------------------------
  // exponential-kernel table: box start, M = 40, dx = 0.4, dt = 0.05
  const double table_m[4] = {2.1, 2.5, 3.0, 3.5};
  std::vector<NamedRun> ex2;
  for (double m : table_m) {
    NamedRun r{strf("exp m=%.1f", m), &expo, &s_expo, table_params(m, 1e-7),
               {}};
    r.out = audited_run(box_start_1d(40.0), *r.stencil, r.params, tally);
    log_run(r);
    ex2.push_back(std::move(r));
  }

  // bump-kernel mass triples at m = 2.1 (steady_tol 1e-7) and m = 2 (1e-6;
  // the m = 2 approach to steadiness is slower, the looser tol keeps the
  // fixture affordable without moving the max density at the 1% scale)
  const double masses[3] = {40.0, 60.0, 80.0};
  std::vector<NamedRun> ex1a, ex1b;
  for (double M : masses) {
    NamedRun r{strf("bump21 M=%g", M), &bump, &s_bump,
               table_params(2.1, 1e-7), {}};
    r.out = audited_run(box_start_1d(M), *r.stencil, r.params, tally);
    log_run(r);
    ex1a.push_back(std::move(r));
  }
  for (double M : masses) {
    NamedRun r{strf("bump2 M=%g", M), &bump, &s_bump, table_params(2.0, 1e-6),
               {}};
    r.out = audited_run(box_start_1d(M), *r.stencil, r.params, tally);
    log_run(r);
    ex1b.push_back(std::move(r));
  }

  // parabola kernel, random start, M = 50 on [-40, 40]
  NamedRun fig8{"fig8 random", &para, &s_para, table_params(3.0, 1e-6), {}};
  fig8.params.dt = 0.4;
  fig8.out = audited_run(random_start(1, 0.4, 80.0, 50.0, 2026),
                         *fig8.stencil, fig8.params, tally);
  log_run(fig8);

  // fine-grid singles for the Euler-Lagrange diagnostics
  InitialSpec fine_box;
  fine_box.type = InitialSpec::Type::box;
  fine_box.mass = 40.0;
  fine_box.half_width = 10.0;
  NamedRun fine2{"exp m=3 dx=.1", &expo, &s_expo_fine, table_params(3.0, 1e-7),
                 {}};
  fine2.out = audited_run(build_initial(fine_box, grid_only(1, 0.1, 80.0)),
                          *fine2.stencil, fine2.params, tally);
  log_run(fine2);
  NamedRun fine1{"bump m=2.1 dx=.1", &bump, &s_bump_fine,
                 table_params(2.1, 1e-7), {}};
  fine1.out = audited_run(build_initial(fine_box, grid_only(1, 0.1, 80.0)),
                          *fine1.stencil, fine1.params, tally);
  log_run(fine1);

  // 2D fixtures: a random pattern run and a box-start single-blob control
  NamedRun rand2d{"2d random", &para2, &s_para2, table_params(3.0, 1e-4), {}};
  rand2d.params.dt = 0.4;
  rand2d.params.max_steps = 100000;
  rand2d.out = audited_run(random_start(2, 0.4, 20.0, 25.0, 11),
                           *rand2d.stencil, rand2d.params, tally);
  log_run(rand2d);

  InitialSpec blob_box;
  blob_box.type = InitialSpec::Type::box;
  blob_box.mass = 5.0;
  blob_box.half_width = 2.0;
  NamedRun blob2d{"2d blob dx=.2", &para2, &s_para2_fine,
                  table_params(3.0, 1e-5), {}};
  blob2d.params.dt = 0.2;
  blob2d.out = audited_run(build_initial(blob_box, grid_only(2, 0.2, 20.0)),
                           *blob2d.stencil, blob2d.params, tally);
  log_run(blob2d);

  std::vector<Criterion> crit(8);

  // ---- criterion 1: exponential-kernel table of max densities -------------
  {
    Criterion& c = crit[0];
    const double expect[4] = {1.1, 1.0117, 0.99933, 0.99742};
    for (int i = 0; i < 4; ++i) {
      const RunOutcome& o = ex2[size_t(i)].out;
      double got = lp_norm(o.field, std::numeric_limits<double>::infinity());
      double rel = std::abs(got / expect[i] - 1.0);
      c.check(o.error.empty() && o.converged && rel <= 0.03,
              strf("m=%.1f: max rho %.6f vs %.5f (%.2f%% off, tol 3%%)",
                   table_m[i], got, expect[i], 100.0 * rel));
      c.check(o.seconds < 60.0,
              strf("m=%.1f: %.1fs (budget 60s)", table_m[i], o.seconds));
    }
  }

  // ---- criterion 2: closed-form density ceilings against the table --------
  {
    Criterion& c = crit[1];
    // exponential kernel, analytic |W|_1 = 2
    const double expect2[4] = {1.59, 1.44, 1.333, 1.27};
    for (int i = 0; i < 4; ++i) {
      double got = rho_star(table_m[i], 1.0, 2.0);
      double rel = std::abs(got / expect2[i] - 1.0);
      c.check(rel <= 0.01,
              strf("exp kernel m=%.1f: rho* %.5f vs %.4g (%.2f%% off, tol "
                   "1%%)",
                   table_m[i], got, expect2[i], 100.0 * rel));
    }
    // bump kernel at the dx = 0.4 lattice norm; the m = 3 printed value
    // 1.333 is inconsistent with every norm this lattice can produce (it
    // would need |W|_1 = 2, twice the bump's size) and is skipped as a typo
    double norm_b = kernel_l1_norm(bump, 0.4);
    c.note(strf("bump lattice norm at dx=0.4: %.10g", norm_b));
    struct Row {
      double m, expect;
    };
    const Row rows[3] = {{2.1, 3.942}, {2.5, 1.726}, {3.5, 1.3475}};
    for (const Row& r : rows) {
      double got = rho_star(r.m, 1.0, norm_b);
      double rel = std::abs(got / r.expect - 1.0);
      c.check(rel <= 0.03,
              strf("bump kernel m=%.1f: rho* %.5f vs %.4f (%.2f%% off, tol "
                   "3%%)",
                   r.m, got, r.expect, 100.0 * rel));
    }
    // the m = 2.1 row amplifies the norm to the 10th power; report the norm
    // the printed value implies
    double implied = std::pow(3.942, 0.1) * 2.1 / 1.1;
    c.note(strf("the printed 3.942 implies a norm of %.4f; the gap to ours "
                "(%.4f) is %.2f%%, raised to the 10th power by 1/(m-2)",
                implied, norm_b, 100.0 * std::abs(norm_b / implied - 1.0)));
  }

  // ---- criterion 3: mass independence above m = 2, growth at m = 2 --------
  {
    Criterion& c = crit[2];
    double mx[3], mx2[3];
    bool ok_runs = true;
    for (int i = 0; i < 3; ++i) {
      ok_runs = ok_runs && ex1a[size_t(i)].out.converged &&
                ex1b[size_t(i)].out.converged;
      mx[i] = lp_norm(ex1a[size_t(i)].out.field,
                      std::numeric_limits<double>::infinity());
      mx2[i] = lp_norm(ex1b[size_t(i)].out.field,
                       std::numeric_limits<double>::infinity());
    }
    c.check(ok_runs, "all six bump-kernel runs reached steadiness");
    double worst_pair = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j)
        worst_pair =
            std::max(worst_pair, std::abs(mx[i] / mx[j] - 1.0));
    c.check(worst_pair <= 0.01,
            strf("m=2.1 maxima %.4f / %.4f / %.4f agree pairwise to %.2f%% "
                 "(tol 1%%)",
                 mx[0], mx[1], mx[2], 100.0 * worst_pair));
    double worst_ref = 0.0;
    for (double v : mx) worst_ref = std::max(worst_ref, std::abs(v / 2.443 - 1.0));
    c.check(worst_ref <= 0.03,
            strf("m=2.1 maxima within %.2f%% of 2.443 (tol 3%%)",
                 100.0 * worst_ref));
    c.check(mx2[0] < mx2[1] && mx2[1] < mx2[2],
            strf("m=2 maxima strictly increase: %.4f < %.4f < %.4f", mx2[0],
                 mx2[1], mx2[2]));
    c.check(mx2[2] >= 1.05 * mx2[0],
            strf("m=2 doubling M=40 -> 80 grows the max by %.1f%% (need >= "
                 "5%%)",
                 100.0 * (mx2[2] / mx2[0] - 1.0)));
  }

  // ---- criterion 4: multi-component state with kernel-sized gaps ----------
  {
    Criterion& c = crit[3];
    const RunOutcome& o = fig8.out;
    c.check(o.error.empty() && o.converged,
            strf("random-start parabola run reached steadiness (%lld steps)",
                 o.steps));
    auto comps = support_components(o.field);
    c.check(comps.count() >= 2,
            strf("%zu support components (need >= 2)", comps.count()));
    GapVerdict gap = gap_check(o.field, comps, para);
    if (comps.count() >= 2)
      c.check(gap.outcome == CheckOutcome::pass,
              strf("min gap %.4f >= 1 - dx = %.4f", gap.min_gap,
                   gap.required));
    c.check(o.seconds < 300.0, strf("%.1fs (budget 300s)", o.seconds));
  }

  // ---- criterion 5: per-step structural invariants ------------------------
  {
    Criterion& c = crit[4];
    c.check(tally.steps >= 10000,
            strf("%lld cumulative accepted steps audited (need >= 10^4)",
                 tally.steps));
    c.check(tally.worst_mass_drift <= 1e-10,
            strf("worst per-step mass drift %.3g of total mass (tol 1e-10)",
                 tally.worst_mass_drift));
    c.check(tally.worst_preclip >= -1e-12,
            strf("most negative pre-clip cell %.3g (tol -1e-12)",
                 tally.worst_preclip));
    c.check(tally.worst_energy_jump <= 1e-8,
            strf("worst relative energy increase %.3g (tol 1e-8)",
                 tally.worst_energy_jump));
  }

  // ---- criterion 6: Euler-Lagrange level flatness -------------------------
  {
    Criterion& c = crit[5];
    std::vector<const NamedRun*> m_gt_2;
    for (const auto& r : ex2) m_gt_2.push_back(&r);
    for (const auto& r : ex1a) m_gt_2.push_back(&r);
    m_gt_2.push_back(&fine2);
    m_gt_2.push_back(&fine1);
    m_gt_2.push_back(&rand2d);
    m_gt_2.push_back(&blob2d);
    for (const NamedRun* r : m_gt_2) {
      if (!(r->params.m > 2.0) || !r->out.converged) continue;
      DensityField lam =
          euler_lagrange_field(r->out.field, *r->stencil, r->params);
      auto comps = support_components(r->out.field);
      double worst = 0.0;
      int checked = 0;
      for (const auto& comp : comps.components) {
        auto interior = component_interior(r->out.field, comp);
        if (interior.empty()) continue;
        FlatnessStats fs = flatness(lam, interior);
        worst = std::max(worst, fs.max_deviation / std::abs(fs.mean));
        ++checked;
      }
      c.check(checked > 0 && worst <= 0.01,
              strf("%s: worst interior multiplier deviation %.3f%% over %d "
                   "component(s) (tol 1%%)",
                   r->name.c_str(), 100.0 * worst, checked));
      if (comps.count() == 1) {
        auto interior = component_interior(r->out.field, comps.components[0]);
        FlatnessStats fs = flatness(lam, interior);
        double d = diffusion_dominance(r->out.field, *r->stencil, r->params);
        double rel = std::abs(fs.mean / d - 1.0);
        c.check(rel <= 0.02,
                strf("%s: multiplier level %.6f vs energy constant %.6f "
                     "(%.2f%% off, tol 2%%)",
                     r->name.c_str(), fs.mean, d, 100.0 * rel));
      }
    }
  }

  // ---- criterion 7: symmetrization property suite -------------------------
  {
    Criterion& c = crit[6];
    auto t0 = clk::now();
    std::mt19937_64 gen(20260816);

    Kernel1D slices[3] = {make_k_slice(para, 0.0), make_k_slice(bump, 0.0),
                          make_k_slice(bump, 0.6)};
    const char* slice_names[3] = {"parabola l=0", "bump l=0", "bump l=0.6"};
    std::uniform_real_distribution<double> uc(-3.0, 3.0), ur(0.05, 2.0);

    // (a) the one-sided derivative at tau = 0 is never negative
    double min_deriv = std::numeric_limits<double>::infinity();
    int done = 0;
    while (done < 10000) {
      double c1 = uc(gen), c2 = uc(gen), r1 = ur(gen), r2 = ur(gen);
      const Kernel1D& K = slices[done % 3];
      try {
        min_deriv = std::min(
            min_deriv, interaction_derivative_analytic(single(c1, r1),
                                                       single(c2, r2), K, 0.0));
      } catch (const EventBoundaryError&) {
        continue;  // c drawn exactly on an event; next tuple
      }
      ++done;
    }
    c.check(min_deriv >= -1e-9,
            strf("10^4 random pairs: smallest derivative %.3g (tol -1e-9)",
                 min_deriv));

    // (b) the claimed quantitative floor on admissible opposite-sign pairs
    long long floor_fail = 0;
    double worst_short = 0.0;
    std::string worst_case;
    done = 0;
    while (done < 1000) {
      double c1 = -std::abs(uc(gen)), c2 = std::abs(uc(gen));
      double r1 = ur(gen), r2 = ur(gen);
      int si = done % 3;
      const Kernel1D& K = slices[si];
      if (c1 == 0.0 || c2 == 0.0) continue;
      if (phi(c1, r1, c2, r2, K.R) <= 1e-3) continue;
      double got, bound;
      try {
        got = interaction_derivative_analytic(single(c1, r1), single(c2, r2),
                                              K, 0.0);
        bound = derivative_lower_bound(c1, r1, c2, r2, K);
      } catch (const EventBoundaryError&) {
        continue;
      }
      ++done;
      if (got < bound - 1e-9) {
        ++floor_fail;
        double shortfall = bound - got;
        if (shortfall > worst_short) {
          worst_short = shortfall;
          worst_case = strf("(%.3f,%.3f,%.3f,%.3f) on %s: derivative %.3g "
                            "vs floor %.3g",
                            c1, r1, c2, r2, slice_names[si], got, bound);
        }
      }
    }
    c.check(floor_fail == 0,
            strf("floor bound held on %lld of 1000 admissible tuples",
                 1000 - floor_fail));
    if (floor_fail > 0) {
      c.note("worst: " + worst_case);
      c.note(strf("largest shortfall %.3g; thin intervals whose mirror image "
                  "lands inside the partner leave only a boundary sliver of "
                  "the rectangle integral, far below the claimed floor",
                  worst_short));
    }

    // (c) closed form vs finite differences
    double worst_abs = 0.0, worst_rel_scaled = 0.0;
    bool fd_ok = true;
    done = 0;
    while (done < 200) {
      double c1 = uc(gen), c2 = uc(gen), r1 = ur(gen), r2 = ur(gen);
      const Kernel1D& K = slices[done % 3];
      DerivativePair d;
      try {
        d = interaction_derivative(single(c1, r1), single(c2, r2), K, 0.0);
      } catch (const EventBoundaryError&) {
        continue;
      }
      ++done;
      double err = std::abs(d.analytic - d.finite_difference);
      double mag = std::max(std::abs(d.analytic),
                            std::abs(d.finite_difference));
      fd_ok = fd_ok && err <= std::max(1e-6 * mag, 1e-7);
      worst_abs = std::max(worst_abs, err);
      if (mag >= 1e-3) worst_rel_scaled = std::max(worst_rel_scaled, err / mag);
    }
    c.check(fd_ok,
            strf("200 pairs: |closed form - finite difference| <= "
                 "max(1e-6 rel, 1e-7 abs); worst abs %.3g",
                 worst_abs));
    c.note(strf("worst relative error among well-scaled derivatives (|d| >= "
                "1e-3): %.3g",
                worst_rel_scaled));

    // (d) symmetrization preserves measure exactly on dyadic unions
    bool measure_ok = true;
    for (int t = 0; t < 200; ++t) {
      IntervalUnion u;
      int k = 1 + int(gen() % 5);
      double edge = -4.0;
      for (int i = 0; i < k; ++i) {
        double gap = dyadic(gen, 3, 0.125, 1.0);
        double r = dyadic(gen, 4, 0.0625, 1.0);
        double left = edge + gap;
        u.intervals.push_back({left + r, r});
        edge = left + 2.0 * r;
      }
      u.validate();
      double tau = dyadic(gen, 3, 0.0, 8.0);
      measure_ok =
          measure_ok && symmetrize_union(u, tau).measure() == u.measure();
    }
    c.check(measure_ok, "measure preserved bit-exactly on 200 dyadic unions");

    // (e) the large-tau limit is the decreasing rearrangement
    bool sort_ok = true;
    for (int t = 0; t < 100 && sort_ok; ++t) {
      int n = 8 + int(gen() % 33);
      std::vector<double> vals(size_t(n), 0.0);
      bool any = false;
      for (auto& v : vals) {
        v = double(gen() % 17) / 16.0;
        any = any || v > 0.0;
      }
      if (!any) vals[size_t(n / 2)] = 0.5;
      double dx = 0.25, x0 = -0.125 * n;
      LayerFunction f = layers_from_samples(vals, dx, x0, 0.0);
      LayerFunction g = symmetrize_function(f, 1e9);
      std::vector<double> sorted = vals;
      std::sort(sorted.begin(), sorted.end(), std::greater<>());
      for (int kk = 0; kk < n; ++kk) {
        double probe = (kk + 0.5) * dx / 2.0;
        sort_ok = sort_ok && g.value_at(probe) == sorted[size_t(kk)] &&
                  g.value_at(-probe) == sorted[size_t(kk)];
      }
    }
    c.check(sort_ok,
            "tau -> infinity limit equals the sorted rearrangement on 100 "
            "random step functions, probed per half-cell");

    double secs = std::chrono::duration<double>(clk::now() - t0).count();
    c.check(secs < 120.0, strf("%.1fs (budget 120s)", secs));
  }

  // ---- criterion 8: radial monotonicity and symmetry ----------------------
  {
    Criterion& c = crit[7];
    std::vector<const NamedRun*> oned;
    for (const auto& r : ex2) oned.push_back(&r);
    for (const auto& r : ex1a) oned.push_back(&r);
    for (const auto& r : ex1b) oned.push_back(&r);
    bool mono_ok = true;
    std::string mono_bad;
    for (const NamedRun* r : oned) {
      if (!r->out.converged) continue;
      auto comps = support_components(r->out.field);
      for (const auto& comp : comps.components) {
        auto v = radial_monotonicity(r->out.field, comp);
        if (!v.pass) {
          mono_ok = false;
          if (mono_bad.empty()) mono_bad = r->name;
        }
      }
    }
    c.check(mono_ok, "every component of every converged 1D run is radially "
                     "non-increasing about its center" +
                         (mono_bad.empty() ? "" : " (first failure: " +
                                                      mono_bad + ")"));

    // deliberately asymmetric fixtures must fail
    DensityField skew = make_field_1d(200, 0.4, -39.8);
    for (int i = 0; i < skew.nx; ++i) {
      double x = skew.coord_x(i);
      skew.at(i) = x < 0.0 ? std::max(0.0, 1.0 + x / 2.0)
                           : std::max(0.0, 1.0 - x / 8.0);
    }
    auto skew_comps = support_components(skew);
    bool skew_fails = !skew_comps.components.empty();
    for (const auto& comp : skew_comps.components)
      skew_fails = skew_fails && !radial_monotonicity(skew, comp).pass;
    c.check(skew_fails, "a lopsided 1D tent fails the check");

    DensityField ell = make_field_2d(64, 64, 0.25, -7.875, -7.875);
    for (int iy = 0; iy < ell.ny; ++iy)
      for (int ix = 0; ix < ell.nx; ++ix) {
        double x = ell.coord_x(ix), y = ell.coord_y(iy);
        ell.at(ix, iy) =
            std::max(0.0, 1.0 - std::sqrt(x * x / 9.0 + y * y));
      }
    auto ell_comps = support_components(ell);
    bool ell_fails = !ell_comps.components.empty();
    for (const auto& comp : ell_comps.components)
      ell_fails = ell_fails && !radial_monotonicity(ell, comp).pass;
    c.check(ell_fails, "an elliptical 2D mound fails the check");

    // 2D pattern run: component count and per-component bin spread
    const RunOutcome& o = rand2d.out;
    c.check(o.error.empty() && o.converged,
            strf("2D random run reached steadiness (%lld steps, %.1fs)",
                 o.steps, o.seconds));
    auto comps2 = support_components(o.field);
    c.check(comps2.count() >= 2,
            strf("%zu components in the 2D pattern (need >= 2)",
                 comps2.count()));
    double worst_spread = 0.0, worst_increase = 0.0;
    bool spread_ok = true;
    for (const auto& comp : comps2.components) {
      auto v = radial_monotonicity(o.field, comp);
      double peak = 0.0;
      for (int i : comp) peak = std::max(peak, o.field.data[size_t(i)]);
      worst_spread = std::max(worst_spread, v.max_spread / peak);
      worst_increase = std::max(worst_increase, v.max_increase / peak);
      spread_ok = spread_ok && v.pass;
    }
    c.check(spread_ok,
            strf("2D per-component bin spread: worst %.1f%% of peak (tol "
                 "5%%); bin means still monotone (worst increase %.2f%%)",
                 100.0 * worst_spread, 100.0 * worst_increase));
    if (!spread_ok && blob2d.out.converged) {
      auto bc = support_components(blob2d.out.field);
      if (bc.count() == 1) {
        auto v = radial_monotonicity(blob2d.out.field, bc.components[0]);
        double peak = lp_norm(blob2d.out.field,
                              std::numeric_limits<double>::infinity());
        c.note(strf("control: an isolated symmetric blob at dx=0.2 still "
                    "measures %.1f%% spread; a dx-wide annulus of any "
                    "resolved radial profile spans that much density, so "
                    "the 5%% spread bound cannot hold in 2D",
                    100.0 * v.max_spread / peak));
      }
    }
  }

  // ---- report --------------------------------------------------------------
  int failed = 0;
  const char* names[8] = {
      "max-density table, exponential kernel",
      "closed-form density ceilings vs table",
      "mass independence across the m = 2 threshold",
      "multi-component gaps at kernel size",
      "per-step invariants (mass, positivity, energy)",
      "Euler-Lagrange level flatness",
      "symmetrization property suite",
      "radial monotonicity and symmetry checks",
  };
  std::printf("\n");
  for (int i = 0; i < 8; ++i) {
    bool p = crit[size_t(i)].pass;
    failed += p ? 0 : 1;
    std::printf("criterion %d: %s  %s\n", i + 1, p ? "PASS" : "FAIL",
                names[i]);
    for (const auto& d : crit[size_t(i)].details)
      std::printf("    %s\n", d.c_str());
  }
  std::printf("\nacceptance: %d of 8 criteria passed\n", 8 - failed);
  return failed;
}

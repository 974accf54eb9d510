#include "aggdiff/steiner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "aggdiff/quadrature.hpp"

namespace aggdiff {

namespace {

double sgn(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

// int_A int_B f(x - y) dy dx for intervals A = [a1,b1], B = [a2,b2]: equals
// int f(s) lam(s) ds with the trapezoid lam = chi_A conv chi_(-B). f is
// assumed compactly supported in [-support, support]; kinks passed through.
double rect_pair_integral(double a1, double b1, double a2, double b2,
                          const std::function<double(double)>& f,
                          double support, std::vector<double> kinks = {},
                          double rel_tol = 1e-9) {
  double smin = a1 - b2, smax = b1 - a2;
  double w = std::min(b1 - a1, b2 - a2);
  if (w <= 0.0) return 0.0;
  double lo = std::max(smin, -support), hi = std::min(smax, support);
  if (lo >= hi) return 0.0;
  auto lam = [&](double s) {
    return std::max(0.0, std::min({s - smin, smax - s, w}));
  };
  kinks.push_back(smin + w);
  kinks.push_back(smax - w);
  kinks.push_back(0.0);
  return integrate_split([&](double s) { return f(s) * lam(s); }, lo, hi,
                         std::move(kinks), rel_tol);
}

struct MovingInterval {
  double c, r;
};

// tolerance scale for event coincidence
double coord_scale(const std::vector<MovingInterval>& iv) {
  double s = 1.0;
  for (const auto& i : iv) s = std::max(s, std::abs(i.c) + i.r);
  return s;
}

}  // namespace

double IntervalUnion::measure() const {
  double m = 0.0;
  for (const auto& i : intervals) m += 2.0 * i.r;
  return m;
}

bool IntervalUnion::contains(double x) const {
  double t = x - anchor;
  for (const auto& i : intervals)
    if (t > i.left() && t < i.right()) return true;
  return false;
}

void IntervalUnion::validate() const {
  for (size_t i = 0; i < intervals.size(); ++i) {
    if (!(intervals[i].r > 0.0))
      throw std::invalid_argument("interval union: half-widths must be > 0");
    if (i > 0) {
      double tol = 1e-12 * std::max({1.0, std::abs(intervals[i - 1].right()),
                                     std::abs(intervals[i].left())});
      if (intervals[i].left() < intervals[i - 1].right() - tol)
        throw std::invalid_argument(
            "interval union: intervals overlap or are unsorted");
    }
  }
}

IntervalUnion symmetrize_union(const IntervalUnion& u, double tau) {
  if (tau < 0.0)
    throw std::invalid_argument("symmetrize_union: tau must be >= 0");
  u.validate();
  if (tau == 0.0 || u.intervals.empty()) return u;

  std::vector<MovingInterval> iv;
  iv.reserve(u.intervals.size());
  for (const auto& i : u.intervals) iv.push_back({i.c, i.r});

  double remaining = tau;
  const double tol = 1e-12 * coord_scale(iv);

  auto merge_touching = [&]() {
    bool merged = true;
    while (merged && iv.size() > 1) {
      merged = false;
      for (size_t i = 0; i + 1 < iv.size(); ++i) {
        double gap = (iv[i + 1].c - iv[i + 1].r) - (iv[i].c + iv[i].r);
        if (gap <= tol) {
          double left = iv[i].c - iv[i].r;
          double right = iv[i + 1].c + iv[i + 1].r;
          MovingInterval m{0.5 * (left + right), iv[i].r + iv[i + 1].r};
          iv[i] = m;
          iv.erase(iv.begin() + long(i) + 1);
          merged = true;
          break;
        }
      }
    }
  };

  merge_touching();  // inputs sharing an endpoint coalesce at once

  // Each pass advances to the next event (a center arriving at the anchor or
  // two intervals touching) or to the end of the remaining time.
  while (remaining > 0.0) {
    double next = std::numeric_limits<double>::infinity();
    bool moving = false;
    for (size_t i = 0; i < iv.size(); ++i) {
      double v = -sgn(iv[i].c);
      if (v != 0.0) {
        moving = true;
        next = std::min(next, std::abs(iv[i].c));
      }
      if (i + 1 < iv.size()) {
        double vn = -sgn(iv[i + 1].c);
        double rel = (-vn) - (-v);  // closing speed of the gap
        double gap = (iv[i + 1].c - iv[i + 1].r) - (iv[i].c + iv[i].r);
        if (rel > 0.0 && gap > 0.0) next = std::min(next, gap / rel);
      }
    }
    if (!moving) break;

    double dt = std::min(next, remaining);
    for (auto& i : iv) i.c += -sgn(i.c) * std::min(dt, std::abs(i.c));
    remaining -= dt;
    if (dt == next) {
      for (auto& i : iv)
        if (std::abs(i.c) <= tol) i.c = 0.0;
      merge_touching();
    }
  }

  IntervalUnion out;
  out.anchor = u.anchor;
  for (const auto& i : iv) out.intervals.push_back({i.c, i.r});
  return out;
}

double LayerFunction::value_at(double x) const {
  double v = 0.0;
  double prev = 0.0;
  for (size_t k = 0; k < heights.size(); ++k) {
    if (levels[k].contains(x)) v += heights[k] - prev;
    prev = heights[k];
  }
  return v;
}

double LayerFunction::integral() const {
  double v = 0.0;
  double prev = 0.0;
  for (size_t k = 0; k < heights.size(); ++k) {
    v += (heights[k] - prev) * levels[k].measure();
    prev = heights[k];
  }
  return v;
}

void LayerFunction::validate() const {
  if (heights.size() != levels.size())
    throw std::invalid_argument("layer function: heights/levels mismatch");
  double prev = 0.0;
  for (size_t k = 0; k < heights.size(); ++k) {
    if (!(heights[k] > prev))
      throw std::invalid_argument(
          "layer function: heights must be positive and increasing");
    prev = heights[k];
    levels[k].validate();
  }
  // nesting of the input representation: every interval of level k+1 must be
  // covered by one of level k
  for (size_t k = 0; k + 1 < levels.size(); ++k) {
    for (const auto& j : levels[k + 1].intervals) {
      bool covered = false;
      for (const auto& i : levels[k].intervals)
        if (i.left() <= j.left() + 1e-12 && j.right() <= i.right() + 1e-12) {
          covered = true;
          break;
        }
      if (!covered)
        throw std::invalid_argument("layer function: levels are not nested");
    }
  }
}

LayerFunction layers_from_samples(const std::vector<double>& values, double dx,
                                  double x0, double anchor) {
  if (dx <= 0.0)
    throw std::invalid_argument("layers_from_samples: dx must be > 0");
  for (double v : values)
    if (v < 0.0)
      throw std::invalid_argument("layers_from_samples: negative sample");

  std::vector<double> hs;
  for (double v : values)
    if (v > 0.0) hs.push_back(v);
  std::sort(hs.begin(), hs.end());
  hs.erase(std::unique(hs.begin(), hs.end()), hs.end());

  LayerFunction f;
  f.anchor = anchor;
  for (double h : hs) {
    IntervalUnion u;
    u.anchor = anchor;
    size_t i = 0;
    while (i < values.size()) {
      if (values[i] >= h) {
        size_t j = i;
        while (j + 1 < values.size() && values[j + 1] >= h) ++j;
        double left = x0 + double(i) * dx - 0.5 * dx;
        double right = x0 + double(j) * dx + 0.5 * dx;
        u.intervals.push_back(
            {0.5 * (left + right) - anchor, 0.5 * (right - left)});
        i = j + 1;
      } else {
        ++i;
      }
    }
    f.heights.push_back(h);
    f.levels.push_back(std::move(u));
  }
  f.validate();
  return f;
}

std::function<double(double)> plateau_speed(double h0, double m) {
  if (h0 <= 0.0) throw std::invalid_argument("plateau_speed: h0 must be > 0");
  return [h0, m](double h) {
    return h >= h0 ? 1.0 : std::pow(h / h0, m - 1.0);
  };
}

LayerFunction symmetrize_function(
    const LayerFunction& f, double tau,
    const std::function<double(double)>& speed) {
  f.validate();
  LayerFunction out;
  out.anchor = f.anchor;
  out.heights = f.heights;
  for (size_t k = 0; k < f.heights.size(); ++k) {
    double v = speed ? speed(f.heights[k]) : 1.0;
    if (v < 0.0)
      throw std::invalid_argument("symmetrize_function: negative speed");
    out.levels.push_back(symmetrize_union(f.levels[k], v * tau));
  }
  return out;
}

double Kernel1D::deriv(double z) const {
  if (Kp) return Kp(z);
  double h = 1e-6 * R;
  return (K(z + h) - K(z - h)) / (2.0 * h);
}

Kernel1D make_k_slice(const Kernel& k, double l) {
  if (!k.compact() || std::abs(k.support_radius - 1.0) > 1e-12)
    throw std::domain_error(
        "make_k_slice needs a compact kernel of unit support radius");
  if (l < 0.0 || l >= 1.0)
    throw std::domain_error("make_k_slice: offset l must lie in [0, 1)");
  Kernel1D K;
  K.R = std::sqrt(1.0 - l * l);
  auto profile = k.profile;
  auto dprofile = k.derivative;
  double R = K.R;
  K.K = [profile, l, R](double z) {
    if (std::abs(z) >= R) return 0.0;
    return -0.5 * profile(std::hypot(z, l));
  };
  K.Kp = [dprofile, l, R](double z) {
    if (z == 0.0 || std::abs(z) >= R) return 0.0;
    double s = std::hypot(z, l);
    return -0.5 * dprofile(s) * z / s;
  };
  return K;
}

double interaction_energy(const IntervalUnion& u1, const IntervalUnion& u2,
                          const Kernel1D& K, double tau) {
  IntervalUnion a = symmetrize_union(u1, tau);
  IntervalUnion b = symmetrize_union(u2, tau);
  double total = 0.0;
  for (const auto& ia : a.intervals)
    for (const auto& ib : b.intervals)
      total += rect_pair_integral(
          a.anchor + ia.left(), a.anchor + ia.right(), b.anchor + ib.left(),
          b.anchor + ib.right(), K.K, K.R, {-K.R, K.R});
  return total;
}

double interaction_derivative_analytic(const IntervalUnion& u1,
                                       const IntervalUnion& u2,
                                       const Kernel1D& K, double tau) {
  if (u1.intervals.size() != 1 || u2.intervals.size() != 1)
    throw std::invalid_argument(
        "interaction_derivative needs single-interval unions");
  if (tau < 0.0)
    throw std::invalid_argument("interaction_derivative: tau must be >= 0");
  double c1 = u1.intervals[0].c, r1 = u1.intervals[0].r;
  double c2 = u2.intervals[0].c, r2 = u2.intervals[0].r;

  double scale = std::max({1.0, std::abs(c1), std::abs(c2)});
  for (double arrival : {std::abs(c1), std::abs(c2)})
    if (arrival > 0.0 && std::abs(tau - arrival) <= 1e-12 * scale)
      throw EventBoundaryError(
          "tau sits on a center-arrival event; the derivative may jump");

  auto at = [](double c, double t) {
    return sgn(c) * std::max(std::abs(c) - t, 0.0);
  };
  double c1t = at(c1, tau), c2t = at(c2, tau);
  double factor = sgn(c2t) - sgn(c1t);
  if (factor == 0.0) return 0.0;

  double q = rect_pair_integral(
      u1.anchor + c1t - r1, u1.anchor + c1t + r1, u2.anchor + c2t - r2,
      u2.anchor + c2t + r2, [&](double z) { return K.deriv(z); }, K.R,
      {-K.R, 0.0, K.R}, 1e-13);
  return factor * q;
}

DerivativePair interaction_derivative(const IntervalUnion& u1,
                                      const IntervalUnion& u2,
                                      const Kernel1D& K, double tau) {
  DerivativePair out;
  out.analytic = interaction_derivative_analytic(u1, u2, K, tau);
  double c1 = u1.intervals[0].c, r1 = u1.intervals[0].r;
  double c2 = u2.intervals[0].c, r2 = u2.intervals[0].r;
  double scale = std::max({1.0, std::abs(c1), std::abs(c2)});
  auto at = [](double c, double t) {
    return sgn(c) * std::max(std::abs(c) - t, 0.0);
  };

  const double quad_tol = 1e-13;

  // forward differences with two Richardson levels, window kept clear of the
  // next event; the quadrature runs much tighter than the default here so the
  // difference quotient is not dominated by integration noise
  double next = std::numeric_limits<double>::infinity();
  for (double arrival : {std::abs(c1), std::abs(c2)})
    if (arrival > tau + 1e-12 * scale) next = std::min(next, arrival - tau);
  double delta = 1e-3 * std::max(K.R, 1.0);
  if (std::isfinite(next)) delta = std::min(delta, 0.25 * next);

  auto I = [&](double t) {
    double q = 0.0;
    double a1 = at(c1, t), a2 = at(c2, t);
    q = rect_pair_integral(u1.anchor + a1 - r1, u1.anchor + a1 + r1,
                           u2.anchor + a2 - r2, u2.anchor + a2 + r2, K.K, K.R,
                           {-K.R, K.R}, quad_tol);
    return q;
  };
  double base = I(tau);
  double d1 = (I(tau + delta) - base) / delta;
  double d2 = (I(tau + 0.5 * delta) - base) / (0.5 * delta);
  double d4 = (I(tau + 0.25 * delta) - base) / (0.25 * delta);
  double r21 = 2.0 * d2 - d1;
  double r42 = 2.0 * d4 - d2;
  out.finite_difference = (4.0 * r42 - r21) / 3.0;
  return out;
}

double phi(double c1, double r1, double c2, double r2, double R) {
  return std::min({-std::abs(r1 - r2) + std::abs(c2 - c1) + R,
                   -std::abs(c2 - c1) + r1 + r2 + R, R});
}

double derivative_lower_bound(double c1, double r1, double c2, double r2,
                              const Kernel1D& K) {
  double lo = K.R / (3.0 * std::sqrt(2.0));
  double hi = K.R / std::sqrt(2.0);
  double m = std::numeric_limits<double>::infinity();
  const int n = 512;
  for (int i = 0; i <= n; ++i)
    m = std::min(m, -K.deriv(lo + (hi - lo) * i / n));
  return phi(c1, r1, c2, r2, K.R) * m / 6.0;
}

std::vector<std::pair<double, double>> energy_decrease_demo(
    const LayerFunction& f, const Kernel& k, double tau_max, int points) {
  if (points < 2)
    throw std::invalid_argument("energy_decrease_demo: points must be >= 2");
  f.validate();
  // the full 1D interaction kernel, -W/2, not a unit-support slice
  Kernel1D K0;
  K0.R = k.compact() ? k.support_radius : effective_radius(k, 1e-12);
  {
    auto profile = k.profile;
    auto dprofile = k.derivative;
    double R = K0.R;
    K0.K = [profile, R](double z) {
      return std::abs(z) >= R ? 0.0 : -0.5 * profile(std::abs(z));
    };
    K0.Kp = [dprofile, R](double z) {
      if (z == 0.0 || std::abs(z) >= R) return 0.0;
      return -0.5 * dprofile(std::abs(z)) * (z > 0.0 ? 1.0 : -1.0);
    };
  }

  std::vector<std::pair<double, double>> series;
  for (int j = 0; j < points; ++j) {
    double tau = tau_max * double(j) / double(points - 1);
    std::vector<IntervalUnion> evolved;
    evolved.reserve(f.levels.size());
    for (const auto& u : f.levels) evolved.push_back(symmetrize_union(u, tau));

    // 1/2 int int f f omega = -sum_{k,l} dh_k dh_l I_{K0}(levels)
    double inter = 0.0;
    double prev_k = 0.0;
    for (size_t a = 0; a < evolved.size(); ++a) {
      double wa = f.heights[a] - prev_k;
      prev_k = f.heights[a];
      double prev_l = 0.0;
      for (size_t b = 0; b < evolved.size(); ++b) {
        double wb = f.heights[b] - prev_l;
        prev_l = f.heights[b];
        double pairsum = 0.0;
        for (const auto& ia : evolved[a].intervals)
          for (const auto& ib : evolved[b].intervals)
            pairsum += rect_pair_integral(
                evolved[a].anchor + ia.left(), evolved[a].anchor + ia.right(),
                evolved[b].anchor + ib.left(), evolved[b].anchor + ib.right(),
                K0.K, K0.R, {-K0.R, K0.R});
        inter += wa * wb * pairsum;
      }
    }
    series.emplace_back(tau, -inter);
  }

  double slack = 1e-9 * std::max(1.0, std::abs(series.front().second));
  for (size_t j = 1; j < series.size(); ++j)
    if (series[j].second > series[j - 1].second + slack)
      throw std::runtime_error(
          "interaction energy increased along the symmetrization");
  return series;
}

}  // namespace aggdiff

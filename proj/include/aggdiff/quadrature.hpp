#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <vector>

namespace aggdiff {

// Adaptive Simpson on [a,b]. tol is treated as an absolute tolerance for the
// subinterval at hand; callers that want a relative tolerance scale it by an
// estimate of the integral's magnitude first (see integrate()).
namespace detail {

inline double simpson(double a, double fa, double b, double fb, double fm) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

inline double adapt(const std::function<double(double)>& f, double a,
                    double fa, double b, double fb, double m, double fm,
                    double whole, double tol, int depth) {
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = f(lm), frm = f(rm);
  double left = simpson(a, fa, m, fm, flm);
  double right = simpson(m, fm, b, fb, frm);
  double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return adapt(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
         adapt(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

// Integral of f over [a,b] to relative tolerance rel_tol (with a small
// absolute floor so integrals near zero terminate).
inline double integrate(const std::function<double(double)>& f, double a,
                        double b, double rel_tol = 1e-9,
                        double abs_floor = 1e-14) {
  if (!(b > a)) return 0.0;
  // coarse magnitude estimate from a fixed 33-point scan
  double scale = 0.0;
  for (int i = 0; i <= 32; ++i)
    scale = std::max(scale, std::abs(f(a + (b - a) * i / 32.0)));
  double tol = std::max(scale * (b - a) * rel_tol, abs_floor);
  double m = 0.5 * (a + b);
  double fa = f(a), fb = f(b), fm = f(m);
  double whole = detail::simpson(a, fa, b, fb, fm);
  return detail::adapt(f, a, fa, b, fb, m, fm, whole, tol, 48);
}

// Same, but splitting at interior breakpoints (kinks of the integrand);
// points outside (a,b) are ignored.
inline double integrate_split(const std::function<double(double)>& f, double a,
                              double b, std::vector<double> pts,
                              double rel_tol = 1e-9) {
  pts.push_back(a);
  pts.push_back(b);
  std::sort(pts.begin(), pts.end());
  double total = 0.0;
  for (size_t i = 0; i + 1 < pts.size(); ++i) {
    double lo = std::max(a, pts[i]), hi = std::min(b, pts[i + 1]);
    if (hi > lo) total += integrate(f, lo, hi, rel_tol);
  }
  return total;
}

}  // namespace aggdiff

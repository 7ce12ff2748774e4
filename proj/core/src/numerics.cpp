#include "llc/numerics.hpp"

#include <cmath>
#include <utility>

#include "llc/errors.hpp"

namespace llc::numerics {

RootResult find_root(const std::function<double(double)>& f, double lo,
                     double hi, double xtol, double ftol,
                     std::size_t max_iter) {
  double flo = f(lo);
  double fhi = f(hi);
  RootResult r;
  if (flo == 0.0) return {lo, 0.0, 0, true};
  if (fhi == 0.0) return {hi, 0.0, 0, true};
  if ((flo > 0.0) == (fhi > 0.0))
    throw Error(ErrorKind::Config, "find_root: interval does not bracket a root");

  int side = 0;
  for (std::size_t it = 1; it <= max_iter; ++it) {
    double x = (lo * fhi - hi * flo) / (fhi - flo);
    const double width = hi - lo;
    // keep the secant step strictly inside and away from the ends
    if (!(x > lo + 0.01 * width && x < hi - 0.01 * width)) x = 0.5 * (lo + hi);
    const double fx = f(x);
    r = {x, fx, it, false};
    if (fx == 0.0 || std::abs(fx) <= ftol) {
      r.converged = true;
      return r;
    }
    if ((fx > 0.0) == (fhi > 0.0)) {
      hi = x;
      fhi = fx;
      if (side == 1) flo *= 0.5;
      side = 1;
    } else {
      lo = x;
      flo = fx;
      if (side == -1) fhi *= 0.5;
      side = -1;
    }
    if (std::abs(hi - lo) < xtol) {
      r.converged = true;
      return r;
    }
  }
  return r;
}

MaxResult golden_section_max(const std::function<double(double)>& f, double lo,
                             double hi, double xtol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  std::size_t it = 0;
  while (b - a > xtol && it < 10000) {
    ++it;
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  MaxResult best{0.5 * (a + b), 0.0, it};
  best.fx = f(best.x);
  // the interior estimate cannot see a maximum sitting on the bracket end
  for (double x : {lo, hi}) {
    const double fx = f(x);
    if (fx > best.fx) best = {x, fx, it};
  }
  return best;
}

Crossing locate_crossing(const std::function<double(double)>& g, double lo,
                         double hi, double tol, std::size_t max_iter) {
  Crossing c{lo, hi, 0, false};
  while (c.iterations < max_iter) {
    if (c.hi - c.lo <= tol) {
      c.converged = true;
      return c;
    }
    const double mid = 0.5 * (c.lo + c.hi);
    if (mid <= c.lo || mid >= c.hi) {  // interval at floating-point resolution
      c.converged = true;
      return c;
    }
    ++c.iterations;
    if (g(mid) > 0.0)
      c.lo = mid;
    else
      c.hi = mid;
  }
  c.converged = c.hi - c.lo <= tol;
  return c;
}

}  // namespace llc::numerics

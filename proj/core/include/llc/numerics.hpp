#pragma once

#include <cstddef>
#include <functional>

namespace llc::numerics {

struct RootResult {
  double x = 0.0;
  double fx = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
};

/// Bracketed root of f on [lo, hi] (f(lo), f(hi) of opposite sign or zero).
/// Illinois false position with a bisection fallback whenever the secant
/// estimate stalls. Stops when the bracket is narrower than xtol or
/// |f| <= ftol.
RootResult find_root(const std::function<double(double)>& f, double lo,
                     double hi, double xtol, double ftol = 0.0,
                     std::size_t max_iter = 400);

struct MaxResult {
  double x = 0.0;
  double fx = 0.0;
  std::size_t iterations = 0;
};

/// Golden-section maximization of a unimodal f on [lo, hi] to |dx| < xtol.
MaxResult golden_section_max(const std::function<double(double)>& f, double lo,
                             double hi, double xtol);

struct Crossing {
  double lo = 0.0;  // g(lo) > 0
  double hi = 0.0;  // g(hi) <= 0
  std::size_t iterations = 0;
  bool converged = false;
};

/// Pure bisection for the first point where g drops to <= 0, given g(lo) > 0
/// and g(hi) <= 0. The returned hi always sits on the non-positive side.
Crossing locate_crossing(const std::function<double(double)>& g, double lo,
                         double hi, double tol, std::size_t max_iter = 200);

}  // namespace llc::numerics

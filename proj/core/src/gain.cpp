#include "llc/gain.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "llc/errors.hpp"
#include "llc/numerics.hpp"

namespace llc {

const char* to_string(Region r) noexcept {
  switch (r) {
    case Region::Inductive: return "inductive";
    case Region::Capacitive: return "capacitive";
    case Region::Boundary: return "boundary";
  }
  return "?";
}

GainPoint evaluate_gain(const NormalizedPoint& p) noexcept {
  const double f2 = p.fn * p.fn;
  const std::complex<double> den((p.Ln + 1.0) * f2 - 1.0,
                                 (f2 - 1.0) * p.fn * p.Qe * p.Ln);
  GainPoint g;
  g.fn = p.fn;
  if (std::abs(den) < kPoleThreshold) {
    g.pole = true;
    g.Mg = std::numeric_limits<double>::infinity();
    g.Mg_complex = {g.Mg, 0.0};
    return g;
  }
  g.Mg_complex = (p.Ln * f2) / den;
  g.Mg = std::abs(g.Mg_complex);
  g.phase = std::arg(g.Mg_complex);
  if (g.phase == -kPi) g.phase = kPi;
  return g;
}

GainPoint gain(const NormalizedPoint& p) {
  if (!(p.fn > 0.0)) config_error("gain: fn must be > 0");
  GainPoint g = evaluate_gain(p);
  if (g.pole) {
    std::ostringstream os;
    os << "gain pole at fn=" << p.fn << " (Ln=" << p.Ln << ", Qe=" << p.Qe
       << ")";
    throw Error(ErrorKind::Pole, os.str());
  }
  return g;
}

double gain_asymptote(double Ln) { return std::abs(Ln / (Ln + 1.0)); }

GainCurve gain_curve(double Ln, double Qe, double fn_lo, double fn_hi,
                     std::size_t samples) {
  if (!(fn_lo > 0.0 && fn_lo < fn_hi)) config_error("gain_curve: need 0 < fn_lo < fn_hi");
  if (samples < 2) config_error("gain_curve: need at least 2 samples");
  GainCurve c{Ln, Qe, {}};
  c.points.reserve(samples);
  const double llo = std::log(fn_lo), lhi = std::log(fn_hi);
  for (std::size_t i = 0; i < samples; ++i) {
    double fn;
    if (i == 0)
      fn = fn_lo;
    else if (i + 1 == samples)
      fn = fn_hi;
    else
      fn = std::exp(llo + (lhi - llo) * static_cast<double>(i) /
                              static_cast<double>(samples - 1));
    c.points.push_back(evaluate_gain({Ln, Qe, fn}));
  }
  return c;
}

std::size_t default_samples(double fn_lo, double fn_hi) {
  const double decades = std::log10(fn_hi / fn_lo);
  const auto n = static_cast<std::size_t>(std::ceil(decades * kSamplesPerDecade));
  return n < 2 ? 2 : n + 1;
}

namespace {

double noload_ratio(double Ln) { return 1.0 / std::sqrt(Ln + 1.0); }

double magnitude(double Ln, double Qe, double fn) {
  return evaluate_gain({Ln, Qe, fn}).Mg;
}

}  // namespace

PeakGain peak_gain(double Ln, double Qe) {
  if (!(Qe > 0.0)) config_error("peak_gain: Qe must be > 0 (no finite peak at Qe=0)");
  if (!(Ln > 0.0)) config_error("peak_gain: Ln must be > 0");
  const double lo = noload_ratio(Ln) + 1e-6;
  auto res = numerics::golden_section_max(
      [&](double fn) { return magnitude(Ln, Qe, fn); }, lo, 1.0, 1e-10);
  return {res.x, res.fx};
}

double solve_frequency(double Ln, double Qe, double Mg_target) {
  if (!(Ln > 0.0) || !(Qe >= 0.0)) config_error("solve_frequency: need Ln > 0, Qe >= 0");
  if (!(Mg_target > 0.0)) config_error("solve_frequency: target gain must be > 0");

  double lo;
  double asymptote;
  if (Qe > 0.0) {
    const PeakGain pk = peak_gain(Ln, Qe);
    if (Mg_target > pk.Mg) {
      std::ostringstream os;
      os << "target gain " << Mg_target << " exceeds peak gain " << pk.Mg
         << " at fn=" << pk.fn;
      throw Error(ErrorKind::Unreachable, os.str());
    }
    lo = pk.fn;
    asymptote = magnitude(Ln, Qe, kRootBracketHigh);
  } else {
    // no-load curve decreases monotonically from the pole at fp/f0
    lo = noload_ratio(Ln) * (1.0 + 1e-9);
    asymptote = gain_asymptote(Ln);
  }
  if (Mg_target <= asymptote) {
    std::ostringstream os;
    os << "target gain " << Mg_target << " is at or below the high-frequency limit "
       << asymptote;
    throw Error(ErrorKind::BelowAsymptote, os.str());
  }
  // exact identity Mg(1) = 1; fn = 1 lies on the branch since fn_peak <= 1
  if (Mg_target == 1.0) return 1.0;

  auto res = numerics::find_root(
      [&](double fn) { return magnitude(Ln, Qe, fn) - Mg_target; }, lo,
      kRootBracketHigh, 1e-15, 0.0, 400);
  return res.x;
}

GainBand gain_band(const DesignRequirements& req, double n, double Ln) {
  GainBand b;
  b.Mg_min = n * req.Vout_min / (req.Vin_max / 2.0);
  b.Mg_max = n * req.Vout_max / (req.Vin_min / 2.0);
  b.Mg_inf = gain_asymptote(Ln);
  return b;
}

std::complex<double> normalized_input_impedance(const NormalizedPoint& p) {
  using namespace std::complex_literals;
  const std::complex<double> zl = 1i * (p.fn * p.Ln);
  std::complex<double> zpar = zl;
  if (p.Qe > 0.0) {
    const double re = 1.0 / p.Qe;
    zpar = zl * re / (zl + re);
  }
  return 1i * p.fn + 1.0 / (1i * p.fn) + zpar;
}

double region_boundary(double Ln, double Qe) {
  auto reactance = [&](double fn) {
    return normalized_input_impedance({Ln, Qe, fn}).imag();
  };
  // reactance -> -inf as fn -> 0 and is > 0 for fn >= 1
  double lo = 1e-3;
  while (reactance(lo) >= 0.0 && lo > 1e-12) lo *= 0.1;
  auto res = numerics::find_root(reactance, lo, 1.0, 1e-15);
  return res.x;
}

Region classify_region(const NormalizedPoint& p) {
  if (!(p.fn > 0.0) || !(p.Qe >= 0.0)) config_error("classify_region: need fn > 0, Qe >= 0");
  const double boundary = region_boundary(p.Ln, p.Qe);
  if (std::abs(p.fn - boundary) < 1e-9) return Region::Boundary;
  return p.fn > boundary ? Region::Inductive : Region::Capacitive;
}

ShortCircuitGain short_circuit_gain(double Ln, double fn) {
  if (!(fn > 0.0)) config_error("short_circuit_gain: fn must be > 0");
  ShortCircuitGain s;
  const double detune = std::abs(fn - 1.0 / fn);
  s.current_pu = detune > 0.0 ? 1.0 / detune : std::numeric_limits<double>::infinity();
  s.divergent = s.current_pu > 1e6;
  s.Mg = s.divergent ? std::numeric_limits<double>::quiet_NaN()
                     : magnitude(Ln, kShortCircuitQe, fn);
  return s;
}

}  // namespace llc

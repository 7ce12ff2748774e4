#pragma once

// First-harmonic-approximation voltage gain of the LLC tank and the analyses
// built on it: curves, peak gain, frequency solving, region classification.

#include <complex>
#include <cstddef>
#include <vector>

#include "llc/tank.hpp"

namespace llc {

struct GainPoint {
  double fn = 0.0;
  std::complex<double> Mg_complex;
  double Mg = 0.0;
  double phase = 0.0;  // radians, (-pi, pi]
  bool pole = false;   // denominator vanished; Mg reported as +inf
};

struct GainCurve {
  double Ln = 0.0;
  double Qe = 0.0;
  std::vector<GainPoint> points;
};

struct PeakGain {
  double fn = 0.0;
  double Mg = 0.0;
};

struct GainBand {
  double Mg_min = 0.0;
  double Mg_max = 0.0;
  double Mg_inf = 0.0;
};

enum class Region { Inductive, Capacitive, Boundary };

const char* to_string(Region r) noexcept;

inline constexpr double kPoleThreshold = 1e-15;
inline constexpr double kShortCircuitQe = 1e6;
inline constexpr double kRootBracketHigh = 100.0;
inline constexpr std::size_t kSamplesPerDecade = 400;

/// Evaluates the gain without throwing; poles come back flagged.
GainPoint evaluate_gain(const NormalizedPoint& p) noexcept;

/// Gain at a normalized operating point. Throws Error(Pole) when the
/// denominator magnitude drops below kPoleThreshold.
GainPoint gain(const NormalizedPoint& p);

/// High-frequency limit of the no-load gain, |Ln / (Ln + 1)|.
double gain_asymptote(double Ln);

/// Log-spaced sweep with `samples` points including both ends.
GainCurve gain_curve(double Ln, double Qe, double fn_lo, double fn_hi,
                     std::size_t samples);

/// Sample count giving kSamplesPerDecade over [fn_lo, fn_hi].
std::size_t default_samples(double fn_lo, double fn_hi);

/// Maximum of Mg(fn) between the two resonances. Requires Qe > 0.
PeakGain peak_gain(double Ln, double Qe);

/// Frequency on the inductive branch (fn >= fn_peak) where Mg hits the
/// target. Throws Error(Unreachable) above the peak and
/// Error(BelowAsymptote) at or below the high-frequency end of the bracket.
double solve_frequency(double Ln, double Qe, double Mg_target);

/// Regulation band from line/load extremes and the no-load asymptote.
GainBand gain_band(const DesignRequirements& req, double n, double Ln);

/// Tank input impedance in units of sqrt(Lr/Cr): j fn + 1/(j fn) + (j fn Ln || 1/Qe).
std::complex<double> normalized_input_impedance(const NormalizedPoint& p);

/// Frequency where the tank input reactance changes sign (capacitive below).
double region_boundary(double Ln, double Qe);

Region classify_region(const NormalizedPoint& p);

struct ShortCircuitGain {
  double Mg = 0.0;
  /// Tank current per unit of V1 / sqrt(Lr/Cr) with the load shorted.
  double current_pu = 0.0;
  bool divergent = false;
};

/// Shorted-load behavior via the large-Qe proxy. Flags fn close enough to 1
/// that the shorted tank current exceeds 1e6 per unit.
ShortCircuitGain short_circuit_gain(double Ln, double fn);

}  // namespace llc

#pragma once

// Periodic operating point (POP) of the switched converter at fixed
// frequency and load.

#include <array>
#include <cstddef>
#include <optional>

#include "llc/sim.hpp"

namespace llc {

enum class PopMethod { CycleIteration, Shooting };

const char* to_string(PopMethod m) noexcept;

struct PopOptions {
  /// Each state component must return within tolerance * (its cycle peak).
  /// Cycle iteration also requires the distance to the fixed point, estimated
  /// from the recent contraction ratio, to be below tolerance.
  double tolerance = 1e-6;
  std::size_t max_cycles = 2000;
  std::size_t warm_cycles = 20;
  std::size_t max_newton = 30;
  double fd_perturbation = 1e-6;
};

struct PopMetrics {
  double vOut_mean = 0.0;
  double vOut_ripple_pp = 0.0;
  double iLr_rms = 0.0;
  double iLr_peak = 0.0;
  bool zvs_all_edges = false;
  double p_in = 0.0;   // cycle-mean source power
  double p_out = 0.0;  // cycle-mean load power
};

struct PopResult {
  SimState x0;
  double period = 0.0;
  double residual = 0.0;  // max over components of |x(T)-x(0)| / cycle peak
  PopMethod method = PopMethod::Shooting;
  std::size_t cycles = 0;  // period maps evaluated
  Waveform cycle_waveform;
  ZvsReport zvs;
  SimState x_end;
  PopMetrics metrics;
};

/// Continuous states (iLr, vCr, iLm, vOut).
using StateVector = std::array<double, 4>;

StateVector state_vector(const SimState& s);

/// Component-wise |a - b| / scale, maximized; zero differences give 0.
double scaled_distance(const StateVector& a, const StateVector& b, const StateVector& scale);

/// Cycle peak magnitudes of the four states from a recorded cycle.
StateVector cycle_peaks(const Waveform& w);

/// Finds the periodic steady state of cfg at its fixed fsw and the load in
/// effect at t = 0. `initial` defaults to fha_initial_state(cfg). Throws
/// Error(NoConvergence) or Error(Divergence).
PopResult find_pop(const SimConfig& cfg, PopMethod method, const PopOptions& options = {},
                   std::optional<SimState> initial = std::nullopt);

/// Means, ripple, RMS and peak over exactly one period of the cycle waveform.
PopMetrics pop_metrics(const PopResult& pop);

}  // namespace llc

#pragma once

// Piecewise-linear time-domain model of the LLC half-bridge: ideal switches
// with body diodes, Lr-Cr-Lm tank, ideal transformer, center-tapped diode
// rectifier, output capacitor and resistive load.
//
// Each (switch, rectifier, node) mode is a linear ODE integrated with fixed
// step RK4. Mode boundaries are located by bisection on event functions and
// the mode is re-derived from the state at every boundary.

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "llc/tank.hpp"
#include "llc/waveform.hpp"

namespace llc {

enum class SwitchPhase { HighOn, DeadToLow, LowOn, DeadToHigh };
enum class RectPhase { D1, D2, Off };

/// Switching-node condition. Driven while a gate is on; during dead time the
/// node sits on a rail through a body diode, or floats with zero tank current.
enum class NodeState { Driven, ClampLow, ClampHigh, Float };

const char* to_string(SwitchPhase p) noexcept;
const char* to_string(RectPhase p) noexcept;
const char* to_string(NodeState s) noexcept;

struct Mode {
  SwitchPhase sw = SwitchPhase::HighOn;
  RectPhase rect = RectPhase::Off;
  NodeState node = NodeState::Driven;

  bool operator==(const Mode&) const = default;
};

struct SimState {
  double t = 0.0;
  double iLr = 0.0;   // A, into the tank from the switching node
  double vCr = 0.0;   // V
  double iLm = 0.0;   // A
  double vOut = 0.0;  // V
  Mode mode;
  // Running integrals from the start of the run.
  double e_source = 0.0;  // J delivered by Vin
  double e_load = 0.0;    // J absorbed by the load
  double q_vout = 0.0;    // V*s, integral of vOut
};

/// Piecewise-constant load. Current breakpoints are converted to the
/// resistance drawing that current at `reference_voltage`.
struct LoadProfile {
  struct Breakpoint {
    enum class Kind { Resistance, Current };
    double t_start = 0.0;
    Kind kind = Kind::Resistance;
    double value = 0.0;  // ohms or amperes; +inf ohms / 0 A is open
  };

  std::vector<Breakpoint> points;  // sorted by t_start
  double reference_voltage = 0.0;

  static LoadProfile resistance(double ohms);
  static LoadProfile current(double amps, double reference_voltage);

  /// Load conductance (S) in effect at time t.
  double conductance(double t) const;
  /// Breakpoint times strictly after t, ascending.
  std::optional<double> next_change(double t) const;
};

/// Statistics of one completed switching cycle.
struct CycleInfo {
  std::size_t index = 0;
  double t_start = 0.0;
  double fsw = 0.0;
  double vOut_avg = 0.0;
  double iLr_peak = 0.0;  // max |iLr| over the cycle
};

/// Chooses the frequency of the next cycle given the one just finished
/// (nullopt before the first cycle).
using FrequencyPolicy = std::function<double(const std::optional<CycleInfo>&)>;

struct SimConfig {
  TankParams tank;
  double Vin = 0.0;
  double fsw = 0.0;  // fixed or target frequency
  LoadProfile load;
  double dt_max = 0.0;  // 0 selects period / steps_per_period
  std::size_t steps_per_period = 2000;
  double t_end = 0.0;
  double soft_start = 0.0;  // s; ramps fsw from 2 f0 down to fsw, 0 disables
  bool record = true;
  double record_interval = 0.0;  // 0 records every accepted step
  FrequencyPolicy frequency;     // overrides fsw/soft_start when set
};

enum class Switch { High, Low };

struct ZvsEdge {
  double t = 0.0;
  Switch which = Switch::High;
  double iLr = 0.0;
  bool achieved = false;
};

struct ZvsReport {
  std::vector<ZvsEdge> edges;
  bool all_achieved() const;
  std::size_t failures() const;
};

struct Event {
  enum class Kind { RectifierOff, RectifierOn, NodeClamp, Gate, Load };
  Kind kind = Kind::Gate;
  double t = 0.0;
};

struct TransientResult {
  Waveform waveform;
  ZvsReport zvs;
  SimState final_state;
  std::vector<CycleInfo> cycles;
  std::vector<Event> events;  // mode changes and gate instants, in order
};

/// Circuit inputs in effect over a step.
struct Drive {
  double Vin = 0.0;
  double G = 0.0;  // load conductance
};

/// Advances the linear ODE of state.mode by dt (RK4). Throws
/// Error(ModeViolation) when the state is outside its mode's feasible set
/// beyond event tolerance.
SimState step(const SimState& state, const TankParams& tank, const Drive& drive, double dt);

/// Mode-change events between two consecutive states of the same mode
/// (after = step(before, after.t - before.t)). Located by bisection to
/// rel_tol * period; sorted by time. Throws Error(EventLocalization).
std::vector<Event> detect_events(const SimState& before, const SimState& after,
                                 const TankParams& tank, const Drive& drive,
                                 double period, double rel_tol = 1e-12);

/// Rebuilds a consistent rectifier and node mode for `state`, given its
/// switch phase and the mode it held before (nullopt: no history).
void resolve_mode(SimState& state, const TankParams& tank, const Drive& drive,
                  const std::optional<Mode>& previous);

double switching_node_voltage(const SimState& state, const TankParams& tank,
                              double Vin);

/// Energy held in Lr, Cr, Lm and Cout.
double stored_energy(const SimState& state, const TankParams& tank);

/// Integrates from `initial` (taken as the start of a high-side on-time)
/// until cfg.t_end with event handling and per-edge ZVS verdicts.
TransientResult run_transient(const SimConfig& cfg, const SimState& initial);

/// Rough periodic state from the FHA gain at the configured operating point,
/// used to warm-start steady-state searches.
SimState fha_initial_state(const SimConfig& cfg);

}  // namespace llc

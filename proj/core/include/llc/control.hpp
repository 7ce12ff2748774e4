#pragma once

// Output-voltage regulation by switching-frequency modulation.

#include <cstddef>
#include <vector>

#include "llc/design.hpp"
#include "llc/sim.hpp"
#include "llc/steady_state.hpp"

namespace llc {

struct ControllerConfig {
  double v_ref = 12.0;
  double ki = 1e7;   // Hz per V*s
  double kp = 0.0;   // Hz per V
  double fsw_min = 65e3;
  double fsw_max = 200e3;
  double i_limit = 3.0;         // A, peak tank current
  double f_shift_rate = 5e7;    // Hz/s while over current
  double update_period = 0.0;   // s; 0 updates every switching cycle
};

void validate(const ControllerConfig& c);

struct ControllerState {
  double fsw = 0.0;
  double integrator = 0.0;  // frequency held by the integral path, Hz
  bool overcurrent = false;
  double since_update = 0.0;
};

ControllerState controller_init(const ControllerConfig& c, double fsw);

/// One update with the cycle-average output voltage and the cycle's peak
/// |iLr|, dt seconds after the previous cycle. Voltage below v_ref lowers
/// the frequency (gain rises on the inductive branch); over-current ramps
/// the frequency up at f_shift_rate instead. The result stays in
/// [fsw_min, fsw_max].
ControllerState controller_update(const ControllerConfig& c, const ControllerState& s,
                                  double vOut, double iLr_peak, double dt);

struct LoadStepScenario {
  LoadProfile load;  // current breakpoints use the design's Vout_nom
  double t_end = 0.04;
  double record_interval = 1e-6;
  std::size_t steps_per_period = 2000;

  /// Baseline current with a rectangular pulse to `pulse` amperes.
  static LoadStepScenario pulse(double baseline, double pulse, double t_start, double width,
                                double t_end, double vref);
};

struct RegulatedPop {
  double fsw = 0.0;
  PopResult pop;
};

/// POP whose cycle-mean output equals v_ref at the configured load; the
/// frequency is found by secant iteration starting from the FHA solution.
RegulatedPop find_regulated_pop(SimConfig cfg, double v_ref, double rel_tol = 1e-6);

struct LoadStepReport {
  double v_ref = 0.0;
  double fsw_initial = 0.0;
  double max_deviation = 0.0;  // V, max |vOut - v_ref| over recorded samples
  double t_max_deviation = 0.0;
  double last_load_change = 0.0;
  double recovery_time = -1.0;  // s after the last load change; <0 if never
  bool recovered = false;       // final cycle averages inside +/-1%
  double final_vout = 0.0;      // mean of the final cycle averages
  double fsw_min_seen = 0.0;
  double fsw_max_seen = 0.0;
  std::size_t overcurrent_cycles = 0;
  double iLr_peak_before_override = 0.0;
  double iLr_mean_peak_after_override = 0.0;
  std::vector<CycleInfo> cycles;
};

struct LoadStepResult {
  Waveform waveform;
  ZvsReport zvs;
  LoadStepReport report;
};

/// Closed-loop transient from a regulated POP warm start.
LoadStepResult run_load_step(const DesignReport& design, const ControllerConfig& ctrl,
                             const LoadStepScenario& scenario);

}  // namespace llc

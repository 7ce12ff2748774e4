#include "llc/control.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "llc/errors.hpp"
#include "llc/gain.hpp"

namespace llc {

void validate(const ControllerConfig& c) {
  if (!(c.fsw_min > 0.0 && c.fsw_min < c.fsw_max)) config_error("controller: need 0 < fsw_min < fsw_max");
  if (!(c.ki >= 0.0) || !(c.kp >= 0.0)) config_error("controller: gains must be >= 0");
  if (!(c.i_limit > 0.0)) config_error("controller: i_limit must be > 0");
  if (!(c.f_shift_rate >= 0.0)) config_error("controller: f_shift_rate must be >= 0");
  if (!(c.v_ref > 0.0)) config_error("controller: v_ref must be > 0");
  if (!(c.update_period >= 0.0)) config_error("controller: update_period must be >= 0");
}

ControllerState controller_init(const ControllerConfig& c, double fsw) {
  ControllerState s;
  s.fsw = std::clamp(fsw, c.fsw_min, c.fsw_max);
  s.integrator = s.fsw;
  return s;
}

ControllerState controller_update(const ControllerConfig& c, const ControllerState& s,
                                  double vOut, double iLr_peak, double dt) {
  ControllerState out = s;
  out.since_update += dt;
  if (c.update_period > 0.0 && out.since_update < c.update_period) return out;
  const double h = out.since_update;
  out.since_update = 0.0;

  if (iLr_peak > c.i_limit) {
    out.overcurrent = true;
    out.fsw = std::min(c.fsw_max, s.fsw + c.f_shift_rate * h);
    out.integrator = out.fsw;
    return out;
  }
  out.overcurrent = false;
  const double error = c.v_ref - vOut;
  out.integrator = std::clamp(s.integrator - c.ki * error * h, c.fsw_min, c.fsw_max);
  out.fsw = std::clamp(out.integrator - c.kp * error, c.fsw_min, c.fsw_max);
  return out;
}

LoadStepScenario LoadStepScenario::pulse(double baseline, double pulse, double t_start,
                                         double width, double t_end, double vref) {
  using Kind = LoadProfile::Breakpoint::Kind;
  LoadStepScenario s;
  s.load.reference_voltage = vref;
  s.load.points = {{0.0, Kind::Current, baseline},
                   {t_start, Kind::Current, pulse},
                   {t_start + width, Kind::Current, baseline}};
  s.t_end = t_end;
  return s;
}

RegulatedPop find_regulated_pop(SimConfig cfg, double v_ref, double rel_tol) {
  const TankParams& k = cfg.tank;
  const double f0 = series_resonance(k);
  const double G = cfg.load.conductance(0.0);
  const double Re = G > 0.0 ? effective_load(k.n, 1.0 / G) : std::numeric_limits<double>::infinity();
  const NormalizedPoint p = normalize(k, Re, f0);
  double f_a = cfg.fsw > 0.0 ? cfg.fsw : f0;
  try {
    f_a = f0 * solve_frequency(p.Ln, p.Qe, k.n * (v_ref + k.Vf) / (cfg.Vin / 2.0));
  } catch (const Error&) {
    // keep the configured frequency as the starting guess
  }

  std::optional<SimState> warm;
  auto pop_at = [&](double f) {
    cfg.fsw = f;
    PopResult r = find_pop(cfg, PopMethod::Shooting, {}, warm);
    warm = r.x0;
    return r;
  };

  PopResult pa = pop_at(f_a);
  double g_a = pa.metrics.vOut_mean - v_ref;
  double f_b = f_a * (g_a > 0.0 ? 1.01 : 0.99);  // higher fsw lowers the gain
  PopResult pb = pop_at(f_b);
  double g_b = pb.metrics.vOut_mean - v_ref;
  for (int it = 0; it < 30; ++it) {
    if (std::abs(g_b) <= rel_tol * v_ref) return {f_b, std::move(pb)};
    if (g_b == g_a) break;
    double f_c = f_b - g_b * (f_b - f_a) / (g_b - g_a);
    f_c = std::clamp(f_c, 0.8 * f_b, 1.2 * f_b);
    f_a = f_b;
    g_a = g_b;
    f_b = f_c;
    pb = pop_at(f_b);
    g_b = pb.metrics.vOut_mean - v_ref;
  }
  if (std::abs(g_b) <= rel_tol * v_ref) return {f_b, std::move(pb)};
  std::ostringstream os;
  os << "no periodic operating point regulates to " << v_ref << " V (closest " << v_ref + g_b
     << " V at " << f_b << " Hz)";
  throw Error(ErrorKind::NoConvergence, os.str());
}

LoadStepResult run_load_step(const DesignReport& design, const ControllerConfig& ctrl,
                             const LoadStepScenario& scenario) {
  validate(ctrl);
  if (scenario.load.points.empty()) config_error("load step: scenario has no breakpoints");
  SimConfig cfg;
  cfg.tank = design.tank_rounded;
  cfg.Vin = design.requirements.Vin_nom;
  cfg.load = scenario.load;
  if (!(cfg.load.reference_voltage > 0.0)) cfg.load.reference_voltage = design.requirements.Vout_nom;
  cfg.steps_per_period = scenario.steps_per_period;

  const RegulatedPop warm = find_regulated_pop(cfg, ctrl.v_ref);

  ControllerState state = controller_init(ctrl, warm.fsw);
  cfg.fsw = state.fsw;
  cfg.t_end = scenario.t_end;
  cfg.record = true;
  cfg.record_interval = scenario.record_interval;
  cfg.frequency = [&](const std::optional<CycleInfo>& last) {
    if (last) state = controller_update(ctrl, state, last->vOut_avg, last->iLr_peak, 1.0 / last->fsw);
    return state.fsw;
  };

  SimState start = warm.pop.x0;
  start.t = 0.0;
  start.e_source = start.e_load = start.q_vout = 0.0;
  TransientResult tr = run_transient(cfg, start);

  LoadStepResult out;
  LoadStepReport& r = out.report;
  r.v_ref = ctrl.v_ref;
  r.fsw_initial = warm.fsw;
  r.cycles = tr.cycles;
  for (const auto& b : cfg.load.points) r.last_load_change = std::max(r.last_load_change, b.t_start);

  const auto& t = tr.waveform.time();
  const auto& v = tr.waveform.channel(Channel::vOut);
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double dev = std::abs(v[i] - ctrl.v_ref);
    if (dev > r.max_deviation) {
      r.max_deviation = dev;
      r.t_max_deviation = t[i];
    }
  }

  r.fsw_min_seen = std::numeric_limits<double>::infinity();
  r.fsw_max_seen = 0.0;
  bool override_seen = false;
  double peak_sum = 0.0;
  std::size_t peak_count = 0;
  const double band = 0.01 * ctrl.v_ref;
  double last_outside = -1.0;
  for (std::size_t i = 0; i < tr.cycles.size(); ++i) {
    const CycleInfo& c = tr.cycles[i];
    r.fsw_min_seen = std::min(r.fsw_min_seen, c.fsw);
    r.fsw_max_seen = std::max(r.fsw_max_seen, c.fsw);
    // frequency of cycle i+1 was chosen from cycle i
    const bool overridden = i + 1 < tr.cycles.size() &&
                            c.iLr_peak > ctrl.i_limit;
    if (overridden) {
      ++r.overcurrent_cycles;
      if (!override_seen) r.iLr_peak_before_override = c.iLr_peak;
      override_seen = true;
    } else if (override_seen) {
      peak_sum += c.iLr_peak;
      ++peak_count;
    }
    if (std::abs(c.vOut_avg - ctrl.v_ref) > band) last_outside = c.t_start + 1.0 / c.fsw;
  }
  if (tr.cycles.empty()) r.fsw_min_seen = r.fsw_max_seen = warm.fsw;
  if (peak_count) r.iLr_mean_peak_after_override = peak_sum / static_cast<double>(peak_count);

  const std::size_t tail = std::min<std::size_t>(tr.cycles.size(), 20);
  double acc = 0.0;
  for (std::size_t i = tr.cycles.size() - tail; i < tr.cycles.size(); ++i) acc += tr.cycles[i].vOut_avg;
  r.final_vout = tail ? acc / static_cast<double>(tail) : warm.pop.metrics.vOut_mean;
  r.recovered = std::abs(r.final_vout - ctrl.v_ref) <= band &&
                (tr.cycles.empty() || last_outside < tr.cycles.back().t_start);
  if (r.recovered) r.recovery_time = std::max(0.0, last_outside - r.last_load_change);

  out.waveform = std::move(tr.waveform);
  out.zvs = std::move(tr.zvs);
  return out;
}

}  // namespace llc

#include "llc/steady_state.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "llc/errors.hpp"

namespace llc {

const char* to_string(PopMethod m) noexcept {
  return m == PopMethod::Shooting ? "shooting" : "cycle_iteration";
}

StateVector state_vector(const SimState& s) { return {s.iLr, s.vCr, s.iLm, s.vOut}; }

double scaled_distance(const StateVector& a, const StateVector& b, const StateVector& scale) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = std::abs(a[i] - b[i]);
    if (d == 0.0) continue;
    worst = std::max(worst, scale[i] > 0.0 ? d / scale[i] : std::numeric_limits<double>::infinity());
  }
  return worst;
}

StateVector cycle_peaks(const Waveform& w) {
  return {peak_abs(w, Channel::iLr), peak_abs(w, Channel::vCr), peak_abs(w, Channel::iLm),
          peak_abs(w, Channel::vOut)};
}

namespace {

SimState with_states(const StateVector& x) {
  SimState s;
  s.iLr = x[0];
  s.vCr = x[1];
  s.iLm = x[2];
  s.vOut = x[3];
  return s;
}

class PeriodMap {
 public:
  PeriodMap(const SimConfig& cfg) : cfg_(cfg) {
    const double G = cfg.load.conductance(0.0);
    cfg_.load = LoadProfile::resistance(G > 0.0 ? 1.0 / G : std::numeric_limits<double>::infinity());
    cfg_.frequency = nullptr;
    cfg_.soft_start = 0.0;
    cfg_.t_end = 1.0 / cfg.fsw;
    cfg_.record_interval = 0.0;
  }

  double period() const { return cfg_.t_end; }

  /// Projects x onto a consistent mode at the start of a high-side on-time.
  SimState start_state(const StateVector& x) const {
    SimState s = with_states(x);
    s.mode.sw = SwitchPhase::HighOn;
    resolve_mode(s, cfg_.tank, {cfg_.Vin, cfg_.load.conductance(0.0)}, std::nullopt);
    return s;
  }

  TransientResult run(const SimState& start, bool record) {
    ++evaluations;
    SimConfig c = cfg_;
    c.record = record;
    return run_transient(c, start);
  }

  std::size_t evaluations = 0;

 private:
  SimConfig cfg_;
};

struct Iterate {
  SimState start;
  TransientResult run;
  StateVector peaks{};
  double residual = 0.0;
};

Iterate evaluate(PeriodMap& map, const StateVector& x) {
  Iterate it;
  it.start = map.start_state(x);
  it.run = map.run(it.start, true);
  it.peaks = cycle_peaks(it.run.waveform);
  it.residual = scaled_distance(state_vector(it.run.final_state), state_vector(it.start), it.peaks);
  return it;
}

void check_divergence(const SimState& s, const TankParams& k, double reference) {
  if (reference > 0.0 && stored_energy(s, k) > 1e4 * reference) {
    std::ostringstream os;
    os << "periodic search diverged: stored energy " << stored_energy(s, k) << " J vs reference "
       << reference << " J";
    throw Error(ErrorKind::Divergence, os.str());
  }
}

// Distance to the fixed point implied by the last step and the worst recent
// contraction ratio; a lightly damped mode leaves it well above the step.
double estimated_error(const std::vector<double>& r) {
  const std::size_t n = r.size();
  if (r[n - 1] == 0.0) return 0.0;
  if (n < 4) return std::numeric_limits<double>::infinity();
  double rho = 0.0;
  for (std::size_t k = n - 3; k < n; ++k) {
    if (r[k - 1] == 0.0) return std::numeric_limits<double>::infinity();
    rho = std::max(rho, r[k] / r[k - 1]);
  }
  return rho < 1.0 ? r[n - 1] / (1.0 - rho) : std::numeric_limits<double>::infinity();
}

PopResult finish(const Iterate& it, PopMethod method, std::size_t cycles) {
  PopResult r;
  r.x0 = it.start;
  r.period = it.run.final_state.t - it.start.t;
  r.residual = it.residual;
  r.method = method;
  r.cycles = cycles;
  r.cycle_waveform = it.run.waveform;
  r.zvs = it.run.zvs;
  r.x_end = it.run.final_state;
  r.metrics = pop_metrics(r);
  return r;
}

}  // namespace

PopResult find_pop(const SimConfig& cfg, PopMethod method, const PopOptions& opt,
                   std::optional<SimState> initial) {
  if (!(cfg.fsw > 0.0)) config_error("find_pop: fixed fsw required");
  PeriodMap map(cfg);
  StateVector x = state_vector(initial ? *initial : fha_initial_state(cfg));
  const double reference = std::max(stored_energy(with_states(x), cfg.tank),
                                    0.5 * cfg.tank.Cout * cfg.Vin * cfg.Vin / (cfg.tank.n * cfg.tank.n));

  const std::size_t iterate_limit = method == PopMethod::CycleIteration ? opt.max_cycles : opt.warm_cycles;
  Iterate it;
  std::vector<double> history;
  for (std::size_t c = 0; c < iterate_limit; ++c) {
    it = evaluate(map, x);
    history.push_back(it.residual);
    if (it.residual < opt.tolerance &&
        (method == PopMethod::Shooting || estimated_error(history) < opt.tolerance))
      return finish(it, method, map.evaluations);
    check_divergence(it.run.final_state, cfg.tank, reference);
    x = state_vector(it.run.final_state);
  }
  if (method == PopMethod::CycleIteration) {
    std::ostringstream os;
    os << "cycle iteration did not converge in " << opt.max_cycles << " cycles (residual "
       << it.residual << ")";
    throw Error(ErrorKind::NoConvergence, os.str());
  }

  // Newton on F(x) = P(x) - x with a forward-difference Jacobian.
  it = evaluate(map, x);
  for (std::size_t n = 0; n < opt.max_newton; ++n) {
    if (it.residual < opt.tolerance) return finish(it, method, map.evaluations);
    const StateVector x0 = state_vector(it.start);
    const StateVector px = state_vector(it.run.final_state);
    Eigen::Matrix4d J;
    for (int j = 0; j < 4; ++j) {
      StateVector xp = x0;
      const double delta = opt.fd_perturbation * std::max(std::abs(x0[j]), it.peaks[j] > 0.0 ? it.peaks[j] : 1.0);
      xp[j] += delta;
      const SimState sp = map.start_state(xp);
      const StateVector pp = state_vector(map.run(sp, false).final_state);
      for (int i = 0; i < 4; ++i) J(i, j) = (pp[i] - px[i]) / delta;
    }
    J -= Eigen::Matrix4d::Identity();
    Eigen::Vector4d F;
    for (int i = 0; i < 4; ++i) F(i) = px[i] - x0[i];
    const Eigen::Vector4d dx = J.fullPivLu().solve(-F);

    // damped update: accept the first step length that reduces the residual
    double lambda = 1.0;
    Iterate trial;
    bool accepted = false;
    for (int k = 0; k < 8; ++k, lambda *= 0.5) {
      StateVector xn = x0;
      for (int i = 0; i < 4; ++i) xn[i] += lambda * dx(i);
      check_divergence(with_states(xn), cfg.tank, reference);
      trial = evaluate(map, xn);
      if (trial.residual < it.residual) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      // Newton stalled near a mode boundary; fall back to one plain cycle
      trial = evaluate(map, state_vector(it.run.final_state));
    }
    it = std::move(trial);
  }
  if (it.residual < opt.tolerance) return finish(it, method, map.evaluations);
  std::ostringstream os;
  os << "shooting did not converge in " << opt.max_newton << " Newton steps (residual "
     << it.residual << ")";
  throw Error(ErrorKind::NoConvergence, os.str());
}

PopMetrics pop_metrics(const PopResult& pop) {
  PopMetrics m;
  const Waveform& w = pop.cycle_waveform;
  m.vOut_mean = mean(w, Channel::vOut);
  m.vOut_ripple_pp = peak_to_peak(w, Channel::vOut);
  m.iLr_rms = rms(w, Channel::iLr);
  m.iLr_peak = peak_abs(w, Channel::iLr);
  m.zvs_all_edges = pop.zvs.all_achieved();
  if (pop.period > 0.0) {
    m.p_in = (pop.x_end.e_source - pop.x0.e_source) / pop.period;
    m.p_out = (pop.x_end.e_load - pop.x0.e_load) / pop.period;
  }
  return m;
}

}  // namespace llc

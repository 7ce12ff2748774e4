#include "llc/sim.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <sstream>

#include "llc/errors.hpp"
#include "llc/gain.hpp"
#include "llc/numerics.hpp"

namespace llc {

const char* to_string(SwitchPhase p) noexcept {
  switch (p) {
    case SwitchPhase::HighOn: return "high_on";
    case SwitchPhase::DeadToLow: return "dead_to_low";
    case SwitchPhase::LowOn: return "low_on";
    case SwitchPhase::DeadToHigh: return "dead_to_high";
  }
  return "?";
}

const char* to_string(RectPhase p) noexcept {
  switch (p) {
    case RectPhase::D1: return "D1";
    case RectPhase::D2: return "D2";
    case RectPhase::Off: return "off";
  }
  return "?";
}

const char* to_string(NodeState s) noexcept {
  switch (s) {
    case NodeState::Driven: return "driven";
    case NodeState::ClampLow: return "clamp_low";
    case NodeState::ClampHigh: return "clamp_high";
    case NodeState::Float: return "float";
  }
  return "?";
}

LoadProfile LoadProfile::resistance(double ohms) {
  LoadProfile p;
  p.points.push_back({0.0, Breakpoint::Kind::Resistance, ohms});
  return p;
}

LoadProfile LoadProfile::current(double amps, double reference_voltage) {
  LoadProfile p;
  p.reference_voltage = reference_voltage;
  p.points.push_back({0.0, Breakpoint::Kind::Current, amps});
  return p;
}

double LoadProfile::conductance(double t) const {
  const Breakpoint* active = nullptr;
  for (const auto& b : points) {
    if (b.t_start <= t) active = &b;
    else break;
  }
  if (!active) return 0.0;
  if (active->kind == Breakpoint::Kind::Resistance)
    return std::isinf(active->value) ? 0.0 : 1.0 / active->value;
  return active->value / reference_voltage;
}

std::optional<double> LoadProfile::next_change(double t) const {
  for (const auto& b : points)
    if (b.t_start > t) return b.t_start;
  return std::nullopt;
}

bool ZvsReport::all_achieved() const {
  return std::all_of(edges.begin(), edges.end(), [](const ZvsEdge& e) { return e.achieved; });
}

std::size_t ZvsReport::failures() const {
  return static_cast<std::size_t>(
      std::count_if(edges.begin(), edges.end(), [](const ZvsEdge& e) { return !e.achieved; }));
}

namespace {

// iLr, vCr, iLm, vOut, e_source, e_load, q_vout
using Vec = std::array<double, 7>;

Vec to_vec(const SimState& s) {
  return {s.iLr, s.vCr, s.iLm, s.vOut, s.e_source, s.e_load, s.q_vout};
}

void assign(SimState& s, const Vec& x) {
  s.iLr = x[0];
  s.vCr = x[1];
  s.iLm = x[2];
  s.vOut = x[3];
  s.e_source = x[4];
  s.e_load = x[5];
  s.q_vout = x[6];
}

bool is_dead(SwitchPhase p) {
  return p == SwitchPhase::DeadToLow || p == SwitchPhase::DeadToHigh;
}

// Node voltage for every state except Float.
double rail(const Mode& m, double Vin) {
  switch (m.node) {
    case NodeState::Driven: return m.sw == SwitchPhase::HighOn ? Vin : 0.0;
    case NodeState::ClampHigh: return Vin;
    default: return 0.0;
  }
}

bool source_connected(const Mode& m) {
  return (m.node == NodeState::Driven && m.sw == SwitchPhase::HighOn) ||
         m.node == NodeState::ClampHigh;
}

double diode_threshold(double vOut, const TankParams& k) { return k.n * (vOut + k.Vf); }

// Primary voltage with the rectifier off (Lr and Lm in series).
double vp_open(double vCr, const Mode& m, const TankParams& k, double Vin) {
  if (m.node == NodeState::Float) return 0.0;
  return k.Lm / (k.Lr + k.Lm) * (rail(m, Vin) - vCr);
}

double primary_voltage(const Vec& x, const Mode& m, const TankParams& k, double Vin) {
  const double thr = diode_threshold(x[3], k);
  switch (m.rect) {
    case RectPhase::D1: return thr;
    case RectPhase::D2: return -thr;
    case RectPhase::Off: return vp_open(x[1], m, k, Vin);
  }
  return 0.0;
}

Vec derivative(const Vec& x, const Mode& m, const TankParams& k, const Drive& d) {
  const double iLr = x[0], vCr = x[1], iLm = x[2], vOut = x[3];
  const double thr = diode_threshold(vOut, k);
  Vec dx{};
  double is = 0.0;  // rectified current into Cout
  if (m.node == NodeState::Float) {
    switch (m.rect) {
      case RectPhase::D1: dx[2] = thr / k.Lm; is = k.n * (iLr - iLm); break;
      case RectPhase::D2: dx[2] = -thr / k.Lm; is = k.n * (iLm - iLr); break;
      case RectPhase::Off: break;
    }
  } else {
    const double vsw = rail(m, d.Vin);
    switch (m.rect) {
      case RectPhase::D1:
        dx[0] = (vsw - vCr - thr) / k.Lr;
        dx[2] = thr / k.Lm;
        is = k.n * (iLr - iLm);
        break;
      case RectPhase::D2:
        dx[0] = (vsw - vCr + thr) / k.Lr;
        dx[2] = -thr / k.Lm;
        is = k.n * (iLm - iLr);
        break;
      case RectPhase::Off:
        dx[0] = dx[2] = (vsw - vCr) / (k.Lr + k.Lm);
        break;
    }
    dx[1] = iLr / k.Cr;
  }
  dx[3] = (is - d.G * vOut) / k.Cout;
  dx[4] = source_connected(m) ? d.Vin * iLr : 0.0;
  dx[5] = d.G * vOut * vOut;
  dx[6] = vOut;
  return dx;
}

Vec rk4(const Vec& x, const Mode& m, const TankParams& k, const Drive& d, double h) {
  auto axpy = [](const Vec& a, double s, const Vec& b) {
    Vec r;
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = a[i] + s * b[i];
    return r;
  };
  const Vec k1 = derivative(x, m, k, d);
  const Vec k2 = derivative(axpy(x, 0.5 * h, k1), m, k, d);
  const Vec k3 = derivative(axpy(x, 0.5 * h, k2), m, k, d);
  const Vec k4 = derivative(axpy(x, h, k3), m, k, d);
  Vec r;
  for (std::size_t i = 0; i < r.size(); ++i)
    r[i] = x[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  return r;
}

struct EventSet {
  std::array<double, 4> g{};
  std::array<Event::Kind, 4> kind{};
  std::size_t count = 0;

  void add(Event::Kind k, double v) {
    kind[count] = k;
    g[count++] = v;
  }
};

// Every function is > 0 while the mode holds; a drop to <= 0 is a boundary.
EventSet event_functions(const Vec& x, const Mode& m, const TankParams& k, double Vin) {
  EventSet e;
  const double thr = diode_threshold(x[3], k);
  switch (m.rect) {
    case RectPhase::D1: e.add(Event::Kind::RectifierOff, x[0] - x[2]); break;
    case RectPhase::D2: e.add(Event::Kind::RectifierOff, x[2] - x[0]); break;
    case RectPhase::Off: {
      const double vp = vp_open(x[1], m, k, Vin);
      e.add(Event::Kind::RectifierOn, thr - vp);
      e.add(Event::Kind::RectifierOn, thr + vp);
      break;
    }
  }
  switch (m.node) {
    case NodeState::ClampLow: e.add(Event::Kind::NodeClamp, x[0]); break;
    case NodeState::ClampHigh: e.add(Event::Kind::NodeClamp, -x[0]); break;
    case NodeState::Float: {
      const double vf = x[1] + primary_voltage(x, m, k, Vin);
      e.add(Event::Kind::NodeClamp, vf);
      e.add(Event::Kind::NodeClamp, Vin - vf);
      break;
    }
    case NodeState::Driven: break;
  }
  return e;
}

// The absolute floor covers event localization error (time tolerance times
// current slope), which does not shrink with the currents themselves.
double violation_tolerance(const SimState& s) {
  return 1e-9 * (std::abs(s.iLr) + std::abs(s.iLm)) + 1e-9;
}

[[noreturn]] void mode_violation(const SimState& s, const char* what) {
  std::ostringstream os;
  os << "mode violation at t=" << s.t << ": " << what << " (rect=" << to_string(s.mode.rect)
     << ", node=" << to_string(s.mode.node) << ", iLr=" << s.iLr << ", iLm=" << s.iLm << ")";
  throw Error(ErrorKind::ModeViolation, os.str(), s.t);
}

void check_consistent(const SimState& s) {
  const double tol = violation_tolerance(s);
  const double g = s.iLr - s.iLm;
  switch (s.mode.rect) {
    case RectPhase::D1: if (g < -tol) mode_violation(s, "negative D1 current"); break;
    case RectPhase::D2: if (g > tol) mode_violation(s, "negative D2 current"); break;
    case RectPhase::Off: if (std::abs(g) > tol) mode_violation(s, "secondary current with rectifier off"); break;
  }
  switch (s.mode.node) {
    case NodeState::ClampLow: if (s.iLr < -tol) mode_violation(s, "low body diode reverse current"); break;
    case NodeState::ClampHigh: if (s.iLr > tol) mode_violation(s, "high body diode reverse current"); break;
    case NodeState::Float: if (std::abs(s.iLr) > tol) mode_violation(s, "tank current with node floating"); break;
    case NodeState::Driven: break;
  }
  if (s.mode.node == NodeState::Driven && is_dead(s.mode.sw))
    mode_violation(s, "node driven during dead time");
}

RectPhase rect_by_voltage(SimState& s, const Mode& m, const TankParams& k, double Vin) {
  s.iLm = s.iLr;  // rectifier current is zero at the decision point
  const double thr = diode_threshold(s.vOut, k);
  const double vp = vp_open(s.vCr, m, k, Vin);
  if (vp > thr) return RectPhase::D1;
  if (vp < -thr) return RectPhase::D2;
  return RectPhase::Off;
}

RectPhase resolve_rect(SimState& s, const Mode& m, const TankParams& k, double Vin,
                       std::optional<RectPhase> previous) {
  const double g = s.iLr - s.iLm;
  const double tol = violation_tolerance(s);
  if (!previous) {
    if (g > tol) return RectPhase::D1;
    if (g < -tol) return RectPhase::D2;
    return rect_by_voltage(s, m, k, Vin);
  }
  switch (*previous) {
    case RectPhase::D1:
      if (g > 0.0) return RectPhase::D1;
      if (g < -tol) mode_violation(s, "D1 current went negative without an event");
      return rect_by_voltage(s, m, k, Vin);
    case RectPhase::D2:
      if (g < 0.0) return RectPhase::D2;
      if (g > tol) mode_violation(s, "D2 current went negative without an event");
      return rect_by_voltage(s, m, k, Vin);
    case RectPhase::Off:
      return rect_by_voltage(s, m, k, Vin);
  }
  return RectPhase::Off;
}

NodeState float_check(SimState& s, const Mode& m, const TankParams& k, double Vin) {
  double vp = 0.0;
  if (m.rect == RectPhase::D1) vp = diode_threshold(s.vOut, k);
  if (m.rect == RectPhase::D2) vp = -diode_threshold(s.vOut, k);
  const double vf = s.vCr + vp;
  if (vf <= 0.0) return NodeState::ClampLow;
  if (vf >= Vin) return NodeState::ClampHigh;
  s.iLr = 0.0;
  if (m.rect == RectPhase::Off) s.iLm = 0.0;
  return NodeState::Float;
}

NodeState resolve_node(SimState& s, const Mode& m, const TankParams& k, double Vin,
                       NodeState tentative) {
  if (!is_dead(m.sw)) return NodeState::Driven;
  switch (tentative) {
    case NodeState::Driven:
      if (s.iLr > 0.0) return NodeState::ClampLow;
      if (s.iLr < 0.0) return NodeState::ClampHigh;
      break;
    case NodeState::ClampLow:
      if (s.iLr > 0.0) return NodeState::ClampLow;
      break;
    case NodeState::ClampHigh:
      if (s.iLr < 0.0) return NodeState::ClampHigh;
      break;
    case NodeState::Float: break;
  }
  return float_check(s, m, k, Vin);
}

}  // namespace

double switching_node_voltage(const SimState& s, const TankParams& k, double Vin) {
  if (s.mode.node == NodeState::Float)
    return s.vCr + primary_voltage(to_vec(s), s.mode, k, Vin);
  return rail(s.mode, Vin);
}

double stored_energy(const SimState& s, const TankParams& k) {
  return 0.5 * (k.Lr * s.iLr * s.iLr + k.Cr * s.vCr * s.vCr + k.Lm * s.iLm * s.iLm +
                k.Cout * s.vOut * s.vOut);
}

void resolve_mode(SimState& s, const TankParams& k, const Drive& d,
                  const std::optional<Mode>& previous) {
  Mode m = s.mode;
  NodeState tentative = NodeState::Driven;
  if (is_dead(m.sw)) {
    tentative = previous ? previous->node : NodeState::Driven;
    if (tentative == NodeState::Driven) tentative = s.iLr >= 0.0 ? NodeState::ClampLow : NodeState::ClampHigh;
    m.node = tentative;
  } else {
    m.node = NodeState::Driven;
  }
  std::optional<RectPhase> prev_rect;
  if (previous) prev_rect = previous->rect;
  m.rect = resolve_rect(s, m, k, d.Vin, prev_rect);
  if (is_dead(m.sw)) {
    const NodeState entry = previous && previous->node != NodeState::Driven ? previous->node
                                                                            : NodeState::Driven;
    m.node = resolve_node(s, m, k, d.Vin, entry);
    if (m.node != tentative) m.rect = resolve_rect(s, m, k, d.Vin, m.rect);
  }
  s.mode = m;
}

SimState step(const SimState& state, const TankParams& tank, const Drive& drive, double dt) {
  check_consistent(state);
  SimState out = state;
  assign(out, rk4(to_vec(state), state.mode, tank, drive, dt));
  out.t = state.t + dt;
  return out;
}

namespace {

struct Located {
  Event event;
  double h = 0.0;  // step length to the non-positive side of the crossing
};

std::vector<Located> locate_all(const SimState& before, double h, const Vec& x1,
                                const TankParams& k, const Drive& d, double tol) {
  const Vec x0 = to_vec(before);
  const EventSet g0 = event_functions(x0, before.mode, k, d.Vin);
  const EventSet g1 = event_functions(x1, before.mode, k, d.Vin);
  std::vector<Located> found;
  for (std::size_t i = 0; i < g0.count; ++i) {
    if (!(g0.g[i] > 0.0 && g1.g[i] <= 0.0)) continue;
    auto g = [&](double hh) {
      return event_functions(rk4(x0, before.mode, k, d, hh), before.mode, k, d.Vin).g[i];
    };
    const auto c = numerics::locate_crossing(g, 0.0, h, tol, 200);
    if (!c.converged) {
      std::ostringstream os;
      os << "event bisection did not converge near t=" << before.t;
      throw Error(ErrorKind::EventLocalization, os.str(), before.t);
    }
    found.push_back({{g0.kind[i], before.t + c.hi}, c.hi});
  }
  std::sort(found.begin(), found.end(),
            [](const Located& a, const Located& b) { return a.h < b.h; });
  return found;
}

}  // namespace

std::vector<Event> detect_events(const SimState& before, const SimState& after,
                                 const TankParams& tank, const Drive& drive, double period,
                                 double rel_tol) {
  const double h = after.t - before.t;
  if (!(h > 0.0)) return {};
  std::vector<Event> out;
  for (const auto& l : locate_all(before, h, to_vec(after), tank, drive, rel_tol * period))
    out.push_back(l.event);
  return out;
}

SimState fha_initial_state(const SimConfig& cfg) {
  const TankParams& k = cfg.tank;
  SimState s;
  s.vCr = cfg.Vin / 2.0;
  const double G = cfg.load.conductance(0.0);
  const double Re = G > 0.0 ? effective_load(k.n, 1.0 / G) : std::numeric_limits<double>::infinity();
  const NormalizedPoint p = normalize(k, Re, cfg.fsw);
  const GainPoint gp = evaluate_gain(p);
  const double vout = gp.pole || !std::isfinite(gp.Mg) ? cfg.Vin / (2.0 * k.n)
                                                       : gp.Mg * cfg.Vin / (2.0 * k.n);
  s.vOut = std::max(0.0, vout - k.Vf);

  // fundamental phasors with the node high on [0, T/2): vsw ~ Vin/2 + (2 Vin/pi) sin(wt)
  using namespace std::complex_literals;
  const double w = 2.0 * kPi * cfg.fsw;
  const std::complex<double> zl = 1i * w * k.Lm;
  const std::complex<double> zpar = std::isinf(Re) ? zl : zl * Re / (zl + Re);
  const std::complex<double> zin = 1i * w * k.Lr + 1.0 / (1i * w * k.Cr) + zpar;
  const std::complex<double> v1 = 2.0 * cfg.Vin / kPi;
  const std::complex<double> i1 = v1 / zin;
  const std::complex<double> im = i1 * zpar / zl;
  s.iLr = i1.imag();
  s.iLm = im.imag();
  s.vCr += (i1 / (1i * w * k.Cr)).imag();
  return s;
}

TransientResult run_transient(const SimConfig& cfg, const SimState& initial) {
  const TankParams& k = cfg.tank;
  validate(k);
  if (!(cfg.Vin >= 0.0)) config_error("simulation: Vin must be >= 0");
  if (!(cfg.t_end >= 0.0)) config_error("simulation: t_end must be >= 0");
  if (!cfg.frequency && !(cfg.fsw > 0.0)) config_error("simulation: fsw must be > 0");
  if (cfg.steps_per_period < 4) config_error("simulation: steps_per_period must be >= 4");
  for (const auto& b : cfg.load.points) {
    if (b.kind == LoadProfile::Breakpoint::Kind::Current &&
        (!(b.value >= 0.0) || !(cfg.load.reference_voltage > 0.0)))
      config_error("load: current breakpoints need value >= 0 and a reference voltage > 0");
    if (b.kind == LoadProfile::Breakpoint::Kind::Resistance && !(b.value > 0.0))
      config_error("load: resistance must be > 0");
  }

  TransientResult res;
  SimState s = initial;
  s.mode.sw = SwitchPhase::HighOn;
  s.mode.node = NodeState::Driven;
  const double t0 = s.t;
  const double t_stop = t0 + cfg.t_end;
  auto drive_at = [&](double t) { return Drive{cfg.Vin, cfg.load.conductance(t)}; };
  resolve_mode(s, k, drive_at(s.t), std::nullopt);
  if (cfg.t_end == 0.0) {
    res.final_state = s;
    return res;
  }

  const double f0 = series_resonance(k);
  double next_record = t0;
  auto record = [&](const SimState& st, bool force) {
    if (!cfg.record) return;
    if (!force && cfg.record_interval > 0.0 && st.t < next_record) return;
    if (cfg.record_interval > 0.0)
      while (next_record <= st.t) next_record += cfg.record_interval;
    Sample smp;
    smp.t = st.t;
    const double G = cfg.load.conductance(st.t);
    smp.values = {switching_node_voltage(st, k, cfg.Vin),
                  st.iLr,
                  st.vCr,
                  st.iLm,
                  st.vOut,
                  G * st.vOut,
                  st.mode.sw == SwitchPhase::HighOn ? 1.0 : 0.0,
                  st.mode.sw == SwitchPhase::LowOn ? 1.0 : 0.0};
    res.waveform.append(smp);
  };
  record(s, true);

  auto choose_frequency = [&](const std::optional<CycleInfo>& last) {
    if (cfg.frequency) return cfg.frequency(last);
    const double elapsed = s.t - t0;
    if (cfg.soft_start > 0.0 && elapsed < cfg.soft_start) {
      const double f_start = std::max(2.0 * f0, cfg.fsw);
      return cfg.fsw + (f_start - cfg.fsw) * (1.0 - elapsed / cfg.soft_start);
    }
    return cfg.fsw;
  };

  std::optional<CycleInfo> last;
  std::size_t cycle_index = 0;
  double iLr_peak = 0.0;

  // Integrates in the current switch phase up to t_target.
  auto integrate_until = [&](double t_target, double h_nom, double period) {
    const double tol = 1e-12 * period;
    std::size_t stalled = 0;
    while (s.t < t_target) {
      const Drive d = drive_at(s.t);
      double limit = t_target;
      const auto load_change = cfg.load.next_change(s.t);
      if (load_change && *load_change < limit) limit = *load_change;
      const double h = std::min(h_nom, limit - s.t);
      const bool to_limit = h == limit - s.t;

      SimState next = step(s, k, d, h);
      const auto found = locate_all(s, h, to_vec(next), k, d, tol);
      if (!found.empty()) {
        const Located& ev = found.front();
        SimState at = s;
        assign(at, rk4(to_vec(s), s.mode, k, d, ev.h));
        at.t = s.t + ev.h;
        stalled = ev.h <= tol ? stalled + 1 : 0;
        if (stalled > 64) mode_violation(at, "mode chattering without time advance");
        const Mode before = s.mode;
        s = at;
        resolve_mode(s, k, d, before);
        res.events.push_back(ev.event);
        iLr_peak = std::max(iLr_peak, std::abs(s.iLr));
        record(s, true);
        continue;
      }
      stalled = 0;
      s = next;
      if (to_limit) s.t = limit;
      iLr_peak = std::max(iLr_peak, std::abs(s.iLr));
      if (to_limit && load_change && limit == *load_change) {
        const Mode before = s.mode;
        resolve_mode(s, k, drive_at(s.t), before);
        res.events.push_back({Event::Kind::Load, s.t});
        record(s, true);
      } else {
        record(s, false);
      }
    }
  };

  auto switch_to = [&](SwitchPhase phase) {
    const Mode before = s.mode;
    s.mode.sw = phase;
    resolve_mode(s, k, drive_at(s.t), before);
    if (phase == SwitchPhase::LowOn || phase == SwitchPhase::HighOn) {
      ZvsEdge e;
      e.t = s.t;
      e.which = phase == SwitchPhase::LowOn ? Switch::Low : Switch::High;
      e.iLr = s.iLr;
      e.achieved = phase == SwitchPhase::LowOn ? before.node == NodeState::ClampLow
                                               : before.node == NodeState::ClampHigh;
      res.zvs.edges.push_back(e);
    }
    res.events.push_back({Event::Kind::Gate, s.t});
    record(s, true);
  };

  const double end_tol = 1e-9 / std::max(cfg.fsw, f0);
  while (s.t < t_stop - end_tol) {
    const double fsw = choose_frequency(last);
    if (!(fsw > 0.0) || !std::isfinite(fsw)) config_error("simulation: frequency policy returned an invalid fsw");
    const double T = 1.0 / fsw;
    if (!(k.t_dead < T / 2.0)) config_error("simulation: dead time must be shorter than half a period");
    double h_nom = T / static_cast<double>(cfg.steps_per_period);
    if (cfg.dt_max > 0.0) h_nom = std::min(h_nom, cfg.dt_max);

    const double c0 = s.t;
    const double q0 = s.q_vout;
    iLr_peak = std::abs(s.iLr);
    const std::array<std::pair<double, SwitchPhase>, 4> edges{{
        {c0 + T / 2.0 - k.t_dead, SwitchPhase::DeadToLow},
        {c0 + T / 2.0, SwitchPhase::LowOn},
        {c0 + T - k.t_dead, SwitchPhase::DeadToHigh},
        {c0 + T, SwitchPhase::HighOn},
    }};
    bool stopped = false;
    for (const auto& [t_edge, phase] : edges) {
      if (t_edge > t_stop + end_tol) {
        integrate_until(t_stop, h_nom, T);
        stopped = true;
        break;
      }
      integrate_until(t_edge, h_nom, T);
      s.t = t_edge;
      switch_to(phase);
    }
    if (stopped) break;
    CycleInfo info;
    info.index = cycle_index++;
    info.t_start = c0;
    info.fsw = fsw;
    info.vOut_avg = (s.q_vout - q0) / T;
    info.iLr_peak = iLr_peak;
    res.cycles.push_back(info);
    last = info;
  }
  res.final_state = s;
  return res;
}

}  // namespace llc

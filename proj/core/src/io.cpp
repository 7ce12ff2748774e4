#include "llc/io.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "llc/errors.hpp"
#include "llc/gain.hpp"

namespace llc::io {

using json = nlohmann::json;

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw Error(ErrorKind::Config, "format_double failed");
  return std::string(buf, end);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) config_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) config_error("cannot write " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) config_error("write failed for " + path.string());
}

namespace {

json parse_json(std::string_view text, const std::string& what) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    config_error(what + ": " + e.what());
  }
}

// Object reader that tracks consumed keys so unknown fields are reported.
class Fields {
 public:
  Fields(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) config_error(where() + ": expected an object");
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  std::optional<double> number(const std::string& key) {
    seen_.insert(key);
    if (!j_.contains(key) || j_[key].is_null()) return std::nullopt;
    const json& v = j_[key];
    if (!v.is_number()) config_error(field(key) + ": expected a number");
    return v.get<double>();
  }

  double number_or(const std::string& key, double fallback) {
    return number(key).value_or(fallback);
  }

  double required(const std::string& key) {
    auto v = number(key);
    if (!v) config_error(field(key) + ": missing required number");
    return *v;
  }

  std::optional<std::string> string(const std::string& key) {
    seen_.insert(key);
    if (!j_.contains(key) || j_[key].is_null()) return std::nullopt;
    if (!j_[key].is_string()) config_error(field(key) + ": expected a string");
    return j_[key].get<std::string>();
  }

  std::optional<Fields> object(const std::string& key) {
    seen_.insert(key);
    if (!j_.contains(key) || j_[key].is_null()) return std::nullopt;
    return Fields(j_[key], path(key));
  }

  const json* raw(const std::string& key) {
    seen_.insert(key);
    return j_.contains(key) ? &j_[key] : nullptr;
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!seen_.count(it.key())) config_error(field(it.key()) + ": unknown field");
  }

  std::string path(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
  std::string field(const std::string& key) const { return "config field '" + path(key) + "'"; }

 private:
  std::string where() const { return "config '" + (path_.empty() ? std::string("<root>") : path_) + "'"; }

  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

ESeries parse_series(const std::string& s, const std::string& field) {
  if (s == "none" || s == "None") return ESeries::None;
  if (s == "E12" || s == "e12") return ESeries::E12;
  if (s == "E24" || s == "e24") return ESeries::E24;
  config_error(field + ": expected one of none, E12, E24");
}

std::vector<LoadProfile::Breakpoint> parse_breakpoints(const json& arr, const std::string& path) {
  using Kind = LoadProfile::Breakpoint::Kind;
  if (!arr.is_array()) config_error(path + ": expected an array of breakpoints");
  std::vector<LoadProfile::Breakpoint> out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    Fields f(arr[i], path + "[" + std::to_string(i) + "]");
    LoadProfile::Breakpoint b;
    b.t_start = f.required("t_start");
    auto iout = f.number("iout");
    auto rload = f.number("rload");
    if (iout.has_value() == rload.has_value())
      config_error(f.field("iout") + ": give exactly one of iout or rload");
    b.kind = iout ? Kind::Current : Kind::Resistance;
    b.value = iout ? *iout : *rload;
    if (iout && *iout < 0.0) config_error(f.field("iout") + ": must be >= 0");
    if (rload && !(*rload > 0.0)) config_error(f.field("rload") + ": must be > 0");
    if (!out.empty() && !(b.t_start > out.back().t_start))
      config_error(f.field("t_start") + ": breakpoints must be strictly increasing");
    f.finish();
    out.push_back(b);
  }
  if (out.empty()) config_error(path + ": needs at least one breakpoint");
  return out;
}

json requirements_json(const DesignRequirements& r) {
  return {{"vin_min", r.Vin_min},   {"vin_nom", r.Vin_nom},   {"vin_max", r.Vin_max},
          {"vout_min", r.Vout_min}, {"vout_nom", r.Vout_nom}, {"vout_max", r.Vout_max},
          {"iout_min", r.Iout_min}, {"iout_max", r.Iout_max}, {"f0_target", r.f0_target},
          {"fsw_min", r.fsw_min},   {"fsw_max", r.fsw_max}};
}

DesignRequirements parse_requirements(Fields f) {
  DesignRequirements r;
  r.Vin_min = f.required("vin_min");
  r.Vin_nom = f.required("vin_nom");
  r.Vin_max = f.required("vin_max");
  r.Vout_min = f.required("vout_min");
  r.Vout_nom = f.required("vout_nom");
  r.Vout_max = f.required("vout_max");
  r.Iout_min = f.required("iout_min");
  r.Iout_max = f.required("iout_max");
  r.f0_target = f.required("f0_target");
  r.fsw_min = f.required("fsw_min");
  r.fsw_max = f.required("fsw_max");
  f.finish();
  return r;
}

json tank_json(const TankParams& t) {
  return {{"lr", t.Lr}, {"cr", t.Cr}, {"lm", t.Lm}, {"n", t.n},
          {"vf", t.Vf}, {"cout", t.Cout}, {"t_dead", t.t_dead}};
}

TankParams parse_tank(Fields f, const TankParams& defaults) {
  TankParams t = defaults;
  t.Lr = f.required("lr");
  t.Cr = f.required("cr");
  t.Lm = f.required("lm");
  t.n = f.required("n");
  t.Vf = f.number_or("vf", defaults.Vf);
  t.Cout = f.number_or("cout", defaults.Cout);
  t.t_dead = f.number_or("t_dead", defaults.t_dead);
  f.finish();
  return t;
}

json state_json(const SimState& s) {
  return {{"t", s.t},
          {"iLr", s.iLr},
          {"vCr", s.vCr},
          {"iLm", s.iLm},
          {"vOut", s.vOut},
          {"switch", to_string(s.mode.sw)},
          {"rectifier", to_string(s.mode.rect)},
          {"node", to_string(s.mode.node)}};
}

json zvs_json(const ZvsReport& z) {
  return {{"edges", z.edges.size()}, {"failures", z.failures()}, {"all_achieved", z.all_achieved()}};
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace

ProjectConfig parse_config(std::string_view text, const std::filesystem::path& base_dir) {
  const json root = parse_json(text, "config is not valid JSON");
  Fields f(root, "");
  ProjectConfig c;
  c.schema_version = static_cast<int>(f.required("schema_version"));
  if (c.schema_version != kSchemaVersion)
    config_error(f.field("schema_version") + ": unsupported version " + std::to_string(c.schema_version));

  auto req = f.object("requirements");
  if (!req) config_error(f.field("requirements") + ": missing required object");
  c.requirements = parse_requirements(*req);
  validate(c.requirements);

  if (auto comp = f.object("components")) {
    c.Vf = comp->number_or("vf", c.Vf);
    c.Cout = comp->number_or("cout", c.Cout);
    c.t_dead = comp->number_or("t_dead", c.t_dead);
    comp->finish();
  }

  if (auto d = f.object("design")) {
    c.n = d->number("n");
    c.Ln = d->number("ln");
    c.Qe = d->number("qe");
    if (auto s = d->string("series")) c.series = parse_series(*s, d->field("series"));
    if (auto cen = d->object("centering")) {
      const auto mode = cen->string("mode").value_or("at_resonance");
      if (mode == "at_resonance") {
        c.centering = Centering::at_resonance();
      } else if (mode == "shifted") {
        c.centering = Centering::shifted(cen->required("gain"));
      } else {
        config_error(cen->field("mode") + ": expected at_resonance or shifted");
      }
      cen->finish();
    }
    d->finish();
  }

  if (auto t = f.object("tank")) {
    TankParams defaults;
    defaults.Vf = c.Vf;
    defaults.Cout = c.Cout;
    defaults.t_dead = c.t_dead;
    c.tank = parse_tank(*t, defaults);
    validate(*c.tank);
  }

  if (auto s = f.object("simulation")) {
    c.sim.vin = s->number("vin");
    c.sim.iout = s->number("iout");
    c.sim.rload = s->number("rload");
    c.sim.fsw = s->number("fsw");
    c.sim.t_end = s->number_or("t_end", c.sim.t_end);
    c.sim.dt_max = s->number_or("dt_max", c.sim.dt_max);
    const double spp = s->number_or("steps_per_period", static_cast<double>(c.sim.steps_per_period));
    if (!(spp >= 4.0) || spp != std::floor(spp)) config_error(s->field("steps_per_period") + ": integer >= 4 expected");
    c.sim.steps_per_period = static_cast<std::size_t>(spp);
    c.sim.soft_start = s->number_or("soft_start", c.sim.soft_start);
    c.sim.record_interval = s->number_or("record_interval", c.sim.record_interval);
    c.sim.pop_tolerance = s->number_or("pop_tolerance", c.sim.pop_tolerance);
    if (auto m = s->string("pop_method")) {
      if (*m == "shooting") c.sim.pop_method = PopMethod::Shooting;
      else if (*m == "cycle_iteration") c.sim.pop_method = PopMethod::CycleIteration;
      else config_error(s->field("pop_method") + ": expected shooting or cycle_iteration");
    }
    if (c.sim.t_end < 0.0) config_error(s->field("t_end") + ": must be >= 0");
    if (c.sim.rload && !(*c.sim.rload > 0.0)) config_error(s->field("rload") + ": must be > 0");
    if (c.sim.iout && *c.sim.iout < 0.0) config_error(s->field("iout") + ": must be >= 0");
    s->finish();
  }

  c.controller.v_ref = c.requirements.Vout_nom;
  c.controller.fsw_min = c.requirements.fsw_min;
  c.controller.fsw_max = c.requirements.fsw_max;
  if (auto k = f.object("controller")) {
    if (auto v = k->number("v_ref")) {
      c.controller.v_ref = *v;
      c.controller_vref_set = true;
    }
    c.controller.ki = k->number_or("ki", c.controller.ki);
    c.controller.kp = k->number_or("kp", c.controller.kp);
    c.controller.fsw_min = k->number_or("fsw_min", c.controller.fsw_min);
    c.controller.fsw_max = k->number_or("fsw_max", c.controller.fsw_max);
    c.controller.i_limit = k->number_or("i_limit", c.controller.i_limit);
    c.controller.f_shift_rate = k->number_or("f_shift_rate", c.controller.f_shift_rate);
    c.controller.update_period = k->number_or("update_period", c.controller.update_period);
    k->finish();
  }
  validate(c.controller);

  if (auto s = f.object("scenario")) {
    c.scenario.t_end = s->number_or("t_end", c.scenario.t_end);
    c.scenario.record_interval = s->number_or("record_interval", c.scenario.record_interval);
    const json* file = s->raw("file");
    const json* bps = s->raw("breakpoints");
    if ((file != nullptr) == (bps != nullptr))
      config_error(s->field("breakpoints") + ": give exactly one of breakpoints or file");
    if (file) {
      if (!file->is_string()) config_error(s->field("file") + ": expected a path string");
      std::filesystem::path p = file->get<std::string>();
      if (p.is_relative()) p = base_dir / p;
      c.scenario.load = parse_scenario(read_file(p), c.requirements.Vout_nom);
    } else {
      c.scenario.load.points = parse_breakpoints(*bps, s->field("breakpoints"));
      c.scenario.load.reference_voltage = c.requirements.Vout_nom;
    }
    if (!(c.scenario.t_end > 0.0)) config_error(s->field("t_end") + ": must be > 0");
    c.scenario_set = true;
    s->finish();
  }

  if (auto out = f.string("output_dir")) c.output_dir = *out;
  f.finish();
  return c;
}

ProjectConfig load_config(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  try {
    return parse_config(text, path.parent_path());
  } catch (const Error& e) {
    throw Error(e.kind(), path.string() + ": " + e.what());
  }
}

LoadProfile parse_scenario(std::string_view text, double reference_voltage) {
  LoadProfile p;
  p.reference_voltage = reference_voltage;
  p.points = parse_breakpoints(parse_json(text, "scenario is not valid JSON"), "scenario");
  return p;
}

std::string design_report_json(const DesignReport& r) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["feasible"] = r.feasible;
  j["requirements"] = requirements_json(r.requirements);
  j["n"] = r.n;
  j["ln"] = r.Ln;
  j["qe"] = r.Qe;
  j["f0"] = r.f0;
  j["fp"] = r.fp;
  j["band"] = {{"mg_min", r.band.Mg_min}, {"mg_max", r.band.Mg_max}, {"mg_inf", r.band.Mg_inf}};
  j["peak"] = {{"fn", r.peak.fn}, {"mg", r.peak.Mg}};
  j["region_boundary_fn"] = r.region_boundary_fn;
  if (r.feasible)
    j["fsw_band"] = {r.fsw_band.first, r.fsw_band.second};
  else
    j["fsw_band"] = nullptr;
  j["series"] = to_string(r.series);
  j["tank"] = tank_json(r.tank);
  j["tank_rounded"] = tank_json(r.tank_rounded);
  j["warnings"] = r.warnings;
  return dump(j);
}

DesignReport parse_design_report(std::string_view text) {
  const json root = parse_json(text, "design file is not valid JSON");
  // tolerant reader: only the inputs needed to rebuild the report
  try {
    Fields f(root, "");
    auto req = f.object("requirements");
    auto tank = f.object("tank");
    auto rounded = f.object("tank_rounded");
    if (!req || !tank) config_error("design file: requirements and tank are required");
    const DesignRequirements r = parse_requirements(*req);
    const TankParams t = parse_tank(*tank, {});
    DesignReport rep = check_feasibility(t, r, f.required("n"));
    if (rounded) rep.tank_rounded = parse_tank(*rounded, {});
    if (auto s = f.string("series")) rep.series = parse_series(*s, "series");
    return rep;
  } catch (const json::exception& e) {
    config_error(std::string("design file: ") + e.what());
  }
}

std::string pop_json(const PopResult& pop, double fsw, double vin, double rload) {
  const PopMetrics& m = pop.metrics;
  json j;
  j["mode"] = "pop";
  j["method"] = to_string(pop.method);
  j["fsw"] = fsw;
  j["vin"] = vin;
  j["rload"] = std::isinf(rload) ? json(nullptr) : json(rload);
  j["period"] = pop.period;
  j["residual"] = pop.residual;
  j["period_maps"] = pop.cycles;
  j["x0"] = state_json(pop.x0);
  j["metrics"] = {{"vOut_mean", m.vOut_mean}, {"vOut_ripple_pp", m.vOut_ripple_pp},
                  {"iLr_rms", m.iLr_rms},     {"iLr_peak", m.iLr_peak},
                  {"zvs_all_edges", m.zvs_all_edges}, {"p_in", m.p_in},
                  {"p_out", m.p_out}};
  j["zvs"] = zvs_json(pop.zvs);
  return dump(j);
}

std::string load_step_json(const LoadStepReport& r, const ControllerConfig& c) {
  json j;
  j["mode"] = "step";
  j["v_ref"] = r.v_ref;
  j["fsw_initial"] = r.fsw_initial;
  j["max_deviation"] = r.max_deviation;
  j["t_max_deviation"] = r.t_max_deviation;
  j["last_load_change"] = r.last_load_change;
  j["recovered"] = r.recovered;
  j["recovery_time"] = r.recovered ? json(r.recovery_time) : json(nullptr);
  j["final_vout"] = r.final_vout;
  j["fsw_min_seen"] = r.fsw_min_seen;
  j["fsw_max_seen"] = r.fsw_max_seen;
  j["overcurrent_cycles"] = r.overcurrent_cycles;
  j["cycles"] = r.cycles.size();
  j["controller"] = {{"ki", c.ki}, {"kp", c.kp}, {"fsw_min", c.fsw_min}, {"fsw_max", c.fsw_max},
                     {"i_limit", c.i_limit}, {"f_shift_rate", c.f_shift_rate}};
  return dump(j);
}

std::string transient_json(const TransientResult& tr, double fsw, double vin, double rload) {
  json j;
  j["mode"] = "transient";
  j["fsw"] = fsw;
  j["vin"] = vin;
  j["rload"] = std::isinf(rload) ? json(nullptr) : json(rload);
  j["samples"] = tr.waveform.size();
  j["cycles"] = tr.cycles.size();
  j["events"] = tr.events.size();
  j["final"] = state_json(tr.final_state);
  if (!tr.cycles.empty()) j["vOut_last_cycle_avg"] = tr.cycles.back().vOut_avg;
  j["zvs"] = zvs_json(tr.zvs);
  return dump(j);
}

void write_waveform_csv(std::ostream& os, const Waveform& w) {
  os << kWaveformHeader << '\n';
  std::string line;
  for (std::size_t i = 0; i < w.size(); ++i) {
    line = format_double(w.time()[i]);
    for (Channel c : kAllChannels) {
      line += ',';
      line += format_double(w.channel(c)[i]);
    }
    line += '\n';
    os << line;
  }
}

Waveform read_waveform_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != kWaveformHeader)
    config_error("waveform CSV: unexpected header");
  Waveform w;
  std::size_t row = 1;
  while (std::getline(is, line)) {
    ++row;
    if (line.empty()) continue;
    Sample s;
    std::array<double, kAllChannels.size() + 1> v{};
    const char* p = line.data();
    const char* end = line.data() + line.size();
    for (std::size_t k = 0; k < v.size(); ++k) {
      auto [next, ec] = std::from_chars(p, end, v[k]);
      if (ec != std::errc()) config_error("waveform CSV: bad number on row " + std::to_string(row));
      p = next;
      if (k + 1 < v.size()) {
        if (p == end || *p != ',') config_error("waveform CSV: missing column on row " + std::to_string(row));
        ++p;
      }
    }
    if (p != end) config_error("waveform CSV: extra data on row " + std::to_string(row));
    s.t = v[0];
    for (std::size_t k = 0; k < kAllChannels.size(); ++k) s.values[k] = v[k + 1];
    w.append(s);
  }
  return w;
}

GainFamily gain_family(const DesignReport& r) {
  GainFamily g;
  g.Ln = r.Ln;
  g.Mg_min = r.band.Mg_min;
  g.Mg_max = r.band.Mg_max;
  const double q_full = r.Qe;
  const double q_light = r.requirements.Iout_max > 0.0
                             ? q_full * r.requirements.Iout_min / r.requirements.Iout_max
                             : 0.0;
  g.curves = {{"no_load", 0.0},
              {"light_load", q_light},
              {"full_load", q_full},
              {"overload_2x", 2.0 * q_full},
              {"short_circuit", kShortCircuitQe}};
  const double lo = 0.3, hi = 3.0;
  const GainCurve grid = gain_curve(r.Ln, 0.0, lo, hi, default_samples(lo, hi));
  for (const auto& p : grid.points) g.fn.push_back(p.fn);
  for (const auto& [label, qe] : g.curves) {
    std::vector<GainPoint> pts;
    pts.reserve(g.fn.size());
    for (double fn : g.fn) pts.push_back(evaluate_gain({r.Ln, qe, fn}));
    g.values.push_back(std::move(pts));
  }
  return g;
}

std::string gain_curves_csv(const GainFamily& g) {
  std::ostringstream os;
  os << "fn";
  for (const auto& [label, qe] : g.curves) os << ",Mg_" << label << "(Qe=" << format_double(qe) << ")";
  os << '\n';
  for (std::size_t i = 0; i < g.fn.size(); ++i) {
    os << format_double(g.fn[i]);
    for (const auto& curve : g.values) os << ',' << format_double(curve[i].Mg);
    os << '\n';
  }
  return os.str();
}

std::string gain_curves_svg(const GainFamily& g) {
  const double W = 800, H = 500, ml = 70, mr = 170, mt = 30, mb = 60;
  const double pw = W - ml - mr, ph = H - mt - mb;
  const double x_lo = std::log10(g.fn.front()), x_hi = std::log10(g.fn.back());
  const double y_hi = 3.0;
  auto X = [&](double fn) { return ml + (std::log10(fn) - x_lo) / (x_hi - x_lo) * pw; };
  auto Y = [&](double mg) { return mt + (1.0 - mg / y_hi) * ph; };
  auto num = [](double v) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(2) << v;
    return os.str();
  };
  static const char* colors[] = {"#1f77b4", "#2ca02c", "#d62728", "#9467bd", "#7f7f7f", "#8c564b"};

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
     << "\" viewBox=\"0 0 " << W << ' ' << H << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect x=\"0\" y=\"0\" width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
  os << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << pw << "\" height=\"" << ph
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (double fn : {0.3, 0.4, 0.5, 0.6, 0.8, 1.0, 1.5, 2.0, 3.0}) {
    if (fn < g.fn.front() || fn > g.fn.back()) continue;
    os << "<line x1=\"" << num(X(fn)) << "\" y1=\"" << mt << "\" x2=\"" << num(X(fn)) << "\" y2=\""
       << mt + ph << "\" stroke=\"#dddddd\"/>\n";
    os << "<text x=\"" << num(X(fn)) << "\" y=\"" << mt + ph + 18 << "\" text-anchor=\"middle\">" << fn
       << "</text>\n";
  }
  for (double mg = 0.0; mg <= y_hi + 1e-9; mg += 0.5) {
    os << "<line x1=\"" << ml << "\" y1=\"" << num(Y(mg)) << "\" x2=\"" << ml + pw << "\" y2=\""
       << num(Y(mg)) << "\" stroke=\"#dddddd\"/>\n";
    os << "<text x=\"" << ml - 8 << "\" y=\"" << num(Y(mg) + 4) << "\" text-anchor=\"end\">" << mg
       << "</text>\n";
  }
  os << "<text x=\"" << ml + pw / 2 << "\" y=\"" << H - 15
     << "\" text-anchor=\"middle\">normalized frequency fn = fsw/f0 (log)</text>\n";
  os << "<text x=\"18\" y=\"" << mt + ph / 2 << "\" transform=\"rotate(-90 18 " << mt + ph / 2
     << ")\" text-anchor=\"middle\">gain Mg</text>\n";

  for (std::size_t c = 0; c < g.values.size(); ++c) {
    const char* color = colors[c % 6];
    std::string pts;
    auto flush = [&] {
      if (!pts.empty())
        os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"" << pts
           << "\"/>\n";
      pts.clear();
    };
    for (std::size_t i = 0; i < g.fn.size(); ++i) {
      const double mg = g.values[c][i].Mg;
      if (!std::isfinite(mg) || mg > y_hi) {
        flush();
        continue;
      }
      pts += num(X(g.fn[i])) + "," + num(Y(mg)) + " ";
    }
    flush();
    const double ly = mt + 20 + 18.0 * static_cast<double>(c);
    os << "<line x1=\"" << ml + pw + 10 << "\" y1=\"" << ly << "\" x2=\"" << ml + pw + 30 << "\" y2=\""
       << ly << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    os << "<text x=\"" << ml + pw + 35 << "\" y=\"" << ly + 4 << "\">" << g.curves[c].first
       << " (Qe=" << format_double(g.curves[c].second) << ")</text>\n";
  }
  for (const auto& [label, mg] : {std::pair<const char*, double>{"Mg_max", g.Mg_max}, {"Mg_min", g.Mg_min}}) {
    if (mg > y_hi) continue;
    os << "<line x1=\"" << ml << "\" y1=\"" << num(Y(mg)) << "\" x2=\"" << ml + pw << "\" y2=\"" << num(Y(mg))
       << "\" stroke=\"black\" stroke-dasharray=\"6 4\"/>\n";
    os << "<text x=\"" << ml + pw - 4 << "\" y=\"" << num(Y(mg) - 4) << "\" text-anchor=\"end\">" << label
       << " = " << std::setprecision(4) << mg << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace llc::io

#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include "llc/control.hpp"
#include "llc/design.hpp"
#include "llc/errors.hpp"
#include "llc/gain.hpp"
#include "llc/io.hpp"
#include "llc/steady_state.hpp"

namespace llc::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Common {
  std::string config;
  std::string design;
  std::string out;
  bool json = false;
  long long seed = 0;  // reserved; every command is deterministic
};

void add_common(CLI::App* cmd, Common& c, bool needs_design_file) {
  cmd->add_option("-c,--config", c.config, "project configuration (JSON)")->required();
  if (needs_design_file)
    cmd->add_option("--design", c.design, "use a design.json instead of synthesizing");
  cmd->add_option("-o,--out", c.out, "output directory (default: $LLC_OUT, then config output_dir, then .)");
  cmd->add_flag("--json", c.json, "machine-readable output on stdout");
  cmd->add_option("--seed", c.seed, "accepted for reproducibility; runs are deterministic");
}

fs::path output_dir(const Common& c, const io::ProjectConfig& cfg) {
  if (!c.out.empty()) return c.out;
  if (const char* env = std::getenv("LLC_OUT"); env && *env) return env;
  if (!cfg.output_dir.empty()) return cfg.output_dir;
  return ".";
}

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::Config: return kConfigError;
    case ErrorKind::Pole:
    case ErrorKind::Unreachable:
    case ErrorKind::BelowAsymptote: return kInfeasible;
    default: return kNumericalFailure;
  }
}

std::string sig(double v, int digits = 6) {
  std::ostringstream os;
  os << std::setprecision(digits) << v;
  return os.str();
}

DesignReport synthesize(const io::ProjectConfig& c, std::optional<ESeries> series_override) {
  const DesignRequirements& req = c.requirements;
  DesignReport report;
  if (c.tank) {
    report = check_feasibility(*c.tank, req, c.tank->n);
  } else {
    const double n = c.n ? *c.n : choose_turns_ratio(req, c.centering);
    double Ln = 0.0, Qe = 0.0;
    if (c.Ln && c.Qe) {
      Ln = *c.Ln;
      Qe = *c.Qe;
    } else if (c.Ln || c.Qe) {
      config_error("config field 'design': give both ln and qe, or neither to search");
    } else {
      const SearchResult s = search_design(req, n);
      if (!s.best)
        throw Error(ErrorKind::Unreachable, "no feasible (Ln, Qe) on the search grid for n = " + sig(n));
      Ln = s.best->Ln;
      Qe = s.best->Qe;
    }
    TankParams tank = synthesize_tank(req, n, Ln, Qe);
    tank.Vf = c.Vf;
    tank.Cout = c.Cout;
    tank.t_dead = c.t_dead;
    report = check_feasibility(tank, req, n);
  }
  report.series = series_override.value_or(c.series);
  RoundedTank rt = round_components(report.tank, report.series);
  report.tank_rounded = rt.tank;
  for (auto& w : rt.warnings) report.warnings.push_back(std::move(w));
  return report;
}

DesignReport load_or_synthesize(const Common& common, const io::ProjectConfig& cfg) {
  if (!common.design.empty()) return io::parse_design_report(io::read_file(common.design));
  return synthesize(cfg, std::nullopt);
}

struct OperatingPoint {
  double vin = 0.0;
  double rload = 0.0;
  double fsw = 0.0;
  double fn = 0.0;
  double Mg = 0.0;
  NormalizedPoint norm;
};

// Frequency putting the FHA gain on target for the built (rounded) tank.
OperatingPoint solve_point(const DesignReport& d, double vout, double vin, double rload) {
  const TankParams& tank = d.tank_rounded;
  OperatingPoint op;
  op.vin = vin;
  op.rload = rload;
  op.Mg = tank.n * (vout + tank.Vf) / (vin / 2.0);
  const NormalizedPoint np = normalize(tank, effective_load(tank.n, rload), series_resonance(tank));
  op.fn = solve_frequency(np.Ln, np.Qe, op.Mg);
  op.fsw = op.fn * series_resonance(tank);
  op.norm = {np.Ln, np.Qe, op.fn};
  return op;
}

OperatingPoint operating_point(const io::ProjectConfig& c, const DesignReport& d) {
  const auto& s = c.sim;
  const double vin = s.vin.value_or(c.requirements.Vin_nom);
  const double rload = s.rload ? *s.rload
                               : load_resistance(c.requirements.Vout_nom,
                                                 s.iout.value_or(c.requirements.Iout_max));
  if (s.fsw) {
    OperatingPoint op;
    op.vin = vin;
    op.rload = rload;
    op.fsw = *s.fsw;
    op.fn = op.fsw / series_resonance(d.tank_rounded);
    return op;
  }
  return solve_point(d, c.requirements.Vout_nom, vin, rload);
}

void write_wave(const fs::path& path, const Waveform& w) {
  std::ostringstream os;
  io::write_waveform_csv(os, w);
  io::write_file(path, os.str());
}

int cmd_design(const Common& common, const std::string& series, std::ostream& out) {
  const io::ProjectConfig cfg = io::load_config(common.config);
  std::optional<ESeries> override;
  if (series == "none") override = ESeries::None;
  else if (series == "E12") override = ESeries::E12;
  else if (series == "E24") override = ESeries::E24;
  const DesignReport r = synthesize(cfg, override);

  const fs::path dir = output_dir(common, cfg);
  const std::string doc = io::design_report_json(r);
  io::write_file(dir / "design.json", doc);
  const io::GainFamily family = io::gain_family(r);
  io::write_file(dir / "gain_curves.csv", io::gain_curves_csv(family));
  io::write_file(dir / "gain_curves.svg", io::gain_curves_svg(family));

  if (common.json) {
    out << doc;
  } else {
    const TankParams& t = r.tank_rounded;
    out << (r.feasible ? "feasible" : "INFEASIBLE") << "\n"
        << "  n = " << sig(r.n) << ", Ln = " << sig(r.Ln) << ", Qe = " << sig(r.Qe) << "\n"
        << "  Lr = " << sig(t.Lr * 1e6, 4) << " uH, Cr = " << sig(t.Cr * 1e9, 4)
        << " nF, Lm = " << sig(t.Lm * 1e6, 4) << " uH (" << to_string(r.series) << ")\n"
        << "  f0 = " << sig(r.f0 / 1e3) << " kHz, fp = " << sig(r.fp / 1e3) << " kHz\n"
        << "  gain band [" << sig(r.band.Mg_min) << ", " << sig(r.band.Mg_max) << "], peak "
        << sig(r.peak.Mg) << " at fn " << sig(r.peak.fn) << "\n";
    if (r.feasible)
      out << "  fsw band " << sig(r.fsw_band.first / 1e3) << " .. " << sig(r.fsw_band.second / 1e3)
          << " kHz\n";
    for (const auto& w : r.warnings) out << "  warning: " << w << "\n";
    out << "wrote " << (dir / "design.json").string() << "\n";
  }
  return r.feasible ? kOk : kInfeasible;
}

int cmd_simulate(const Common& common, const std::string& mode, std::optional<double> t_end,
                 std::ostream& out) {
  io::ProjectConfig cfg = io::load_config(common.config);
  if (t_end) cfg.sim.t_end = *t_end;
  const DesignReport d = load_or_synthesize(common, cfg);
  const fs::path dir = output_dir(common, cfg);
  const fs::path wave = dir / ("wave_" + mode + ".csv");
  const fs::path metrics = dir / ("metrics_" + mode + ".json");

  std::string doc;
  if (mode == "step") {
    LoadStepScenario sc = cfg.scenario_set
                              ? cfg.scenario
                              : LoadStepScenario::pulse(cfg.requirements.Iout_max,
                                                        1.4 * cfg.requirements.Iout_max, 5e-3, 10e-3,
                                                        30e-3, cfg.requirements.Vout_nom);
    sc.steps_per_period = cfg.sim.steps_per_period;
    const LoadStepResult res = run_load_step(d, cfg.controller, sc);
    write_wave(wave, res.waveform);
    doc = io::load_step_json(res.report, cfg.controller);
  } else {
    const OperatingPoint op = operating_point(cfg, d);
    SimConfig sim;
    sim.tank = d.tank_rounded;
    sim.Vin = op.vin;
    sim.fsw = op.fsw;
    sim.load = LoadProfile::resistance(op.rload);
    sim.dt_max = cfg.sim.dt_max;
    sim.steps_per_period = cfg.sim.steps_per_period;
    sim.record_interval = cfg.sim.record_interval;
    if (mode == "transient") {
      sim.t_end = cfg.sim.t_end;
      sim.soft_start = cfg.sim.soft_start;
      const TransientResult tr = run_transient(sim, SimState{});
      write_wave(wave, tr.waveform);
      doc = io::transient_json(tr, op.fsw, op.vin, op.rload);
    } else {
      PopOptions opt;
      opt.tolerance = cfg.sim.pop_tolerance;
      const PopResult pop = find_pop(sim, cfg.sim.pop_method, opt);
      write_wave(wave, pop.cycle_waveform);
      doc = io::pop_json(pop, op.fsw, op.vin, op.rload);
    }
  }
  io::write_file(metrics, doc);
  if (common.json) out << doc;
  else out << "wrote " << wave.string() << " and " << metrics.string() << "\n";
  return kOk;
}

struct SolveArgs {
  std::optional<double> vout, vin, iout;
};

int cmd_solve(const Common& common, const SolveArgs& a, std::ostream& out, std::ostream& err) {
  const io::ProjectConfig cfg = io::load_config(common.config);
  const DesignReport d = load_or_synthesize(common, cfg);
  const double vout = a.vout.value_or(cfg.requirements.Vout_nom);
  const double vin = a.vin.value_or(cfg.requirements.Vin_nom);
  const double iout = a.iout.value_or(cfg.requirements.Iout_max);
  if (!(vin > 0.0) || !(vout > 0.0) || iout < 0.0) config_error("solve: need vin > 0, vout > 0, iout >= 0");
  const double rload = load_resistance(vout, iout);
  try {
    const OperatingPoint op = solve_point(d, vout, vin, rload);
    const Region region = classify_region(op.norm);
    if (common.json) {
      json j{{"fsw", op.fsw}, {"fn", op.fn}, {"mg", op.Mg}, {"ln", op.norm.Ln}, {"qe", op.norm.Qe},
             {"f0", series_resonance(d.tank_rounded)}, {"region", to_string(region)},
             {"vout", vout}, {"vin", vin}, {"iout", iout}};
      out << j.dump(2) << "\n";
    } else {
      out << "fsw = " << io::format_double(op.fsw) << " Hz (fn = " << sig(op.fn, 8)
          << ", Mg = " << sig(op.Mg, 8) << ", region " << to_string(region) << ")\n";
    }
    return kOk;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::Unreachable && e.kind() != ErrorKind::BelowAsymptote) throw;
    const TankParams& t = d.tank_rounded;
    const NormalizedPoint np = normalize(t, effective_load(t.n, rload), series_resonance(t));
    std::ostringstream diag;
    diag << to_string(e.kind()) << ": " << e.what();
    if (e.kind() == ErrorKind::BelowAsymptote)
      diag << " (no-load gain floor " << sig(gain_asymptote(np.Ln)) << ")";
    if (common.json)
      out << json{{"error", to_string(e.kind())}, {"message", diag.str()}}.dump(2) << "\n";
    err << "llc solve: " << diag.str() << "\n";
    return kInfeasible;
  }
}

struct SweepArgs {
  SearchGrid grid;
  unsigned threads = 0;
};

int cmd_sweep(const Common& common, const SweepArgs& a, std::ostream& out) {
  const io::ProjectConfig cfg = io::load_config(common.config);
  const double n = cfg.n ? *cfg.n : choose_turns_ratio(cfg.requirements, cfg.centering);
  const SearchResult s = search_design(cfg.requirements, n, a.grid, a.threads);

  std::ostringstream csv;
  csv << "Ln,Qe,feasible,headroom,band_width\n";
  for (const auto& c : s.candidates)
    csv << io::format_double(c.Ln) << ',' << io::format_double(c.Qe) << ',' << (c.feasible ? 1 : 0)
        << ',' << io::format_double(c.headroom) << ',' << io::format_double(c.band_width) << '\n';
  const fs::path dir = output_dir(common, cfg);
  io::write_file(dir / "sweep.csv", csv.str());

  json j{{"n", n}, {"candidates", s.candidates.size()}};
  std::size_t feasible = 0;
  for (const auto& c : s.candidates) feasible += c.feasible ? 1 : 0;
  j["feasible"] = feasible;
  if (s.best)
    j["best"] = {{"ln", s.best->Ln}, {"qe", s.best->Qe}, {"headroom", s.best->headroom},
                 {"band_width", s.best->band_width}};
  else
    j["best"] = nullptr;
  const std::string doc = j.dump(2) + "\n";
  io::write_file(dir / "sweep.json", doc);
  if (common.json) {
    out << doc;
  } else {
    out << feasible << " of " << s.candidates.size() << " candidates feasible (n = " << sig(n) << ")\n";
    if (s.best)
      out << "best: Ln = " << sig(s.best->Ln) << ", Qe = " << sig(s.best->Qe) << ", band "
          << sig(s.best->band_width / 1e3) << " kHz, headroom " << sig(100 * s.best->headroom, 3)
          << " %\n";
  }
  return s.best ? kOk : kInfeasible;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"LLC resonant converter design and simulation toolkit", "llc"};
  app.require_subcommand(1);

  Common common;
  std::string series;
  auto* design = app.add_subcommand("design", "synthesize the tank and check regulation feasibility");
  add_common(design, common, false);
  design->add_option("--series", series, "component rounding: none, E12, E24 (default from config)")
      ->check(CLI::IsMember({"none", "E12", "E24"}));

  std::string mode = "pop";
  std::optional<double> t_end;
  auto* simulate = app.add_subcommand("simulate", "time-domain simulation");
  add_common(simulate, common, true);
  simulate->add_option("-m,--mode", mode, "transient, pop or step")
      ->check(CLI::IsMember({"transient", "pop", "step"}));
  simulate->add_option("--t-end", t_end, "transient duration in seconds");

  SolveArgs solve_args;
  auto* solve = app.add_subcommand("solve", "switching frequency for an output voltage target");
  add_common(solve, common, true);
  solve->add_option("--target-vout", solve_args.vout, "output voltage (default Vout_nom)");
  solve->add_option("--vin", solve_args.vin, "input voltage (default Vin_nom)");
  solve->add_option("--iout", solve_args.iout, "output current (default Iout_max)");

  SweepArgs sweep_args;
  auto* sweep = app.add_subcommand("sweep", "grid search over (Ln, Qe)");
  add_common(sweep, common, false);
  auto& g = sweep_args.grid;
  sweep->add_option("--ln-min", g.Ln_lo, "smallest Lm/Lr");
  sweep->add_option("--ln-max", g.Ln_hi, "largest Lm/Lr");
  sweep->add_option("--ln-steps", g.Ln_steps, "Ln grid points");
  sweep->add_option("--qe-min", g.Qe_lo, "smallest full-load quality factor");
  sweep->add_option("--qe-max", g.Qe_hi, "largest full-load quality factor");
  sweep->add_option("--qe-steps", g.Qe_steps, "Qe grid points");
  sweep->add_option("--min-headroom", g.min_headroom, "required peak gain margin over Mg_max (0.2 = 20%)");
  sweep->add_option("--threads", sweep_args.threads, "worker threads (0: hardware concurrency)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (design->parsed()) return cmd_design(common, series, out);
    if (simulate->parsed()) return cmd_simulate(common, mode, t_end, out);
    if (solve->parsed()) return cmd_solve(common, solve_args, out, err);
    return cmd_sweep(common, sweep_args, out);
  } catch (const Error& e) {
    err << "llc: " << to_string(e.kind()) << " error: " << e.what();
    if (e.time()) err << " (at t = " << io::format_double(*e.time()) << " s)";
    err << "\n";
    return exit_code(e.kind());
  } catch (const std::filesystem::filesystem_error& e) {
    err << "llc: " << e.what() << "\n";
    return kConfigError;
  }
}

}  // namespace llc::cli

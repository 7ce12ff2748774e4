#pragma once

// Configuration ingestion and result persistence: JSON documents, waveform
// CSV, gain-curve CSV/SVG.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "llc/control.hpp"
#include "llc/design.hpp"
#include "llc/sim.hpp"
#include "llc/steady_state.hpp"

namespace llc::io {

inline constexpr int kSchemaVersion = 1;

struct SimSettings {
  std::optional<double> vin;    // defaults to Vin_nom
  std::optional<double> iout;   // defaults to Iout_max
  std::optional<double> rload;  // overrides iout
  std::optional<double> fsw;    // defaults to the FHA solution for Vout_nom
  double t_end = 10e-3;
  double dt_max = 0.0;
  std::size_t steps_per_period = 2000;
  double soft_start = 2e-3;
  double record_interval = 0.0;
  PopMethod pop_method = PopMethod::Shooting;
  double pop_tolerance = 1e-6;
};

struct ProjectConfig {
  int schema_version = kSchemaVersion;
  DesignRequirements requirements;

  std::optional<double> n;  // explicit turns ratio
  Centering centering;      // used when n is absent
  std::optional<double> Ln;
  std::optional<double> Qe;
  ESeries series = ESeries::E12;
  std::optional<TankParams> tank;  // full override, skips synthesis

  double Vf = 0.0;
  double Cout = kDefaultCout;
  double t_dead = kDefaultDeadTime;

  SimSettings sim;
  ControllerConfig controller;
  bool controller_vref_set = false;
  LoadStepScenario scenario;
  bool scenario_set = false;
  std::string output_dir;
};

/// Parses a project configuration. A relative `scenario.file` resolves
/// against base_dir. Throws Error(Config) with a line or field diagnostic.
ProjectConfig parse_config(std::string_view text, const std::filesystem::path& base_dir = {});
ProjectConfig load_config(const std::filesystem::path& path);

/// Scenario document: [{"t_start": s, "iout": A} | {"t_start": s, "rload": ohm}, ...].
LoadProfile parse_scenario(std::string_view text, double reference_voltage);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

/// Shortest decimal that parses back to the same double.
std::string format_double(double v);

std::string design_report_json(const DesignReport& r);
/// Rebuilds a report from design.json (re-running the feasibility check on
/// the stored tank).
DesignReport parse_design_report(std::string_view text);

std::string pop_json(const PopResult& pop, double fsw, double vin, double rload);
std::string load_step_json(const LoadStepReport& r, const ControllerConfig& c);
std::string transient_json(const TransientResult& tr, double fsw, double vin, double rload);

inline constexpr std::string_view kWaveformHeader = "t,vsw,iLr,vCr,iLm,vOut,iOut,gateHS,gateLS";

void write_waveform_csv(std::ostream& os, const Waveform& w);
Waveform read_waveform_csv(std::istream& is);

struct GainFamily {
  std::vector<double> fn;
  std::vector<std::pair<std::string, double>> curves;  // label, Qe
  std::vector<std::vector<GainPoint>> values;            // per curve
  double Mg_min = 0.0;
  double Mg_max = 0.0;
  double Ln = 0.0;
};

/// No load, light load, full load, 2x overload and shorted-load curves for
/// the report's tank over fn in [0.3, 3].
GainFamily gain_family(const DesignReport& r);
std::string gain_curves_csv(const GainFamily& g);
std::string gain_curves_svg(const GainFamily& g);

}  // namespace llc::io

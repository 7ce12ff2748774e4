#pragma once

// Tank synthesis from electrical requirements and regulation feasibility.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "llc/gain.hpp"
#include "llc/tank.hpp"

namespace llc {

struct Centering {
  enum class Kind { AtResonance, Shifted };
  Kind kind = Kind::AtResonance;
  double Mg_center = 1.0;

  static Centering at_resonance() { return {}; }
  static Centering shifted(double Mg_center) { return {Kind::Shifted, Mg_center}; }
};

enum class ESeries { None, E12, E24 };

const char* to_string(ESeries s) noexcept;

struct DesignReport {
  DesignRequirements requirements;
  double n = 0.0;
  double Ln = 0.0;
  double Qe = 0.0;  // at (Vout_nom, Iout_max)
  TankParams tank;
  TankParams tank_rounded;
  ESeries series = ESeries::None;
  double f0 = 0.0;
  double fp = 0.0;
  GainBand band;
  PeakGain peak;
  double region_boundary_fn = 0.0;
  bool feasible = false;
  std::pair<double, double> fsw_band{0.0, 0.0};  // Hz at (Mg_max, Mg_min)
  std::vector<std::string> warnings;
};

/// n from the nominal line and output voltage so that Mg_center sits at
/// the series resonance (AtResonance: Mg_center = 1).
double choose_turns_ratio(const DesignRequirements& req, Centering centering);

/// Cr, Lr, Lm realizing (Ln, Qe) at (Vout_nom, Iout_max) with series
/// resonance at f0_target. Vf, Cout and t_dead keep their defaults.
TankParams synthesize_tank(const DesignRequirements& req, double n, double Ln,
                           double Qe);

/// Gain band, peak gain at full load, band-edge frequencies and region checks.
/// Infeasibility is reported in the result, never thrown.
DesignReport check_feasibility(const TankParams& tank,
                               const DesignRequirements& req, double n);

struct RoundedTank {
  TankParams tank;
  std::vector<std::string> warnings;
};

/// Snaps Cr to the nearest preferred value (log distance), recomputes Lr to
/// hold the series resonance and Lm = Ln * Lr.
RoundedTank round_components(const TankParams& tank, ESeries series);

/// Nearest preferred value in the series by log distance.
double nearest_preferred(double value, ESeries series);

struct SearchGrid {
  double Ln_lo = 1.5, Ln_hi = 10.0;
  std::size_t Ln_steps = 40;
  double Qe_lo = 0.1, Qe_hi = 1.0;
  std::size_t Qe_steps = 40;
  double min_headroom = 0.20;  // Mg_peak >= (1 + min_headroom) * Mg_max
};

struct SearchCandidate {
  double Ln = 0.0;
  double Qe = 0.0;
  bool feasible = false;
  double headroom = 0.0;  // Mg_peak / Mg_max - 1
  double band_width = 0.0;  // Hz
};

struct SearchResult {
  std::vector<SearchCandidate> candidates;  // Ln-major grid order
  std::optional<SearchCandidate> best;
};

/// Grid search over (Ln, Qe): among feasible candidates with the required
/// headroom, pick the narrowest switching-frequency band. Candidates are
/// evaluated on worker threads; ordering and result are deterministic.
SearchResult search_design(const DesignRequirements& req, double n,
                           const SearchGrid& grid = {},
                           unsigned threads = 0);

}  // namespace llc

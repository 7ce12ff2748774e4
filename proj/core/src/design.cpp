#include "llc/design.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <exception>
#include <limits>
#include <iomanip>
#include <sstream>
#include <thread>

#include "llc/errors.hpp"

namespace llc {

const char* to_string(ESeries s) noexcept {
  switch (s) {
    case ESeries::None: return "none";
    case ESeries::E12: return "E12";
    case ESeries::E24: return "E24";
  }
  return "?";
}

double choose_turns_ratio(const DesignRequirements& req, Centering centering) {
  const double unity = (req.Vin_nom / 2.0) / req.Vout_nom;
  if (centering.kind == Centering::Kind::AtResonance) return unity;
  if (!(centering.Mg_center > 0.0)) config_error("centering gain must be > 0");
  return centering.Mg_center * unity;
}

TankParams synthesize_tank(const DesignRequirements& req, double n, double Ln,
                           double Qe) {
  if (!(Ln > 1.0)) config_error("synthesize_tank: Ln must exceed 1");
  if (!(Qe > 0.0)) config_error("synthesize_tank: Qe must be > 0");
  if (!(n > 0.0)) config_error("synthesize_tank: n must be > 0");
  const double RL = load_resistance(req.Vout_nom, req.Iout_max);
  const double Re = effective_load(n, RL);
  const ResonantElements e = denormalize(Ln, Qe, req.f0_target, Re);
  TankParams t;
  t.Lr = e.Lr;
  t.Cr = e.Cr;
  t.Lm = e.Lm;
  t.n = n;
  return t;
}

namespace {

std::string percent(double x) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(1) << 100.0 * x << "%";
  return os.str();
}

std::string khz(double f) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(2) << f / 1e3 << " kHz";
  return os.str();
}

}  // namespace

DesignReport check_feasibility(const TankParams& tank,
                               const DesignRequirements& req, double n) {
  validate(tank);
  validate(req);
  DesignReport r;
  r.requirements = req;
  r.n = n;
  r.tank = tank;
  r.tank_rounded = tank;
  r.f0 = series_resonance(tank);
  r.fp = noload_resonance(tank);
  r.Ln = tank.Ln();
  const double Re = effective_load(n, load_resistance(req.Vout_nom, req.Iout_max));
  r.Qe = normalize(tank, Re, r.f0).Qe;
  r.band = gain_band(req, n, r.Ln);
  r.peak = peak_gain(r.Ln, r.Qe);
  r.region_boundary_fn = region_boundary(r.Ln, r.Qe);

  if (std::abs(r.f0 / req.f0_target - 1.0) > 0.01)
    r.warnings.push_back("series resonance " + khz(r.f0) + " differs from target " +
                         khz(req.f0_target));

  r.feasible = r.band.Mg_max < r.peak.Mg;
  if (!r.feasible) {
    std::ostringstream os;
    os << "infeasible: Mg_max " << r.band.Mg_max << " is not below the full-load peak gain "
       << r.peak.Mg << " (curve does not cross Mg_max)";
    r.warnings.push_back(os.str());
    return r;
  }
  const double headroom = r.peak.Mg / r.band.Mg_max - 1.0;
  if (headroom < 0.10)
    r.warnings.push_back("peak-gain headroom only " + percent(headroom) + " above Mg_max");
  if (r.band.Mg_min <= r.band.Mg_inf)
    r.warnings.push_back("Mg_min at or below the no-load asymptote; light-load regulation "
                         "needs burst operation");

  double fn_at_max = 0.0, fn_at_min = 0.0;
  try {
    fn_at_max = solve_frequency(r.Ln, r.Qe, r.band.Mg_max);
    fn_at_min = solve_frequency(r.Ln, r.Qe, r.band.Mg_min);
  } catch (const Error& e) {
    r.feasible = false;
    r.warnings.push_back(std::string("infeasible: band edge not solvable: ") + e.what());
    return r;
  }
  r.fsw_band = {r.f0 * fn_at_max, r.f0 * fn_at_min};

  for (double fn : {fn_at_max, fn_at_min}) {
    const Region region = classify_region({r.Ln, r.Qe, fn});
    if (region != Region::Inductive) {
      r.feasible = false;
      std::ostringstream os;
      os << "infeasible: band edge fn=" << fn << " is " << to_string(region);
      r.warnings.push_back(os.str());
    }
  }
  if (r.fsw_band.first < req.fsw_min || r.fsw_band.second > req.fsw_max)
    r.warnings.push_back("switching band " + khz(r.fsw_band.first) + " .. " +
                         khz(r.fsw_band.second) + " exceeds the controller clamp range");
  return r;
}

double nearest_preferred(double value, ESeries series) {
  static constexpr std::array<double, 12> e12{1.0, 1.2, 1.5, 1.8, 2.2, 2.7,
                                              3.3, 3.9, 4.7, 5.6, 6.8, 8.2};
  static constexpr std::array<double, 24> e24{
      1.0, 1.1, 1.2, 1.3, 1.5, 1.6, 1.8, 2.0, 2.2, 2.4, 2.7, 3.0,
      3.3, 3.6, 3.9, 4.3, 4.7, 5.1, 5.6, 6.2, 6.8, 7.5, 8.2, 9.1};
  if (series == ESeries::None) return value;
  if (!(value > 0.0)) config_error("nearest_preferred: value must be > 0");

  const double decade = std::pow(10.0, std::floor(std::log10(value)));
  double best = value;
  double best_dist = std::numeric_limits<double>::infinity();
  auto consider = [&](double v) {
    const double d = std::abs(std::log(value / v));
    if (d < best_dist) {
      best_dist = d;
      best = v;
    }
  };
  auto scan = [&](const auto& table) {
    for (double m : table) {
      consider(m * decade);
      consider(m * decade * 10.0);  // 8.2 -> 10 wraps into the next decade
    }
  };
  if (series == ESeries::E12)
    scan(e12);
  else
    scan(e24);
  return best;
}

RoundedTank round_components(const TankParams& tank, ESeries series) {
  RoundedTank out{tank, {}};
  if (series == ESeries::None) return out;
  validate(tank);
  const double f0 = series_resonance(tank);
  const double Ln = tank.Ln();
  const double q_before = characteristic_impedance(tank);

  out.tank.Cr = nearest_preferred(tank.Cr, series);
  out.tank.Lr = 1.0 / std::pow(2.0 * kPi * f0, 2) / out.tank.Cr;
  out.tank.Lm = Ln * out.tank.Lr;

  const double f0_after = series_resonance(out.tank);
  const double drift_f0 = f0_after / f0 - 1.0;
  if (std::abs(drift_f0) > 0.05)
    out.warnings.push_back("rounded tank moves f0 by " + percent(drift_f0));
  const double drift_cr = out.tank.Cr / tank.Cr - 1.0;
  const double drift_q = characteristic_impedance(out.tank) / q_before - 1.0;
  std::ostringstream os;
  os << "Cr rounded to " << to_string(series) << " (" << percent(drift_cr)
     << "), Qe drift " << percent(drift_q);
  out.warnings.push_back(os.str());
  return out;
}

SearchResult search_design(const DesignRequirements& req, double n,
                           const SearchGrid& grid, unsigned threads) {
  validate(req);
  if (grid.Ln_steps < 1 || grid.Qe_steps < 1) config_error("search grid needs >= 1 step per axis");
  auto axis = [](double lo, double hi, std::size_t steps, std::size_t i) {
    return steps == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(steps - 1);
  };

  SearchResult res;
  const std::size_t total = grid.Ln_steps * grid.Qe_steps;
  res.candidates.resize(total);

  auto evaluate = [&](std::size_t idx) {
    SearchCandidate c;
    c.Ln = axis(grid.Ln_lo, grid.Ln_hi, grid.Ln_steps, idx / grid.Qe_steps);
    c.Qe = axis(grid.Qe_lo, grid.Qe_hi, grid.Qe_steps, idx % grid.Qe_steps);
    if (c.Ln > 1.0 && c.Qe > 0.0) {
      const DesignReport r = check_feasibility(synthesize_tank(req, n, c.Ln, c.Qe), req, n);
      c.feasible = r.feasible;
      c.headroom = r.peak.Mg / r.band.Mg_max - 1.0;
      c.band_width = r.feasible ? r.fsw_band.second - r.fsw_band.first : 0.0;
    }
    res.candidates[idx] = c;
  };

  unsigned workers = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, total));
  std::vector<std::exception_ptr> failures(workers);
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < total; i += workers) evaluate(i);
      } catch (...) {
        failures[w] = std::current_exception();
      }
    });
  for (auto& t : pool) t.join();
  for (const auto& f : failures)
    if (f) std::rethrow_exception(f);

  for (const auto& c : res.candidates) {
    if (!c.feasible || c.headroom < grid.min_headroom) continue;
    if (!res.best || c.band_width < res.best->band_width) res.best = c;
  }
  return res;
}

}  // namespace llc

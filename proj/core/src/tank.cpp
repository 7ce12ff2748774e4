#include "llc/tank.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "llc/errors.hpp"

namespace llc {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) config_error(what);
}

bool finite_positive(double v) { return std::isfinite(v) && v > 0.0; }

}  // namespace

void validate(const TankParams& tank) {
  require(finite_positive(tank.Lr), "tank.Lr must be > 0");
  require(finite_positive(tank.Cr), "tank.Cr must be > 0");
  require(finite_positive(tank.Lm), "tank.Lm must be > 0");
  require(finite_positive(tank.n), "tank.n must be > 0");
  require(finite_positive(tank.Cout), "tank.Cout must be > 0");
  require(std::isfinite(tank.t_dead) && tank.t_dead >= 0.0,
          "tank.t_dead must be >= 0");
  require(std::isfinite(tank.Vf) && tank.Vf >= 0.0, "tank.Vf must be >= 0");
  require(tank.Lm / tank.Lr > 1.0, "tank.Lm/Lr must exceed 1");
}

void validate(const DesignRequirements& r) {
  require(r.Vin_min > 0.0 && r.Vin_min <= r.Vin_nom && r.Vin_nom <= r.Vin_max,
          "requirements: need 0 < Vin_min <= Vin_nom <= Vin_max");
  require(r.Vout_min > 0.0 && r.Vout_min <= r.Vout_nom &&
              r.Vout_nom <= r.Vout_max,
          "requirements: need 0 < Vout_min <= Vout_nom <= Vout_max");
  require(r.Iout_min >= 0.0 && r.Iout_min <= r.Iout_max,
          "requirements: need 0 <= Iout_min <= Iout_max");
  require(r.Iout_max > 0.0, "requirements: Iout_max must be > 0");
  require(r.fsw_min > 0.0 && r.fsw_min < r.f0_target &&
              r.f0_target < r.fsw_max,
          "requirements: need fsw_min < f0_target < fsw_max");
}

double resonant_frequency(double L, double C) {
  return 1.0 / (2.0 * kPi * std::sqrt(L * C));
}

double series_resonance(const TankParams& tank) {
  return resonant_frequency(tank.Lr, tank.Cr);
}

double noload_resonance(const TankParams& tank) {
  return resonant_frequency(tank.Lr + tank.Lm, tank.Cr);
}

double characteristic_impedance(const TankParams& tank) {
  return std::sqrt(tank.Lr / tank.Cr);
}

double load_resistance(double vout, double iout) {
  if (iout == 0.0) return std::numeric_limits<double>::infinity();
  return vout / iout;
}

double effective_load(double n, double RL) {
  return 8.0 * n * n * RL / (kPi * kPi);
}

NormalizedPoint normalize(const TankParams& tank, double Re, double fsw) {
  NormalizedPoint p;
  p.Ln = tank.Lm / tank.Lr;
  p.Qe = std::isinf(Re) ? 0.0 : characteristic_impedance(tank) / Re;
  p.fn = fsw / series_resonance(tank);
  return p;
}

DerivedQuantities derive(const TankParams& tank, double vout, double iout) {
  DerivedQuantities d;
  d.f0 = series_resonance(tank);
  d.fp = noload_resonance(tank);
  d.RL = load_resistance(vout, iout);
  d.Re = effective_load(tank.n, d.RL);
  return d;
}

ResonantElements denormalize(double Ln, double Qe, double f0, double Re) {
  if (!(Qe > 0.0) || !std::isfinite(Re) || !(Re > 0.0))
    config_error("denormalize needs Qe > 0 and finite Re > 0");
  const double w0 = 2.0 * kPi * f0;
  ResonantElements e;
  e.Cr = 1.0 / (w0 * Qe * Re);
  e.Lr = 1.0 / (w0 * w0 * e.Cr);
  e.Lm = Ln * e.Lr;
  return e;
}

}  // namespace llc

#pragma once

// Physical and normalized parameterizations of an LLC half-bridge tank.

namespace llc {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kDefaultCout = 100e-6;
inline constexpr double kDefaultDeadTime = 100e-9;

struct TankParams {
  double Lr = 0.0;      // H, series resonant inductance
  double Cr = 0.0;      // F, resonant capacitor
  double Lm = 0.0;      // H, magnetizing inductance
  double n = 1.0;       // primary:secondary turns ratio
  double Vf = 0.0;      // V, rectifier diode forward drop
  double Cout = kDefaultCout;
  double t_dead = kDefaultDeadTime;

  double Ln() const { return Lm / Lr; }
};

/// Throws Error(Config) unless every field is in range and Lm/Lr > 1.
void validate(const TankParams& tank);

struct DesignRequirements {
  double Vin_min = 0.0, Vin_nom = 0.0, Vin_max = 0.0;
  double Vout_min = 0.0, Vout_nom = 0.0, Vout_max = 0.0;
  double Iout_min = 0.0, Iout_max = 0.0;
  double f0_target = 0.0;
  double fsw_min = 0.0, fsw_max = 0.0;
};

void validate(const DesignRequirements& req);

struct NormalizedPoint {
  double Ln = 0.0;
  double Qe = 0.0;
  double fn = 1.0;
};

struct DerivedQuantities {
  double f0 = 0.0;  // series resonance
  double fp = 0.0;  // no-load resonance
  double Re = 0.0;  // FHA equivalent AC load
  double RL = 0.0;  // DC load
};

/// 1 / (2 pi sqrt(L C)).
double resonant_frequency(double L, double C);

double series_resonance(const TankParams& tank);
double noload_resonance(const TankParams& tank);

/// sqrt(Lr / Cr).
double characteristic_impedance(const TankParams& tank);

/// Vout / Iout; Iout == 0 gives +infinity (open load).
double load_resistance(double vout, double iout);

/// FHA reflection of a rectified DC load: 8 n^2 RL / pi^2. Infinite RL maps
/// to infinite Re.
double effective_load(double n, double RL);

/// Ln = Lm/Lr, Qe = sqrt(Lr/Cr)/Re (0 for infinite Re), fn = fsw/f0.
NormalizedPoint normalize(const TankParams& tank, double Re, double fsw);

DerivedQuantities derive(const TankParams& tank, double vout, double iout);

struct ResonantElements {
  double Lr = 0.0;
  double Cr = 0.0;
  double Lm = 0.0;
};

/// Inverse of normalize: (Ln, Qe, f0, Re) -> (Lr, Cr, Lm). Requires Qe > 0
/// and finite Re.
ResonantElements denormalize(double Ln, double Qe, double f0, double Re);

}  // namespace llc

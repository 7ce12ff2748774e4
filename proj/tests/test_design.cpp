#include <catch_amalgamated.hpp>

#include <random>

#include "llc/design.hpp"
#include "llc/errors.hpp"
#include "support.hpp"

using namespace llc;
using Catch::Approx;

TEST_CASE("turns ratio centering") {
  DesignRequirements r = test::reference_requirements();
  CHECK(choose_turns_ratio(r, Centering::at_resonance()) == Approx(2.0).epsilon(1e-15));
  CHECK(choose_turns_ratio(r, Centering::shifted(0.915)) == Approx(1.83).epsilon(1e-15));
  r.Vin_nom = 24.0;
  CHECK(choose_turns_ratio(r, Centering::at_resonance()) == Approx(1.0).epsilon(1e-15));
}

TEST_CASE("tank synthesis reproduces the built components") {
  const TankParams t = test::reference_tank();
  CHECK(t.Cr == Approx(67.8600176237257e-9).epsilon(1e-12));
  CHECK(t.Lr == Approx(37.3272757620509e-6).epsilon(1e-12));
  CHECK(t.Lm == Approx(76.5209153122044e-6).epsilon(1e-12));
  CHECK(t.Lm / t.Lr == Approx(2.05).epsilon(1e-15));
  CHECK(t.n == 1.83);
  // within 10% of the hand-picked 68 nF / 37 uH / 75 uH
  CHECK(test::rel_err(t.Cr, 68e-9) < 0.10);
  CHECK(test::rel_err(t.Lr, 37e-6) < 0.10);
  CHECK(test::rel_err(t.Lm, 75e-6) < 0.10);
}

TEST_CASE("doubling Qe halves Cr and doubles Lr") {
  const auto r = test::reference_requirements();
  const TankParams a = synthesize_tank(r, 1.83, 2.05, 0.36);
  const TankParams b = synthesize_tank(r, 1.83, 2.05, 0.72);
  CHECK(b.Cr == Approx(a.Cr / 2.0).epsilon(1e-14));
  CHECK(b.Lr == Approx(a.Lr * 2.0).epsilon(1e-14));
  CHECK(series_resonance(b) == Approx(series_resonance(a)).epsilon(1e-14));
}

TEST_CASE("synthesis invariants over random inputs") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ln(1.2, 12.0), qe(0.05, 2.0), n(0.2, 10.0), f0(30e3, 800e3);
  for (int i = 0; i < 1000; ++i) {
    DesignRequirements r = test::reference_requirements();
    r.f0_target = f0(rng);
    r.fsw_min = 0.5 * r.f0_target;
    r.fsw_max = 2.0 * r.f0_target;
    const double N = n(rng), Ln = ln(rng), Qe = qe(rng);
    const TankParams t = synthesize_tank(r, N, Ln, Qe);
    REQUIRE(test::rel_err(series_resonance(t), r.f0_target) < 1e-9);
    const NormalizedPoint p = normalize(t, effective_load(N, load_resistance(r.Vout_nom, r.Iout_max)), r.f0_target);
    REQUIRE(p.Qe == Approx(Qe).epsilon(1e-12));
    REQUIRE(p.Ln == Approx(Ln).epsilon(1e-12));
  }
  CHECK_THROWS_AS(synthesize_tank(test::reference_requirements(), 1.83, 0.9, 0.36), Error);
  CHECK_THROWS_AS(synthesize_tank(test::reference_requirements(), 1.83, 2.05, 0.0), Error);
}

TEST_CASE("reference design is feasible with a +/-10 kHz band") {
  const DesignReport d = check_feasibility(test::reference_tank(), test::reference_requirements(), 1.83);
  CHECK(d.feasible);
  CHECK(d.fsw_band.first == Approx(91774.68).margin(0.1));
  CHECK(d.fsw_band.second == Approx(110790.69).margin(0.1));
  CHECK(std::abs(d.fsw_band.first - 90e3) <= 3e3);
  CHECK(std::abs(d.fsw_band.second - 110e3) <= 3e3);
  CHECK(d.band.Mg_max < d.peak.Mg);
  CHECK(d.f0 == Approx(100e3).epsilon(1e-12));
  CHECK(d.fp == Approx(100e3 / std::sqrt(3.05)).epsilon(1e-12));
  CHECK(d.Qe == Approx(0.36).epsilon(1e-12));
  CHECK(d.region_boundary_fn < d.fsw_band.first / d.f0);
}

TEST_CASE("tenfold overload is infeasible") {
  DesignRequirements r = test::reference_requirements();
  r.Iout_max *= 10.0;
  const DesignReport d = check_feasibility(test::reference_tank(), r, 1.83);
  CHECK_FALSE(d.feasible);
  CHECK(d.peak.Mg < d.band.Mg_max);
}

TEST_CASE("zero-width ranges give a single operating point") {
  DesignRequirements r = test::reference_requirements();
  r.Vin_min = r.Vin_max = 48.0;
  const DesignReport d = check_feasibility(test::reference_tank(), r, 1.83);
  CHECK(d.band.Mg_min == d.band.Mg_max);
  CHECK(d.feasible);
  CHECK(d.fsw_band.first == d.fsw_band.second);
}

TEST_CASE("feasible reports keep both band edges inductive") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> ln(1.5, 10.0), qe(0.05, 1.5);
  int feasible = 0;
  for (int i = 0; i < 400; ++i) {
    const double Ln = ln(rng), Qe = qe(rng);
    const auto r = test::reference_requirements();
    const DesignReport d = check_feasibility(synthesize_tank(r, 1.83, Ln, Qe), r, 1.83);
    if (!d.feasible) continue;
    ++feasible;
    REQUIRE(d.band.Mg_max < d.peak.Mg);
    for (double f : {d.fsw_band.first, d.fsw_band.second})
      REQUIRE(classify_region({Ln, Qe, f / d.f0}) == Region::Inductive);
  }
  CHECK(feasible > 10);
}

TEST_CASE("preferred-value rounding") {
  CHECK(nearest_preferred(67.86e-9, ESeries::E12) == Approx(68e-9).epsilon(1e-12));
  CHECK(nearest_preferred(50e-9, ESeries::E12) == Approx(47e-9).epsilon(1e-12));
  CHECK(nearest_preferred(50e-9, ESeries::E24) == Approx(51e-9).epsilon(1e-12));
  CHECK(nearest_preferred(9.7e-9, ESeries::E12) == Approx(10e-9).epsilon(1e-12));  // decade wrap
  CHECK(nearest_preferred(1e-7, ESeries::E12) == Approx(1e-7).epsilon(1e-12));

  const TankParams t = test::reference_tank();
  const RoundedTank none = round_components(t, ESeries::None);
  CHECK(none.tank.Cr == t.Cr);
  CHECK(none.tank.Lr == t.Lr);
  CHECK(none.tank.Lm == t.Lm);

  const RoundedTank e12 = round_components(t, ESeries::E12);
  CHECK(e12.tank.Cr == Approx(68e-9).epsilon(1e-12));
  CHECK(series_resonance(e12.tank) == Approx(series_resonance(t)).epsilon(1e-12));
  CHECK(e12.tank.Ln() == Approx(2.05).epsilon(1e-12));
  CHECK_FALSE(e12.warnings.empty());
}

TEST_CASE("grid search is deterministic across thread counts") {
  SearchGrid g;
  g.Ln_steps = 12;
  g.Qe_steps = 12;
  const auto r = test::reference_requirements();
  const SearchResult one = search_design(r, 1.83, g, 1);
  const SearchResult many = search_design(r, 1.83, g, 4);
  REQUIRE(one.candidates.size() == 144);
  REQUIRE(many.candidates.size() == 144);
  for (std::size_t i = 0; i < one.candidates.size(); ++i) {
    REQUIRE(one.candidates[i].Ln == many.candidates[i].Ln);
    REQUIRE(one.candidates[i].Qe == many.candidates[i].Qe);
    REQUIRE(one.candidates[i].feasible == many.candidates[i].feasible);
    REQUIRE(one.candidates[i].band_width == many.candidates[i].band_width);
  }
  REQUIRE(one.best.has_value());
  REQUIRE(many.best.has_value());
  CHECK(one.best->Ln == many.best->Ln);
  CHECK(one.best->Qe == many.best->Qe);
  CHECK(one.best->feasible);
  CHECK(one.best->headroom >= g.min_headroom);
  // the winner has the narrowest band among qualifying candidates
  for (const auto& c : one.candidates)
    if (c.feasible && c.headroom >= g.min_headroom) CHECK(c.band_width >= one.best->band_width);
}

#include <catch_amalgamated.hpp>

#include <random>

#include "llc/errors.hpp"
#include "llc/gain.hpp"
#include "support.hpp"

using namespace llc;
using Catch::Approx;
using test::divider_gain;

TEST_CASE("unity gain at series resonance") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> ln(0.1, 50.0), qe(0.0, 20.0);
  for (int i = 0; i < 10000; ++i) {
    const GainPoint g = gain({ln(rng), qe(rng), 1.0});
    REQUIRE(std::abs(g.Mg - 1.0) < 1e-12);
  }
}

TEST_CASE("gain matches the impedance divider oracle") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> ln(1.1, 20.0), qe(0.0, 5.0), lf(-1.0, 1.0);
  for (int i = 0; i < 20000; ++i) {
    const double Ln = ln(rng), Qe = qe(rng), fn = std::pow(10.0, lf(rng));
    const GainPoint g = evaluate_gain({Ln, Qe, fn});
    if (g.pole) continue;
    REQUIRE(g.Mg == Approx(divider_gain(Ln, Qe, fn)).epsilon(1e-11));
    REQUIRE(g.Mg >= 0.0);
    REQUIRE(g.phase > -kPi);
    REQUIRE(g.phase <= kPi);
  }
}

TEST_CASE("gain examples") {
  CHECK(gain({2.05, 0.36, 1.1}).Mg == Approx(0.920102401202573).epsilon(1e-12));
  CHECK(gain_asymptote(2.05) == Approx(0.672131147540984).epsilon(1e-14));
  CHECK(gain({2.05, 0.0, 100.0}).Mg == Approx(0.672153185350339).epsilon(1e-12));
}

TEST_CASE("no-load pole is flagged, not thrown, by the sweep evaluator") {
  const double fn_pole = 1.0 / std::sqrt(1.0 + 2.05);
  const GainPoint p = evaluate_gain({2.05, 0.0, fn_pole});
  CHECK(p.pole);
  CHECK(std::isinf(p.Mg));
  CHECK_THROWS_AS(gain({2.05, 0.0, fn_pole}), Error);
  const GainCurve c = gain_curve(2.05, 0.0, fn_pole, 2.0, 50);
  CHECK(c.points.front().pole);
}

TEST_CASE("gain curve grid") {
  const GainCurve two = gain_curve(2.05, 0.36, 0.5, 2.0, 2);
  REQUIRE(two.points.size() == 2);
  CHECK(two.points[0].fn == 0.5);
  CHECK(two.points[1].fn == 2.0);

  const GainCurve c = gain_curve(2.05, 0.36, 0.5, 2.0, default_samples(0.5, 2.0));
  const PeakGain pk = peak_gain(2.05, 0.36);
  for (std::size_t i = 1; i < c.points.size(); ++i) {
    REQUIRE(c.points[i].fn > c.points[i - 1].fn);
    REQUIRE(c.points[i].Mg == Approx(divider_gain(2.05, 0.36, c.points[i].fn)).epsilon(1e-12));
    if (c.points[i - 1].fn > pk.fn) REQUIRE(c.points[i].Mg < c.points[i - 1].Mg);
  }
}

TEST_CASE("curve family crosses at unity for fixed Ln") {
  for (double qe : {0.0, 0.2, 0.5, 1.0, 2.0, kShortCircuitQe}) {
    CHECK(gain({5.0, qe, 1.0}).Mg == Approx(1.0).epsilon(1e-12));
    // above resonance every curve sits between the asymptote and 1
    const double m = gain({5.0, qe, 2.0}).Mg;
    CHECK(m < 1.0);
    CHECK(m > 0.0);
  }
  // below resonance lighter load gives more gain
  CHECK(gain({5.0, 0.2, 0.7}).Mg > gain({5.0, 0.5, 0.7}).Mg);
  CHECK(gain({5.0, 0.5, 0.7}).Mg > gain({5.0, 1.0, 0.7}).Mg);
}

TEST_CASE("peak gain against a dense brute-force grid") {
  const PeakGain pk = peak_gain(2.05, 0.36);
  double best = 0.0, best_fn = 0.0;
  const double lo = 1.0 / std::sqrt(3.05), hi = 1.0;
  const int N = 1000000;
  for (int i = 0; i <= N; ++i) {
    const double fn = lo + (hi - lo) * i / N;
    const double m = divider_gain(2.05, 0.36, fn);
    if (m > best) {
      best = m;
      best_fn = fn;
    }
  }
  CHECK(pk.Mg == Approx(best).epsilon(1e-9));
  CHECK(pk.fn == Approx(best_fn).margin(2e-6));
  CHECK(pk.Mg == Approx(2.46330799458362).epsilon(1e-9));
  CHECK(pk.fn == Approx(0.596325682266878).margin(1e-8));
  CHECK(pk.Mg > 1.2);
  CHECK(pk.fn > 0.573);
  CHECK(pk.fn < 1.0);
}

TEST_CASE("peak gain falls with Qe and collapses at short circuit") {
  double prev = 1e300;
  for (double qe = 0.05; qe <= 3.0; qe += 0.05) {
    const double m = peak_gain(2.05, qe).Mg;
    REQUIRE(m < prev);
    prev = m;
  }
  const PeakGain sc = peak_gain(2.05, kShortCircuitQe);
  CHECK(sc.Mg == Approx(1.0).margin(1e-4));
  CHECK(sc.fn == Approx(1.0).margin(1e-3));
  CHECK_THROWS_AS(peak_gain(2.05, 0.0), Error);
}

TEST_CASE("solve frequency on the inductive branch") {
  const double fn = solve_frequency(2.05, 0.36, 0.915);
  CHECK(fn == Approx(1.10790694706976).epsilon(1e-11));
  CHECK(divider_gain(2.05, 0.36, fn) == Approx(0.915).epsilon(1e-12));
  CHECK(solve_frequency(2.05, 0.36, 1.0) == 1.0);

  const PeakGain pk = peak_gain(2.05, 0.36);
  try {
    solve_frequency(2.05, 0.36, 2.0 * pk.Mg);
    FAIL("expected unreachable");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Unreachable);
  }
  // loaded gain keeps falling above resonance; the floor is its value at the bracket end
  const double floor = gain({2.05, 0.36, kRootBracketHigh}).Mg;
  for (double qe_target : {0.5 * floor, 0.5}) {
    const double qe = qe_target == 0.5 ? 0.0 : 0.36;
    try {
      solve_frequency(2.05, qe, qe_target);
      FAIL("expected below asymptote");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::BelowAsymptote);
    }
  }
  // open load works above the no-load pole
  const double fn0 = solve_frequency(2.05, 0.0, 0.915);
  CHECK(fn0 == Approx(1.11141).margin(1e-4));
  CHECK(divider_gain(2.05, 0.0, fn0) == Approx(0.915).epsilon(1e-10));
}

TEST_CASE("solve frequency round trip over random targets") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ln(1.5, 10.0), qe(0.05, 1.5), u(0.0, 1.0);
  for (int i = 0; i < 2000; ++i) {
    const double Ln = ln(rng), Qe = qe(rng);
    const PeakGain pk = peak_gain(Ln, Qe);
    const double lo = gain({Ln, Qe, kRootBracketHigh}).Mg;
    const double target = lo + (pk.Mg - lo) * (0.02 + 0.96 * u(rng));
    const double fn = solve_frequency(Ln, Qe, target);
    REQUIRE(fn >= pk.fn);
    REQUIRE(gain({Ln, Qe, fn}).Mg == Approx(target).epsilon(1e-9));
  }
}

TEST_CASE("gain band from requirements") {
  DesignRequirements r = test::reference_requirements();
  r.Vin_min = 48.0;
  GainBand b = gain_band(r, 1.83, 2.05);
  CHECK(b.Mg_min == Approx(0.915).epsilon(1e-14));
  CHECK(b.Mg_max == Approx(0.915).epsilon(1e-14));
  CHECK(b.Mg_inf == Approx(0.672131147540984).epsilon(1e-14));
  b = gain_band(r, 2.0, 2.05);
  CHECK(b.Mg_min == Approx(1.0).epsilon(1e-15));
  CHECK(b.Mg_max == Approx(1.0).epsilon(1e-15));
  b = gain_band(test::reference_requirements(), 1.83, 2.05);
  CHECK(b.Mg_max == Approx(1.098).epsilon(1e-14));
}

TEST_CASE("operating region from the input impedance") {
  const double boundary = region_boundary(2.05, 0.36);
  CHECK(boundary == Approx(0.607839820480193).epsilon(1e-10));
  CHECK(classify_region({2.05, 0.36, 1.1}) == Region::Inductive);
  CHECK(classify_region({2.05, 0.36, 0.6}) == Region::Capacitive);
  CHECK(classify_region({2.05, 0.36, boundary}) == Region::Boundary);
  // region agrees with the sign of the input reactance everywhere
  for (double fn = 0.3; fn < 3.0; fn += 0.0137) {
    const double x = normalized_input_impedance({2.05, 0.36, fn}).imag();
    const Region r = classify_region({2.05, 0.36, fn});
    if (std::abs(fn - boundary) > 1e-6) REQUIRE((x > 0.0) == (r == Region::Inductive));
  }
  // the peak sits just inside the capacitive side of the boundary
  CHECK(peak_gain(2.05, 0.36).fn < boundary);
}

TEST_CASE("shorted-load gain") {
  CHECK(short_circuit_gain(2.05, 1.5).Mg < 0.01);
  CHECK(short_circuit_gain(2.05, 1.2).Mg > short_circuit_gain(2.05, 1.5).Mg);
  CHECK(short_circuit_gain(2.05, 1.5).Mg > short_circuit_gain(2.05, 2.0).Mg);
  CHECK(short_circuit_gain(2.05, 1.0).divergent);
  CHECK_FALSE(short_circuit_gain(2.05, 1.2).divergent);
  CHECK(short_circuit_gain(2.05, 1.5).Mg == Approx(divider_gain(2.05, kShortCircuitQe, 1.5)).epsilon(1e-9));

  double prev_mg = 1e300, prev_i = 1e300;
  for (int i = 1; i <= 1000; ++i) {
    const double fn = 1.0 + 2.0 * i / 1000.0;
    const ShortCircuitGain s = short_circuit_gain(2.05, fn);
    REQUIRE(s.Mg < prev_mg);
    REQUIRE(s.current_pu < prev_i);
    prev_mg = s.Mg;
    prev_i = s.current_pu;
  }
}

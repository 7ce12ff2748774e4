#include <catch_amalgamated.hpp>

#include <cmath>

#include "llc/errors.hpp"
#include "llc/gain.hpp"
#include "llc/steady_state.hpp"
#include "support.hpp"

using namespace llc;
using Catch::Approx;

namespace {

SimConfig reference_config(double fsw, double rload = 24.0) {
  SimConfig c;
  c.tank = test::reference_tank();
  c.Vin = 48.0;
  c.fsw = fsw;
  c.load = LoadProfile::resistance(rload);
  return c;
}

double design_fsw() { return solve_frequency(2.05, 0.36, 0.915) * series_resonance(test::reference_tank()); }

const PopResult& shooting_pop() {
  static const PopResult pop = find_pop(reference_config(design_fsw()), PopMethod::Shooting);
  return pop;
}

}  // namespace

TEST_CASE("zero input has the zero periodic state") {
  SimConfig c = reference_config(100e3);
  c.Vin = 0.0;
  SimState zero;
  const PopResult p = find_pop(c, PopMethod::Shooting, {}, zero);
  CHECK(p.residual == 0.0);
  CHECK(p.x0.iLr == 0.0);
  CHECK(p.x0.vOut == 0.0);
  CHECK(p.metrics.vOut_mean == 0.0);
}

TEST_CASE("shooting converges and is periodic") {
  const PopResult& p = shooting_pop();
  const PopOptions opt;
  CHECK(p.residual < opt.tolerance);
  CHECK(p.period == Approx(1.0 / design_fsw()).epsilon(1e-12));

  // one more period from the end state returns to the same point
  SimConfig c = reference_config(design_fsw());
  c.t_end = p.period;
  c.record = true;
  const TransientResult again = run_transient(c, p.x_end);
  const StateVector peaks = cycle_peaks(p.cycle_waveform);
  CHECK(scaled_distance(state_vector(again.final_state), state_vector(p.x0), peaks) <
        2.0 * opt.tolerance);
}

TEST_CASE("shooting and cycle iteration agree") {
  const PopResult& s = shooting_pop();
  const PopResult ci = find_pop(reference_config(design_fsw()), PopMethod::CycleIteration);
  CHECK(ci.method == PopMethod::CycleIteration);
  CHECK(ci.cycles > s.cycles);
  const StateVector peaks = cycle_peaks(s.cycle_waveform);
  CHECK(scaled_distance(state_vector(ci.x0), state_vector(s.x0), peaks) < 10.0 * PopOptions{}.tolerance);
  CHECK(ci.metrics.vOut_mean == Approx(s.metrics.vOut_mean).epsilon(1e-5));
}

TEST_CASE("lossless converter balances power at the periodic point") {
  const PopMetrics& m = shooting_pop().metrics;
  REQUIRE(m.p_out > 0.0);
  CHECK(std::abs(m.p_in - m.p_out) / m.p_out < 5e-3);
  // output power equals vOut^2 / R averaged over the cycle
  CHECK(m.p_out == Approx(m.vOut_mean * m.vOut_mean / 24.0).epsilon(1e-3));
}

TEST_CASE("periodic point is an equilibrium of the transient") {
  const PopResult& p = shooting_pop();
  SimConfig c = reference_config(design_fsw());
  c.t_end = 20.0 * p.period;
  c.record = true;
  const TransientResult r = run_transient(c, p.x0);
  const double ripple = p.metrics.vOut_ripple_pp;
  REQUIRE(ripple > 0.0);
  for (const CycleInfo& cy : r.cycles) CHECK(std::abs(cy.vOut_avg - p.metrics.vOut_mean) < ripple);
}

TEST_CASE("metrics of synthetic channels") {
  PopResult p;
  p.period = 1e-5;
  const int N = 2000;
  const double A = 2.0;
  for (int i = 0; i <= N; ++i) {
    Sample s;
    s.t = p.period * i / N;
    s.values[static_cast<std::size_t>(Channel::vOut)] = 12.0;
    s.values[static_cast<std::size_t>(Channel::iLr)] = A * std::sin(2.0 * kPi * i / N);
    p.cycle_waveform.append(s);
  }
  const PopMetrics m = pop_metrics(p);
  CHECK(m.vOut_mean == Approx(12.0));
  CHECK(m.vOut_ripple_pp == 0.0);
  CHECK(m.iLr_rms == Approx(A / std::sqrt(2.0)).epsilon(1e-6));
  CHECK(m.iLr_peak == Approx(A).epsilon(1e-6));
}

TEST_CASE("iteration limits raise no-convergence") {
  PopOptions opt;
  opt.max_cycles = 3;
  try {
    find_pop(reference_config(design_fsw()), PopMethod::CycleIteration, opt);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NoConvergence);
  }
  opt.warm_cycles = 0;
  opt.max_newton = 0;
  try {
    find_pop(reference_config(design_fsw()), PopMethod::Shooting, opt);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NoConvergence);
  }
}

TEST_CASE("missing frequency is a configuration error") {
  try {
    find_pop(reference_config(0.0), PopMethod::Shooting);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Config);
  }
}

TEST_CASE("state vector helpers") {
  SimState s;
  s.iLr = 1.0;
  s.vCr = -2.0;
  s.iLm = 3.0;
  s.vOut = 4.0;
  const StateVector x = state_vector(s);
  CHECK(x == StateVector{1.0, -2.0, 3.0, 4.0});
  CHECK(scaled_distance(x, x, {0.0, 0.0, 0.0, 0.0}) == 0.0);
  CHECK(scaled_distance(x, {1.0, -2.0, 3.5, 4.0}, {1.0, 1.0, 2.0, 1.0}) == Approx(0.25));
}

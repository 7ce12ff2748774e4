#include <catch_amalgamated.hpp>

#include "llc/errors.hpp"
#include "llc/waveform.hpp"

using namespace llc;
using Catch::Approx;

namespace {
constexpr double kTwoPi = 6.283185307179586;

Waveform sampled(double f, double periods, int per_period, double (*x)(double, double)) {
  Waveform w;
  const int n = static_cast<int>(periods * per_period);
  for (int i = 0; i <= n; ++i) {
    Sample s;
    s.t = i / (f * per_period);
    for (auto& v : s.values) v = x(s.t, f);
    w.append(s);
  }
  return w;
}
}  // namespace

TEST_CASE("fundamental of a pure sine") {
  const Waveform w = sampled(1e5, 3.0, 4000, [](double t, double f) { return 2.5 * std::cos(kTwoPi * f * t + 0.4); });
  const Fundamental h = fundamental_component(w, Channel::iLr, 1e5);
  CHECK(h.amplitude == Approx(2.5).epsilon(1e-6));
  CHECK(h.phase == Approx(0.4).margin(1e-6));
}

TEST_CASE("fundamental of a square wave is 4A/pi") {
  // each half period ends with a sample just before the edge so the trapezoid sees a clean step
  const double f = 1e3, T = 1.0 / f;
  Waveform sq;
  for (int k = 0; k < 3; ++k) {
    for (int i = 0; i < 1000; ++i) {
      Sample a{k * T + i * T / 2000.0, {}};
      a.values.fill(1.0);
      sq.append(a);
    }
    Sample hi_end{k * T + T / 2.0 - 1e-15, {}};
    hi_end.values.fill(1.0);
    sq.append(hi_end);
    for (int i = 0; i < 1000; ++i) {
      Sample b{k * T + T / 2.0 + i * T / 2000.0, {}};
      b.values.fill(-1.0);
      sq.append(b);
    }
    Sample lo_end{k * T + T - 1e-15, {}};
    lo_end.values.fill(-1.0);
    sq.append(lo_end);
  }
  Sample last{3.0 * T, {}};
  last.values.fill(1.0);
  sq.append(last);
  const Fundamental h = fundamental_component(sq, Channel::vsw, f);
  CHECK(h.amplitude == Approx(4.0 / 3.141592653589793).epsilon(1e-6));
}

TEST_CASE("fundamental needs two settled periods") {
  const Waveform short_w = sampled(1e5, 1.5, 1000, [](double t, double f) { return std::sin(kTwoPi * f * t); });
  CHECK_THROWS_AS(fundamental_component(short_w, Channel::iLr, 1e5), Error);
  const Waveform growing = sampled(1e5, 3.0, 1000, [](double t, double f) { return t * f * std::sin(kTwoPi * f * t); });
  try {
    fundamental_component(growing, Channel::iLr, 1e5);
    FAIL("expected not settled");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotSettled);
  }
}

TEST_CASE("statistics over a period") {
  const Waveform dc = sampled(1e4, 1.0, 100, [](double, double) { return 3.0; });
  CHECK(peak_to_peak(dc, Channel::vOut) == 0.0);
  CHECK(mean(dc, Channel::vOut) == Approx(3.0));
  const Waveform s = sampled(1e4, 1.0, 4000, [](double t, double f) { return 2.0 * std::sin(kTwoPi * f * t); });
  CHECK(rms(s, Channel::iLr) == Approx(2.0 / std::sqrt(2.0)).epsilon(1e-3));
  CHECK(peak_abs(s, Channel::iLr) == Approx(2.0).epsilon(1e-6));
  CHECK(mean(s, Channel::iLr) == Approx(0.0).margin(1e-9));
}

TEST_CASE("append and window") {
  Waveform w;
  Sample a{0.0, {}};
  a.values.fill(0.0);
  w.append(a);
  Sample b{1.0, {}};
  b.values.fill(2.0);
  w.append(b);
  Sample b2{1.0, {}};
  b2.values.fill(4.0);
  w.append(b2);  // same instant replaces
  CHECK(w.size() == 2);
  CHECK(w.channel(Channel::vOut).back() == 4.0);
  Sample back{0.5, {}};
  CHECK_THROWS(w.append(back));

  const Waveform win = w.window(0.25, 0.75);
  REQUIRE(win.size() == 2);
  CHECK(win.time().front() == 0.25);
  CHECK(win.channel(Channel::vOut).front() == Approx(1.0));
  CHECK(win.channel(Channel::vOut).back() == Approx(3.0));
}

#include "llc/waveform.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "llc/errors.hpp"
#include "llc/tank.hpp"

namespace llc {

std::string_view channel_name(Channel c) noexcept {
  switch (c) {
    case Channel::vsw: return "vsw";
    case Channel::iLr: return "iLr";
    case Channel::vCr: return "vCr";
    case Channel::iLm: return "iLm";
    case Channel::vOut: return "vOut";
    case Channel::iOut: return "iOut";
    case Channel::gateHS: return "gateHS";
    case Channel::gateLS: return "gateLS";
  }
  return "?";
}

void Waveform::append(const Sample& s) {
  if (!t_.empty() && s.t <= t_.back()) {
    if (s.t < t_.back()) throw Error(ErrorKind::Config, "waveform time must increase");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k].back() = s.values[k];
    return;
  }
  t_.push_back(s.t);
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k].push_back(s.values[k]);
}

void Waveform::clear() {
  t_.clear();
  for (auto& d : data_) d.clear();
}

Sample Waveform::sample(std::size_t i) const {
  Sample s;
  s.t = t_.at(i);
  for (std::size_t k = 0; k < data_.size(); ++k) s.values[k] = data_[k][i];
  return s;
}

Waveform Waveform::window(double t0, double t1) const {
  Waveform out;
  if (t_.empty() || t1 < t0) return out;
  auto interp = [&](double t) {
    Sample s;
    s.t = t;
    auto it = std::upper_bound(t_.begin(), t_.end(), t);
    if (it == t_.begin()) return sample(0);
    if (it == t_.end()) return sample(t_.size() - 1);
    const std::size_t hi = static_cast<std::size_t>(it - t_.begin());
    const std::size_t lo = hi - 1;
    const double a = (t - t_[lo]) / (t_[hi] - t_[lo]);
    for (std::size_t k = 0; k < data_.size(); ++k)
      s.values[k] = data_[k][lo] + a * (data_[k][hi] - data_[k][lo]);
    return s;
  };
  t0 = std::max(t0, t_.front());
  t1 = std::min(t1, t_.back());
  out.append(interp(t0));
  for (std::size_t i = 0; i < t_.size(); ++i)
    if (t_[i] > t0 && t_[i] < t1) out.append(sample(i));
  if (t1 > t0) out.append(interp(t1));
  return out;
}

namespace {

template <class F>
double integrate(const Waveform& w, Channel c, F&& f) {
  const auto& t = w.time();
  const auto& x = w.channel(c);
  double acc = 0.0;
  for (std::size_t i = 1; i < t.size(); ++i)
    acc += 0.5 * (f(x[i - 1], t[i - 1]) + f(x[i], t[i])) * (t[i] - t[i - 1]);
  return acc;
}

double duration(const Waveform& w) {
  return w.empty() ? 0.0 : w.time().back() - w.time().front();
}

}  // namespace

double mean(const Waveform& w, Channel c) {
  const double T = duration(w);
  if (T <= 0.0) return w.empty() ? 0.0 : w.channel(c).front();
  return integrate(w, c, [](double x, double) { return x; }) / T;
}

double rms(const Waveform& w, Channel c) {
  const double T = duration(w);
  if (T <= 0.0) return w.empty() ? 0.0 : std::abs(w.channel(c).front());
  return std::sqrt(integrate(w, c, [](double x, double) { return x * x; }) / T);
}

double peak_abs(const Waveform& w, Channel c) {
  double p = 0.0;
  for (double x : w.channel(c)) p = std::max(p, std::abs(x));
  return p;
}

double peak_to_peak(const Waveform& w, Channel c) {
  const auto& x = w.channel(c);
  if (x.empty()) return 0.0;
  auto [lo, hi] = std::minmax_element(x.begin(), x.end());
  return *hi - *lo;
}

Fundamental fundamental_component(const Waveform& w, Channel c, double fsw) {
  const double T = 1.0 / fsw;
  if (w.empty() || duration(w) < 2.0 * T * (1.0 - 1e-9)) {
    std::ostringstream os;
    os << "fundamental_component: need two full periods, have " << duration(w) / T;
    throw Error(ErrorKind::NotSettled, os.str());
  }
  const double t_end = w.time().back();
  const Waveform last = w.window(t_end - T, t_end);
  const Waveform prev = w.window(t_end - 2.0 * T, t_end - T);
  const double r_last = rms(last, c);
  const double r_prev = rms(prev, c);
  if (std::abs(r_last - r_prev) > 0.005 * std::max(r_last, r_prev)) {
    std::ostringstream os;
    os << "fundamental_component: RMS of last two periods differ (" << r_prev << " vs "
       << r_last << ")";
    throw Error(ErrorKind::NotSettled, os.str(), t_end);
  }
  const double w0 = 2.0 * kPi * fsw;
  const double a = integrate(last, c, [&](double x, double t) { return x * std::cos(w0 * t); });
  const double b = integrate(last, c, [&](double x, double t) { return x * std::sin(w0 * t); });
  const double ca = 2.0 / T * a;
  const double sb = 2.0 / T * b;
  return {std::hypot(ca, sb), std::atan2(-sb, ca)};
}

}  // namespace llc

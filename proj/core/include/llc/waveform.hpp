#pragma once

#include <array>
#include <cstddef>
#include <string_view>
#include <vector>

namespace llc {

enum class Channel { vsw, iLr, vCr, iLm, vOut, iOut, gateHS, gateLS };

inline constexpr std::array<Channel, 8> kAllChannels{
    Channel::vsw, Channel::iLr,  Channel::vCr,    Channel::iLm,
    Channel::vOut, Channel::iOut, Channel::gateHS, Channel::gateLS};

std::string_view channel_name(Channel c) noexcept;

struct Sample {
  double t = 0.0;
  std::array<double, kAllChannels.size()> values{};
};

/// Multi-channel trace. Time is strictly increasing; a sample appended at
/// the time of the last one replaces it.
class Waveform {
 public:
  void append(const Sample& s);
  void clear();

  std::size_t size() const { return t_.size(); }
  bool empty() const { return t_.empty(); }

  const std::vector<double>& time() const { return t_; }
  const std::vector<double>& channel(Channel c) const {
    return data_[static_cast<std::size_t>(c)];
  }
  Sample sample(std::size_t i) const;

  /// Samples with t in [t0, t1], with linearly interpolated end points.
  Waveform window(double t0, double t1) const;

 private:
  std::vector<double> t_;
  std::array<std::vector<double>, kAllChannels.size()> data_;
};

// Trapezoidal statistics over the whole waveform.
double mean(const Waveform& w, Channel c);
double rms(const Waveform& w, Channel c);
double peak_abs(const Waveform& w, Channel c);
double peak_to_peak(const Waveform& w, Channel c);

struct Fundamental {
  double amplitude = 0.0;
  double phase = 0.0;  // x(t) ~ amplitude * cos(2 pi f t + phase), absolute t
};

/// Single-bin Fourier projection at fsw over the last full period. Throws
/// Error(NotSettled) when fewer than two periods are present or when the
/// RMS of the last two periods differs by more than 0.5%.
Fundamental fundamental_component(const Waveform& w, Channel c, double fsw);

}  // namespace llc

#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace llc {

enum class ErrorKind {
  Config,             // invalid parameters or malformed input
  Pole,               // gain denominator vanished
  Unreachable,        // target gain above the attainable peak
  BelowAsymptote,     // target gain at or below the high-frequency limit
  ModeViolation,      // circuit state left its mode's feasible set (missed event)
  EventLocalization,  // bisection did not converge
  NotSettled,         // waveform periods still differ
  NoConvergence,      // periodic steady state not reached
  Divergence,         // state norm blew up
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what,
        std::optional<double> time = std::nullopt)
      : std::runtime_error(what), kind_(kind), time_(time) {}

  ErrorKind kind() const noexcept { return kind_; }
  /// Simulation time of the failure, when one applies.
  std::optional<double> time() const noexcept { return time_; }

 private:
  ErrorKind kind_;
  std::optional<double> time_;
};

[[noreturn]] inline void config_error(const std::string& what) {
  throw Error(ErrorKind::Config, what);
}

}  // namespace llc

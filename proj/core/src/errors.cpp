#include "llc/errors.hpp"

namespace llc {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Config: return "config";
    case ErrorKind::Pole: return "pole";
    case ErrorKind::Unreachable: return "unreachable";
    case ErrorKind::BelowAsymptote: return "below_asymptote";
    case ErrorKind::ModeViolation: return "mode_violation";
    case ErrorKind::EventLocalization: return "event_localization";
    case ErrorKind::NotSettled: return "not_settled";
    case ErrorKind::NoConvergence: return "no_convergence";
    case ErrorKind::Divergence: return "divergence";
  }
  return "?";
}

}  // namespace llc

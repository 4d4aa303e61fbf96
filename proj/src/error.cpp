#include "freevec/error.hpp"

namespace freevec {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_argument: return "invalid-argument";
    case ErrorKind::invalid_profile: return "invalid-profile";
    case ErrorKind::domain: return "domain";
    case ErrorKind::edge: return "edge";
    case ErrorKind::invalid_time: return "invalid-time";
    case ErrorKind::dimension_mismatch: return "dimension-mismatch";
    case ErrorKind::decomposition_failed: return "decomposition-failed";
    case ErrorKind::convergence: return "convergence";
    case ErrorKind::outside_support: return "outside-support";
    case ErrorKind::degenerate_gap: return "degenerate-gap";
    case ErrorKind::empty_window: return "empty-window";
    case ErrorKind::divergent_integral: return "divergent-integral";
    case ErrorKind::config: return "config";
    case ErrorKind::io: return "io";
  }
  return "unknown";
}

}  // namespace freevec

#include "vortex/error.hpp"

namespace vortex {

const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::pole: return "pole";
    case ErrorKind::divergence: return "divergence";
    case ErrorKind::log_singular: return "log-singular";
    case ErrorKind::parameter: return "parameter";
    case ErrorKind::precondition: return "precondition";
    case ErrorKind::regime: return "regime-unsupported";
    case ErrorKind::series: return "series";
    case ErrorKind::quadrature: return "quadrature";
    case ErrorKind::bracketing: return "bracketing";
    case ErrorKind::degenerate: return "degenerate-field";
    case ErrorKind::non_return: return "non-return";
  }
  return "unknown";
}

bool is_numerical(ErrorKind k) {
  switch (k) {
    case ErrorKind::series:
    case ErrorKind::quadrature:
    case ErrorKind::bracketing:
    case ErrorKind::non_return:
    case ErrorKind::log_singular:
      return true;
    default:
      return false;
  }
}

}  // namespace vortex

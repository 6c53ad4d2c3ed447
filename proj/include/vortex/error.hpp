#pragma once

#include <stdexcept>
#include <string>

namespace vortex {

enum class ErrorKind {
  pole,             // gamma at a non-positive integer
  divergence,       // 2F1 at x=1 with c-a-b <= 0
  log_singular,     // 2F1 too close to x=1 in the c=a+b case
  parameter,        // no valid evaluation path / bad input
  precondition,     // caller contract violated
  regime,           // profile outside the analyzed regimes
  series,           // series did not converge within the term cap
  quadrature,       // quadrature failed to reach tolerance
  bracketing,       // root bracket failed
  degenerate,       // flow field with vanishing angular speed
  non_return,       // orbit did not close within the period bound
};

const char* to_string(ErrorKind k);

// Validation-type kinds map to exit status 2, numerical ones to 3.
bool is_numerical(ErrorKind k);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace vortex

#include "vortex/special.hpp"

#include <array>
#include <cmath>
#include <sstream>

#include "vortex/error.hpp"

namespace vortex {

namespace {

// g = 7, n = 9 coefficient set.
constexpr double kG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

double lanczos_sum(double z) {  // z = x - 1
  double s = kLanczos[0];
  for (int i = 1; i < 9; ++i) s += kLanczos[i] / (z + i);
  return s;
}

bool is_nonpositive_integer(double x) { return x <= 0.0 && x == std::floor(x); }

}  // namespace

double sin_pi(double x) {
  if (x == std::floor(x)) return 0.0;
  // reduce to [-1, 1]
  double r = std::fmod(x, 2.0);
  if (r > 1.0) r -= 2.0;
  if (r < -1.0) r += 2.0;
  if (r > 0.5) r = 1.0 - r;
  if (r < -0.5) r = -1.0 - r;
  return std::sin(kPi * r);
}

double gamma(double x) {
  if (is_nonpositive_integer(x)) {
    std::ostringstream os;
    os << "gamma: pole at " << x;
    throw Error(ErrorKind::pole, os.str());
  }
  if (x < 0.5) return kPi / (sin_pi(x) * gamma(1.0 - x));
  if (x == std::floor(x) && x <= 23.0) {
    double f = 1.0;
    for (int k = 2; k < static_cast<int>(x); ++k) f *= k;
    return f;
  }
  const double z = x - 1.0;
  const double t = z + kG + 0.5;
  // split the power to postpone overflow
  const double p = std::pow(t, 0.5 * (z + 0.5));
  return std::sqrt(2.0 * kPi) * p * (p * std::exp(-t)) * lanczos_sum(z);
}

double lgamma_pos(double x) {
  if (!(x > 0.0)) throw Error(ErrorKind::parameter, "lgamma_pos: x must be positive");
  if (x < 0.5) return std::log(std::fabs(gamma(x)));
  const double z = x - 1.0;
  const double t = z + kG + 0.5;
  return 0.5 * std::log(2.0 * kPi) + (z + 0.5) * std::log(t) - t + std::log(lanczos_sum(z));
}

double beta(double a, double b) {
  if (a > 0 && b > 0 && a + b > 60.0)
    return std::exp(lgamma_pos(a) + lgamma_pos(b) - lgamma_pos(a + b));
  return gamma(a) * gamma(b) / gamma(a + b);
}

double pochhammer(double a, int k) {
  double p = 1.0;
  for (int i = 0; i < k; ++i) p *= a + i;
  return p;
}

}  // namespace vortex

#pragma once

namespace vortex {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kEulerGamma = 0.57721566490153286061;

// Lanczos gamma, reflection below 1/2. Throws ErrorKind::pole at 0,-1,-2,...
double gamma(double x);

// log|Gamma(x)| for x > 0.
double lgamma_pos(double x);

double beta(double a, double b);

// Rising factorial (a)_k.
double pochhammer(double a, int k);

// sin(pi x) with exact zeros at integers.
double sin_pi(double x);

}  // namespace vortex

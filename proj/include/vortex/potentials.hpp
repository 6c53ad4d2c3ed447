#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "vortex/dispersion.hpp"

namespace vortex {

using cplx = std::complex<double>;

// Radial density f0(r) on [0,1].
struct RadialDensity {
  std::function<double(double)> f;
  double operator()(double r) const { return f(r); }
};
RadialDensity radial_density(const QuadraticProfile& p);

// h(r e^{it}) = h_n(r) cos(n t).
struct ModalDensity {
  int n = 1;
  std::function<double(double)> h;
  double operator()(cplx y) const;
};

// k(z) = z sum_n A_n z^n; coeffs[i] holds A_{i+1}.
struct ConformalModeCoeffs {
  std::vector<double> coeffs;
  cplx k(cplx z) const;
  cplx dk(cplx z) const;
};

// Disc integrals of a radial density against the Cauchy and logarithmic kernels.
cplx cauchy_radial(const RadialDensity& f0, cplx z);
double log_potential_radial(const RadialDensity& f0, cplx z);

// Same for a single-mode density.
cplx cauchy_modal(const ModalDensity& h, cplx z);
double log_potential_modal(const ModalDensity& h, cplx z);

struct ConformalIntegrals {
  cplx divided_square;  // int (k(z)-k(y))/(z-y)^2 f0
  cplx cauchy_dk;       // int f0/(z-y) Re k'(y)
  cplx divided;         // int (k(z)-k(y))/(z-y) f0
  double log_dk = 0.0;  // int log|z-y| f0 Re k'(y)
};
ConformalIntegrals conformal_pair_integrals(const ConformalModeCoeffs& k, const RadialDensity& f0, cplx z);

// Identities are numbered 1..8 in the order
// divided_square, cauchy_dk, cauchy_radial, cauchy_modal, log_potential_modal,
// divided, log_dk, log_potential_radial.
inline constexpr int kIdentityCount = 8;
const char* identity_name(int id);

// A density bundle covering every identity: radial f0, one mode h, coefficients k.
struct PotentialCase {
  RadialDensity f0;
  ModalDensity h;
  ConformalModeCoeffs k;
  cplx z;
};

// Closed-form value of identity id; real-valued identities return a zero imaginary part.
cplx identity_closed_form(int id, const PotentialCase& c);

// Brute-force value of identity id: tensor Gauss-Legendre in polar coordinates centred at z,
// y = z + rho e^{i phi}, so the Cauchy factor 1/|z-y| is absorbed by the area element.
struct OracleGrid {
  int radial = 400;
  int angular = 512;
};
cplx identity_oracle(int id, const PotentialCase& c, OracleGrid g = {});

// Generic version: integral over the disc of integrand(y), with a singularity at most O(1/|z-y|) at z.
cplx disc_oracle(const std::function<cplx(cplx)>& integrand, cplx z, OracleGrid g = {});

}  // namespace vortex

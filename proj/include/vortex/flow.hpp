#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <vector>

#include "vortex/dispersion.hpp"
#include "vortex/potentials.hpp"

namespace vortex {

enum class FieldKind { radial_quadratic, composite };
const char* to_string(FieldKind k);

// Relative-frame field W(z) = i z U(z) on the closed disc with the identity conformal map.
// The composite field adds amplitude * h_n(r) cos(n t) to the quadratic density.
struct AngularField {
  FieldKind kind = FieldKind::radial_quadratic;
  QuadraticProfile profile;
  double omega = 0.0;
  std::optional<ModalDensity> mode;
  double amplitude = 0.0;

  cplx U(cplx z) const;
  cplx W(cplx z) const { return cplx(0.0, 1.0) * z * U(z); }
  // inf |Re U| over the closed disc: exact for radial fields, sampled on a polar grid otherwise.
  double inf_re_U() const;
};

AngularField radial_field(const QuadraticProfile& p, double omega);
// Requires n >= 2 so that U stays bounded at the origin.
AngularField composite_field(const QuadraticProfile& p, double omega, ModalDensity h, double amplitude);

// U_0(r) = -omega + B/2 + A r^2/4.
double radial_angular_velocity(const QuadraticProfile& p, double omega, double r);

inline constexpr double kFlowTol = 1e-10;

// psi(t, z) for t of either sign.
cplx flow_map(const AngularField& f, cplx z, double t, double tol = kFlowTol);

struct OrbitSample {
  double t = 0.0;
  cplx z;
};

struct OrbitRecord {
  cplx start;
  std::vector<OrbitSample> samples;  // accepted integrator steps, ending at the period
  double period = 0.0;
  double closure_gap = 0.0;  // |psi(T, z) - z|
  double period_bound = 0.0;  // 2 pi / inf |Re U|
  double radius_drift = 0.0;  // max | |psi| - |z| | over the samples
  double average = 0.0;       // (1/T) int_0^T f(psi) when a density was supplied
};

// First return to the ray through z0; throws degenerate or non_return.
OrbitRecord integrate_orbit(const AngularField& f, cplx z0, double tol = kFlowTol,
                            const std::function<double(cplx)>& density = {});

// Minimal period T_z; closed form for radial fields, integration otherwise.
double period_map(const AngularField& f, cplx z, double tol = kFlowTol);

// S f(z) = f(z) - (1/T_z) int_0^{T_z} f(psi(s, z)) ds
double orbit_average(const AngularField& f, const std::function<double(cplx)>& density, cplx z,
                     double tol = kFlowTol);

}  // namespace vortex

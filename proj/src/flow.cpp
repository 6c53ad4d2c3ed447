#include "vortex/flow.hpp"

#include <algorithm>
#include <array>
#include <boost/math/tools/toms748_solve.hpp>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <sstream>

#include "vortex/error.hpp"
#include "vortex/quadrature.hpp"
#include "vortex/special.hpp"

namespace vortex {

namespace odeint = boost::numeric::odeint;

namespace {

// x, y, unwrapped angle, running integral of the density
using State = std::array<double, 4>;
using Stepper = odeint::runge_kutta_dopri5<State>;

struct Rhs {
  const AngularField& field;
  const std::function<double(cplx)>& density;
  void operator()(const State& s, State& ds, double) const {
    const cplx z(s[0], s[1]);
    const cplx u = field.U(z);
    const cplx w = cplx(0.0, 1.0) * z * u;
    ds[0] = w.real();
    ds[1] = w.imag();
    ds[2] = u.real();
    ds[3] = density ? density(z) : 0.0;
  }
};

State advance(const Rhs& rhs, State s, double t0, double t1, double tol) {
  if (t1 == t0) return s;
  auto stepper = odeint::make_controlled<Stepper>(tol, tol);
  const double dt = (t1 - t0) / 64.0;
  odeint::integrate_adaptive(stepper, rhs, s, t0, t1, dt);
  return s;
}

void require_nondegenerate(const AngularField& f, double& inf) {
  inf = f.inf_re_U();
  if (!(inf > 0.0)) {
    std::ostringstream os;
    os << "field is degenerate: inf |Re U| = " << inf << " (omega = " << f.omega << ")";
    throw Error(ErrorKind::degenerate, os.str());
  }
}

}  // namespace

const char* to_string(FieldKind k) {
  return k == FieldKind::radial_quadratic ? "radial-quadratic" : "composite";
}

double radial_angular_velocity(const QuadraticProfile& p, double omega, double r) {
  validate(p);
  if (!(r >= 0.0 && r <= 1.0)) throw Error(ErrorKind::parameter, "radial_angular_velocity: r must lie in [0,1]");
  return -omega + p.B / 2.0 + p.A * r * r / 4.0;
}

AngularField radial_field(const QuadraticProfile& p, double omega) {
  validate(p);
  AngularField f;
  f.profile = p;
  f.omega = omega;
  return f;
}

AngularField composite_field(const QuadraticProfile& p, double omega, ModalDensity h, double amplitude) {
  validate(p);
  if (h.n < 2) throw Error(ErrorKind::parameter, "composite_field: the mode must satisfy n >= 2");
  if (!h.h) throw Error(ErrorKind::parameter, "composite_field: missing radial coefficient");
  AngularField f;
  f.kind = FieldKind::composite;
  f.profile = p;
  f.omega = omega;
  f.mode = std::move(h);
  f.amplitude = amplitude;
  return f;
}

cplx AngularField::U(cplx z) const {
  const double r = std::abs(z);
  // outside the disc the density acts through its total mass
  double u0 = r <= 1.0 ? -omega + profile.B / 2.0 + profile.A * r * r / 4.0
                       : -omega + (profile.A / 4.0 + profile.B / 2.0) / (r * r);
  if (kind == FieldKind::radial_quadratic || amplitude == 0.0 || r == 0.0) return u0;
  const int n = mode->n;
  cplx c;
  if (r <= 1.0) {
    c = cauchy_modal(*mode, z);
  } else {
    const double I = quad::integrate([&](double s) { return std::pow(s, n + 1) * mode->h(s); }, 0.0, 1.0, 1e-12);
    c = kPi * std::pow(std::conj(z) / r, n + 1) * I / std::pow(r, n + 1);
  }
  return u0 + amplitude / (2.0 * kPi) * std::conj(c) / z;
}

double AngularField::inf_re_U() const {
  const double u0 = -omega + profile.B / 2.0, u1 = u0 + profile.A / 4.0;
  if (u0 * u1 <= 0.0) return 0.0;
  double inf = std::min(std::fabs(u0), std::fabs(u1));
  if (kind == FieldKind::radial_quadratic || amplitude == 0.0) return inf;
  const int nr = 48, nt = 96;
  const double sign = u0 > 0.0 ? 1.0 : -1.0;
  for (int i = 1; i <= nr; ++i) {
    const double r = static_cast<double>(i) / nr;
    for (int j = 0; j < nt; ++j) {
      const double v = sign * U(std::polar(r, 2.0 * kPi * j / nt)).real();
      if (v <= 0.0) return 0.0;
      inf = std::min(inf, v);
    }
  }
  return inf;
}

cplx flow_map(const AngularField& f, cplx z, double t, double tol) {
  if (!(tol > 0.0)) throw Error(ErrorKind::parameter, "flow_map: tol must be positive");
  const std::function<double(cplx)> none;
  const Rhs rhs{f, none};
  const State s = advance(rhs, {z.real(), z.imag(), 0.0, 0.0}, 0.0, t, tol);
  return {s[0], s[1]};
}

OrbitRecord integrate_orbit(const AngularField& f, cplx z0, double tol,
                            const std::function<double(cplx)>& density) {
  if (!(tol > 0.0)) throw Error(ErrorKind::parameter, "integrate_orbit: tol must be positive");
  if (z0 == cplx(0.0)) throw Error(ErrorKind::parameter, "integrate_orbit: z0 must be non-zero");
  double inf = 0.0;
  require_nondegenerate(f, inf);
  const Rhs rhs{f, density};
  const double sign = f.U(z0).real() > 0.0 ? 1.0 : -1.0;
  const double bound = 2.0 * kPi / inf;
  const double target = 2.0 * kPi;

  OrbitRecord rec;
  rec.start = z0;
  rec.period_bound = bound;
  rec.samples.push_back({0.0, z0});

  auto dense = odeint::make_dense_output(tol, tol, Stepper());
  State s{z0.real(), z0.imag(), 0.0, 0.0};
  dense.initialize(s, 0.0, bound / 256.0);
  State prev = s;
  double t_prev = 0.0;
  while (true) {
    dense.do_step(rhs);
    const double t = dense.current_time();
    const State& cur = dense.current_state();
    if (sign * cur[2] >= target) break;
    prev = cur;
    t_prev = t;
    rec.samples.push_back({t, {cur[0], cur[1]}});
    rec.radius_drift = std::max(rec.radius_drift, std::fabs(std::hypot(cur[0], cur[1]) - std::abs(z0)));
    if (t > 2.0 * bound) {
      std::ostringstream os;
      os << "orbit from z = " << z0 << " did not return within " << 2.0 * bound;
      throw Error(ErrorKind::non_return, os.str());
    }
  }
  // refine the crossing by re-integrating from the last step before it
  auto g = [&](double t) { return sign * advance(rhs, prev, t_prev, t, tol)[2] - target; };
  double lo = t_prev, hi = dense.current_time();
  const double glo = sign * prev[2] - target;
  const double ghi = sign * dense.current_state()[2] - target;
  if (ghi != 0.0) {
    boost::uintmax_t iters = 60;
    const auto root = boost::math::tools::toms748_solve(g, lo, hi, glo, ghi,
                                                         boost::math::tools::eps_tolerance<double>(50), iters);
    hi = 0.5 * (root.first + root.second);
  }
  const State end = advance(rhs, prev, t_prev, hi, tol);
  rec.period = hi;
  rec.samples.push_back({hi, {end[0], end[1]}});
  rec.closure_gap = std::abs(cplx(end[0], end[1]) - z0);
  rec.radius_drift = std::max(rec.radius_drift, std::fabs(std::hypot(end[0], end[1]) - std::abs(z0)));
  rec.average = end[3] / hi;
  return rec;
}

double period_map(const AngularField& f, cplx z, double tol) {
  double inf = 0.0;
  require_nondegenerate(f, inf);
  if (f.kind == FieldKind::radial_quadratic || f.amplitude == 0.0)
    return 2.0 * kPi / std::fabs(f.U(cplx(std::min(std::abs(z), 1.0), 0.0)).real());
  // the composite period at the origin is taken as that of a very small orbit
  if (z == cplx(0.0)) z = cplx(1e-6, 0.0);
  return integrate_orbit(f, z, tol).period;
}

double orbit_average(const AngularField& f, const std::function<double(cplx)>& density, cplx z, double tol) {
  if (!density) throw Error(ErrorKind::parameter, "orbit_average: missing density");
  if (z == cplx(0.0)) return 0.0;
  const OrbitRecord rec = integrate_orbit(f, z, tol, density);
  return density(z) - rec.average;
}

}  // namespace vortex

#include "vortex/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "vortex/error.hpp"
#include "vortex/quadrature.hpp"
#include "vortex/special.hpp"

namespace vortex {

namespace {

constexpr double kTol = 1e-12;

double integral(const std::function<double(double)>& f, double a, double b) {
  if (b <= a) return 0.0;
  return quad::integrate(f, a, b, kTol);
}

void check_point(cplx z) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag()) || std::abs(z) > 1.0 + 1e-12)
    throw Error(ErrorKind::parameter, "potentials: z must lie in the closed unit disc");
}

cplx unit(cplx z) { return std::abs(z) > 0.0 ? z / std::abs(z) : cplx(1.0, 0.0); }

}  // namespace

RadialDensity radial_density(const QuadraticProfile& p) {
  return {[p](double r) { return p.f0(r); }};
}

double ModalDensity::operator()(cplx y) const {
  const double r = std::abs(y);
  if (r == 0.0) return 0.0;
  return h(r) * std::pow(y / r, n).real();
}

cplx ConformalModeCoeffs::k(cplx z) const {
  cplx s = 0.0, zp = z;
  for (double a : coeffs) {
    zp *= z;
    s += a * zp;
  }
  return s;
}

cplx ConformalModeCoeffs::dk(cplx z) const {
  cplx s = 0.0, zp = 1.0;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    zp *= z;
    s += coeffs[i] * (i + 2.0) * zp;
  }
  return s;
}

cplx cauchy_radial(const RadialDensity& f0, cplx z) {
  check_point(z);
  const double m = std::abs(z);
  if (m == 0.0) return 0.0;
  const double I = integral([&](double r) { return (r / m) * f0(r); }, 0.0, m);
  return 2.0 * kPi * std::conj(unit(z)) * I;
}

double log_potential_radial(const RadialDensity& f0, cplx z) {
  check_point(z);
  const double m = std::min(std::abs(z), 1.0);
  auto mass = [&](double tau) { return integral([&](double r) { return r * f0(r); }, 0.0, tau); };
  // int_0^m - int_0^1 of mass(tau)/tau
  return -2.0 * kPi * integral([&](double tau) { return mass(tau) / tau; }, m, 1.0);
}

cplx cauchy_modal(const ModalDensity& h, cplx z) {
  check_point(z);
  if (h.n < 1) throw Error(ErrorKind::parameter, "cauchy_modal: n must be >= 1");
  const int n = h.n;
  const double m = std::abs(z);
  const cplx u = unit(z);
  // (m/r)^{n-1} and (r/m)^{n+1} keep both integrands bounded by |h_n|
  const double outer = integral([&](double r) { return std::pow(m / r, n - 1) * h.h(r); }, m, 1.0);
  const double inner = m > 0.0 ? integral([&](double r) { return std::pow(r / m, n + 1) * h.h(r); }, 0.0, m) : 0.0;
  return kPi * (-std::pow(u, n - 1) * outer + std::pow(std::conj(u), n + 1) * inner);
}

double log_potential_modal(const ModalDensity& h, cplx z) {
  check_point(z);
  if (h.n < 1) throw Error(ErrorKind::parameter, "log_potential_modal: n must be >= 1");
  const int n = h.n;
  const double m = std::abs(z);
  if (m == 0.0) return 0.0;
  const double c = std::pow(unit(z), n).real();
  const double outer = integral([&](double r) { return m * std::pow(m / r, n - 1) * h.h(r); }, m, 1.0);
  const double inner = integral([&](double r) { return m * std::pow(r / m, n + 1) * h.h(r); }, 0.0, m);
  return -(kPi / n) * c * (outer + inner);
}

ConformalIntegrals conformal_pair_integrals(const ConformalModeCoeffs& k, const RadialDensity& f0, cplx z) {
  check_point(z);
  const double m = std::abs(z);
  const cplx u = unit(z);
  const double inside = integral([&](double r) { return r * f0(r); }, 0.0, m);
  const double outside = integral([&](double r) { return r * f0(r); }, m, 1.0);
  const double total = inside + outside;
  ConformalIntegrals out;
  for (std::size_t i = 0; i < k.coeffs.size(); ++i) {
    const double a = k.coeffs[i];
    if (a == 0.0) continue;
    const int n = static_cast<int>(i) + 1;
    const cplx zn1 = std::pow(z, n - 1);
    const double c = std::pow(u, n).real();
    // int_0^m r^{2n+1} f0 / m^{n+1} and / m^n, written with bounded integrands
    const double high1 =
        m > 0.0 ? integral([&](double r) { return std::pow(r / m, n + 1) * std::pow(r, n) * f0(r); }, 0.0, m) : 0.0;
    const double high0 =
        m > 0.0 ? integral([&](double r) { return std::pow(r / m, n) * std::pow(r, n + 1) * f0(r); }, 0.0, m) : 0.0;
    out.divided_square += a * 2.0 * kPi * zn1 * (inside - n * outside);
    out.cauchy_dk += a * (n + 1.0) * kPi * (-zn1 * outside + std::pow(std::conj(u), n + 1) * high1);
    out.divided += a * 2.0 * kPi * std::pow(z, n) * total;
    out.log_dk += -kPi * a * (n + 1.0) / n * c * (std::pow(m, n) * outside + high0);
  }
  return out;
}

const char* identity_name(int id) {
  switch (id) {
    case 1: return "divided_square";
    case 2: return "cauchy_dk";
    case 3: return "cauchy_radial";
    case 4: return "cauchy_modal";
    case 5: return "log_potential_modal";
    case 6: return "divided";
    case 7: return "log_dk";
    case 8: return "log_potential_radial";
  }
  throw Error(ErrorKind::parameter, "identity must be in 1..8, got " + std::to_string(id));
}

cplx identity_closed_form(int id, const PotentialCase& c) {
  identity_name(id);
  switch (id) {
    case 1: return conformal_pair_integrals(c.k, c.f0, c.z).divided_square;
    case 2: return conformal_pair_integrals(c.k, c.f0, c.z).cauchy_dk;
    case 3: return cauchy_radial(c.f0, c.z);
    case 4: return cauchy_modal(c.h, c.z);
    case 5: return log_potential_modal(c.h, c.z);
    case 6: return conformal_pair_integrals(c.k, c.f0, c.z).divided;
    case 7: return conformal_pair_integrals(c.k, c.f0, c.z).log_dk;
    default: return log_potential_radial(c.f0, c.z);
  }
}

cplx disc_oracle(const std::function<cplx(cplx)>& integrand, cplx z, OracleGrid g) {
  check_point(z);
  if (g.radial < 2 || g.angular < 4) throw Error(ErrorKind::parameter, "disc_oracle: grid too small");
  const double m = std::min(std::abs(z), 1.0);
  const quad::Rule radial = quad::gauss_legendre(static_cast<std::size_t>(g.radial), 0.0, 1.0);
  // distance from z to the unit circle along direction phi
  auto reach = [&](double phi) {
    const cplx e = std::polar(1.0, phi);
    const double c = (std::conj(z) * e).real();
    const double d = c * c + 1.0 - m * m;
    return std::max(0.0, -c + std::sqrt(std::max(0.0, d)));
  };
  auto ray = [&](double phi) {
    const cplx e = std::polar(1.0, phi);
    const double R = reach(phi);
    cplx s = 0.0;
    for (std::size_t j = 0; j < radial.nodes.size(); ++j) {
      const double rho = R * radial.nodes[j];
      s += radial.weights[j] * rho * integrand(z + rho * e);
    }
    return R * s;
  };
  cplx total = 0.0;
  if (m < 1.0 - 1e-9) {
    // periodic in phi: the trapezoid rule is spectrally accurate
    const double h = 2.0 * kPi / g.angular;
    for (int i = 0; i < g.angular; ++i) total += ray(i * h);
    return total * h;
  }
  // z on the circle: the disc is seen through a half-plane of directions
  const double theta = std::arg(z);
  const quad::Rule ang =
      quad::gauss_legendre(static_cast<std::size_t>(g.angular), theta + kPi / 2.0, theta + 3.0 * kPi / 2.0);
  for (std::size_t i = 0; i < ang.nodes.size(); ++i) total += ang.weights[i] * ray(ang.nodes[i]);
  return total;
}

cplx identity_oracle(int id, const PotentialCase& c, OracleGrid g) {
  identity_name(id);
  const cplx z = c.z;
  auto f0 = [&](cplx y) { return c.f0(std::abs(y)); };
  auto logk = [&](cplx y) {
    const double d = std::abs(z - y);
    return d > 0.0 ? std::log(d) : 0.0;
  };
  auto safe = [&](cplx y, auto&& v) -> cplx { return y == z ? cplx(0.0) : v(); };
  std::function<cplx(cplx)> f;
  switch (id) {
    case 1:
      f = [&](cplx y) { return safe(y, [&] { return (c.k.k(z) - c.k.k(y)) / ((z - y) * (z - y)) * f0(y); }); };
      break;
    case 2:
      f = [&](cplx y) { return safe(y, [&] { return f0(y) / (z - y) * c.k.dk(y).real(); }); };
      break;
    case 3:
      f = [&](cplx y) { return safe(y, [&] { return f0(y) / (z - y); }); };
      break;
    case 4:
      f = [&](cplx y) { return safe(y, [&] { return c.h(y) / (z - y); }); };
      break;
    case 5:
      f = [&](cplx y) { return cplx(logk(y) * c.h(y)); };
      break;
    case 6:
      f = [&](cplx y) { return safe(y, [&] { return (c.k.k(z) - c.k.k(y)) / (z - y) * f0(y); }); };
      break;
    case 7:
      f = [&](cplx y) { return cplx(logk(y) * f0(y) * c.k.dk(y).real()); };
      break;
    default:
      f = [&](cplx y) { return cplx(logk(y) * f0(y)); };
      break;
  }
  return disc_oracle(f, z, g);
}

}  // namespace vortex

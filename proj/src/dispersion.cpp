#include "vortex/dispersion.hpp"

#include <boost/math/tools/roots.hpp>
#include <boost/math/tools/toms748_solve.hpp>
#include <cmath>
#include <limits>
#include <sstream>

#include "vortex/error.hpp"
#include "vortex/hypergeom.hpp"
#include "vortex/quadrature.hpp"

namespace vortex {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Lower end of the scan on (-inf,0) in the variable s = -x/(1-x); x >= -1e4.
constexpr double kSMax = 1.0 - 1e-4;

QuadraticProfile positive(const QuadraticProfile& p) { return p.A < 0 ? p.mirrored() : p; }

}  // namespace

void validate(const QuadraticProfile& p) {
  if (!(p.A != 0.0) || !std::isfinite(p.A) || !std::isfinite(p.B))
    throw Error(ErrorKind::parameter, "profile: A must be finite and non-zero, B finite");
}

double omega_from_x(double x, const QuadraticProfile& p) {
  validate(p);
  if (x == 0.0) throw Error(ErrorKind::pole, "omega_from_x: x = 0");
  return p.B / 2.0 + p.A / (4.0 * x);
}

double x_from_omega(double omega, const QuadraticProfile& p) {
  validate(p);
  if (omega == p.B / 2.0) throw Error(ErrorKind::pole, "x_from_omega: omega = B/2");
  return p.A / (4.0 * (omega - p.B / 2.0));
}

SingularPoint singular_point(double n, const QuadraticProfile& p) {
  validate(p);
  if (!(n >= 1.0)) throw Error(ErrorKind::parameter, "singular_point: n must be >= 1");
  SingularPoint s;
  s.n = n;
  if (std::isinf(n)) {
    s.omega_hat = p.A / 4.0 + p.B / 2.0;
    s.inv_x_hat = 1.0;
  } else {
    s.omega_hat = p.A / 4.0 + p.B / 2.0 - p.A * (n + 1.0) / (2.0 * n * (n + 2.0)) - p.B / (2.0 * n);
    s.inv_x_hat = 1.0 - 2.0 * (n + 1.0) / (n * (n + 2.0)) - 2.0 * p.B / (p.A * n);
  }
  s.x_hat = s.inv_x_hat == 0.0 ? kInf : 1.0 / s.inv_x_hat;
  return s;
}

const char* to_string(ZetaForm f) {
  switch (f) {
    case ZetaForm::integral: return "integral";
    case ZetaForm::contiguous: return "contiguous";
    case ZetaForm::alt: return "alt";
  }
  return "?";
}

const char* to_string(RootRegime r) {
  switch (r) {
    case RootRegime::one_fold: return "one_fold";
    case RootRegime::positive_branch: return "positive_branch";
    case RootRegime::negative_branch: return "negative_branch";
    case RootRegime::none_expected: return "none_expected";
    case RootRegime::generic: return "generic";
  }
  return "?";
}

ZetaEval zeta_eval(int n, double x, const QuadraticProfile& p, ZetaForm form) {
  validate(p);
  if (n < 1) throw Error(ErrorKind::parameter, "zeta: n must be >= 1");
  if (!(x <= 1.0)) throw Error(ErrorKind::parameter, "zeta: x must be <= 1");
  const double k = p.shape() / (n + 1.0);
  ZetaEval out;
  if (x == 1.0) {
    if (n == 1) throw Error(ErrorKind::precondition, "zeta: x = 1 is not offered for n = 1");
    out.extrapolated = true;
  }
  const FamilyIndex idx{static_cast<double>(n)};
  const double a = idx.a(), b = idx.b(), c = idx.c();
  const double tol = 1e-13;
  switch (form) {
    case ZetaForm::integral: {
      const double fx = hyp2f1(a, b, c, x, tol);
      auto g = [&](double t) { return hyp2f1(a, b, c, t * x, tol) * std::pow(t, n) * (-1.0 + 2.0 * x * t); };
      out.value = fx * (1.0 - x + k * x) + quad::integrate(g, 0.0, 1.0, 1e-11);
      break;
    }
    case ZetaForm::contiguous: {
      const double f1 = hyp2f1(a, b, c, x, tol), f2 = hyp2f1(a, b, c + 1, x, tol), f3 = hyp2f1(a, b, c + 2, x, tol);
      out.value = (1.0 + x * (k - 1.0)) * f1 + (2.0 * x - 1.0) / (n + 1.0) * f2 -
                  2.0 * x / ((n + 1.0) * (n + 2.0)) * f3;
      break;
    }
    case ZetaForm::alt: {
      const double f1 = hyp2f1(a, b, c, x, tol), f2 = hyp2f1(a, b, c + 1, x, tol), f3 = hyp2f1(a, b, c + 2, x, tol);
      out.value = k * x * f1 + (n - (n + 1.0) * x) / (n + 1.0) * f2 + 2.0 * n * x / ((n + 1.0) * (n + 2.0)) * f3;
      break;
    }
  }
  return out;
}

double zeta(int n, double x, const QuadraticProfile& p, ZetaForm form) { return zeta_eval(n, x, p, form).value; }

namespace {

// Scan variable: uniform in x on a finite interval, in s = -x/(1-x) when lo = -inf.
struct ScanMap {
  double lo, hi;
  bool half_line;
  double u_lo() const { return half_line ? 0.0 : lo; }
  double u_hi() const { return half_line ? kSMax : hi; }
  double x(double u) const { return half_line ? -u / (1.0 - u) : u; }
};

ScanMap make_map(double lo, double hi) {
  if (std::isinf(lo)) {
    if (hi != 0.0) throw Error(ErrorKind::parameter, "zeta scan: an unbounded interval must end at 0");
    return {lo, hi, true};
  }
  if (!(lo < hi)) throw Error(ErrorKind::parameter, "zeta scan: empty interval");
  return {lo, hi, false};
}

}  // namespace

int zeta_sign_changes(int n, const QuadraticProfile& p, double lo, double hi, int points) {
  const ScanMap m = make_map(lo, hi);
  int changes = 0;
  double prev = 0.0;
  for (int i = 0; i < points; ++i) {
    const double u = m.u_lo() + (m.u_hi() - m.u_lo()) * i / (points - 1.0);
    const double v = zeta(n, m.x(u), p);
    if (i > 0 && ((prev < 0 && v > 0) || (prev > 0 && v < 0) || v == 0.0)) ++changes;
    prev = v;
  }
  return changes;
}

std::vector<double> zeta_roots(int n, const QuadraticProfile& p, double lo, double hi, int points, double tol) {
  if (points < 2) throw Error(ErrorKind::parameter, "zeta scan: need at least two points");
  const ScanMap m = make_map(lo, hi);
  auto f = [&](double u) { return zeta(n, m.x(u), p); };
  std::vector<double> roots;
  double u_prev = m.u_lo(), v_prev = f(u_prev);
  if (v_prev == 0.0) roots.push_back(m.x(u_prev));
  for (int i = 1; i < points; ++i) {
    const double u = m.u_lo() + (m.u_hi() - m.u_lo()) * i / (points - 1.0);
    const double v = f(u);
    if (v == 0.0) {
      roots.push_back(m.x(u));
    } else if ((v_prev < 0 && v > 0) || (v_prev > 0 && v < 0)) {
      boost::uintmax_t iters = 200;
      auto stop = [tol](double a, double b) { return std::fabs(b - a) <= tol * std::max(1.0, std::fabs(a)); };
      const auto r = boost::math::tools::toms748_solve(f, u_prev, u, v_prev, v, stop, iters);
      if (iters >= 200) throw Error(ErrorKind::bracketing, "zeta root: TOMS748 did not converge");
      const double ur = std::fabs(f(r.first)) <= std::fabs(f(r.second)) ? r.first : r.second;
      roots.push_back(m.x(ur));
    }
    u_prev = u;
    v_prev = v;
  }
  return roots;
}

RootRegime root_regime(int n, const QuadraticProfile& prof) {
  const QuadraticProfile p = positive(prof);
  validate(p);
  if (n == 1) return RootRegime::one_fold;
  const double A = p.A, B = p.B;
  if (A + B < 0) return RootRegime::positive_branch;
  if (B > A) return RootRegime::negative_branch;
  if (B >= -A / 2 && B <= A / 4) return RootRegime::none_expected;
  if (B > -A && B < -A / 2)
    throw Error(ErrorKind::regime, "find_eigenvalue: B in (-A,-A/2) is the unsupported transient regime for n >= 2");
  return RootRegime::generic;
}

std::optional<EigenvalueRecord> find_eigenvalue(int n, const QuadraticProfile& prof, double tol) {
  validate(prof);
  if (n < 1) throw Error(ErrorKind::parameter, "find_eigenvalue: n must be >= 1");
  if (!(tol > 0)) throw Error(ErrorKind::parameter, "find_eigenvalue: tolerance must be positive");
  const QuadraticProfile p = positive(prof);
  EigenvalueRecord rec;
  rec.n = n;
  rec.regime = root_regime(n, p);
  std::vector<double> roots;
  auto scan = [&](double lo, double hi) {
    auto r = zeta_roots(n, p, lo, hi);
    roots.insert(roots.end(), r.begin(), r.end());
  };
  switch (rec.regime) {
    case RootRegime::one_fold: {
      // zeta_1 = (1-x)(Bx/A + 1/2)
      if (p.B == 0.0) return std::nullopt;
      const double r = -p.A / (2.0 * p.B);
      if (!(r < 1.0)) return std::nullopt;
      roots.push_back(r);
      rec.bracket_lo = rec.bracket_hi = r;
      break;
    }
    case RootRegime::positive_branch: {
      const double hi = 1.0 + (p.A + p.B) / (p.A * n);
      rec.bracket_lo = 0.0;
      rec.bracket_hi = hi;
      if (hi > 0.0) scan(0.0, hi);
      if (roots.empty()) {
        rec.bracket_extended = true;
        rec.bracket_hi = 1.0;
        scan(0.0, 1.0);
      }
      break;
    }
    case RootRegime::negative_branch: {
      const double k = p.shape() / (n + 1.0);
      const double lo = k > 1.0 ? 1.0 / (1.0 - k) : -kInf;
      rec.bracket_lo = lo;
      rec.bracket_hi = 0.0;
      scan(lo, 0.0);
      break;
    }
    case RootRegime::none_expected:
    case RootRegime::generic: {
      rec.bracket_lo = -kInf;
      rec.bracket_hi = 1.0;
      scan(-kInf, 0.0);
      scan(0.0, 1.0);
      break;
    }
  }
  if (roots.empty()) return std::nullopt;
  rec.all_roots = roots;
  rec.multiple_roots = roots.size() > 1;
  rec.x_n = roots.front();
  rec.omega_n = omega_from_x(rec.x_n, prof);
  rec.residual = std::fabs(zeta(n, rec.x_n, p));
  if (rec.residual > tol) {
    std::ostringstream os;
    os.precision(17);
    os << "find_eigenvalue: residual " << rec.residual << " above tolerance " << tol << " at n=" << n
       << ", x=" << rec.x_n << ", bracket [" << rec.bracket_lo << ", " << rec.bracket_hi << "]";
    throw Error(ErrorKind::bracketing, os.str());
  }
  rec.separation_ok = separation_check(rec, prof, 10);
  return rec;
}

double x0_root() {
  const double r2 = std::sqrt(2.0);
  auto f = [&](double x) { return hyp2f1(1.0 - r2, 1.0 + r2, 1.0, x, 1e-14); };
  double lo = 0.0, hi = 0.9;
  if (!(f(lo) > 0 && f(hi) < 0)) throw Error(ErrorKind::bracketing, "x0_root: no sign change on (0, 0.9)");
  auto r = boost::math::tools::bisect(f, lo, hi, boost::math::tools::eps_tolerance<double>(52));
  return 0.5 * (r.first + r.second);
}

double eta_integral(double kappa) {
  if (!(kappa >= 0)) throw Error(ErrorKind::parameter, "eta: kappa must be >= 0");
  auto g = [&](double t) { return std::exp(-kappa * t) / ((1.0 + t) * (1.0 + t)); };
  return quad::integrate(g, 0.0, kInf, 1e-13);
}

double eta_integral_exp_sinh(double kappa) {
  if (!(kappa >= 0)) throw Error(ErrorKind::parameter, "eta: kappa must be >= 0");
  auto g = [&](double t) { return std::exp(-kappa * t) / ((1.0 + t) * (1.0 + t)); };
  return quad::integrate_exp_sinh(g, 0.0, 1e-14);
}

double c_kappa(double kappa) { return kappa * kappa - 2.0 + 2.0 * eta_integral(kappa); }

double g_kappa(double kappa) { return kappa - 2.0 * eta_integral(kappa); }

double kappa_critical() {
  if (!(g_kappa(0.0) < 0 && g_kappa(2.0) > 0)) throw Error(ErrorKind::bracketing, "kappa_critical: g has no sign change");
  auto r = boost::math::tools::bisect([](double k) { return g_kappa(k); }, 0.0, 2.0,
                                      boost::math::tools::eps_tolerance<double>(50));
  return 0.5 * (r.first + r.second);
}

double asymptotic_eigenvalue(int n, const QuadraticProfile& prof) {
  const QuadraticProfile p = positive(prof);
  validate(p);
  if (!(p.A + p.B < 0)) throw Error(ErrorKind::regime, "asymptotic_eigenvalue: needs A+B<0 (after sign normalization)");
  if (n < 1) throw Error(ErrorKind::parameter, "asymptotic_eigenvalue: n must be >= 1");
  const double k = p.kappa();
  return 1.0 - k / n + c_kappa(k) / (static_cast<double>(n) * n);
}

bool separation_check(const EigenvalueRecord& rec, const QuadraticProfile& prof, int p_max) {
  const QuadraticProfile p = positive(prof);
  for (int m = 1; m <= p_max; ++m) {
    const SingularPoint s = singular_point(static_cast<double>(rec.n) * m, p);
    if (std::isinf(s.x_hat)) continue;
    if (!(std::fabs(rec.x_n - s.x_hat) > 1e-8)) return false;
  }
  if (p_max > 0 && p.B > p.A) {
    const double inv = 1.0 / rec.x_n;
    const double lo = singular_point(rec.n, p).inv_x_hat;
    const double hi = singular_point(2.0 * rec.n, p).inv_x_hat;
    if (!(lo < inv && inv < hi)) return false;
  }
  return true;
}

double singular_case_obstruction(int n, double x, const QuadraticProfile& p) {
  validate(p);
  if (n < 2) throw Error(ErrorKind::parameter, "singular_case_obstruction: n must be >= 2");
  if (!(x > 1.0)) throw Error(ErrorKind::parameter, "singular_case_obstruction: x must exceed 1");
  return -(1.0 / (n + 1.0)) * (1.0 / (x * x) + p.shape() * (n + 2.0) / n);
}

double one_fold_polynomial(double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw Error(ErrorKind::parameter, "one_fold_polynomial: x must lie in [0,1]");
  const double s3 = std::sqrt(3.0);
  const double w = 1.0 - x;
  return 2.0 / 3.0 * std::pow(w, s3) + 0.5 * x * std::pow(w, s3 - 1.0) - 1.0 / 3.0;
}

double one_fold_polynomial_root() {
  auto r = boost::math::tools::bisect([](double x) { return one_fold_polynomial(x); }, 0.0, 1.0,
                                      boost::math::tools::eps_tolerance<double>(52));
  return 0.5 * (r.first + r.second);
}

}  // namespace vortex

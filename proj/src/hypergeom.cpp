#include "vortex/hypergeom.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "vortex/error.hpp"
#include "vortex/quadrature.hpp"
#include "vortex/special.hpp"

namespace vortex {

const char* to_string(HyperMethod m) {
  switch (m) {
    case HyperMethod::series: return "series";
    case HyperMethod::pfaff: return "pfaff";
    case HyperMethod::integral: return "integral";
    case HyperMethod::gamma_at_one: return "gamma-at-one";
  }
  return "?";
}

namespace {

constexpr double kSeriesSwitch = 0.75;
constexpr int kMaxTerms = 100000;
constexpr double kLogGuard = 1e-8;
// Tolerances are absolute, but never tighter than this multiple of |F|.
constexpr double kRelFloor = 4e-15;

double effective_tol(double tol, double value) { return std::max(tol, kRelFloor * std::fabs(value)); }

bool nonpos_int(double v) { return v <= 0.0 && v == std::floor(v); }

bool terminating(const HyperParams& p) { return nonpos_int(p.a) || nonpos_int(p.b); }

std::string describe(const HyperParams& p, double x) {
  std::ostringstream os;
  os.precision(17);
  os << "(a=" << p.a << ", b=" << p.b << ", c=" << p.c << ", x=" << x << ")";
  return os.str();
}

// log|Gamma| and sign for any non-pole argument.
void log_gamma_signed(double v, double& lg, int& sign) {
  if (v > 0.0) {
    lg = lgamma_pos(v);
    sign = 1;
    return;
  }
  const double s = sin_pi(v);
  lg = std::log(kPi) - std::log(std::fabs(s)) - lgamma_pos(1.0 - v);
  sign = s > 0 ? 1 : -1;
}

HyperEval series(const HyperParams& p, double x, double tol, bool allow_fail = false,
                 bool* failed = nullptr) {
  HyperEval r{p, x, 1.0, 0.0, HyperMethod::series};
  if (x == 0.0) return r;
  const double eps = std::numeric_limits<double>::epsilon();
  double term = 1.0, sum = 1.0, abs_sum = 1.0;
  double prev = std::numeric_limits<double>::infinity();
  for (int k = 0; k < kMaxTerms; ++k) {
    term *= (p.a + k) * (p.b + k) / ((p.c + k) * (k + 1.0)) * x;
    sum += term;
    const double at = std::fabs(term);
    abs_sum += at;
    if (term == 0.0) {
      r.value = sum;
      r.abs_err = 4.0 * eps * abs_sum;
      return r;
    }
    if (at < 0.1 * effective_tol(tol, sum) && at < prev) {
      const double kn = k + 1.0;
      double ratio = std::fabs((p.a + kn) * (p.b + kn) / ((p.c + kn) * (kn + 1.0)) * x);
      ratio = std::max(ratio, std::fabs(x));
      if (ratio < 1.0) {
        const double tail = at * ratio / (1.0 - ratio);
        if (tail <= effective_tol(tol, sum)) {
          r.value = sum;
          r.abs_err = tail + 4.0 * eps * abs_sum;
          return r;
        }
      }
    }
    prev = at;
  }
  if (allow_fail && failed) {
    *failed = true;
    return r;
  }
  throw Error(ErrorKind::series, "gauss_2f1: series did not converge " + describe(p, x));
}

HyperEval at_one(const HyperParams& p, double tol) {
  const double s = p.c - p.a - p.b;
  if (terminating(p)) return series(p, 1.0, tol);
  if (s > 0.0) {
    HyperEval r{p, 1.0, 0.0, 0.0, HyperMethod::gamma_at_one};
    if (nonpos_int(p.c - p.a) || nonpos_int(p.c - p.b)) return r;  // 1/Gamma vanishes
    double l1, l2, l3, l4;
    int s1, s2, s3, s4;
    log_gamma_signed(p.c, l1, s1);
    log_gamma_signed(s, l2, s2);
    log_gamma_signed(p.c - p.a, l3, s3);
    log_gamma_signed(p.c - p.b, l4, s4);
    const double lg = l1 + l2 - l3 - l4;
    r.value = s1 * s2 * s3 * s4 * std::exp(lg);
    r.abs_err = std::fabs(r.value) * 1e-14 * std::max(1.0, std::fabs(lg));
    return r;
  }
  if (std::fabs(s) < 1e-14)
    throw Error(ErrorKind::log_singular, "gauss_2f1: logarithmic singularity at x=1 " + describe(p, 1.0));
  throw Error(ErrorKind::divergence, "gauss_2f1: divergent at x=1 (c-a-b<=0) " + describe(p, 1.0));
}

// Euler integral, ratio of two quadratures sharing nodes so the Beta normalization cancels.
// [0,1/2] in tau carries the tau^p weight; [1/2,1] is split geometrically toward tau=1,
// starting at the scale of 1-x, with the (1-tau)^q weight on the first piece.
struct EulerSum {
  double num = 0.0, den = 0.0;
};

EulerSum euler_sum(double ap, double pw, double qw, double x, std::size_t n) {
  const double delta = 1.0 - x;
  EulerSum s;
  auto integrand = [&](double u) {
    // (1 - x tau) written as delta + x u to keep digits near tau = 1
    return std::exp(-ap * std::log(delta + x * u));
  };
  {
    const quad::Rule& r = quad::beta_rule(n, pw, 0.0);
    const double h = 0.5, scale = std::pow(h, pw + 1.0) / (pw + 1.0);
    for (std::size_t i = 0; i < n; ++i) {
      const double tau = h * r.nodes[i];
      const double w = scale * r.weights[i] * std::pow(1.0 - tau, qw);
      s.den += w;
      s.num += w * integrand(1.0 - tau);
    }
  }
  double h0 = std::min(delta, 1.0 / (std::fabs(pw) + std::fabs(qw) + 2.0));
  h0 = std::min(h0, 0.5);
  {
    const quad::Rule& r = quad::beta_rule(n, qw, 0.0);
    const double scale = std::pow(h0, qw + 1.0) / (qw + 1.0);
    for (std::size_t i = 0; i < n; ++i) {
      const double u = h0 * r.nodes[i];
      const double w = scale * r.weights[i] * std::pow(1.0 - u, pw);
      s.den += w;
      s.num += w * integrand(u);
    }
  }
  double lo = h0;
  while (lo < 0.5) {
    const double hi = std::min(4.0 * lo, 0.5);
    const quad::Rule& r = quad::beta_rule(n, 0.0, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const double u = lo + (hi - lo) * r.nodes[i];
      const double w = (hi - lo) * r.weights[i] * std::pow(u, qw) * std::pow(1.0 - u, pw);
      s.den += w;
      s.num += w * integrand(u);
    }
    lo = hi;
  }
  return s;
}

// bp plays the role of b and needs c > bp > 0.
bool euler_integral(const HyperParams& p, double ap, double bp, double x, double tol, HyperEval& out) {
  if (!(bp > 0.0) || !(p.c - bp > 0.0)) return false;
  const double pw = bp - 1.0, qw = p.c - bp - 1.0;
  // one Gauss-Jacobi rule over [0,1]; enough unless x is very close to 1
  auto plain = [&](std::size_t n) {
    const quad::Rule& rule = quad::beta_rule(n, pw, qw);
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += rule.weights[i] * std::exp(-ap * std::log1p(-x * rule.nodes[i]));
    return s;
  };
  std::size_t n = 16;
  double prev = plain(n / 2), cur = plain(n);
  while (std::fabs(cur - prev) > effective_tol(tol, cur) && n < 128) {
    n *= 2;
    prev = cur;
    cur = plain(n);
  }
  if (std::fabs(cur - prev) <= effective_tol(tol, cur)) {
    out = HyperEval{p, x, cur, std::fabs(cur - prev), HyperMethod::integral};
    return true;
  }
  auto graded = [&](std::size_t m) {
    const EulerSum s = euler_sum(ap, pw, qw, x, m);
    return s.num / s.den;
  };
  n = 16;
  prev = graded(n / 2);
  cur = graded(n);
  while (std::fabs(cur - prev) > effective_tol(tol, cur) && n < 512) {
    n *= 2;
    prev = cur;
    cur = graded(n);
  }
  const double err = std::fabs(cur - prev);
  if (err > effective_tol(tol, cur))
    throw Error(ErrorKind::quadrature, "gauss_2f1: Gauss-Jacobi did not reach tolerance " + describe(p, x));
  out = HyperEval{p, x, cur, err, HyperMethod::integral};
  return true;
}

HyperEval eval(const HyperParams& p, double x, double tol);

HyperEval eval_unit_interval(const HyperParams& p, double x, double tol) {
  if (x <= kSeriesSwitch || terminating(p)) return series(p, x, tol);
  HyperEval r;
  if (euler_integral(p, p.a, p.b, x, tol, r)) return r;
  if (euler_integral(p, p.b, p.a, x, tol, r)) return r;
  bool failed = false;
  r = series(p, x, tol, true, &failed);
  if (failed)
    throw Error(ErrorKind::parameter, "gauss_2f1: no valid evaluation path " + describe(p, x));
  return r;
}

HyperEval pfaff(const HyperParams& p, double x, double tol) {
  // F(a,b;c;x) = (1-x)^{-a} F(a, c-b; c; x/(x-1)), or the same with a,b swapped
  const double z = x / (x - 1.0);
  double lead = p.a, other = p.b;
  const bool term_a = nonpos_int(p.a) || nonpos_int(p.c - p.b);
  const bool term_b = nonpos_int(p.b) || nonpos_int(p.c - p.a);
  if (term_b && !term_a) std::swap(lead, other);
  else if (!term_a && !term_b && std::fabs(p.b) < std::fabs(p.a)) std::swap(lead, other);
  const double pref = std::exp(-lead * std::log1p(-x));
  const HyperParams inner{lead, p.c - other, p.c};
  const double inner_tol = tol / std::max(1.0, pref);
  HyperEval r = eval_unit_interval(inner, z, inner_tol);
  return HyperEval{p, x, pref * r.value, pref * r.abs_err, HyperMethod::pfaff};
}

HyperEval eval(const HyperParams& p, double x, double tol) {
  if (nonpos_int(p.c)) throw Error(ErrorKind::parameter, "gauss_2f1: c is a non-positive integer " + describe(p, x));
  if (!(tol > 0.0)) throw Error(ErrorKind::parameter, "gauss_2f1: tolerance must be positive");
  if (!std::isfinite(x) || x > 1.0) throw Error(ErrorKind::parameter, "gauss_2f1: x must be <= 1 " + describe(p, x));
  if (x == 1.0) return at_one(p, tol);
  if (x == 0.0) return HyperEval{p, x, 1.0, 0.0, HyperMethod::series};
  if (terminating(p) && std::fabs(x) <= 1.0) return series(p, x, tol);
  if (1.0 - x < kLogGuard && std::fabs(p.c - p.a - p.b) < 1e-14)
    throw Error(ErrorKind::log_singular, "gauss_2f1: too close to the logarithmic point " + describe(p, x));
  if (x < 0.0) return pfaff(p, x, tol);
  return eval_unit_interval(p, x, tol);
}

}  // namespace

HyperEval gauss_2f1(const HyperParams& p, double x, double tol) { return eval(p, x, tol); }

double hyp2f1(double a, double b, double c, double x, double tol) {
  return eval({a, b, c}, x, tol).value;
}

double gauss_2f1_dx(const HyperParams& p, double x, int k, double tol) {
  if (k < 0) throw Error(ErrorKind::parameter, "gauss_2f1_dx: k must be non-negative");
  if (!(x < 1.0)) throw Error(ErrorKind::parameter, "gauss_2f1_dx: x must be < 1");
  if (k == 0) return eval(p, x, tol).value;
  const double coef = pochhammer(p.a, k) * pochhammer(p.b, k) / pochhammer(p.c, k);
  if (coef == 0.0) return 0.0;
  const HyperParams q{p.a + k, p.b + k, p.c + k};
  return coef * eval(q, x, tol / std::max(1.0, std::fabs(coef))).value;
}

double FamilyIndex::a() const { return -4.0 / (n + std::sqrt(n * n + 8.0)); }
double FamilyIndex::b() const { return 0.5 * (n + std::sqrt(n * n + 8.0)); }

HyperEval fn_family_eval(double n, double x, double tol) {
  if (!(n >= 1.0)) throw Error(ErrorKind::parameter, "fn_family: n must be >= 1");
  return eval(FamilyIndex{n}.params(), x, tol);
}

double fn_family(double n, double x, double tol) { return fn_family_eval(n, x, tol).value; }

double fn_family_dx(double n, double x, double tol) {
  return gauss_2f1_dx(FamilyIndex{n}.params(), x, 1, tol);
}

HyperEval fhat_family_eval(double n, double x, double tol) {
  if (!(n >= 1.0)) throw Error(ErrorKind::parameter, "fhat_family: n must be >= 1");
  if (x < 0.0 || x > 1.0) throw Error(ErrorKind::parameter, "fhat_family: x must lie in [0,1]");
  return eval(FamilyIndex{n}.hat_params(), x, tol);
}

double fhat_family(double n, double x, double tol) { return fhat_family_eval(n, x, tol).value; }

double f_at_one_continuation(double t) {
  if (!(t > 1.0)) throw Error(ErrorKind::parameter, "f_at_one_continuation: t must exceed 1");
  const double a = FamilyIndex{t}.a();
  const double lr = lgamma_pos(t + 1.0) - lgamma_pos(t + 1.0 - a);
  return std::exp(lr) / gamma(1.0 + a);
}

// ---------------------------------------------------------------------------
// identity residuals

namespace {
constexpr double kIdTol = 1e-13;
double F(double a, double b, double c, double x) { return eval({a, b, c}, x, kIdTol).value; }
}  // namespace

double residual_contiguous_c(const HyperParams& p, double x) {
  const double a = p.a, b = p.b, c = p.c;
  return c * F(a, b, c, x) - (c - a) * F(a, b, c + 1, x) - a * F(a + 1, b, c + 1, x);
}

double residual_contiguous_b(const HyperParams& p, double x) {
  const double a = p.a, b = p.b, c = p.c;
  return (b - c) * F(a, b - 1, c, x) + (c - a - b) * F(a, b, c, x) - a * (x - 1) * F(a + 1, b, c, x);
}

double residual_three_term_c(const HyperParams& p, double x) {
  const double a = p.a, b = p.b, c = p.c;
  const double lhs = ((2 * c - a - b + 1) * x - c) / c * F(a, b, c + 1, x) +
                     (a - c - 1) * (c - b + 1) * x / (c * (c + 1)) * F(a, b, c + 2, x);
  return lhs - F(a, b, c, x) * (x - 1);
}

double residual_integral_shift(const HyperParams& p, double x) {
  const double a = p.a, b = p.b, c = p.c;
  auto g = [&](double t) { return F(a, b, c, t * x) * std::pow(t, c - 1); };
  return quad::integrate(g, 0.0, 1.0, 1e-13) - F(a, b, c + 1, x) / c;
}

double residual_integral_shift2(const HyperParams& p, double x) {
  const double a = p.a, b = p.b, c = p.c;
  auto g = [&](double t) { return F(a, b, c, t * x) * std::pow(t, c - 1) * (1 - t); };
  return quad::integrate(g, 0.0, 1.0, 1e-13) - F(a, b, c + 2, x) / (c * (c + 1));
}

double residual_radial_pair(double x) {
  const double r2 = std::sqrt(2.0);
  return F(1 - r2, 1 + r2, 1, x) - F(-r2, r2, 1, x) / (1 - x);
}

double residual_ode(const HyperParams& p, double x) {
  const double f0 = F(p.a, p.b, p.c, x);
  const double f1 = gauss_2f1_dx(p, x, 1, kIdTol);
  const double f2 = gauss_2f1_dx(p, x, 2, kIdTol);
  return x * (1 - x) * f2 + (p.c - (p.a + p.b + 1) * x) * f1 - p.a * p.b * f0;
}

double residual_family_derivative(double n, double x) {
  // five-point difference against the shifted-parameter closed form
  const FamilyIndex idx{n};
  const double h = 2e-3 * std::min(1.0, 1.0 - x);
  auto f = [&](double y) { return F(idx.a(), idx.b(), idx.c(), y); };
  const double fd = (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h);
  const double closed = -2.0 / (n + 1) * F(idx.a() + 1, idx.b() + 1, idx.c() + 1, x);
  return fd - closed;
}

std::vector<IdentityCheck> hypergeom_identity_suite(int n_max) {
  std::vector<IdentityCheck> out;
  auto run = [&](const std::string& name, double tol, auto&& body) {
    IdentityCheck c{name, 0.0, tol, false, 0};
    body(c);
    c.pass = c.max_residual <= tol;
    out.push_back(c);
  };
  auto grid = [](double lo, double hi, int m) {
    std::vector<double> g(m + 1);
    for (int i = 0; i <= m; ++i) g[i] = lo + (hi - lo) * i / m;
    return g;
  };
  const auto xs = grid(-5.0, 0.95, 119);
  auto family_grid = [&](IdentityCheck& c, double (*res)(const HyperParams&, double), int stride) {
    for (int n = 1; n <= n_max; ++n) {
      const HyperParams p = FamilyIndex{static_cast<double>(n)}.params();
      for (std::size_t i = 0; i < xs.size(); i += stride) {
        c.max_residual = std::max(c.max_residual, std::fabs(res(p, xs[i])));
        ++c.samples;
      }
    }
  };
  run("contiguous relation in c", 1e-9, [&](IdentityCheck& c) { family_grid(c, residual_contiguous_c, 1); });
  run("contiguous relation in b", 1e-9, [&](IdentityCheck& c) { family_grid(c, residual_contiguous_b, 1); });
  run("three-term relation in c", 1e-9, [&](IdentityCheck& c) { family_grid(c, residual_three_term_c, 1); });
  run("integral shift c -> c+1", 1e-8, [&](IdentityCheck& c) { family_grid(c, residual_integral_shift, 7); });
  run("weighted integral shift c -> c+2", 1e-8,
      [&](IdentityCheck& c) { family_grid(c, residual_integral_shift2, 7); });
  run("radial pair relation", 1e-9, [&](IdentityCheck& c) {
    for (double x : grid(-3.0, 0.9, 78)) {
      c.max_residual = std::max(c.max_residual, std::fabs(residual_radial_pair(x)));
      ++c.samples;
    }
  });
  run("hypergeometric ODE", 1e-6, [&](IdentityCheck& c) { family_grid(c, residual_ode, 3); });
  run("family derivative", 1e-9, [&](IdentityCheck& c) {
    for (int n = 1; n <= n_max; ++n)
      for (double x : grid(-3.0, 0.9, 39)) {
        c.max_residual = std::max(c.max_residual, std::fabs(residual_family_derivative(n, x)));
        ++c.samples;
      }
  });
  run("beta integral at x=1", 1e-8, [&](IdentityCheck& c) {
    for (int n = 2; n <= n_max; ++n) {
      const double a = FamilyIndex{static_cast<double>(n)}.a();
      const double mass = std::exp(lgamma_pos(n - a + 1) + lgamma_pos(a + 1) - lgamma_pos(n + 2));
      // adaptive quadrature of the Beta integral, split so the endpoint singularity sits at 0
      auto g = [&](double t) { return std::pow(t, n - a) * std::pow(1 - t, a); };
      const double q = quad::integrate(g, 0.0, 0.5, 1e-13) +
                       quad::integrate_tanh_sinh([&](double u) { return std::pow(1 - u, n - a) * std::pow(u, a); },
                                                 0.0, 0.5, 1e-13);
      const double expect = 1.0 / ((n + 1) * F(a, FamilyIndex{static_cast<double>(n)}.b(), n + 1, 1.0));
      c.max_residual = std::max({c.max_residual, std::fabs(q - expect), std::fabs(mass - expect)});
      ++c.samples;
    }
  });
  run("F_n decreasing and positive in x", 0.0, [&](IdentityCheck& c) {
    for (int n = 1; n <= n_max; ++n) {
      double prev = std::numeric_limits<double>::infinity();
      for (double x : grid(-5.0, 1.0, 120)) {
        const double v = fn_family(n, x);
        if (!(v > 0.0 || x == 1.0) || !(v < prev)) c.max_residual += 1.0;
        prev = v;
        ++c.samples;
      }
    }
  });
  run("F_n monotone in n", 0.0, [&](IdentityCheck& c) {
    for (double x : {-4.0, -1.0, -0.2, 0.2, 0.6, 0.9, 1.0}) {
      double prev = fn_family(1, x);
      for (int n = 2; n <= n_max; ++n) {
        const double v = fn_family(n, x);
        const bool ok = x > 0 ? v > prev : v < prev;
        if (!ok) c.max_residual += 1.0;
        prev = v;
        ++c.samples;
      }
    }
  });
  run("F_n increasing in c", 0.0, [&](IdentityCheck& c) {
    for (int n = 1; n <= n_max; n += 3) {
      const FamilyIndex idx{static_cast<double>(n)};
      for (double x : {0.1, 0.5, 0.9}) {
        double prev = F(idx.a(), idx.b(), n + 1.0, x);
        for (double cc = n + 1.25; cc <= n + 4.0; cc += 0.25) {
          const double v = F(idx.a(), idx.b(), cc, x);
          if (!(v > prev)) c.max_residual += 1.0;
          prev = v;
          ++c.samples;
        }
      }
    }
  });
  return out;
}

}  // namespace vortex

#include "vortex/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "vortex/error.hpp"
#include "vortex/hypergeom.hpp"

namespace vortex {

namespace {

constexpr double kQuadTol = 1e-12;

double Fn(int n, double y) { return fn_family(n, y, 1e-13); }

}  // namespace

double SpectralContext::P(double t) const {
  const double nn = n;
  return t * t - (nn + 2.0) / ((nn + 1.0) * x) * t - profile.shape() * (nn + 2.0) / (nn * (nn + 1.0));
}

double SpectralContext::G(double r) const {
  const double nn = n;
  return -(profile.A * nn * (nn + 1.0) / (4.0 * (nn + 2.0))) * std::pow(r, nn - 1.0) * P(r * r);
}

double SpectralContext::G1_closed() const {
  const double nn = n, A = profile.A, B = profile.B;
  return nn * (A / 4.0 * (1.0 / x - 1.0) + A * (nn + 1.0) / (2.0 * nn * (nn + 2.0)) + B / (2.0 * nn));
}

SpectralContext make_context(int n, double x, const QuadraticProfile& p) {
  validate(p);
  if (n < 1) throw Error(ErrorKind::parameter, "spectral context: n must be >= 1");
  if (!(x < 1.0) || x == 0.0) throw Error(ErrorKind::parameter, "spectral context: need x < 1 and x != 0");
  SpectralContext c{n, x, p};
  if (std::fabs(c.G1()) < 1e-14 * std::max(1.0, std::fabs(p.A) * n))
    throw Error(ErrorKind::degenerate, "spectral context: G_n(1) = 0, x lies on the singular set");
  return c;
}

PnGn pn_gn(const SpectralContext& ctx, double r) {
  if (!(r >= 0.0 && r <= 1.0)) throw Error(ErrorKind::parameter, "pn_gn: r must lie in [0,1]");
  return {ctx.P(r * r), ctx.G(r)};
}

double phi_n(int n, double x) { return n * Fn(n, x) + x * fn_family_dx(n, x, 1e-13); }

double phi_n_dx(int n, double x) {
  const HyperParams p = FamilyIndex{static_cast<double>(n)}.params();
  return (n + 1.0) * gauss_2f1_dx(p, x, 1, 1e-13) + x * gauss_2f1_dx(p, x, 2, 1e-13);
}

double psi_n(const SpectralContext& ctx) {
  const int n = ctx.n;
  const double x = ctx.x, A = ctx.profile.A;
  auto g = [&](double s) {
    const double y = x * s * s;
    return std::pow(s, 2.0 * n + 1.0) * Fn(n, y) / (1.0 - y) * ctx.P(s * s);
  };
  const double I = quad::integrate(g, 0.0, 1.0, kQuadTol);
  return phi_n(n, x) * ctx.G1_closed() / n - A * (n + 1.0) * x / (n + 2.0) * I;
}

// ---------------------------------------------------------------------------

HyperOdeSolution::HyperOdeSolution(int n, double x, std::function<double(double)> g, double F1)
    : n_(n), x_(x), F1_(F1), Fx_(0.0), g_(std::move(g)) {
  if (n < 1) throw Error(ErrorKind::parameter, "solve_hyper_ode: n must be >= 1");
  if (!(x < 1.0)) throw Error(ErrorKind::parameter, "solve_hyper_ode: x must be < 1");
  Fx_ = Fn(n, x);
}

double HyperOdeSolution::operator()(double r) const {
  if (!(r >= 0.0 && r <= 1.0)) throw Error(ErrorKind::parameter, "solve_hyper_ode: r must lie in [0,1]");
  if (r == 0.0) return 0.0;
  const int n = n_;
  const double x = x_;
  // inner(t) = int_0^1 2 F_n(x t u^2) g(sqrt(t) u) / ((1 - x t u^2) sqrt(t)) du
  auto inner = [&](double t) {
    const double st = std::sqrt(t);
    auto f = [&](double u) {
      const double y = x * t * u * u;
      return 2.0 * Fn(n, y) * g_(st * u) / ((1.0 - y) * st);
    };
    return quad::integrate(f, 0.0, 1.0, kQuadTol);
  };
  auto outer = [&](double t) {
    const double F = Fn(n, x * t);
    return std::pow(t, -static_cast<double>(n)) / (F * F) * inner(t);
  };
  const double r2 = r * r;
  const double I = r2 < 1.0 ? quad::integrate(outer, r2, 1.0, kQuadTol) : 0.0;
  return std::pow(r, 2.0 * n) * Fn(n, x * r2) * (F1_ / Fx_ - 0.25 * I);
}

const quad::Chebyshev& HyperOdeSolution::fit() const {
  if (!fit_) {
    auto f = [this](double r) { return (*this)(r); };
    fit_ = std::make_shared<quad::Chebyshev>(quad::Chebyshev::fit(f, 0.0, 1.0, 1e-13, 16, 256));
    d1_ = std::make_shared<quad::Chebyshev>(fit_->derivative());
    d2_ = std::make_shared<quad::Chebyshev>(d1_->derivative());
  }
  return *fit_;
}

double HyperOdeSolution::residual(double r) const {
  fit();
  const double w = 1.0 - x_ * r * r;
  return w * r * (*d2_)(r) - w * (2.0 * n_ - 1.0) * (*d1_)(r) + 8.0 * r * x_ * (*fit_)(r) - g_(r);
}

double HyperOdeSolution::max_residual(const std::vector<double>& checkpoints) const {
  double m = 0.0;
  for (double r : checkpoints) m = std::max(m, std::fabs(residual(r)));
  return m;
}

HyperOdeSolution solve_hyper_ode(int n, double x, std::function<double(double)> g, double F1) {
  return HyperOdeSolution(n, x, std::move(g), F1);
}

std::function<double(double)> kernel_source(const SpectralContext& ctx, double H1) {
  const double scale = 8.0 * H1 * ctx.x / ctx.G1();
  return [ctx, scale](double r) { return scale * std::pow(r, ctx.n + 2.0) * ctx.G(r); };
}

// ---------------------------------------------------------------------------

KernelFunctions::KernelFunctions(const SpectralContext& ctx) : ctx_(ctx), Fx_(Fn(ctx.n, ctx.x)) {
  auto q = [this](double tau) {
    const double F = Fn(ctx_.n, ctx_.x * tau);
    return J(tau) / (F * F);
  };
  q_ = quad::Chebyshev::fit(q, 0.0, 1.0, 1e-14, 32, 2048);
  Qint_ = q_.antiderivative();
  Qtotal_ = Qint_(1.0);
}

double KernelFunctions::J(double tau) const {
  const int n = ctx_.n;
  const double x = ctx_.x;
  if (tau == 0.0) return ctx_.P(0.0) / (n + 1.0);
  // Gauss-Jacobi in th with the th^n weight; doubled until two rules agree
  auto rule_sum = [&](std::size_t m, double& mag) {
    const quad::Rule& r = quad::beta_rule(m, n, 0.0);
    double s = 0.0;
    mag = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double y = tau * r.nodes[i];
      const double v = r.weights[i] * Fn(n, x * y) * ctx_.P(y) / (1.0 - x * y);
      s += v;
      mag += std::fabs(v);
    }
    return s / (n + 1.0);
  };
  double mag = 0.0;
  std::size_t m = 16;
  double prev = rule_sum(m / 2, mag), cur = rule_sum(m, mag);
  while (std::fabs(cur - prev) > 1e-14 * mag / (n + 1.0) && m < 1024) {
    m *= 2;
    prev = cur;
    cur = rule_sum(m, mag);
  }
  return cur;
}

double KernelFunctions::Q(double t) const { return Qtotal_ - Qint_(t); }

double KernelFunctions::script_G(double t) const {
  const double x = ctx_.x, P1 = ctx_.P1();
  const double F = Fn(ctx_.n, x * t);
  return (-ctx_.P(t) / P1 + F / Fx_ - 2.0 * x * F * Q(t) / P1) / (1.0 - x * t);
}

double KernelFunctions::hstar(double r) const { return std::pow(r, ctx_.n) * script_G(r * r); }

double KernelFunctions::H(double r, double H1) const {
  const double x = ctx_.x, t = r * r;
  return H1 * std::pow(r, 2.0 * ctx_.n) * Fn(ctx_.n, x * t) * (1.0 / Fx_ - 2.0 * x * Q(t) / ctx_.P1());
}

double KernelFunctions::H_prime_one(double H1) const {
  const double x = ctx_.x;
  return H1 * (2.0 * phi_n(ctx_.n, x) / Fx_ + 4.0 * x * J(1.0) / (ctx_.P1() * Fx_));
}

// ---------------------------------------------------------------------------

namespace {

double gate(const SpectralContext& ctx, bool& warn) {
  const double z = std::fabs(zeta(ctx.n, ctx.x, ctx.profile));
  warn = false;
  if (z <= kEigenGate) return z;
  if (z <= kEigenGateLoose) {
    warn = true;
    return z;
  }
  std::ostringstream os;
  os.precision(6);
  os << "x = " << ctx.x << " is not an eigenvalue for n = " << ctx.n << " (|zeta| = " << z << ")";
  throw Error(ErrorKind::precondition, os.str());
}

}  // namespace

KernelProfile kernel_generator(const SpectralContext& ctx, std::size_t grid_points) {
  if (grid_points < 3) throw Error(ErrorKind::parameter, "kernel_generator: need at least 3 grid points");
  KernelProfile k;
  k.context = ctx;
  k.zeta_residual = gate(ctx, k.gate_warning);
  auto kf = std::make_shared<KernelFunctions>(ctx);
  k.functions = kf;
  const int n = ctx.n;
  k.H1 = n / (4.0 * ctx.x);
  k.An = -k.H1 / (2.0 * ctx.G1());
  k.grid = quad::Chebyshev::lobatto_nodes(0.0, 1.0, grid_points - 1);
  std::reverse(k.grid.begin(), k.grid.end());
  k.hstar.reserve(grid_points);
  k.Hn.reserve(grid_points);
  for (double r : k.grid) {
    k.hstar.push_back(kf->hstar(r));
    k.Hn.push_back(kf->H(r, k.H1));
  }
  k.normalization =
      quad::integrate([&](double s) { return std::pow(s, n + 1.0) * kf->hstar(s); }, 0.0, 1.0, kQuadTol);
  k.normalization_target = n / (4.0 * ctx.x);
  k.H_at_zero = kf->H(0.0, k.H1);
  k.H_prime_one_formula = kf->H_prime_one(k.H1);
  const double H1 = k.H1;
  const auto fit = quad::Chebyshev::fit([&](double r) { return kf->H(r, H1); }, 0.0, 1.0, 1e-15, grid_points - 1, 4096);
  k.H_prime_one_spectral = fit.derivative()(1.0);
  return k;
}

double apply_L(int n, const std::function<double(double)>& h, double r) {
  if (!(r >= 0.0 && r <= 1.0)) throw Error(ErrorKind::parameter, "apply_L: r must lie in [0,1]");
  const double w = std::pow(r, 2.0 * n);
  double outer = 0.0;
  if (w > 0.0 && r < 1.0)
    outer = w * quad::integrate([&](double s) { return std::pow(s, 1.0 - n) * h(s); }, r, 1.0, kQuadTol);
  const double inner = r > 0.0 ? quad::integrate([&](double s) { return std::pow(s, n + 1.0) * h(s); }, 0.0, r, kQuadTol) : 0.0;
  return outer + inner;
}

double radial_kernel(double x, double r) {
  if (!(x < 1.0)) throw Error(ErrorKind::parameter, "radial_kernel: x must be < 1");
  const double s2 = std::sqrt(2.0);
  return hyp2f1(1.0 + s2, 1.0 - s2, 1.0, x * r * r, 1e-13);
}

double radial_range_condition(double x0, const std::function<double(double)>& d) {
  const double s2 = std::sqrt(2.0);
  auto f = [&](double s) {
    const double y = x0 * s * s;
    return s * hyp2f1(-s2, s2, 1.0, y, 1e-13) * d(s) / (1.0 - y);
  };
  return quad::integrate(f, 0.0, 1.0, kQuadTol);
}

double range_kernel(const SpectralContext& ctx, std::complex<double> z) {
  const double m2 = std::norm(z);
  if (m2 > 1.0 + 1e-14) throw Error(ErrorKind::parameter, "range_kernel: z must lie in the closed disc");
  const double y = ctx.x * m2;
  return std::real(Fn(ctx.n, y) * std::pow(z, ctx.n) / (1.0 - y));
}

double range_pairing(const SpectralContext& ctx, const std::function<double(double)>& d) {
  auto f = [&](double r) {
    const double y = ctx.x * r * r;
    return std::pow(r, ctx.n + 1.0) * Fn(ctx.n, y) * d(r) / (1.0 - y);
  };
  return quad::integrate(f, 0.0, 1.0, kQuadTol);
}

double dstar(const KernelFunctions& kf, double An, double r) {
  const SpectralContext& c = kf.context();
  return kf.hstar(r) / (2.0 * c.profile.A) - An * std::pow(r, c.n + 2.0) + An * r * c.G(r) / c.G1();
}

TransversalityIntegrand transversality_pieces(const KernelFunctions& kf, double t) {
  const SpectralContext& c = kf.context();
  const double x = c.x, P1 = c.P1();
  const double coef = 4.0 * x * c.G1() / (c.profile.A * c.n * (1.0 - x * t));
  const double F = Fn(c.n, x * t);
  TransversalityIntegrand p;
  p.h1 = coef * (c.P(t) / P1 - F / kf.Fx());
  p.h2 = coef * 2.0 * x * F * kf.Q(t) / P1;
  p.h3 = -t + c.P(t) / P1;
  return p;
}

TransversalityResult transversality_integral(const SpectralContext& ctx) {
  TransversalityResult res;
  res.context = ctx;
  res.zeta_residual = gate(ctx, res.gate_warning);
  const KernelFunctions kf(ctx);
  const int n = ctx.n;
  const double x = ctx.x;
  auto weight = [&](double s) { return std::pow(s, n) * Fn(n, x * s) / (1.0 - x * s); };
  res.part1 = quad::integrate([&](double s) { return weight(s) * transversality_pieces(kf, s).h1; }, 0.0, 1.0, kQuadTol);
  res.part2 = quad::integrate([&](double s) { return weight(s) * transversality_pieces(kf, s).h2; }, 0.0, 1.0, kQuadTol);
  res.part3 = quad::integrate([&](double s) { return weight(s) * transversality_pieces(kf, s).h3; }, 0.0, 1.0, kQuadTol);
  res.total = quad::integrate(
      [&](double s) {
        const auto p = transversality_pieces(kf, s);
        return weight(s) * (p.h1 + p.h2 + p.h3);
      },
      0.0, 1.0, kQuadTol);
  res.nonzero = std::fabs(res.total) > 1e-6 * n;
  return res;
}

}  // namespace vortex

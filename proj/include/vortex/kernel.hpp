#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <memory>
#include <vector>

#include "vortex/dispersion.hpp"
#include "vortex/quadrature.hpp"

namespace vortex {

// Frequency n, spectral variable x and the profile, with the derived P_n(1), G_n(1).
struct SpectralContext {
  int n = 1;
  double x = 0.0;
  QuadraticProfile profile;

  double P(double t) const;  // P_n(t)
  double G(double r) const;  // G_n(r) = -(A n(n+1)/(4(n+2))) r^{n-1} P_n(r^2)
  double P1() const { return P(1.0); }
  double G1() const { return G(1.0); }
  // n[(A/4)(1/x-1) + A(n+1)/(2n(n+2)) + B/(2n)]
  double G1_closed() const;
};

// Checks x<1, x!=0 and G_n(1)!=0.
SpectralContext make_context(int n, double x, const QuadraticProfile& p);

struct PnGn {
  double P = 0.0;  // P_n(r^2)
  double G = 0.0;  // G_n(r)
};
PnGn pn_gn(const SpectralContext& ctx, double r);

// phi_n(x) = n F_n(x) + x F_n'(x) and its derivative.
double phi_n(int n, double x);
double phi_n_dx(int n, double x);

// Psi_n from its own integral; equals (A(n+1)/(4x)) zeta_n at every x.
double psi_n(const SpectralContext& ctx);

// Solution of (1-x r^2) r F'' - (1-x r^2)(2n-1) F' + 8 r x F = g with F(0)=0, F(1)=F1.
class HyperOdeSolution {
 public:
  HyperOdeSolution(int n, double x, std::function<double(double)> g, double F1);
  double operator()(double r) const;
  // Residual of the ODE at r from a Chebyshev fit of the solution.
  double residual(double r) const;
  double max_residual(const std::vector<double>& checkpoints) const;
  const quad::Chebyshev& fit() const;

 private:
  int n_;
  double x_, F1_, Fx_;
  std::function<double(double)> g_;
  mutable std::shared_ptr<quad::Chebyshev> fit_, d1_, d2_;
};

HyperOdeSolution solve_hyper_ode(int n, double x, std::function<double(double)> g, double F1);

// The source term that drives H_n: 8 (H1 x / G_n(1)) r^{n+2} G_n(r).
std::function<double(double)> kernel_source(const SpectralContext& ctx, double H1);

// Building blocks shared by the kernel generator and the transversality integral.
// Valid at any admissible x; nothing here assumes zeta_n(x) = 0.
class KernelFunctions {
 public:
  explicit KernelFunctions(const SpectralContext& ctx);

  const SpectralContext& context() const { return ctx_; }
  // int_0^1 th^n F_n(x tau th) P_n(tau th)/(1 - x tau th) dth
  double J(double tau) const;
  // int_t^1 J(tau)/F_n(x tau)^2 dtau
  double Q(double t) const;
  double script_G(double t) const;  // kernel generator in the variable t = r^2
  double hstar(double r) const;     // r^n script_G(r^2)
  double H(double r, double H1) const;
  // H_n'(1) from the closed derivative of H_n; vanishes iff zeta_n(x)=0 (or H1=0).
  double H_prime_one(double H1) const;
  double Fx() const { return Fx_; }
  bool converged() const { return q_.converged(); }

 private:
  SpectralContext ctx_;
  double Fx_;
  quad::Chebyshev q_, Qint_;
  double Qtotal_;
};

struct KernelProfile {
  SpectralContext context;
  std::vector<double> grid;  // Chebyshev-Lobatto nodes on [0,1], ascending
  std::vector<double> hstar;
  std::vector<double> Hn;
  double H1 = 0.0;  // n/(4x), the normalization that makes h_n = h*_n
  double An = 0.0;
  double zeta_residual = 0.0;
  bool gate_warning = false;  // |zeta_n(x)| above 1e-8 but accepted
  double normalization = 0.0;         // int_0^1 s^{n+1} h*_n
  double normalization_target = 0.0;  // n/(4x)
  double H_at_zero = 0.0;
  double H_prime_one_formula = 0.0;
  double H_prime_one_spectral = 0.0;
  std::shared_ptr<const KernelFunctions> functions;
};

inline constexpr double kEigenGate = 1e-8;
inline constexpr double kEigenGateLoose = 1e-5;

KernelProfile kernel_generator(const SpectralContext& ctx, std::size_t grid_points = 129);

// r^{2n} int_r^1 s^{1-n} h(s) ds + int_0^r s^{n+1} h(s) ds
double apply_L(int n, const std::function<double(double)>& h, double r);

// F(1+sqrt2, 1-sqrt2; 1; x r^2)
double radial_kernel(double x, double r);
// int_0^1 s H0(s) d(s)/(1 - x0 s^2) ds with H0(r) = F(-sqrt2, sqrt2; 1; x0 r^2)
double radial_range_condition(double x0, const std::function<double(double)>& d);

// Re[F_n(x|z|^2) z^n / (1 - x|z|^2)]
double range_kernel(const SpectralContext& ctx, std::complex<double> z);
// int_0^1 r^{n+1} F_n(x r^2) d(r)/(1 - x r^2) dr
double range_pairing(const SpectralContext& ctx, const std::function<double(double)>& d);

// d*_n(r) = h*_n/(2A) - A_n r^{n+2} + A_n r G_n(r)/G_n(1)
double dstar(const KernelFunctions& kf, double An, double r);

struct TransversalityResult {
  SpectralContext context;
  double total = 0.0;       // integral of the summed integrand
  double part1 = 0.0;       // contributions of the three pieces of the integrand
  double part2 = 0.0;
  double part3 = 0.0;
  double zeta_residual = 0.0;
  bool nonzero = false;
  bool gate_warning = false;
};

// Pieces of the transversality integrand at t in [0,1].
struct TransversalityIntegrand {
  double h1 = 0.0, h2 = 0.0, h3 = 0.0;
};
TransversalityIntegrand transversality_pieces(const KernelFunctions& kf, double t);

TransversalityResult transversality_integral(const SpectralContext& ctx);

}  // namespace vortex

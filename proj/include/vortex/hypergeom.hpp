#pragma once

#include <string>
#include <vector>

namespace vortex {

struct HyperParams {
  double a = 0.0;
  double b = 0.0;
  double c = 1.0;
};

enum class HyperMethod { series, pfaff, integral, gamma_at_one };

const char* to_string(HyperMethod m);

struct HyperEval {
  HyperParams params;
  double x = 0.0;
  double value = 0.0;
  double abs_err = 0.0;
  HyperMethod method = HyperMethod::series;
};

inline constexpr double kDefaultHyperTol = 1e-10;

// Gauss 2F1(a,b;c;x) for x <= 1.
HyperEval gauss_2f1(const HyperParams& p, double x, double tol = kDefaultHyperTol);

// Value-only shorthand.
double hyp2f1(double a, double b, double c, double x, double tol = kDefaultHyperTol);

// k-th derivative in x, through the shifted-parameter rule.
double gauss_2f1_dx(const HyperParams& p, double x, int k, double tol = kDefaultHyperTol);

// Parameters of the quadratic-profile family, indexed by a real n >= 1.
struct FamilyIndex {
  double n = 1.0;
  double a() const;  // (n - sqrt(n^2+8))/2, always in (-1,0)
  double b() const;  // (n + sqrt(n^2+8))/2
  double c() const { return n + 1.0; }
  HyperParams params() const { return {a(), b(), c()}; }
  HyperParams hat_params() const { return {-a(), b(), b() - a() + 1.0}; }
};

double fn_family(double n, double x, double tol = kDefaultHyperTol);
HyperEval fn_family_eval(double n, double x, double tol = kDefaultHyperTol);
double fn_family_dx(double n, double x, double tol = kDefaultHyperTol);

// Companion family used when the spectral variable exceeds one.
double fhat_family(double n, double x, double tol = kDefaultHyperTol);
HyperEval fhat_family_eval(double n, double x, double tol = kDefaultHyperTol);

// Smooth extension of n -> F_n(1) to real t > 1.
double f_at_one_continuation(double t);

// ---- identity residuals (each should vanish) ----
double residual_contiguous_c(const HyperParams& p, double x);      // c F - (c-a) F(c+1) - a F(a+1,c+1)
double residual_contiguous_b(const HyperParams& p, double x);      // shift in b
double residual_three_term_c(const HyperParams& p, double x);      // relation among c, c+1, c+2
double residual_integral_shift(const HyperParams& p, double x);    // int tau^{c-1} F(tau x) = F(c+1)/c
double residual_integral_shift2(const HyperParams& p, double x);   // (1-tau)-weighted variant
double residual_radial_pair(double x);                             // F(1-r2,1+r2;1) vs F(-r2,r2;1)/(1-x)
double residual_ode(const HyperParams& p, double x);
double residual_family_derivative(double n, double x);

struct IdentityCheck {
  std::string name;
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::size_t samples = 0;
};

// Runs every identity over its grid.
std::vector<IdentityCheck> hypergeom_identity_suite(int n_max = 30);

}  // namespace vortex

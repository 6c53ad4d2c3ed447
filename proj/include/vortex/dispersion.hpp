#pragma once

#include <optional>
#include <string>
#include <vector>

namespace vortex {

// Radial vorticity f0(r) = A r^2 + B on the unit disc.
struct QuadraticProfile {
  double A = 1.0;
  double B = 0.0;

  // Ratio (A+2B)/A that enters every dispersion formula.
  double shape() const { return (A + 2.0 * B) / A; }
  // -2(A+B)/A, positive exactly when A+B<0 (A>0).
  double kappa() const { return -2.0 * (A + B) / A; }
  // (A,B) -> (-A,-B); leaves x unchanged and negates Omega.
  QuadraticProfile mirrored() const { return {-A, -B}; }
  double f0(double r) const { return A * r * r + B; }
};

void validate(const QuadraticProfile& p);

// 1/x = (4/A)(Omega - B/2).
double omega_from_x(double x, const QuadraticProfile& p);
double x_from_omega(double omega, const QuadraticProfile& p);

struct SingularPoint {
  double n = 1.0;  // may be +infinity
  double omega_hat = 0.0;
  double x_hat = 0.0;      // +-infinity when 1/x_hat = 0
  double inv_x_hat = 0.0;  // 1/x_hat, always finite
};

SingularPoint singular_point(double n, const QuadraticProfile& p);

enum class ZetaForm { integral, contiguous, alt };
const char* to_string(ZetaForm f);

struct ZetaEval {
  double value = 0.0;
  bool extrapolated = false;  // x == 1, evaluated from the Gamma closed forms
};

ZetaEval zeta_eval(int n, double x, const QuadraticProfile& p, ZetaForm form = ZetaForm::contiguous);
double zeta(int n, double x, const QuadraticProfile& p, ZetaForm form = ZetaForm::contiguous);

enum class RootRegime {
  one_fold,          // n = 1 closed form
  positive_branch,   // A+B<0, root in (0,1)
  negative_branch,   // B>A, root in (-inf,0)
  none_expected,     // -A/2 <= B <= A/4
  generic            // no localization known; both half-lines scanned
};
const char* to_string(RootRegime r);

struct EigenvalueRecord {
  int n = 1;
  double x_n = 0.0;
  double omega_n = 0.0;
  double residual = 0.0;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  RootRegime regime = RootRegime::generic;
  bool separation_ok = false;
  bool multiple_roots = false;    // more than one sign change was found
  bool bracket_extended = false;  // the localization interval held no root; (0,1) was scanned
  std::vector<double> all_roots;
};

inline constexpr int kScanPoints = 256;

// Roots of zeta_n on (lo,hi) from a sign scan with `points` samples; lo may be -infinity.
std::vector<double> zeta_roots(int n, const QuadraticProfile& p, double lo, double hi, int points = kScanPoints,
                               double tol = 1e-15);

// Number of sign changes of zeta_n on the sampled interval.
int zeta_sign_changes(int n, const QuadraticProfile& p, double lo, double hi, int points);

// Localization interval used for n in the given profile (A>0 after mirroring).
RootRegime root_regime(int n, const QuadraticProfile& p);

std::optional<EigenvalueRecord> find_eigenvalue(int n, const QuadraticProfile& p, double tol = 1e-10);

// Root of F(1-sqrt2, 1+sqrt2; 1; .) in (0,1).
double x0_root();

// eta(k) = int_0^inf e^{-k t}/(1+t)^2 dt.
double eta_integral(double kappa);
double eta_integral_exp_sinh(double kappa);  // independent rule, for cross-checks
double c_kappa(double kappa);
double g_kappa(double kappa);
double kappa_critical();

// 1 - kappa/n + c_kappa/n^2.
double asymptotic_eigenvalue(int n, const QuadraticProfile& p);

bool separation_check(const EigenvalueRecord& rec, const QuadraticProfile& p, int p_max);

// P_n(1/x) for x > 1.
double singular_case_obstruction(int n, double x, const QuadraticProfile& p);

// (2/3)(1-x)^sqrt3 + (x/2)(1-x)^(sqrt3-1) - 1/3 and its root in (0,1).
double one_fold_polynomial(double x);
double one_fold_polynomial_root();

// Explicit threshold of the one-fold-only band, B <= -A/(1+0.0581).
inline constexpr double kOneFoldEps = 0.0581;

}  // namespace vortex

#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace vortex::quad {

using Fn = std::function<double(double)>;

struct Estimate {
  double value = 0.0;
  double error = 0.0;
};

// Adaptive Gauss-Kronrod (21 point) on [a,b]; b may be +infinity.
// Tolerance is relative to the L1 norm of the integrand.
Estimate gk(const Fn& f, double a, double b, double rel_tol = 1e-11, int max_depth = 15);

// Same, value only.
double integrate(const Fn& f, double a, double b, double rel_tol = 1e-11);

// Double-exponential rule on [a, +inf); used as an independent cross-check.
double integrate_exp_sinh(const Fn& f, double a, double rel_tol = 1e-12);

// Tanh-sinh on [a,b]; tolerates integrable endpoint singularities.
double integrate_tanh_sinh(const Fn& f, double a, double b, double rel_tol = 1e-12);

struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Gauss-Jacobi for weight (1-t)^alpha (1+t)^beta on [-1,1] (Golub-Welsch).
// When normalize is set the weights sum to one.
Rule gauss_jacobi(std::size_t n, double alpha, double beta, bool normalize = false);

// Gauss-Legendre on [a,b].
Rule gauss_legendre(std::size_t n, double a, double b);

// Gauss-Jacobi rule for tau^(p) (1-tau)^(q) on [0,1], normalized to unit mass.
// Cached per thread.
const Rule& beta_rule(std::size_t n, double p, double q);

// Chebyshev series on [a,b], sum_k c_k T_k(t).
class Chebyshev {
 public:
  Chebyshev() = default;
  Chebyshev(double a, double b, std::vector<double> coeffs);

  // Samples f at Chebyshev-Lobatto points, doubling until the tail is below tol
  // relative to the largest coefficient (or until max_n).
  static Chebyshev fit(const Fn& f, double a, double b, double tol = 1e-14,
                       std::size_t min_n = 16, std::size_t max_n = 4096);
  // Interpolant through fixed samples at the Lobatto nodes x_j = mid + half*cos(pi j/n).
  static Chebyshev from_lobatto(double a, double b, const std::vector<double>& values);
  static std::vector<double> lobatto_nodes(double a, double b, std::size_t n);

  double operator()(double x) const;
  Chebyshev derivative() const;
  // Antiderivative vanishing at a.
  Chebyshev antiderivative() const;

  double lo() const { return a_; }
  double hi() const { return b_; }
  const std::vector<double>& coeffs() const { return c_; }
  bool converged() const { return converged_; }

 private:
  double a_ = -1.0, b_ = 1.0;
  std::vector<double> c_;
  bool converged_ = true;
};

}  // namespace vortex::quad

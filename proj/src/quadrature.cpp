#include "vortex/quadrature.hpp"

#include <algorithm>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <tuple>

#include "vortex/error.hpp"
#include "vortex/special.hpp"

namespace vortex::quad {

Estimate gk(const Fn& f, double a, double b, double rel_tol, int max_depth) {
  using boost::math::quadrature::gauss_kronrod;
  Estimate e;
  double l1 = 0.0;
  e.value = gauss_kronrod<double, 21>::integrate(f, a, b, max_depth, rel_tol, &e.error, &l1);
  if (!std::isfinite(e.value)) throw Error(ErrorKind::quadrature, "gauss-kronrod: non-finite value");
  return e;
}

double integrate(const Fn& f, double a, double b, double rel_tol) {
  if (a == b) return 0.0;
  return gk(f, a, b, rel_tol).value;
}

double integrate_exp_sinh(const Fn& f, double a, double rel_tol) {
  boost::math::quadrature::exp_sinh<double> rule;
  auto g = [&](double t) { return f(a + t); };
  return rule.integrate(g, rel_tol);
}

double integrate_tanh_sinh(const Fn& f, double a, double b, double rel_tol) {
  boost::math::quadrature::tanh_sinh<double> rule;
  const double v = rule.integrate(f, a, b, rel_tol);
  if (!std::isfinite(v)) throw Error(ErrorKind::quadrature, "tanh-sinh: non-finite value");
  return v;
}

namespace {

// Implicit QL on a symmetric tridiagonal matrix; d holds the diagonal, e the
// off-diagonal (e[i] couples i and i+1). Only the first row of the
// eigenvector matrix is tracked, which is all the weights need.
void ql_first_row(std::vector<double>& d, std::vector<double>& e, std::vector<double>& z) {
  const std::size_t n = d.size();
  z.assign(n, 0.0);
  z[0] = 1.0;
  if (n == 1) return;
  e.resize(n);
  e[n - 1] = 0.0;
  const double eps = std::numeric_limits<double>::epsilon();
  for (std::size_t l = 0; l < n; ++l) {
    int iter = 0;
    std::size_t m;
    do {
      for (m = l; m + 1 < n; ++m) {
        const double dd = std::fabs(d[m]) + std::fabs(d[m + 1]);
        if (std::fabs(e[m]) <= eps * dd) break;
      }
      if (m != l) {
        if (++iter > 200) throw Error(ErrorKind::quadrature, "gauss_jacobi: QL did not converge");
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0, c = 1.0, p = 0.0;
        bool underflow = false;
        for (std::size_t ii = m; ii-- > l;) {
          const double f = s * e[ii];
          const double b = c * e[ii];
          r = std::hypot(f, g);
          e[ii + 1] = r;
          if (r == 0.0) {
            d[ii + 1] -= p;
            e[m] = 0.0;
            underflow = true;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[ii + 1] - p;
          r = (d[ii] - g) * s + 2.0 * c * b;
          p = s * r;
          d[ii + 1] = g + p;
          g = c * r - b;
          const double zf = z[ii + 1];
          z[ii + 1] = s * z[ii] + c * zf;
          z[ii] = c * z[ii] - s * zf;
        }
        if (underflow) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
}

}  // namespace

Rule gauss_jacobi(std::size_t n, double alpha, double beta, bool normalize) {
  if (n == 0) throw Error(ErrorKind::parameter, "gauss_jacobi: n must be positive");
  if (!(alpha > -1.0) || !(beta > -1.0))
    throw Error(ErrorKind::parameter, "gauss_jacobi: exponents must exceed -1");
  const double ab = alpha + beta;
  std::vector<double> d(n), e(n, 0.0);
  d[0] = (beta - alpha) / (ab + 2.0);
  for (std::size_t k = 1; k < n; ++k) {
    const double kk = static_cast<double>(k);
    const double s = 2.0 * kk + ab;
    d[k] = (beta * beta - alpha * alpha) / (s * (s + 2.0));
    double b2;
    if (k == 1) {
      b2 = 4.0 * (1.0 + alpha) * (1.0 + beta) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab));
    } else {
      b2 = 4.0 * kk * (kk + alpha) * (kk + beta) * (kk + ab) / (s * s * (s + 1.0) * (s - 1.0));
    }
    e[k - 1] = std::sqrt(b2);
  }
  std::vector<double> z;
  ql_first_row(d, e, z);

  const double mu0 = normalize ? 1.0
                               : std::exp((ab + 1.0) * std::log(2.0) + lgamma_pos(alpha + 1.0) +
                                          lgamma_pos(beta + 1.0) - lgamma_pos(ab + 2.0));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return d[i] < d[j]; });
  Rule r;
  r.nodes.reserve(n);
  r.weights.reserve(n);
  for (std::size_t i : order) {
    r.nodes.push_back(d[i]);
    r.weights.push_back(mu0 * z[i] * z[i]);
  }
  if (normalize) {
    const double s = std::accumulate(r.weights.begin(), r.weights.end(), 0.0);
    for (double& w : r.weights) w /= s;
  }
  return r;
}

Rule gauss_legendre(std::size_t n, double a, double b) {
  Rule r = gauss_jacobi(n, 0.0, 0.0, false);
  const double h = 0.5 * (b - a), m = 0.5 * (a + b);
  for (std::size_t i = 0; i < n; ++i) {
    r.nodes[i] = m + h * r.nodes[i];
    r.weights[i] *= h;
  }
  return r;
}

const Rule& beta_rule(std::size_t n, double p, double q) {
  using Key = std::tuple<std::size_t, double, double>;
  thread_local std::map<Key, Rule> cache;
  const Key key{n, p, q};
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  if (cache.size() > 512) cache.clear();
  Rule r = gauss_jacobi(n, q, p, true);
  for (double& t : r.nodes) t = 0.5 * (1.0 + t);
  return cache.emplace(key, std::move(r)).first->second;
}

// ---------------------------------------------------------------------------

Chebyshev::Chebyshev(double a, double b, std::vector<double> coeffs)
    : a_(a), b_(b), c_(std::move(coeffs)) {}

std::vector<double> Chebyshev::lobatto_nodes(double a, double b, std::size_t n) {
  std::vector<double> x(n + 1);
  const double m = 0.5 * (a + b), h = 0.5 * (b - a);
  for (std::size_t j = 0; j <= n; ++j) x[j] = m + h * std::cos(kPi * static_cast<double>(j) / n);
  if (n > 0) {
    x[0] = b;
    x[n] = a;
  }
  return x;
}

namespace {

std::vector<double> lobatto_coeffs(const std::vector<double>& v) {
  const std::size_t n = v.size() - 1;
  if (n == 0) return {v[0]};
  std::vector<double> cosv(2 * n);
  for (std::size_t i = 0; i < 2 * n; ++i) cosv[i] = std::cos(kPi * static_cast<double>(i) / n);
  std::vector<double> c(n + 1, 0.0);
  for (std::size_t k = 0; k <= n; ++k) {
    double s = 0.5 * (v[0] + ((k % 2) ? -v[n] : v[n]));
    for (std::size_t j = 1; j < n; ++j) s += v[j] * cosv[(j * k) % (2 * n)];
    c[k] = 2.0 * s / n;
  }
  c[0] *= 0.5;
  c[n] *= 0.5;
  return c;
}

}  // namespace

Chebyshev Chebyshev::from_lobatto(double a, double b, const std::vector<double>& values) {
  return Chebyshev(a, b, lobatto_coeffs(values));
}

Chebyshev Chebyshev::fit(const Fn& f, double a, double b, double tol, std::size_t min_n,
                         std::size_t max_n) {
  std::size_t n = std::max<std::size_t>(min_n, 2);
  std::vector<double> v;
  {
    auto x = lobatto_nodes(a, b, n);
    v.resize(n + 1);
    for (std::size_t j = 0; j <= n; ++j) v[j] = f(x[j]);
  }
  while (true) {
    auto c = lobatto_coeffs(v);
    double cmax = 0.0;
    for (double ci : c) cmax = std::max(cmax, std::fabs(ci));
    const std::size_t tail = std::max<std::size_t>(3, n / 16);
    double tmax = 0.0;
    for (std::size_t k = n + 1 - tail; k <= n; ++k) tmax = std::max(tmax, std::fabs(c[k]));
    const bool ok = tmax <= tol * std::max(cmax, 1e-300);
    if (ok || 2 * n > max_n) {
      Chebyshev ch(a, b, std::move(c));
      ch.converged_ = ok;
      return ch;
    }
    // refine: even nodes are shared
    const std::size_t n2 = 2 * n;
    std::vector<double> v2(n2 + 1);
    const double m = 0.5 * (a + b), h = 0.5 * (b - a);
    for (std::size_t j = 0; j <= n2; ++j) {
      if (j % 2 == 0) {
        v2[j] = v[j / 2];
      } else {
        v2[j] = f(m + h * std::cos(kPi * static_cast<double>(j) / n2));
      }
    }
    v.swap(v2);
    n = n2;
  }
}

double Chebyshev::operator()(double x) const {
  if (c_.empty()) return 0.0;
  const double t = (2.0 * x - a_ - b_) / (b_ - a_);
  double b1 = 0.0, b2 = 0.0;
  for (std::size_t k = c_.size(); k-- > 1;) {
    const double b0 = 2.0 * t * b1 - b2 + c_[k];
    b2 = b1;
    b1 = b0;
  }
  return t * b1 - b2 + c_[0];
}

Chebyshev Chebyshev::derivative() const {
  const std::size_t n = c_.size();
  if (n <= 1) return Chebyshev(a_, b_, {0.0});
  std::vector<double> d(n + 1, 0.0);
  for (std::size_t k = n - 1; k >= 1; --k) d[k - 1] = d[k + 1] + 2.0 * k * c_[k];
  d[0] *= 0.5;
  d.resize(n - 1);
  const double s = 2.0 / (b_ - a_);
  for (double& di : d) di *= s;
  return Chebyshev(a_, b_, std::move(d));
}

Chebyshev Chebyshev::antiderivative() const {
  const std::size_t n = c_.size();
  std::vector<double> c = c_;
  c.resize(n + 2, 0.0);
  std::vector<double> b(n + 1, 0.0);
  const double s = 0.5 * (b_ - a_);
  b[1] = (c[0] - 0.5 * c[2]) * s;
  for (std::size_t k = 2; k <= n; ++k) b[k] = (c[k - 1] - c[k + 1]) / (2.0 * k) * s;
  double at_left = 0.0;
  for (std::size_t k = 1; k <= n; ++k) at_left += (k % 2 ? -b[k] : b[k]);
  b[0] = -at_left;
  return Chebyshev(a_, b_, std::move(b));
}

}  // namespace vortex::quad

#include "vortex/selftest.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "vortex/dispersion.hpp"
#include "vortex/error.hpp"
#include "vortex/flow.hpp"
#include "vortex/kernel.hpp"
#include "vortex/potentials.hpp"
#include "vortex/regimes.hpp"
#include "vortex/special.hpp"

namespace vortex {

namespace {

struct Tally {
  std::vector<IdentityCheck>& out;
  std::string prefix;
  void add(const std::string& name, double residual, double tol, std::size_t samples = 1) {
    IdentityCheck c;
    c.name = prefix + "/" + name;
    c.max_residual = residual;
    c.tolerance = tol;
    c.samples = samples;
    c.pass = std::isfinite(residual) && residual <= tol;
    out.push_back(c);
  }
};

void dispersion_suite(std::vector<IdentityCheck>& out) {
  Tally t{out, "dispersion"};
  const QuadraticProfile p{1.0, -2.0};
  double forms = 0.0;
  std::size_t count = 0;
  for (int n : {1, 2, 5, 10, 20, 40})
    for (double x : {-3.0, -1.0, -0.3, 0.2, 0.6, 0.9, 0.95}) {
      const double c = zeta(n, x, p, ZetaForm::contiguous);
      forms = std::max({forms, std::fabs(c - zeta(n, x, p, ZetaForm::alt)),
                        std::fabs(c - zeta(n, x, p, ZetaForm::integral))});
      ++count;
    }
  t.add("forms_agree", forms, 1e-8, count);
  double at0 = 0.0;
  for (int n = 1; n <= 40; ++n) at0 = std::max(at0, std::fabs(zeta(n, 0.0, p) - n / (n + 1.0)));
  t.add("zeta_at_zero", at0, 1e-12, 40);
  double one = 0.0;
  for (double B : {-2.0, 1.0, 3.0})
    for (double x : {-2.0, -0.5, 0.3, 0.8}) {
      const QuadraticProfile q{1.0, B};
      one = std::max(one, std::fabs(zeta(1, x, q) - (1.0 - x) * (B * x + 0.5)));
    }
  t.add("zeta_one_fold", one, 1e-10, 12);
  const double x0 = x0_root();
  t.add("x0_defining", std::fabs(hyp2f1(1.0 - std::sqrt(2.0), 1.0 + std::sqrt(2.0), 1.0, x0)), 1e-10);
  t.add("kappa_critical", std::fabs(g_kappa(kappa_critical())), 1e-10);
  t.add("one_fold_polynomial_root", std::fabs(one_fold_polynomial_root() - 0.52907), 1e-4);
}

void kernel_suite(std::vector<IdentityCheck>& out) {
  Tally t{out, "kernel"};
  struct Case {
    double A, B;
    int n;
  };
  double norm = 0.0, hp = 0.0, h0 = 0.0, psi = 0.0;
  for (const Case c : {Case{1, -2, 10}, Case{1, 2, 2}, Case{1, 6, 3}}) {
    const QuadraticProfile p{c.A, c.B};
    const auto rec = find_eigenvalue(c.n, p);
    if (!rec) {
      t.add("eigenvalue_present", 1.0, 0.0);
      continue;
    }
    const SpectralContext ctx = make_context(c.n, rec->x_n, p);
    const KernelProfile k = kernel_generator(ctx);
    norm = std::max(norm, std::fabs(k.normalization - k.normalization_target));
    hp = std::max(hp, std::fabs(k.H_prime_one_spectral));
    h0 = std::max(h0, std::fabs(k.H_at_zero));
    psi = std::max(psi, std::fabs(psi_n(ctx) - c.A * (c.n + 1.0) / (4.0 * ctx.x) * zeta(c.n, ctx.x, p)));
  }
  t.add("normalization", norm, 1e-6, 3);
  t.add("boundary_derivative", hp, 1e-6, 3);
  t.add("origin_value", h0, 1e-12, 3);
  t.add("psi_zeta_link", psi, 1e-7, 3);
  double one = 0.0;
  for (double B : {1.0, 2.0, -3.0}) {
    const double x = -1.0 / (2.0 * B);
    const TransversalityResult r = transversality_integral(make_context(1, x, {1.0, B}));
    one = std::max(one, std::fabs(r.total - (x - 1.0) / (2.0 * x)));
  }
  t.add("one_fold_transversality", one, 1e-8, 3);
}

void potentials_suite(std::vector<IdentityCheck>& out) {
  Tally t{out, "potentials"};
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int id = 1; id <= kIdentityCount; ++id) {
    double worst = 0.0;
    for (int s = 0; s < 3; ++s) {
      const double a = u(rng), b = u(rng), c1 = u(rng), c2 = u(rng);
      const int n = 1 + s;
      PotentialCase pc{{[=](double r) { return a + b * r * r; }},
                       {n, [=](double r) { return c1 * std::pow(r, n) + c2 * std::pow(r, n + 2); }},
                       {{u(rng), u(rng)}},
                       std::polar(0.9 * std::sqrt(0.5 + 0.5 * u(rng)), kPi * u(rng))};
      worst = std::max(worst, std::abs(identity_closed_form(id, pc) - identity_oracle(id, pc)));
    }
    t.add(identity_name(id), worst, 1e-5, 3);
  }
  const RadialDensity one{[](double) { return 1.0; }};
  double newton = 0.0;
  for (double r : {0.0, 0.3, 0.7, 1.0})
    newton = std::max(newton, std::fabs(log_potential_radial(one, r) - kPi / 2.0 * (r * r - 1.0)));
  t.add("newtonian_uniform", newton, 1e-6, 4);
}

void flow_suite(std::vector<IdentityCheck>& out) {
  Tally t{out, "flow"};
  const AngularField f = radial_field({4.0, 0.0}, 2.0);
  double period = 0.0, gap = 0.0, avg = 0.0;
  for (double r : {0.2, 0.6, 1.0}) {
    const cplx z = std::polar(r, 0.4);
    const OrbitRecord o = integrate_orbit(f, z, kFlowTol, [](cplx y) { return 4.0 * std::norm(y); });
    period = std::max(period, std::fabs(o.period - period_map(f, z)));
    gap = std::max(gap, o.closure_gap);
    avg = std::max(avg, std::fabs(4.0 * std::norm(z) - o.average));
  }
  t.add("radial_period", period, 1e-7, 3);
  t.add("closure_gap", gap, 1e-8, 3);
  t.add("orbit_average_radial", avg, 1e-8, 3);
  const cplx z(0.3, 0.4);
  t.add("group_property", std::abs(flow_map(f, z, 2.0) - flow_map(f, flow_map(f, z, 0.7), 1.3)), 1e-7);
  t.add("reflection", std::abs(flow_map(f, std::conj(z), 1.1) - std::conj(flow_map(f, z, -1.1))), 1e-7);
}

void regimes_suite(std::vector<IdentityCheck>& out) {
  Tally t{out, "regimes"};
  struct Case {
    double B;
    RegimeLabel label;
  };
  double wrong = 0.0;
  for (const Case c : {Case{-2.0, RegimeLabel::R_infty}, Case{6.0, RegimeLabel::R_finite},
                       Case{0.2, RegimeLabel::R_0}, Case{-0.8, RegimeLabel::transient_unknown},
                       Case{0.5, RegimeLabel::one_fold_only}})
    if (classify({1.0, c.B}).label != c.label) wrong += 1.0;
  t.add("panel_labels", wrong, 0.0, 5);
  const RegimeReport r = classify({1.0, 6.0});
  t.add("finite_bounds", std::fabs(r.allowed_hi - 7.0) + std::fabs(r.excluded_from.value_or(0) - 14.0), 0.0);
  double changes = 0.0;
  for (int m = 14; m <= 18; ++m) changes += exclusion_sign_changes({1.0, 6.0}, m);
  t.add("exclusion_scan", changes, 0.0, 5);
}

}  // namespace

const std::vector<std::string>& selftest_suites() {
  static const std::vector<std::string> names{"hypergeom", "dispersion", "kernel", "potentials", "flow", "regimes"};
  return names;
}

std::vector<IdentityCheck> run_selftest(const std::string& suite) {
  std::vector<IdentityCheck> out;
  auto want = [&](const char* s) { return suite == "all" || suite == s; };
  const auto& names = selftest_suites();
  if (suite != "all" && std::find(names.begin(), names.end(), suite) == names.end())
    throw Error(ErrorKind::parameter, "unknown selftest suite '" + suite + "'");
  if (want("hypergeom"))
    for (IdentityCheck c : hypergeom_identity_suite()) {
      c.name = "hypergeom/" + c.name;
      out.push_back(c);
    }
  if (want("dispersion")) dispersion_suite(out);
  if (want("kernel")) kernel_suite(out);
  if (want("potentials")) potentials_suite(out);
  if (want("flow")) flow_suite(out);
  if (want("regimes")) regimes_suite(out);
  return out;
}

}  // namespace vortex

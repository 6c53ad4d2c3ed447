// Acceptance checks, one numbered criterion per block; `--only k` runs a single one.
#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "vortex/dispersion.hpp"
#include "vortex/error.hpp"
#include "vortex/flow.hpp"
#include "vortex/hypergeom.hpp"
#include "vortex/kernel.hpp"
#include "vortex/potentials.hpp"
#include "vortex/regimes.hpp"
#include "vortex/special.hpp"

using namespace vortex;

namespace {

// Collects the sub-checks of one criterion and a short note for each failure.
struct Verdict {
  bool ok = true;
  std::vector<std::string> notes;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      notes.push_back(what);
    }
  }
  void within(double value, double tol, const std::string& what) {
    std::ostringstream os;
    os.precision(3);
    os << what << " = " << value << " (limit " << tol << ")";
    if (!(std::fabs(value) <= tol)) {
      ok = false;
      notes.push_back(os.str());
    } else {
      info.push_back(os.str());
    }
  }
  std::vector<std::string> info;
};

std::vector<double> linspace(double lo, double hi, int count) {
  std::vector<double> g(count);
  for (int i = 0; i < count; ++i) g[i] = lo + (hi - lo) * i / (count - 1);
  return g;
}

double check_of(const std::vector<IdentityCheck>& suite, const std::string& name) {
  for (const auto& c : suite)
    if (c.name == name) return c.max_residual;
  return INFINITY;
}

// 1. hypergeometric identities
void hypergeometric(Verdict& v) {
  const auto suite = hypergeom_identity_suite(30);
  for (const char* name : {"contiguous relation in c", "contiguous relation in b", "three-term relation in c",
                           "integral shift c -> c+1", "weighted integral shift c -> c+2", "radial pair relation"})
    v.within(check_of(suite, name), 1e-8, name);
  double lin = 0.0;
  for (double x : linspace(-5.0, 0.95, 60)) lin = std::max(lin, std::fabs(hyp2f1(-1.0, 2.0, 2.0, x) - (1.0 - x)));
  v.within(lin, 1e-12, "F(-1,2;2;x) - (1-x)");
  v.within(hyp2f1(1.0, 2.0, 4.0, 1.0) - 3.0, 1e-10, "F(1,2;4;1) - 3");
}

// 2. the three dispersion formulations and their anchors
void dispersion_forms(Verdict& v) {
  double spread = 0.0;
  for (int n = 1; n <= 40; ++n)
    for (double x : linspace(-3.0, 0.95, 80)) {
      const QuadraticProfile p{1.0, -2.0};
      const double a = zeta(n, x, p, ZetaForm::contiguous), b = zeta(n, x, p, ZetaForm::alt),
                   c = zeta(n, x, p, ZetaForm::integral);
      spread = std::max({spread, std::fabs(a - b), std::fabs(a - c), std::fabs(b - c)});
    }
  v.within(spread, 1e-8, "max pairwise form difference");
  double at0 = 0.0;
  for (double B : {-2.0, 0.2, 2.0})
    for (int n = 1; n <= 40; ++n) at0 = std::max(at0, std::fabs(zeta(n, 0.0, {1.0, B}) - n / (n + 1.0)));
  v.within(at0, 1e-12, "zeta_n(0) - n/(n+1)");
  double one = 0.0;
  for (double A : {1.0, 2.5})
    for (double B : {-2.0, 0.2, 2.0})
      for (double x : linspace(-3.0, 0.95, 40))
        one = std::max(one, std::fabs(zeta(1, x, {A, B}) - (1.0 - x) * (B * x / A + 0.5)));
  v.within(one, 1e-10, "zeta_1 - (1-x)(Bx/A+1/2)");
}

// 3. existence, localization and absence of eigenvalues per regime
void eigenvalue_regimes(Verdict& v) {
  {
    const QuadraticProfile p{1.0, -2.0};
    double prev = 0.0;
    int outside_tight = 0, outside_proved = 0, first_outside = 0, missing = 0;
    double worst_excess = 0.0;
    for (int n = 20; n <= 300; n += 5) {
      const auto r = find_eigenvalue(n, p);
      if (!r) {
        ++missing;
        continue;
      }
      v.require(r->x_n > prev, "A=1,B=-2: x_n not increasing at n=" + std::to_string(n));
      prev = r->x_n;
      if (!(r->x_n > 0.0 && r->x_n < 1.0 - 2.0 / n)) {
        if (!outside_tight) first_outside = n;
        ++outside_tight;
        worst_excess = std::max(worst_excess, r->x_n - (1.0 - 2.0 / n));
      }
      if (!(r->x_n > 0.0 && r->x_n < 1.0 + (p.A + p.B) / (p.A * n))) ++outside_proved;
    }
    v.require(missing == 0, "A=1,B=-2: " + std::to_string(missing) + " values of n in [20,300] without a root");
    v.require(outside_proved == 0, "A=1,B=-2: roots outside (0, 1+(A+B)/(An))");
    std::ostringstream os;
    os.precision(3);
    os << "A=1,B=-2: " << outside_tight << " of 57 roots lie outside (0, 1-2/n), first at n=" << first_outside
       << ", largest excess " << worst_excess << " (all lie inside (0, 1-1/n))";
    v.require(outside_tight == 0, os.str());
  }
  {
    const QuadraticProfile p{1.0, 2.0};
    for (int n = 1; n <= 4; ++n) {
      const auto r = find_eigenvalue(n, p);
      v.require(r.has_value(), "A=1,B=2: no root at n=" + std::to_string(n));
      if (!r) continue;
      const double denom = 1.0 - (p.A + 2 * p.B) / (p.A * (n + 1.0));
      const double lower = denom < 0 ? 1.0 / denom : -INFINITY;
      v.require(r->x_n > lower && r->x_n < 0.0, "A=1,B=2: localization bracket fails at n=" + std::to_string(n));
      const double cap = -p.A / (2 * p.B);
      v.require(n == 1 ? std::fabs(r->x_n - cap) <= 1e-12 : r->x_n < cap,
                "A=1,B=2: x_n < -A/(2B) fails at n=" + std::to_string(n));
    }
    for (int n = 6; n <= 40; ++n)
      v.require(!find_eigenvalue(n, p), "A=1,B=2: unexpected root at n=" + std::to_string(n));
  }
  for (int n = 2; n <= 40; ++n)
    v.require(!find_eigenvalue(n, {1.0, 0.2}), "A=1,B=0.2: unexpected root at n=" + std::to_string(n));
}

// 4. large-n expansion and the critical kappa
void asymptotics(Verdict& v) {
  const QuadraticProfile p{1.0, -2.0};
  const auto r = find_eigenvalue(200, p);
  v.require(r.has_value(), "no root at n=200");
  if (r) {
    const double kappa = p.kappa(), c = c_kappa(kappa), n = 200.0;
    v.within((n * n * (r->x_n - 1.0 + kappa / n) - c) / (0.05 * std::fabs(c)), 1.0,
             "|n^2(x_n - 1 + kappa/n) - c_kappa| / (0.05 |c_kappa|)");
  }
  const double kc = kappa_critical();
  v.require(kc > 0.0 && kc < 2.0, "kappa_c outside (0,2)");
  v.within(g_kappa(kc), 1e-10, "g(kappa_c)");
  v.within(g_kappa(0.0) + 2.0, 1e-12, "g(0) + 2");
}

// 5. one-fold threshold polynomial
void one_fold_root(Verdict& v) {
  const double r = one_fold_polynomial_root();
  v.within(r - 0.52907, 1e-4, "root - 0.52907");
  v.within(one_fold_polynomial(r), 1e-12, "polynomial at root");
}

// 6. kernel invariants at computed eigenvalues
void kernel_invariants(Verdict& v) {
  struct Sample {
    const char* regime;
    double B;
    int n;
  };
  std::vector<Sample> samples;
  for (int n : {2, 5, 10, 20, 40}) samples.push_back({"R_infty", -2.0, n});
  for (int n : {2, 4, 7, 10, 13}) samples.push_back({"R_finite", 6.0, n});
  for (double B : {0.05, 0.1, 0.15, 0.2, 0.25}) samples.push_back({"R_0", B, 1});
  for (double B : {0.3, 0.5, 0.7, 0.9, 1.0}) samples.push_back({"one_fold_only", B, 1});
  for (double B : {-0.95, -0.96, -0.97, -0.98, -0.99}) samples.push_back({"transient_unknown", B, 1});
  double norm = 0.0, h0 = 0.0, hp = 0.0, L = 0.0, psi = 0.0;
  for (const Sample& s : samples) {
    const QuadraticProfile p{1.0, s.B};
    if (std::string(to_string(classify(p).label)) != s.regime) {
      v.require(false, std::string("sample not in ") + s.regime);
      continue;
    }
    const auto r = find_eigenvalue(s.n, p);
    if (!r) {
      v.require(false, "no eigenvalue for a kernel sample");
      continue;
    }
    const SpectralContext ctx = make_context(s.n, r->x_n, p);
    const KernelProfile k = kernel_generator(ctx);
    norm = std::max(norm, std::fabs(k.normalization - s.n / (4.0 * r->x_n)));
    h0 = std::max(h0, std::fabs(k.H_at_zero));
    hp = std::max({hp, std::fabs(k.H_prime_one_spectral), std::fabs(k.H_prime_one_formula)});
    for (std::size_t i = 0; i < k.grid.size(); i += 8)
      L = std::max(L, std::fabs(apply_L(s.n, [&](double q) { return k.functions->hstar(q); }, k.grid[i]) - k.Hn[i]));
    for (double x : {-2.0, -0.5, 0.25, 0.6, 0.9}) {
      const SpectralContext c = make_context(s.n, x, p);
      psi = std::max(psi, std::fabs(psi_n(c) - p.A * (s.n + 1.0) / (4.0 * x) * zeta(s.n, x, p)));
    }
  }
  v.within(norm, 1e-6, "normalization - n/(4x_n)");
  v.within(h0, 1e-12, "H_n(0)");
  v.within(hp, 1e-6, "H_n'(1)");
  v.within(L, 1e-5, "L h*_n - H_n");
  v.within(psi, 1e-7, "Psi_n - (A(n+1)/(4x)) zeta_n");
}

// 7. transversality
void transversality(Verdict& v) {
  double one = 0.0;
  for (const auto [A, B] : {std::pair{1.0, 1.0}, std::pair{1.0, 2.0}, std::pair{2.0, -3.0}}) {
    const double x = -A / (2.0 * B);
    const TransversalityResult t = transversality_integral(make_context(1, x, {A, B}));
    one = std::max(one, std::fabs(t.total - (x - 1.0) / (2.0 * x)));
  }
  v.within(one, 1e-8, "one-fold value - (x-1)/(2x)");
  const auto r = find_eigenvalue(150, {1.0, -2.0});
  v.require(r.has_value(), "no root at n=150");
  if (r) {
    const TransversalityResult t = transversality_integral(make_context(150, r->x_n, {1.0, -2.0}));
    v.within(t.total / -75.0 - 1.0, 0.2, "ratio to -n/2 minus 1 at n=150");
  }
  const auto r2 = find_eigenvalue(2, {1.0, 2.0});
  v.require(r2.has_value(), "no root at n=2, B=2");
  if (r2) {
    const KernelFunctions kf(make_context(2, r2->x_n, {1.0, 2.0}));
    double lowest = INFINITY;
    for (int i = 0; i < 100; ++i) lowest = std::min(lowest, transversality_pieces(kf, (i + 0.5) / 100.0).h2);
    v.require(lowest >= 0.0, "second integrand piece negative somewhere on the grid");
  }
}

// 8. disc integrals
void potentials(Verdict& v) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-1.0, 1.0), w(0.0, 1.0);
  double worst = 0.0;
  for (int id = 1; id <= kIdentityCount; ++id)
    for (int s = 0; s < 20; ++s) {
      const double a = u(rng), b = u(rng), c1 = u(rng), c2 = u(rng);
      const int n = 1 + s % 5;
      // every fifth case sits on the unit circle
      const double radius = s % 5 == 4 ? 1.0 : std::sqrt(w(rng));
      const PotentialCase pc{{[=](double r) { return a + b * r * r; }},
                             {n, [=](double r) { return c1 * std::pow(r, n) + c2 * std::pow(r, n + 2); }},
                             {{u(rng), u(rng), u(rng)}},
                             std::polar(radius, kPi * u(rng))};
      const double d = std::abs(identity_closed_form(id, pc) - identity_oracle(id, pc));
      if (d > 1e-5) v.require(false, std::string(identity_name(id)) + " differs from the oracle");
      worst = std::max(worst, d);
    }
  v.within(worst, 1e-5, "largest closed-form vs oracle difference");
  const RadialDensity one{[](double) { return 1.0; }};
  double newton = 0.0;
  for (double r : linspace(0.0, 1.0, 21))
    newton = std::max(newton, std::fabs(log_potential_radial(one, std::polar(r, 1.3 * r)) - kPi / 2 * (r * r - 1)));
  v.within(newton, 1e-6, "uniform Newtonian potential - (pi/2)(|z|^2-1)");
}

// 9. flow, period and orbit average
void flow(Verdict& v) {
  double period = 0.0, gap = 0.0, avg = 0.0, group = 0.0, refl = 0.0;
  for (int seed = 1; seed <= 20; ++seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0), w(0.0, 1.0);
    const double A = 0.5 + 3.0 * w(rng), B = 2.0 * u(rng);
    // keep U0 away from zero on the disc: omega outside [B/2, B/2 + A/4] by a margin
    const double omega = w(rng) < 0.5 ? B / 2 - 0.2 - w(rng) : B / 2 + A / 4 + 0.2 + w(rng);
    const AngularField f = radial_field({A, B}, omega);
    const cplx z = std::polar(seed % 4 == 0 ? 1.0 : std::sqrt(w(rng)), kPi * u(rng));
    const auto f0 = [A, B](cplx y) { return A * std::norm(y) + B; };
    const OrbitRecord o = integrate_orbit(f, z, kFlowTol, f0);
    period = std::max(period, std::fabs(o.period - 2 * kPi / std::fabs(radial_angular_velocity({A, B}, omega, std::abs(z)))));
    gap = std::max(gap, o.closure_gap);
    avg = std::max(avg, std::fabs(f0(z) - o.average));
    const double t1 = 2.0 * u(rng), t2 = 2.0 * u(rng);
    group = std::max(group, std::abs(flow_map(f, z, t1 + t2) - flow_map(f, flow_map(f, z, t1), t2)));
    refl = std::max(refl, std::abs(flow_map(f, std::conj(z), t1) - std::conj(flow_map(f, z, -t1))));
  }
  v.within(period, 1e-7, "integrated period - 2pi/|U0|");
  v.within(gap, 1e-8, "closure gap");
  v.within(avg, 1e-8, "S f0");
  v.within(group, 1e-7, "group property residual");
  v.within(refl, 1e-7, "reflection residual");
}

// 10. regime classification and map
void regime_map_check(Verdict& v) {
  struct Case {
    double B;
    RegimeLabel label;
  };
  for (const Case c : {Case{-2.0, RegimeLabel::R_infty}, Case{6.0, RegimeLabel::R_finite}, Case{0.2, RegimeLabel::R_0},
                       Case{0.5, RegimeLabel::one_fold_only}, Case{-0.8, RegimeLabel::transient_unknown}})
    v.require(classify({1.0, c.B}).label == c.label,
              std::string("B=") + std::to_string(c.B) + " not labelled " + to_string(c.label));
  const auto rows = regime_map(1.0, 1.1, 8.0, 12, 30);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    v.require(rows[i].predicted >= rows[i - 1].predicted, "predicted count decreases at B=" + std::to_string(rows[i].B));
    v.require(rows[i].found >= rows[i - 1].found, "found count decreases at B=" + std::to_string(rows[i].B));
  }
  std::ostringstream os;
  for (const auto& r : rows) os << r.predicted << "/" << r.found << " ";
  v.info.push_back("predicted/found over B in [1.1,8]: " + os.str());
}

struct Criterion {
  int id;
  const char* title;
  double limit_seconds;
  std::function<void(Verdict&)> body;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  int only = 0;
  bool verbose = false;
  app.add_option("--only", only, "run a single criterion")->check(CLI::Range(1, 10));
  app.add_flag("--verbose,-v", verbose, "print the measured values");
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> all{
      {1, "hypergeometric identities", 10, hypergeometric},
      {2, "dispersion formulations and anchors", 30, dispersion_forms},
      {3, "eigenvalue regimes", 120, eigenvalue_regimes},
      {4, "asymptotics and critical kappa", 60, asymptotics},
      {5, "one-fold threshold root", 1, one_fold_root},
      {6, "kernel invariants", 180, kernel_invariants},
      {7, "transversality", 120, transversality},
      {8, "disc potentials", 180, potentials},
      {9, "flow and periods", 60, flow},
      {10, "regime map", 120, regime_map_check},
  };
  bool ok = true;
  for (const Criterion& c : all) {
    if (only && c.id != only) continue;
    Verdict v;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.body(v);
    } catch (const std::exception& e) {
      v.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > c.limit_seconds) v.require(false, "runtime above " + std::to_string(c.limit_seconds) + " s");
    std::printf("criterion %d (%s): %s [%.2f s]\n", c.id, c.title, v.ok ? "PASS" : "FAIL", secs);
    for (const auto& n : v.notes) std::printf("    fail: %s\n", n.c_str());
    if (verbose || !v.ok)
      for (const auto& n : v.info) std::printf("    %s\n", n.c_str());
    ok = ok && v.ok;
  }
  return ok ? 0 : 1;
}

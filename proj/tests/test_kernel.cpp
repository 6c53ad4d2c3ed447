#include <doctest.h>

#include <cmath>

#include "vortex/dispersion.hpp"
#include "vortex/error.hpp"
#include "vortex/hypergeom.hpp"
#include "vortex/kernel.hpp"
#include "vortex/quadrature.hpp"

using namespace vortex;

namespace {

SpectralContext at_root(int n, QuadraticProfile p) {
  const auto rec = find_eigenvalue(n, p);
  REQUIRE(rec);
  return make_context(n, rec->x_n, p);
}

}  // namespace

TEST_SUITE("kernel") {
  TEST_CASE("context preconditions") {
    CHECK_THROWS_AS(make_context(3, 0.0, {1.0, -2.0}), Error);
    CHECK_THROWS_AS(make_context(3, 1.5, {1.0, -2.0}), Error);
    const SpectralContext c = make_context(3, 0.4, {1.0, -2.0});
    CHECK(c.G1() == doctest::Approx(c.G1_closed()).epsilon(1e-10));
  }

  TEST_CASE("phi_n derivative identity") {
    for (int n : {1, 4, 9})
      for (double x : {-2.0, 0.3, 0.8}) {
        const FamilyIndex idx{static_cast<double>(n)};
        const double F = hyp2f1(idx.a(), idx.b(), idx.c(), x);
        CHECK(std::fabs(phi_n_dx(n, x) + 2.0 * F / (1.0 - x)) <= 1e-8);
        const double h = 1e-5;
        CHECK(phi_n_dx(n, x) == doctest::Approx((phi_n(n, x + h) - phi_n(n, x - h)) / (2 * h)).epsilon(1e-6));
      }
  }

  TEST_CASE("psi matches zeta away from roots too") {
    for (double x : {-1.5, 0.2, 0.7}) {
      const SpectralContext c = make_context(5, x, {1.0, -2.0});
      CHECK(std::fabs(psi_n(c) - (5 + 1.0) / (4 * x) * zeta(5, x, c.profile)) <= 1e-7);
    }
  }

  TEST_CASE("ODE solution meets its boundary data and equation") {
    const int n = 3;
    const double x = 0.5;
    const HyperOdeSolution s(n, x, [](double r) { return r * r * r * r; }, 0.7);
    CHECK(std::fabs(s(0.0)) <= 1e-12);
    CHECK(s(1.0) == doctest::Approx(0.7).epsilon(1e-10));
    CHECK(s.max_residual({0.1, 0.3, 0.5, 0.7, 0.9}) <= 1e-7);
  }

  TEST_CASE("kernel invariants at eigenvalues") {
    struct Case {
      double B;
      int n;
    };
    for (const Case c : {Case{-2, 3}, Case{-2, 10}, Case{2, 2}, Case{6, 5}}) {
      CAPTURE(c.B);
      CAPTURE(c.n);
      const SpectralContext ctx = at_root(c.n, {1.0, c.B});
      const KernelProfile k = kernel_generator(ctx);
      CHECK(std::fabs(k.normalization - k.normalization_target) <= 1e-6 * std::max(1.0, std::fabs(k.normalization_target)));
      CHECK(k.normalization_target == doctest::Approx(c.n / (4.0 * ctx.x)));
      CHECK(std::fabs(k.H_at_zero) <= 1e-12);
      CHECK(std::fabs(k.H_prime_one_spectral) <= 1e-6);
      CHECK(std::fabs(k.H_prime_one_formula) <= 1e-6);
      CHECK_FALSE(k.gate_warning);
      double worst = 0.0, scale = 0.0;
      for (std::size_t i = 0; i < k.grid.size(); i += 16) {
        const double L = apply_L(c.n, [&](double r) { return k.functions->hstar(r); }, k.grid[i]);
        worst = std::max(worst, std::fabs(L - k.Hn[i]));
        scale = std::max(scale, std::fabs(k.Hn[i]));
      }
      CHECK(worst <= 1e-5 * std::max(1.0, scale));
    }
  }

  TEST_CASE("boundary derivative vanishes only at a root") {
    const SpectralContext ctx = make_context(4, 0.5, {1.0, -2.0});
    const KernelFunctions kf(ctx);
    CHECK(std::fabs(kf.H_prime_one(1.0)) > 1e-3);
  }

  TEST_CASE("radial kernel and range condition") {
    const double x0 = x0_root();
    CHECK(std::fabs(radial_kernel(x0, 1.0)) <= 1e-10);
    const auto H0 = [&](double s) { return hyp2f1(-std::sqrt(2.0), std::sqrt(2.0), 1.0, x0 * s * s); };
    CHECK(radial_range_condition(x0, [&](double s) { return H0(s) / (1.0 - x0 * s * s); }) > 0.0);
  }

  TEST_CASE("one-fold transversality closed form") {
    for (double B : {1.0, 2.0, -3.0}) {
      const double x = -1.0 / (2.0 * B);
      const TransversalityResult t = transversality_integral(make_context(1, x, {1.0, B}));
      CHECK(std::fabs(t.total - (x - 1.0) / (2.0 * x)) <= 1e-8);
      CHECK(t.nonzero);
      CHECK(t.total == doctest::Approx(t.part1 + t.part2 + t.part3).epsilon(1e-10));
    }
  }

  TEST_CASE("transversality tends to -n/2 for A+B<0") {
    const TransversalityResult t = transversality_integral(at_root(40, {1.0, -2.0}));
    CHECK(t.total / (-20.0) == doctest::Approx(1.0).epsilon(0.2));
  }

  TEST_CASE("second piece is non-negative for B>A") {
    const KernelFunctions kf(at_root(2, {1.0, 2.0}));
    for (int i = 0; i < 100; ++i) CHECK(transversality_pieces(kf, (i + 0.5) / 100.0).h2 >= 0.0);
  }
}

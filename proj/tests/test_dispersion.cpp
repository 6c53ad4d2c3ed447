#include <doctest.h>

#include <cmath>

#include "vortex/dispersion.hpp"
#include "vortex/error.hpp"
#include "vortex/hypergeom.hpp"
#include "vortex/quadrature.hpp"

using namespace vortex;

TEST_SUITE("dispersion") {
  TEST_CASE("omega and x are inverse maps") {
    const QuadraticProfile p{1.3, -0.7};
    for (double x : {-5.0, -0.2, 0.3, 0.97}) CHECK(x_from_omega(omega_from_x(x, p), p) == doctest::Approx(x).epsilon(1e-12));
    CHECK(omega_from_x(-0.5, {1.0, 1.0}) == doctest::Approx(0.0));
  }

  TEST_CASE("profile validation and mirroring") {
    CHECK_THROWS_AS(validate({0.0, 1.0}), Error);
    CHECK_THROWS_AS(validate({1.0, NAN}), Error);
    const QuadraticProfile p{2.0, -3.0};
    CHECK(p.kappa() == doctest::Approx(1.0));
    CHECK(p.mirrored().A == -2.0);
    CHECK(p.mirrored().kappa() == doctest::Approx(p.kappa()));
  }

  TEST_CASE("zeta anchors") {
    const QuadraticProfile p{1.0, -2.0};
    for (int n = 1; n <= 40; ++n) CHECK(std::fabs(zeta(n, 0.0, p) - n / (n + 1.0)) <= 1e-12);
    for (double B : {-2.0, 0.5, 3.0})
      for (double x : {-2.0, 0.0, 0.7}) CHECK(std::fabs(zeta(1, x, {1.0, B}) - (1 - x) * (B * x + 0.5)) <= 1e-10);
  }

  TEST_CASE("zeta forms against an independent quadrature") {
    // direct integral form with a tanh-sinh rule and no shared code path beyond 2F1
    const QuadraticProfile p{1.0, -2.0};
    const int n = 4;
    const double x = 0.5, k = p.shape() / (n + 1.0);
    const FamilyIndex idx{4.0};
    auto F = [&](double y) { return hyp2f1(idx.a(), idx.b(), idx.c(), y); };
    const double oracle = F(x) * (1 - x + k * x) +
                          quad::integrate_tanh_sinh([&](double t) { return F(t * x) * std::pow(t, n) * (2 * x * t - 1); },
                                                    0.0, 1.0, 1e-14);
    // 30-digit value of the same expression
    CHECK(std::fabs(oracle - 0.12525473514861253836) <= 1e-12);
    for (ZetaForm f : {ZetaForm::contiguous, ZetaForm::alt, ZetaForm::integral})
      CHECK(std::fabs(zeta(n, x, p, f) - oracle) <= 1e-9);
  }

  TEST_CASE("x = 1 is flagged as extrapolated") {
    const ZetaEval e = zeta_eval(5, 1.0, {1.0, -2.0});
    CHECK(e.extrapolated);
    CHECK(std::fabs(e.value - zeta(5, 1.0 - 1e-9, {1.0, -2.0})) <= 1e-6);
    CHECK_THROWS_AS(zeta(1, 1.0, {1.0, -2.0}), Error);
    CHECK_THROWS_AS(zeta(2, 1.2, {1.0, -2.0}), Error);
  }

  TEST_CASE("eigenvalues against high-precision roots") {
    struct Ref {
      double B;
      int n;
      double x;
    };
    for (const Ref r : {Ref{-2, 2, 0.43214083224370236569}, Ref{-2, 10, 0.82349017212001364017},
                        Ref{-2, 100, 0.98025327326176009067}, Ref{2, 2, -0.60399794843956193807},
                        Ref{2, 3, -1.2147429455421805031}, Ref{2, 4, -2.5528284372860981923}}) {
      CAPTURE(r.B);
      CAPTURE(r.n);
      const auto rec = find_eigenvalue(r.n, {1.0, r.B});
      REQUIRE(rec);
      CHECK(std::fabs(rec->x_n - r.x) <= 1e-9 * std::max(1.0, std::fabs(r.x)));
      CHECK(rec->residual <= 1e-10);
      CHECK_FALSE(rec->multiple_roots);
    }
  }

  TEST_CASE("one-fold root") {
    const auto rec = find_eigenvalue(1, {1.0, 1.0});
    REQUIRE(rec);
    CHECK(rec->x_n == doctest::Approx(-0.5));
    CHECK(std::fabs(rec->omega_n) <= 1e-12);
    CHECK(rec->regime == RootRegime::one_fold);
  }

  TEST_CASE("localization brackets") {
    const QuadraticProfile p{1.0, -2.0};
    const auto r100 = find_eigenvalue(100, p);
    REQUIRE(r100);
    CHECK(r100->x_n > 0.0);
    CHECK(r100->x_n < 1.0 - 1.0 / 100);
    CHECK(std::fabs(r100->x_n - asymptotic_eigenvalue(100, p)) <= 5e-4);
    const auto r2 = find_eigenvalue(2, {1.0, 2.0});
    REQUIRE(r2);
    CHECK(r2->x_n > -1.5);
    CHECK(r2->x_n < -0.25);
  }

  TEST_CASE("no roots where none are predicted") {
    for (int n = 2; n <= 12; ++n) CHECK_FALSE(find_eigenvalue(n, {1.0, 0.2}));
    for (int n = 6; n <= 12; ++n) CHECK_FALSE(find_eigenvalue(n, {1.0, 2.0}));
    CHECK_THROWS_AS(find_eigenvalue(3, {1.0, -0.8}), Error);
  }

  TEST_CASE("mirrored profile gives the same x") {
    const auto a = find_eigenvalue(7, {1.0, -2.0});
    const auto b = find_eigenvalue(7, {-1.0, 2.0});
    REQUIRE(a);
    REQUIRE(b);
    CHECK(a->x_n == doctest::Approx(b->x_n).epsilon(1e-12));
    CHECK(a->omega_n == doctest::Approx(-b->omega_n).epsilon(1e-12));
  }

  TEST_CASE("monotone in x on the negative half-line for n <= 2B/A") {
    const QuadraticProfile p{1.0, 2.0};
    for (int n : {2, 3, 4}) {
      double prev = -INFINITY;
      for (double x = -30.0; x <= 0.0; x += 0.5) {
        const double v = zeta(n, x, p);
        CHECK(v > prev);
        prev = v;
      }
    }
  }

  TEST_CASE("monotone in n on (-1,0) for n <= 2B/A") {
    const QuadraticProfile p{1.0, 3.0};
    for (double x : {-0.9, -0.5, -0.1}) {
      double prev = zeta(1, x, p);
      for (int n = 2; n <= 6; ++n) {
        const double v = zeta(n, x, p);
        CHECK(v > prev);
        prev = v;
      }
    }
  }

  TEST_CASE("roots move monotonically with n") {
    double prev = 0.0;
    for (int n = 20; n <= 60; n += 5) {
      const auto r = find_eigenvalue(n, {1.0, -2.0});
      REQUIRE(r);
      CHECK(r->x_n > prev);
      prev = r->x_n;
    }
    prev = 0.0;
    for (int m = 1; m <= 13; ++m) {
      const auto r = find_eigenvalue(m, {1.0, 6.0});
      REQUIRE(r);
      CHECK(r->x_n < prev);
      prev = r->x_n;
    }
  }

  TEST_CASE("one-fold root is not shared by higher modes") {
    for (double B : {-1.0 / 1.0581, -1.0, -1.5, -3.0}) {
      const double x = -1.0 / (2.0 * B);
      for (int n = 2; n <= 60; ++n) CHECK(zeta(n, x, {1.0, B}) > 0.0);
    }
  }

  TEST_CASE("x0 and the critical kappa") {
    // 60-digit root of F(1-sqrt2, 1+sqrt2; 1; x)
    CHECK(std::fabs(x0_root() - 0.61160658938231070201) <= 1e-12);
    CHECK(std::fabs(hyp2f1(-std::sqrt(2.0), std::sqrt(2.0), 1.0, x0_root())) <= 1e-8);
    CHECK(g_kappa(0.0) == doctest::Approx(-2.0).epsilon(1e-12));
    const double kc = kappa_critical();
    CHECK(kc > 0.0);
    CHECK(kc < 2.0);
    CHECK(std::fabs(g_kappa(kc)) <= 1e-10);
    CHECK(std::fabs(eta_integral(2.0) - eta_integral_exp_sinh(2.0)) <= 1e-10);
    CHECK(c_kappa(40.0) == doctest::Approx(40.0 * 40.0 - 2.0).epsilon(1e-4));
  }

  TEST_CASE("separation and singular points") {
    const auto r = find_eigenvalue(1, {1.0, 1.0});
    REQUIRE(r);
    CHECK(separation_check(*r, {1.0, 1.0}, 5));
    CHECK(separation_check(*r, {1.0, 1.0}, 0));
    CHECK(singular_case_obstruction(2, 2.0, {1.0, 0.0}) == doctest::Approx(-0.75));
  }

  TEST_CASE("one-fold polynomial root") {
    CHECK(std::fabs(one_fold_polynomial_root() - 0.52907) <= 1e-4);
    CHECK(std::fabs(one_fold_polynomial(one_fold_polynomial_root())) <= 1e-12);
  }
}

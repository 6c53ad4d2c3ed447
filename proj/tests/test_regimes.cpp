#include <doctest.h>

#include <cmath>

#include "vortex/error.hpp"
#include "vortex/regimes.hpp"

using namespace vortex;

TEST_SUITE("regimes") {
  TEST_CASE("labels on a panel") {
    CHECK(classify({1.0, -2.0}).label == RegimeLabel::R_infty);
    CHECK(classify({1.0, 6.0}).label == RegimeLabel::R_finite);
    CHECK(classify({1.0, 0.2}).label == RegimeLabel::R_0);
    CHECK(classify({1.0, 0.5}).label == RegimeLabel::one_fold_only);
    CHECK(classify({1.0, -0.8}).label == RegimeLabel::transient_unknown);
  }

  TEST_CASE("region boundaries") {
    CHECK(classify({1.0, -0.5}).label == RegimeLabel::R_0);
    CHECK(classify({1.0, 0.25}).label == RegimeLabel::R_0);
    CHECK(classify({1.0, 1.0}).label == RegimeLabel::one_fold_only);
    CHECK(classify({1.0, -1.0}).label == RegimeLabel::transient_unknown);
    CHECK(classify({1.0, std::nextafter(1.0, 2.0)}).label == RegimeLabel::R_finite);
  }

  TEST_CASE("finite regime bounds are integerized") {
    // B/A = 6: max(6 + 1/8, 12 - 9/2) = 7.5 -> 7; 2B/A + 2 = 14
    const RegimeReport r = classify({1.0, 6.0});
    CHECK(r.allowed_lo == 1);
    CHECK(r.allowed_hi == 7);
    REQUIRE(r.excluded_from);
    CHECK(*r.excluded_from == 14);
    // B/A = 2.25: 2B/A + 2 = 6.5 -> 7; max(2.375, 0) -> 2
    const RegimeReport q = classify({1.0, 2.25});
    CHECK(q.allowed_hi == 2);
    CHECK(*q.excluded_from == 7);
  }

  TEST_CASE("exclusions hold numerically") {
    for (int m = 14; m <= 20; ++m) CHECK(exclusion_sign_changes({1.0, 6.0}, m) == 0);
    for (int m = 2; m <= 10; ++m) CHECK(exclusion_sign_changes({1.0, 0.2}, m) == 0);
    for (int m = 1; m <= 6; ++m) CHECK(exclusion_sign_changes({1.0, -0.3}, m) == 0);
  }

  TEST_CASE("predicted symmetries are found") {
    const RegimeReport r = classify({1.0, 6.0});
    const auto table = eigenvalue_table({1.0, 6.0}, 14);
    for (int m = 1; m <= r.allowed_hi; ++m) {
      bool present = false;
      for (const auto& e : table) present = present || e.record.n == m;
      CHECK(present);
    }
    for (const auto& e : table) {
      CHECK(e.record.residual <= 1e-8);
      CHECK(e.record.separation_ok);
      CHECK(e.transversal);
    }
  }

  TEST_CASE("one-fold branch at zero angular velocity") {
    const auto table = eigenvalue_table({1.0, 1.0}, 1);
    REQUIRE(table.size() == 1);
    CHECK(std::fabs(table[0].record.omega_n) <= 1e-12);
    CHECK(classify({1.0, 1.0}).one_fold);
    CHECK_FALSE(classify({1.0, -0.5}).one_fold);
    CHECK(classify({1.0, -1.0 / 1.0581}).one_fold);
  }

  TEST_CASE("empirical threshold and asymptotic expansion") {
    const RegimeReport r = classify({1.0, -2.0});
    REQUIRE(r.empirical_m0);
    CHECK(*r.empirical_m0 == 2);
    CHECK(r.allowed_hi < 0);
    const auto rec = find_eigenvalue(120, {1.0, -2.0});
    REQUIRE(rec);
    const double A = 1.0, B = -2.0, kappa = 2.0, m = 120.0;
    const double leading = (A + 2 * B) / 4 + A * kappa / (4 * m);
    const double second = A / 4 * std::fabs(kappa * kappa - c_kappa(kappa)) / (m * m);
    CHECK(std::fabs(rec->omega_n - leading) <= 2.0 * second);
  }

  TEST_CASE("mirrored profiles") {
    const RegimeReport a = classify({1.0, -2.0});
    const RegimeReport b = classify({-1.0, 2.0});
    CHECK(b.mirrored);
    CHECK(a.label == b.label);
    CHECK(a.singular_lo == doctest::Approx(-b.singular_hi));
    CHECK(a.singular_hi == doctest::Approx(-b.singular_lo));
  }

  TEST_CASE("absent symmetry in R_0") {
    const auto table = eigenvalue_table({1.0, 0.2}, 6);
    for (const auto& e : table) CHECK(e.record.n == 1);
  }

  TEST_CASE("map rows") {
    const auto rows = regime_map(1.0, 1.5, 6.0, 4, 25);
    REQUIRE(rows.size() == 4);
    for (std::size_t i = 1; i < rows.size(); ++i) {
      CHECK(rows[i].predicted >= rows[i - 1].predicted);
      CHECK(rows[i].found >= rows[i - 1].found);
    }
    for (const auto& r : rows) CHECK(r.found >= r.predicted);
    CHECK_THROWS_AS(regime_map(1.0, 2.0, 1.0, 3, 5), Error);
  }
}

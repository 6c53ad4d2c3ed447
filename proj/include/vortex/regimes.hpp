#pragma once

#include <optional>
#include <vector>

#include "vortex/dispersion.hpp"

namespace vortex {

enum class RegimeLabel {
  R_infty,            // A+B<0: infinitely many symmetries from some m0 on
  R_finite,           // B>A>0: finitely many symmetries
  R_0,                // -A/2 <= B <= A/4: no m>=2 bifurcation
  one_fold_only,      // A/4 < B <= A: only the one-fold branch is guaranteed
  transient_unknown,  // -A <= B < -A/2
};
const char* to_string(RegimeLabel l);

struct TableEntry {
  EigenvalueRecord record;
  double transversality = 0.0;
  bool transversal = false;
};

struct RegimeReport {
  QuadraticProfile profile;  // as supplied
  bool mirrored = false;     // A<0 was reduced through (A,B,Omega) -> (-A,-B,-Omega)
  RegimeLabel label = RegimeLabel::R_0;
  double kappa = 0.0;
  bool one_fold = false;  // a one-fold branch is predicted at Omega = 0
  // Predicted m>=2 symmetries: allowed_lo..allowed_hi (allowed_hi < 0 means unbounded), empty when allowed_lo == 0.
  int allowed_lo = 0;
  int allowed_hi = 0;
  std::optional<int> excluded_from;  // every m >= this is excluded
  double singular_lo = 0.0;          // the singular Omega interval
  double singular_hi = 0.0;
  std::optional<int> empirical_m0;  // R_infty only
  std::vector<TableEntry> table;

  // Number of predicted symmetries in 1..m_max, the one-fold included.
  int allowed_count(int m_max) const;
};

inline constexpr int kM0Search = 200;

RegimeReport classify(const QuadraticProfile& p);

// One entry per m in 1..m_max with a root; each carries its transversality value.
std::vector<TableEntry> eigenvalue_table(const QuadraticProfile& p, int m_max);

// Smallest m >= 2 whose root exists, is separated from the singular set and increases over m+1..m+5.
std::optional<int> empirical_m0(const QuadraticProfile& p, int m_limit = kM0Search);

// Sign changes of zeta_m on (-inf,0) and (0,1) with `points` samples on each.
int exclusion_sign_changes(const QuadraticProfile& p, int m, int points = 512);

struct MapRow {
  double B = 0.0;
  RegimeLabel label = RegimeLabel::R_0;
  int predicted = 0;  // allowed_count(m_max)
  int found = 0;      // m in 1..m_max with a root
  std::optional<int> excluded_from;
};

// Plot-ready rows for B on an evenly spaced grid at fixed A.
std::vector<MapRow> regime_map(double A, double B_lo, double B_hi, int steps, int m_max);

}  // namespace vortex

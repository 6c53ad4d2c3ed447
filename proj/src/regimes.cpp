#include "vortex/regimes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "vortex/error.hpp"
#include "vortex/kernel.hpp"

namespace vortex {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

QuadraticProfile positive(const QuadraticProfile& p) { return p.A < 0 ? p.mirrored() : p; }

std::optional<EigenvalueRecord> try_eigenvalue(int m, const QuadraticProfile& p) {
  try {
    return find_eigenvalue(m, p);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::regime) return std::nullopt;
    throw;
  }
}

}  // namespace

const char* to_string(RegimeLabel l) {
  switch (l) {
    case RegimeLabel::R_infty: return "R_infty";
    case RegimeLabel::R_finite: return "R_finite";
    case RegimeLabel::R_0: return "R_0";
    case RegimeLabel::one_fold_only: return "one_fold_only";
    case RegimeLabel::transient_unknown: return "transient_unknown";
  }
  return "?";
}

int RegimeReport::allowed_count(int m_max) const {
  int c = one_fold && m_max >= 1 ? 1 : 0;
  if (allowed_lo > 0) {
    const int lo = std::max(2, allowed_lo);
    const int hi = allowed_hi < 0 ? m_max : std::min(allowed_hi, m_max);
    if (hi >= lo) c += hi - lo + 1;
  }
  return c;
}

std::optional<int> empirical_m0(const QuadraticProfile& prof, int m_limit) {
  const QuadraticProfile p = positive(prof);
  if (!(p.A + p.B < 0)) throw Error(ErrorKind::regime, "empirical_m0: defined only for A+B<0");
  std::vector<std::optional<std::optional<EigenvalueRecord>>> cache(static_cast<std::size_t>(m_limit + 7));
  auto rec = [&](int m) -> const std::optional<EigenvalueRecord>& {
    auto& slot = cache[static_cast<std::size_t>(m)];
    if (!slot) slot = find_eigenvalue(m, p);
    return *slot;
  };
  auto ok = [&](int m) { return rec(m) && rec(m)->separation_ok; };
  for (int m = 2; m <= m_limit; ++m) {
    if (!ok(m)) continue;
    bool monotone = true;
    for (int k = m + 1; k <= m + 5 && monotone; ++k) monotone = ok(k) && rec(k)->x_n > rec(k - 1)->x_n;
    if (monotone) return m;
  }
  return std::nullopt;
}

RegimeReport classify(const QuadraticProfile& prof) {
  validate(prof);
  const QuadraticProfile p = positive(prof);
  const double A = p.A, B = p.B;
  RegimeReport r;
  r.profile = prof;
  r.mirrored = prof.A < 0;
  r.kappa = p.kappa();
  const double s0 = prof.B / 2.0, s1 = prof.B / 2.0 + prof.A / 4.0;
  r.singular_lo = std::min(s0, s1);
  r.singular_hi = std::max(s0, s1);
  r.one_fold = B > 0.0 || B <= -A / (1.0 + kOneFoldEps);
  if (A + B < 0.0) {
    r.label = RegimeLabel::R_infty;
    r.empirical_m0 = empirical_m0(p);
    if (r.empirical_m0) {
      r.allowed_lo = *r.empirical_m0;
      r.allowed_hi = -1;
    }
  } else if (B > A) {
    r.label = RegimeLabel::R_finite;
    r.allowed_lo = 1;
    r.allowed_hi = static_cast<int>(std::floor(std::max(B / A + 0.125, 2.0 * B / A - 4.5)));
    r.excluded_from = static_cast<int>(std::ceil(2.0 * B / A + 2.0));
  } else if (B >= -A / 2.0 && B <= A / 4.0) {
    r.label = RegimeLabel::R_0;
    r.excluded_from = B > 0.0 ? 2 : 1;
  } else if (B > A / 4.0) {
    r.label = RegimeLabel::one_fold_only;
  } else {
    r.label = RegimeLabel::transient_unknown;
  }
  return r;
}

std::vector<TableEntry> eigenvalue_table(const QuadraticProfile& prof, int m_max) {
  validate(prof);
  if (m_max < 1) throw Error(ErrorKind::parameter, "eigenvalue_table: m_max must be >= 1");
  const QuadraticProfile p = positive(prof);
  std::vector<TableEntry> out;
  for (int m = 1; m <= m_max; ++m) {
    auto rec = try_eigenvalue(m, prof);
    if (!rec) continue;
    TableEntry e;
    e.record = *rec;
    const TransversalityResult t = transversality_integral(make_context(m, rec->x_n, p));
    e.transversality = t.total;
    e.transversal = t.nonzero;
    out.push_back(std::move(e));
  }
  return out;
}

int exclusion_sign_changes(const QuadraticProfile& prof, int m, int points) {
  const QuadraticProfile p = positive(prof);
  // zeta_1 vanishes trivially at x = 1, which is not an admissible eigenvalue
  const double hi = m == 1 ? std::nextafter(1.0, 0.0) : 1.0;
  return zeta_sign_changes(m, p, -kInf, 0.0, points) + zeta_sign_changes(m, p, 0.0, hi, points);
}

std::vector<MapRow> regime_map(double A, double B_lo, double B_hi, int steps, int m_max) {
  if (steps < 1) throw Error(ErrorKind::parameter, "regime_map: steps must be >= 1");
  if (!(B_hi >= B_lo)) throw Error(ErrorKind::parameter, "regime_map: need B_lo <= B_hi");
  if (m_max < 1) throw Error(ErrorKind::parameter, "regime_map: m_max must be >= 1");
  std::vector<MapRow> rows;
  for (int i = 0; i < steps; ++i) {
    const double B = steps == 1 ? B_lo : B_lo + (B_hi - B_lo) * i / (steps - 1);
    const QuadraticProfile p{A, B};
    const RegimeReport rep = classify(p);
    MapRow row;
    row.B = B;
    row.label = rep.label;
    row.predicted = rep.allowed_count(m_max);
    row.excluded_from = rep.excluded_from;
    for (int m = 1; m <= m_max; ++m)
      if (try_eigenvalue(m, p)) ++row.found;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace vortex

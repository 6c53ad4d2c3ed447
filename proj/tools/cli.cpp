#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <json.hpp>
#include <limits>
#include <sstream>
#include <thread>
#include <vector>

#include "vortex/dispersion.hpp"
#include "vortex/error.hpp"
#include "vortex/flow.hpp"
#include "vortex/kernel.hpp"
#include "vortex/potentials.hpp"
#include "vortex/regimes.hpp"
#include "vortex/selftest.hpp"

namespace vortex::cli {

namespace {

using json = nlohmann::ordered_json;

constexpr int kSchemaVersion = 1;

// Input problems detected by the CLI itself; exit status 2.
struct Usage : std::runtime_error {
  using std::runtime_error::runtime_error;
};
// Recomputed values disagree with a checked file; exit status 3.
struct Mismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// formatting and parsing

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) v = 0.0;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json jnum(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

double to_double(const std::string& s) {
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw Usage("not a number: '" + s + "'");
    return v;
  } catch (const std::logic_error&) {
    throw Usage("not a number: '" + s + "'");
  }
}

int to_int(const std::string& s) {
  const double v = to_double(s);
  if (v != std::floor(v) || std::fabs(v) > 1e9) throw Usage("not an integer: '" + s + "'");
  return static_cast<int>(v);
}

// "5", "1,2,7" or "lo:hi:step"
std::vector<int> int_list(const std::string& s) {
  std::vector<int> out;
  if (s.find(':') != std::string::npos) {
    const auto p = split(s, ':');
    if (p.size() != 3) throw Usage("range must be lo:hi:step, got '" + s + "'");
    const int lo = to_int(p[0]), hi = to_int(p[1]), step = to_int(p[2]);
    if (step <= 0 || hi < lo) throw Usage("range needs lo <= hi and step > 0: '" + s + "'");
    for (int v = lo; v <= hi; v += step) out.push_back(v);
  } else {
    for (const auto& t : split(s, ',')) out.push_back(to_int(t));
  }
  if (out.empty()) throw Usage("empty selection '" + s + "'");
  return out;
}

// "v" or "lo:hi:count" (evenly spaced, endpoints included)
std::vector<double> grid(const std::string& s) {
  if (s.find(':') == std::string::npos) return {to_double(s)};
  const auto p = split(s, ':');
  if (p.size() != 3) throw Usage("grid must be lo:hi:count, got '" + s + "'");
  const double lo = to_double(p[0]), hi = to_double(p[1]);
  const int count = to_int(p[2]);
  if (count < 1 || !(hi >= lo)) throw Usage("grid needs lo <= hi and count >= 1: '" + s + "'");
  std::vector<double> out;
  for (int i = 0; i < count; ++i) out.push_back(count == 1 ? lo : lo + (hi - lo) * i / (count - 1));
  return out;
}

std::vector<double> doubles(const std::string& s) {
  std::vector<double> out;
  for (const auto& t : split(s, ',')) out.push_back(to_double(t));
  if (out.empty()) throw Usage("empty list '" + s + "'");
  return out;
}

cplx point(const std::string& s) {
  const auto v = doubles(s);
  if (v.size() != 2) throw Usage("point must be x,y, got '" + s + "'");
  return {v[0], v[1]};
}

// h(r) = sum_j c_j r^j
std::function<double(double)> polynomial(std::vector<double> c) {
  return [c = std::move(c)](double r) {
    double s = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) s = s * r + *it;
    return s;
  };
}

// Reads a file written by this tool: optional '#'-prefixed JSON header, CSV header, rows.
struct Table {
  json header;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::vector<std::vector<std::string>> text;

  std::size_t col(const std::string& name) const {
    const auto it = std::find(columns.begin(), columns.end(), name);
    if (it == columns.end()) throw Usage("checked file has no column '" + name + "'");
    return static_cast<std::size_t>(it - columns.begin());
  }
};

Table read_table(const std::string& path, bool numeric = true) {
  std::ifstream in(path);
  if (!in) throw Usage("cannot read '" + path + "'");
  Table t;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      try {
        t.header = json::parse(line.substr(1));
      } catch (const json::exception& e) {
        throw Usage("malformed header in '" + path + "': " + e.what());
      }
      continue;
    }
    if (t.columns.empty()) {
      t.columns = split(line, ',');
      continue;
    }
    auto cells = split(line, ',');
    if (cells.size() != t.columns.size()) throw Usage("row with wrong field count in '" + path + "'");
    if (numeric) {
      std::vector<double> row;
      for (const auto& c : cells) row.push_back(to_double(c));
      t.rows.push_back(std::move(row));
    }
    t.text.push_back(std::move(cells));
  }
  if (t.columns.empty()) throw Usage("'" + path + "' holds no table");
  return t;
}

void expect_close(double got, double want, double tol, const std::string& what) {
  const bool both_nan = std::isnan(got) && std::isnan(want);
  const bool same_inf = std::isinf(got) && got == want;
  if (both_nan || same_inf) return;
  if (!(std::fabs(got - want) <= tol * std::max(1.0, std::fabs(want)))) {
    std::ostringstream os;
    os << what << ": file has " << num(got) << ", recomputed " << num(want);
    throw Mismatch(os.str());
  }
}

// ---------------------------------------------------------------------------
// ordered parallel map over work items

template <class R, class F>
std::vector<R> parallel_map(std::size_t count, int threads, F&& fn) {
  std::vector<R> out(count);
  std::vector<std::exception_ptr> errors(count);
  const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(threads, count));
  auto work = [&](std::size_t w) {
    for (std::size_t i = w; i < count; i += workers) {
      try {
        out[i] = fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

// ---------------------------------------------------------------------------

json config_json(const RunConfig& c) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["subcommand"] = c.subcommand;
  j["A"] = c.A;
  j["B"] = c.B;
  j["n"] = c.n;
  j["m_max"] = c.m_max;
  j["x_grid"] = c.x_grid;
  j["b_grid"] = c.b_grid;
  j["map"] = c.map;
  j["form"] = c.form;
  j["grid"] = c.grid;
  j["tol"] = c.tol;
  j["format"] = c.format;
  j["output"] = c.output;
  j["out_dir"] = c.out_dir;
  j["seed"] = c.seed;
  j["identity"] = c.identity;
  j["mode"] = c.mode;
  j["at"] = c.at;
  j["h_coeffs"] = c.h_coeffs;
  j["k_coeffs"] = c.k_coeffs;
  j["radial_nodes"] = c.radial_nodes;
  j["angular_nodes"] = c.angular_nodes;
  j["omega"] = c.omega;
  j["z"] = c.z;
  j["amp"] = c.amp;
  j["x"] = c.has_x ? json(c.x) : json(nullptr);
  j["suite"] = c.suite;
  j["check"] = c.check;
  j["threads"] = c.threads;
  return j;
}

json profile_json(const RunConfig& c) { return {{"A", c.A}, {"B", c.B}}; }

QuadraticProfile profile(const RunConfig& c) {
  const QuadraticProfile p{c.A, c.B};
  validate(p);
  return p;
}

QuadraticProfile positive(const QuadraticProfile& p) { return p.A < 0 ? p.mirrored() : p; }

bool csv(const RunConfig& c) { return c.format == "csv"; }

// ---------------------------------------------------------------------------
// dispersion

std::vector<ZetaForm> forms(const std::string& f) {
  if (f == "all") return {ZetaForm::contiguous, ZetaForm::alt, ZetaForm::integral};
  for (ZetaForm z : {ZetaForm::contiguous, ZetaForm::alt, ZetaForm::integral})
    if (f == to_string(z)) return {z};
  throw Usage("unknown zeta form '" + f + "'");
}

void cmd_dispersion(const RunConfig& c, std::ostream& out) {
  const QuadraticProfile p = profile(c);
  const auto ns = int_list(c.n);
  const auto xs = grid(c.x_grid);
  const auto fs = forms(c.form);
  struct Row {
    int n;
    double x;
    std::vector<double> z;
  };
  std::vector<std::pair<int, double>> items;
  for (int n : ns)
    for (double x : xs) items.emplace_back(n, x);
  auto eval = [&](int n, double x) {
    std::vector<double> z;
    for (ZetaForm f : fs) z.push_back(zeta(n, x, p, f));
    return z;
  };
  if (!c.check.empty()) {
    const Table t = read_table(c.check);
    const std::size_t cn = t.col("n"), cx = t.col("x");
    for (const auto& r : t.rows) {
      const auto z = eval(static_cast<int>(r[cn]), r[cx]);
      for (std::size_t k = 0; k < fs.size(); ++k) {
        const std::string name = std::string("zeta_") + to_string(fs[k]);
        expect_close(r[t.col(name)], z[k], 1e-12, name + " at n=" + num(r[cn]) + ", x=" + num(r[cx]));
      }
    }
    out << "check ok: " << t.rows.size() << " rows\n";
    return;
  }
  const auto rows = parallel_map<Row>(items.size(), c.threads, [&](std::size_t i) {
    return Row{items[i].first, items[i].second, eval(items[i].first, items[i].second)};
  });
  if (csv(c)) {
    out << "n,x";
    for (ZetaForm f : fs) out << ",zeta_" << to_string(f);
    out << "\n";
    for (const auto& r : rows) {
      out << r.n << "," << num(r.x);
      for (double v : r.z) out << "," << num(v);
      out << "\n";
    }
    return;
  }
  json j{{"schema_version", kSchemaVersion}, {"command", "dispersion"}, {"profile", profile_json(c)}};
  j["rows"] = json::array();
  for (const auto& r : rows) {
    json row{{"n", r.n}, {"x", r.x}};
    for (std::size_t k = 0; k < fs.size(); ++k) row[std::string("zeta_") + to_string(fs[k])] = jnum(r.z[k]);
    j["rows"].push_back(row);
  }
  out << j.dump(2) << "\n";
}

// ---------------------------------------------------------------------------
// eigenvalues

const char* kEigenHeader = "n,x_n,omega_n,residual,bracket_lo,bracket_hi,separation_ok";

void eigen_csv(std::ostream& out, const std::vector<EigenvalueRecord>& recs) {
  out << kEigenHeader << "\n";
  for (const auto& r : recs)
    out << r.n << "," << num(r.x_n) << "," << num(r.omega_n) << "," << num(r.residual) << "," << num(r.bracket_lo)
        << "," << num(r.bracket_hi) << "," << (r.separation_ok ? 1 : 0) << "\n";
}

json eigen_json(const EigenvalueRecord& r) {
  return {{"n", r.n},
          {"x_n", r.x_n},
          {"omega_n", r.omega_n},
          {"residual", r.residual},
          {"bracket_lo", jnum(r.bracket_lo)},
          {"bracket_hi", jnum(r.bracket_hi)},
          {"separation_ok", r.separation_ok},
          {"regime", to_string(r.regime)},
          {"multiple_roots", r.multiple_roots},
          {"bracket_extended", r.bracket_extended}};
}

void check_eigen_file(const RunConfig& c, std::ostream& out) {
  const QuadraticProfile p = profile(c);
  const Table t = read_table(c.check);
  const std::size_t cn = t.col("n"), cx = t.col("x_n"), co = t.col("omega_n"), cr = t.col("residual");
  for (const auto& r : t.rows) {
    const int n = static_cast<int>(r[cn]);
    const double res = std::fabs(zeta(n, r[cx], positive(p)));
    const std::string at = " at n=" + std::to_string(n);
    expect_close(r[cr], res, 1e-12, "residual" + at);
    expect_close(r[co], omega_from_x(r[cx], p), 1e-12, "omega_n" + at);
    if (!(res <= 1e-8)) throw Mismatch("x_n is not a root" + at + " (|zeta| = " + num(res) + ")");
  }
  out << "check ok: " << t.rows.size() << " rows\n";
}

void cmd_eigenvalues(const RunConfig& c, std::ostream& out, std::ostream& err) {
  if (!c.check.empty()) return check_eigen_file(c, out);
  const QuadraticProfile p = profile(c);
  const auto ns = int_list(c.n);
  const double tol = c.tol > 0 ? c.tol : 1e-10;
  const auto found = parallel_map<std::optional<EigenvalueRecord>>(
      ns.size(), c.threads, [&](std::size_t i) { return find_eigenvalue(ns[i], p, tol); });
  std::vector<EigenvalueRecord> recs;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    if (found[i]) {
      if (found[i]->multiple_roots) err << "warning: n=" << ns[i] << " has " << found[i]->all_roots.size() << " roots\n";
      recs.push_back(*found[i]);
    } else {
      err << "n=" << ns[i] << ": no root\n";
    }
  }
  if (csv(c)) return eigen_csv(out, recs);
  json j{{"schema_version", kSchemaVersion}, {"command", "eigenvalues"}, {"profile", profile_json(c)}};
  j["eigenvalues"] = json::array();
  for (const auto& r : recs) j["eigenvalues"].push_back(eigen_json(r));
  out << j.dump(2) << "\n";
}

// ---------------------------------------------------------------------------
// kernel and transversality

double eigenvalue_x(const QuadraticProfile& p, int n) {
  const auto rec = find_eigenvalue(n, p);
  if (!rec) throw Error(ErrorKind::precondition, "no eigenvalue for n = " + std::to_string(n) + " in this profile");
  return rec->x_n;
}

int single_n(const RunConfig& c) {
  const auto ns = int_list(c.n);
  if (ns.size() != 1) throw Usage("this command takes a single --n");
  return ns.front();
}

void cmd_kernel(const RunConfig& c, std::ostream& out) {
  if (!c.check.empty()) {
    const Table t = read_table(c.check);
    const json& h = t.header;
    if (h.is_null()) throw Usage("checked kernel file has no header");
    const QuadraticProfile p{h.at("A").get<double>(), h.at("B").get<double>()};
    const SpectralContext ctx = make_context(h.at("n").get<int>(), h.at("x_n").get<double>(), positive(p));
    const KernelFunctions kf(ctx);
    const double H1 = h.at("H1").get<double>();
    double scale = 0.0;
    for (const auto& r : t.rows) scale = std::max(scale, std::fabs(r[t.col("hstar")]));
    for (const auto& r : t.rows) {
      const double rr = r[t.col("r")];
      expect_close(r[t.col("hstar")] / std::max(1.0, scale), kf.hstar(rr) / std::max(1.0, scale), 1e-9,
                   "hstar at r=" + num(rr));
      expect_close(r[t.col("Hn")] / std::max(1.0, scale), kf.H(rr, H1) / std::max(1.0, scale), 1e-9,
                   "Hn at r=" + num(rr));
    }
    out << "check ok: " << t.rows.size() << " rows\n";
    return;
  }
  const QuadraticProfile p = profile(c);
  const int n = single_n(c);
  const double x = eigenvalue_x(p, n);
  const KernelProfile k = kernel_generator(make_context(n, x, positive(p)), static_cast<std::size_t>(c.grid));
  json h{{"schema_version", kSchemaVersion},
         {"command", "kernel"},
         {"A", c.A},
         {"B", c.B},
         {"n", n},
         {"x_n", x},
         {"omega_n", omega_from_x(x, p)},
         {"A_n", k.An},
         {"H1", k.H1},
         {"zeta_residual", k.zeta_residual},
         {"gate_warning", k.gate_warning},
         {"normalization", k.normalization},
         {"normalization_target", k.normalization_target},
         {"H_at_zero", k.H_at_zero},
         {"H_prime_one_formula", k.H_prime_one_formula},
         {"H_prime_one_spectral", k.H_prime_one_spectral}};
  if (csv(c)) {
    out << "#" << h.dump() << "\n";
    out << "r,hstar,Hn\n";
    for (std::size_t i = 0; i < k.grid.size(); ++i)
      out << num(k.grid[i]) << "," << num(k.hstar[i]) << "," << num(k.Hn[i]) << "\n";
    return;
  }
  h["r"] = k.grid;
  h["hstar"] = k.hstar;
  h["Hn"] = k.Hn;
  out << h.dump(2) << "\n";
}

TransversalityResult transversality_for(const RunConfig& c, int n, double x) {
  return transversality_integral(make_context(n, x, positive(profile(c))));
}

void cmd_transversality(const RunConfig& c, std::ostream& out) {
  if (!c.check.empty()) {
    const Table t = read_table(c.check);
    for (const auto& r : t.rows) {
      const int n = static_cast<int>(r[t.col("n")]);
      const TransversalityResult tr = transversality_for(c, n, r[t.col("x_n")]);
      expect_close(r[t.col("total")], tr.total, 1e-9, "total at n=" + std::to_string(n));
    }
    out << "check ok: " << t.rows.size() << " rows\n";
    return;
  }
  const QuadraticProfile p = profile(c);
  const int n = single_n(c);
  const double x = c.has_x ? c.x : eigenvalue_x(p, n);
  const TransversalityResult t = transversality_for(c, n, x);
  if (csv(c)) {
    out << "n,x_n,total,part1,part2,part3,zeta_residual,nonzero\n";
    out << n << "," << num(x) << "," << num(t.total) << "," << num(t.part1) << "," << num(t.part2) << ","
        << num(t.part3) << "," << num(t.zeta_residual) << "," << (t.nonzero ? 1 : 0) << "\n";
    return;
  }
  json j{{"schema_version", kSchemaVersion}, {"command", "transversality"}, {"profile", profile_json(c)},
         {"n", n},         {"x_n", x},                    {"total", t.total},
         {"part1", t.part1}, {"part2", t.part2},          {"part3", t.part3},
         {"zeta_residual", t.zeta_residual},              {"nonzero", t.nonzero},
         {"gate_warning", t.gate_warning}};
  out << j.dump(2) << "\n";
}

// ---------------------------------------------------------------------------
// potentials

PotentialCase potential_case(const RunConfig& c) {
  if (c.mode < 1) throw Usage("--mode must be >= 1");
  const double A = c.A, B = c.B;
  PotentialCase pc{{[A, B](double r) { return A * r * r + B; }},
                   {c.mode, polynomial(doubles(c.h_coeffs))},
                   {doubles(c.k_coeffs)},
                   point(c.at)};
  return pc;
}

void cmd_potentials(const RunConfig& c, std::ostream& out) {
  const PotentialCase pc = potential_case(c);
  if (!c.check.empty()) {
    const Table t = read_table(c.check, false);
    for (const auto& cells : t.text) {
      const int id = to_int(cells[t.col("identity")]);
      const cplx v = identity_closed_form(id, pc);
      expect_close(to_double(cells[t.col("closed_re")]), v.real(), 1e-10, "closed_re of identity " + cells[0]);
      expect_close(to_double(cells[t.col("closed_im")]), v.imag(), 1e-10, "closed_im of identity " + cells[0]);
      const cplx o(to_double(cells[t.col("oracle_re")]), to_double(cells[t.col("oracle_im")]));
      expect_close(to_double(cells[t.col("abs_diff")]), std::abs(v - o), 1e-10, "abs_diff of identity " + cells[0]);
    }
    out << "check ok: " << t.text.size() << " rows\n";
    return;
  }
  if (c.identity < 0 || c.identity > kIdentityCount) throw Usage("--identity must be in 0..8");
  std::vector<int> ids;
  if (c.identity == 0)
    for (int i = 1; i <= kIdentityCount; ++i) ids.push_back(i);
  else
    ids.push_back(c.identity);
  const OracleGrid g{c.radial_nodes, c.angular_nodes};
  struct Row {
    cplx closed, oracle;
  };
  const auto rows = parallel_map<Row>(ids.size(), c.threads, [&](std::size_t i) {
    return Row{identity_closed_form(ids[i], pc), identity_oracle(ids[i], pc, g)};
  });
  if (csv(c)) {
    out << "identity,name,closed_re,closed_im,oracle_re,oracle_im,abs_diff\n";
    for (std::size_t i = 0; i < ids.size(); ++i)
      out << ids[i] << "," << identity_name(ids[i]) << "," << num(rows[i].closed.real()) << ","
          << num(rows[i].closed.imag()) << "," << num(rows[i].oracle.real()) << "," << num(rows[i].oracle.imag())
          << "," << num(std::abs(rows[i].closed - rows[i].oracle)) << "\n";
    return;
  }
  json j{{"schema_version", kSchemaVersion}, {"command", "potentials"}};
  j["identities"] = json::array();
  for (std::size_t i = 0; i < ids.size(); ++i)
    j["identities"].push_back({{"identity", ids[i]},
                               {"name", identity_name(ids[i])},
                               {"closed", {rows[i].closed.real(), rows[i].closed.imag()}},
                               {"oracle", {rows[i].oracle.real(), rows[i].oracle.imag()}},
                               {"abs_diff", std::abs(rows[i].closed - rows[i].oracle)}});
  out << j.dump(2) << "\n";
}

// ---------------------------------------------------------------------------
// orbit

AngularField field_from(double A, double B, double omega, int mode, double amp, const std::string& h) {
  const QuadraticProfile p{A, B};
  if (amp == 0.0) return radial_field(p, omega);
  return composite_field(p, omega, ModalDensity{mode, polynomial(doubles(h))}, amp);
}

void cmd_orbit(const RunConfig& c, std::ostream& out) {
  const double tol = c.tol > 0 ? c.tol : kFlowTol;
  if (!c.check.empty()) {
    const Table t = read_table(c.check);
    const json& h = t.header;
    if (h.is_null() || t.rows.empty()) throw Usage("checked orbit file has no header or rows");
    const AngularField f = field_from(h.at("A").get<double>(), h.at("B").get<double>(), h.at("omega").get<double>(),
                                      h.at("mode").get<int>(), h.at("amp").get<double>(),
                                      h.at("h_coeffs").get<std::string>());
    const std::size_t ct = t.col("t"), cr = t.col("re_psi"), ci = t.col("im_psi");
    const cplx z0(t.rows[0][cr], t.rows[0][ci]);
    for (const auto& r : t.rows) {
      const cplx z = flow_map(f, z0, r[ct], h.at("tol").get<double>());
      const double d = std::abs(z - cplx(r[cr], r[ci]));
      if (!(d <= 1e-7)) throw Mismatch("psi at t=" + num(r[ct]) + " differs by " + num(d));
    }
    out << "check ok: " << t.rows.size() << " rows\n";
    return;
  }
  const AngularField f = field_from(c.A, c.B, c.omega, c.mode, c.amp, c.h_coeffs);
  const cplx z0 = point(c.z);
  const OrbitRecord o = integrate_orbit(f, z0, tol);
  json h{{"schema_version", kSchemaVersion},
         {"command", "orbit"},
         {"field", to_string(f.kind)},
         {"A", c.A},
         {"B", c.B},
         {"omega", c.omega},
         {"mode", c.mode},
         {"amp", c.amp},
         {"h_coeffs", c.h_coeffs},
         {"tol", tol},
         {"z0", {z0.real(), z0.imag()}},
         {"period", o.period},
         {"closure_gap", o.closure_gap},
         {"period_bound", o.period_bound},
         {"bound_ok", o.period <= o.period_bound},
         {"radius_drift", o.radius_drift}};
  if (f.kind == FieldKind::radial_quadratic) h["closed_form_period"] = period_map(f, z0);
  if (csv(c)) {
    out << "#" << h.dump() << "\n";
    out << "t,re_psi,im_psi\n";
    for (const auto& s : o.samples) out << num(s.t) << "," << num(s.z.real()) << "," << num(s.z.imag()) << "\n";
    return;
  }
  h["samples"] = json::array();
  for (const auto& s : o.samples) h["samples"].push_back({s.t, s.z.real(), s.z.imag()});
  out << h.dump(2) << "\n";
}

// ---------------------------------------------------------------------------
// regime

json report_json(const RegimeReport& r) {
  json j{{"schema_version", kSchemaVersion},
         {"command", "regime"},
         {"profile", {{"A", r.profile.A}, {"B", r.profile.B}}},
         {"mirrored", r.mirrored},
         {"label", to_string(r.label)},
         {"kappa", r.kappa},
         {"one_fold", r.one_fold},
         {"allowed_lo", r.allowed_lo},
         {"allowed_hi", r.allowed_hi < 0 ? json(nullptr) : json(r.allowed_hi)},
         {"excluded_from", r.excluded_from ? json(*r.excluded_from) : json(nullptr)},
         {"singular_interval", {r.singular_lo, r.singular_hi}},
         {"empirical_m0", r.empirical_m0 ? json(*r.empirical_m0) : json(nullptr)}};
  j["table"] = json::array();
  for (const auto& e : r.table) {
    json row = eigen_json(e.record);
    row["transversality"] = e.transversality;
    row["transversal"] = e.transversal;
    j["table"].push_back(row);
  }
  return j;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Usage("cannot write '" + path.string() + "'");
  f << text;
  if (!f) throw Usage("cannot write '" + path.string() + "'");
}

void cmd_regime(const RunConfig& c, std::ostream& out) {
  if (c.map) {
    if (c.b_grid.empty()) throw Usage("--map needs --B-grid lo:hi:steps");
    const auto bs = grid(c.b_grid);
    const auto rows = parallel_map<MapRow>(bs.size(), c.threads, [&](std::size_t i) {
      return regime_map(c.A, bs[i], bs[i], 1, c.m_max).front();
    });
    if (!c.check.empty()) {
      const Table t = read_table(c.check, false);
      if (t.text.size() != rows.size()) throw Mismatch("row count differs from the recomputed map");
      for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& cells = t.text[i];
        expect_close(to_double(cells[t.col("B")]), rows[i].B, 1e-15, "B in row " + std::to_string(i));
        if (cells[t.col("label")] != to_string(rows[i].label) || to_int(cells[t.col("predicted")]) != rows[i].predicted ||
            to_int(cells[t.col("found")]) != rows[i].found)
          throw Mismatch("map row " + std::to_string(i) + " differs");
      }
      out << "check ok: " << rows.size() << " rows\n";
      return;
    }
    if (csv(c)) {
      out << "B,label,predicted,found,excluded_from\n";
      for (const auto& r : rows)
        out << num(r.B) << "," << to_string(r.label) << "," << r.predicted << "," << r.found << ","
            << (r.excluded_from ? std::to_string(*r.excluded_from) : "") << "\n";
      return;
    }
    json j{{"schema_version", kSchemaVersion}, {"command", "regime_map"}, {"A", c.A}, {"m_max", c.m_max}};
    j["rows"] = json::array();
    for (const auto& r : rows)
      j["rows"].push_back({{"B", r.B},
                           {"label", to_string(r.label)},
                           {"predicted", r.predicted},
                           {"found", r.found},
                           {"excluded_from", r.excluded_from ? json(*r.excluded_from) : json(nullptr)}});
    out << j.dump(2) << "\n";
    return;
  }
  if (!c.check.empty()) return check_eigen_file(c, out);
  RegimeReport r = classify(profile(c));
  r.table = eigenvalue_table(profile(c), c.m_max);
  std::vector<EigenvalueRecord> recs;
  for (const auto& e : r.table) recs.push_back(e.record);
  const std::filesystem::path dir(c.out_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  write_file(dir / "regime.json", report_json(r).dump(2) + "\n");
  std::ostringstream table;
  eigen_csv(table, recs);
  write_file(dir / "eigenvalues.csv", table.str());
  if (!csv(c)) {
    out << report_json(r).dump(2) << "\n";
    return;
  }
  out << "profile A=" << num(r.profile.A) << " B=" << num(r.profile.B) << (r.mirrored ? " (mirrored)" : "") << "\n";
  out << "regime " << to_string(r.label) << "\n";
  out << "kappa " << num(r.kappa) << "\n";
  out << "one_fold " << (r.one_fold ? "yes" : "no") << "\n";
  if (r.allowed_lo > 0)
    out << "allowed m " << r.allowed_lo << ".." << (r.allowed_hi < 0 ? std::string("inf") : std::to_string(r.allowed_hi))
        << "\n";
  else
    out << "allowed m (none beyond the one-fold)\n";
  if (r.excluded_from) out << "excluded m >= " << *r.excluded_from << "\n";
  if (r.empirical_m0) out << "empirical m0 " << *r.empirical_m0 << "\n";
  out << "singular omega interval (" << num(r.singular_lo) << ", " << num(r.singular_hi) << ")\n";
  out << "m,x_m,omega_m,residual,separation_ok,transversality,transversal\n";
  for (const auto& e : r.table)
    out << e.record.n << "," << num(e.record.x_n) << "," << num(e.record.omega_n) << "," << num(e.record.residual) << ","
        << (e.record.separation_ok ? 1 : 0) << "," << num(e.transversality) << "," << (e.transversal ? 1 : 0) << "\n";
}

// ---------------------------------------------------------------------------
// selftest

bool cmd_selftest(const RunConfig& c, std::ostream& out) {
  const auto checks = run_selftest(c.suite);
  bool ok = true;
  if (csv(c)) {
    out << "check,max_residual,tolerance,samples,pass\n";
    for (const auto& k : checks)
      out << k.name << "," << num(k.max_residual) << "," << num(k.tolerance) << "," << k.samples << ","
          << (k.pass ? "pass" : "FAIL") << "\n";
  } else {
    json j{{"schema_version", kSchemaVersion}, {"command", "selftest"}, {"suite", c.suite}};
    j["checks"] = json::array();
    for (const auto& k : checks)
      j["checks"].push_back({{"check", k.name},
                             {"max_residual", jnum(k.max_residual)},
                             {"tolerance", k.tolerance},
                             {"samples", k.samples},
                             {"pass", k.pass}});
    out << j.dump(2) << "\n";
  }
  for (const auto& k : checks) ok = ok && k.pass;
  return ok;
}

int env_threads() {
  const char* s = std::getenv("VORTEX_THREADS");
  if (!s || !*s) return 1;
  char* end = nullptr;
  const long v = std::strtol(s, &end, 10);
  if (*end != '\0' || v < 1 || v > 256) throw Usage("VORTEX_THREADS must be an integer in 1..256");
  return static_cast<int>(v);
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Spectral, kernel, potential and orbit computations for quadratic vorticity profiles"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "vortex 1.0");

  auto common = [&](CLI::App* s) {
    s->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    s->add_option("--output,-o", c.output, "write to this file instead of standard output");
    s->add_option("--seed", c.seed, "seed for randomized suites");
    s->add_flag("--dump-config", c.dump_config, "print the resolved configuration as JSON and exit");
    s->add_option("--check", c.check, "re-read a file written by this command and recompute its residual columns");
  };
  auto profile_opts = [&](CLI::App* s) {
    s->add_option("--A", c.A, "profile coefficient A in f0 = A r^2 + B");
    s->add_option("--B", c.B, "profile coefficient B");
  };

  auto* disp = app.add_subcommand("dispersion", "zeta_n on an x grid in each formulation");
  profile_opts(disp);
  disp->add_option("--n", c.n, "n, list a,b,c or range lo:hi:step");
  disp->add_option("--x", c.x_grid, "x grid lo:hi:count");
  disp->add_option("--form", c.form, "all, contiguous, alt or integral");
  common(disp);

  auto* eig = app.add_subcommand("eigenvalues", "roots x_n of zeta_n");
  profile_opts(eig);
  eig->add_option("--n", c.n, "n, list a,b,c or range lo:hi:step");
  eig->add_option("--tol", c.tol, "residual tolerance (default 1e-10)")->check(CLI::PositiveNumber);
  common(eig);

  auto* ker = app.add_subcommand("kernel", "kernel generator h*_n and H_n at the eigenvalue");
  profile_opts(ker);
  ker->add_option("--n", c.n, "frequency n");
  ker->add_option("--grid", c.grid, "number of Chebyshev-Lobatto nodes")->check(CLI::Range(3, 100000));
  common(ker);

  auto* tra = app.add_subcommand("transversality", "transversality integral at the eigenvalue");
  profile_opts(tra);
  tra->add_option("--n", c.n, "frequency n");
  tra->add_option("--x", c.x, "use this x instead of the computed eigenvalue");
  common(tra);

  auto* pot = app.add_subcommand("potentials", "closed-form disc integrals next to the quadrature oracle");
  pot->add_option("--A", c.A, "radial density A r^2 + B");
  pot->add_option("--B", c.B, "radial density A r^2 + B");
  pot->add_option("--identity", c.identity, "1..8, 0 for all");
  pot->add_option("--mode", c.mode, "angular frequency of the modal density");
  pot->add_option("--at", c.at, "evaluation point x,y");
  pot->add_option("--h-coeffs", c.h_coeffs, "h_n(r) = sum c_j r^j, as c0,c1,...");
  pot->add_option("--k-coeffs", c.k_coeffs, "conformal coefficients A_1,A_2,...");
  pot->add_option("--radial-nodes", c.radial_nodes, "oracle radial nodes")->check(CLI::Range(2, 100000));
  pot->add_option("--angular-nodes", c.angular_nodes, "oracle angular nodes")->check(CLI::Range(4, 100000));
  common(pot);

  auto* orb = app.add_subcommand("orbit", "trajectory, period and closure gap");
  profile_opts(orb);
  orb->add_option("--omega", c.omega, "angular velocity of the frame");
  orb->add_option("--z", c.z, "start point x,y");
  orb->add_option("--mode", c.mode, "mode of the density perturbation");
  orb->add_option("--amp", c.amp, "amplitude of the density perturbation (0 for the radial field)");
  orb->add_option("--h-coeffs", c.h_coeffs, "h_n(r) = sum c_j r^j, as c0,c1,...");
  orb->add_option("--tol", c.tol, "integrator tolerance (default 1e-10)")->check(CLI::PositiveNumber);
  common(orb);

  auto* reg = app.add_subcommand("regime", "regime report, eigenvalue table and regime map");
  profile_opts(reg);
  reg->add_option("--m-max", c.m_max, "largest symmetry in the table")->check(CLI::Range(1, 10000));
  reg->add_flag("--map", c.map, "emit the regime map over --B-grid");
  reg->add_option("--B-grid", c.b_grid, "B grid lo:hi:steps for --map");
  reg->add_option("--out-dir", c.out_dir, "directory for regime.json and eigenvalues.csv");
  common(reg);

  auto* self = app.add_subcommand("selftest", "residual suites with a pass table");
  self->add_option("--suite", c.suite, "all or one of the module suites");
  common(self);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    c.subcommand = app.get_subcommands().front()->get_name();
    c.has_x = tra->count("--x") > 0;
    c.threads = env_threads();
    if (c.dump_config) {
      out << config_json(c).dump(2) << "\n";
      return 0;
    }
    std::ostringstream buf;
    bool ok = true;
    const std::string& s = c.subcommand;
    if (s == "dispersion") cmd_dispersion(c, buf);
    else if (s == "eigenvalues") cmd_eigenvalues(c, buf, err);
    else if (s == "kernel") cmd_kernel(c, buf);
    else if (s == "transversality") cmd_transversality(c, buf);
    else if (s == "potentials") cmd_potentials(c, buf);
    else if (s == "orbit") cmd_orbit(c, buf);
    else if (s == "regime") cmd_regime(c, buf);
    else ok = cmd_selftest(c, buf);
    if (c.output.empty()) {
      out << buf.str();
    } else {
      write_file(c.output, buf.str());
    }
    if (!ok) {
      err << "selftest: some checks failed\n";
      return 3;
    }
    return 0;
  } catch (const Usage& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const Mismatch& e) {
    err << "check failed: " << e.what() << "\n";
    return 3;
  } catch (const Error& e) {
    err << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
    return is_numerical(e.kind()) ? 3 : 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace vortex::cli

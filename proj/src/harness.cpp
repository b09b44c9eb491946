#include "fwb/harness.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <future>
#include <limits>
#include <numbers>
#include <set>
#include <sstream>

#include "fwb/errors.hpp"
#include "json.hpp"

namespace fwb {

namespace fs = std::filesystem;
using json = nlohmann::json;

// ---------------------------------------------------------------------------
// Exact solution

Primitive exact_solution(const ExactParams& p, double x, double t) {
  const double xi = x - p.u0 * t;
  const double kp = p.k * std::numbers::pi;
  return {p.rho0 * (1.0 + p.A * std::sin(kp * xi)), p.u0,
          p.p0 - p.rho0 * (xi - p.A / kp * std::cos(kp * xi))};
}

ConservedState exact_cell_average(const Eos& eos, const ExactParams& params, double xc, double dx,
                                  double t) {
  static constexpr double nodes[5] = {-0.9061798459386640, -0.5384693101056831, 0.0,
                                      0.5384693101056831, 0.9061798459386640};
  static constexpr double weights[5] = {0.2369268850561891, 0.4786286704993665,
                                        0.5688888888888889, 0.4786286704993665,
                                        0.2369268850561891};
  ConservedState avg;
  for (int k = 0; k < 5; ++k)
    avg += (0.5 * weights[k]) * to_conserved(eos, exact_solution(params, xc + 0.5 * dx * nodes[k], t));
  return avg;
}

// ---------------------------------------------------------------------------
// Case files

std::string to_string(CaseKind k) {
  switch (k) {
    case CaseKind::well_balanced: return "well_balanced";
    case CaseKind::convergence: return "convergence";
    case CaseKind::gaussian: return "gaussian";
    case CaseKind::boundary_wave: return "boundary_wave";
    case CaseKind::riemann: return "riemann";
  }
  return "?";
}

CaseKind case_kind_from_string(const std::string& name) {
  for (CaseKind k : {CaseKind::well_balanced, CaseKind::convergence, CaseKind::gaussian,
                     CaseKind::boundary_wave, CaseKind::riemann})
    if (to_string(k) == name) return k;
  throw ConfigError("unknown case kind '" + name + "'");
}

namespace {

std::string trim(std::string_view s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string_view::npos) return {};
  const auto b = s.find_last_not_of(" \t\r");
  return std::string(s.substr(a, b - a + 1));
}

std::string unquote(const std::string& v) {
  if (v.size() >= 2 && v.front() == '"' && v.back() == '"') return v.substr(1, v.size() - 2);
  return v;
}

class ValueReader {
 public:
  ValueReader(std::string key, std::string text, std::string where)
      : key_(std::move(key)), text_(std::move(text)), where_(std::move(where)) {}

  [[noreturn]] void fail(const std::string& what) const {
    throw ConfigError(where_ + ": key '" + key_ + "': " + what);
  }

  std::string str() const { return unquote(text_); }

  double num() const { return parse_number(text_); }

  int integer() const {
    const double v = num();
    if (v != std::floor(v) || std::abs(v) > 1e9) fail("expected an integer");
    return static_cast<int>(v);
  }

  bool boolean() const {
    if (text_ == "true") return true;
    if (text_ == "false") return false;
    fail("expected true or false");
  }

  std::vector<double> list() const {
    if (text_.size() < 2 || text_.front() != '[' || text_.back() != ']')
      fail("expected a list [a, b, ...]");
    std::vector<double> out;
    std::stringstream ss(text_.substr(1, text_.size() - 2));
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      if (!item.empty()) out.push_back(parse_number(item));
    }
    return out;
  }

  template <std::size_t N>
  std::array<double, N> fixed() const {
    const auto v = list();
    if (v.size() != N) fail("expected " + std::to_string(N) + " entries");
    std::array<double, N> a{};
    std::copy(v.begin(), v.end(), a.begin());
    return a;
  }

 private:
  // Decimal number or a fraction a/b.
  double parse_number(const std::string& s) const {
    const auto slash = s.find('/');
    if (slash != std::string::npos) {
      const double den = parse_number(trim(s.substr(slash + 1)));
      if (den == 0.0) fail("zero denominator");
      return parse_number(trim(s.substr(0, slash))) / den;
    }
    double v = 0.0;
    const char* first = s.data();
    if (!s.empty() && s.front() == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) fail("expected a number, got '" + s + "'");
    return v;
  }

  std::string key_;
  std::string text_;
  std::string where_;
};

Branch branch_from(const ValueReader& r) {
  const std::string v = r.str();
  if (v == "subsonic") return Branch::subsonic;
  if (v == "supersonic") return Branch::supersonic;
  r.fail("expected subsonic or supersonic");
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

const std::set<std::string> kEosParams = {"R", "cv0", "s0", "a0", "b", "T0", "kappa"};

}  // namespace

CaseSpec parse_case(const std::string& text, const fs::path& origin) {
  CaseSpec c;
  c.origin = origin;
  std::map<std::string, std::string> seen;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  const std::string src = origin.empty() ? std::string("<case>") : origin.string();
  while (std::getline(in, line)) {
    ++lineno;
    bool quoted = false;
    for (std::size_t k = 0; k < line.size(); ++k) {
      if (line[k] == '"') quoted = !quoted;
      if (line[k] == '#' && !quoted) {
        line.resize(k);
        break;
      }
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = src + ":" + std::to_string(lineno);
    if (eq == std::string::npos) throw ConfigError(where + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (seen.count(key)) throw ConfigError(where + ": duplicate key '" + key + "'");
    seen[key] = value;
    const ValueReader r(key, value, where);

    if (key == "id") c.id = r.str();
    else if (key == "table") c.table = r.str();
    else if (key == "description") c.description = r.str();
    else if (key == "kind") c.kind = case_kind_from_string(r.str());
    else if (key == "acceptance") c.acceptance = r.boolean();
    else if (key == "surrogate") c.surrogate = r.boolean();
    else if (key == "eos") c.eos = r.str();
    else if (key.rfind("eos.", 0) == 0) {
      const std::string p = key.substr(4);
      if (!kEosParams.count(p)) r.fail("unknown EOS parameter");
      c.eos_params[p] = r.num();
    } else if (key == "eos_table") c.eos_table = r.str();
    else if (key == "table.rho") c.table_rho = r.fixed<2>();
    else if (key == "table.e") c.table_e = r.fixed<2>();
    else if (key == "table.n") {
      const auto n = r.fixed<2>();
      c.table_n = {static_cast<int>(n[0]), static_cast<int>(n[1])};
    } else if (key == "compare_analytic") c.compare_analytic = r.boolean();
    else if (key == "potential") c.potential = r.str();
    else if (key == "potential.phi0") c.phi0 = r.num();
    else if (key == "potential.x0") c.x0 = r.num();
    else if (key == "potential.slope") c.slope = r.num();
    else if (key == "cells") c.cells = r.integer();
    else if (key == "domain") {
      const auto d = r.fixed<2>();
      c.x_min = d[0];
      c.x_max = d[1];
    } else if (key == "t_final") c.t_final = r.num();
    else if (key == "orders") {
      c.orders.clear();
      for (double v : r.list()) c.orders.push_back(static_cast<int>(v));
    } else if (key == "cfl") c.scheme.cfl = r.num();
    else if (key == "Lambda") c.scheme.Lambda = r.num();
    else if (key == "C_theta") c.scheme.C_theta = r.num();
    else if (key == "extremum_ratio") c.scheme.extremum_ratio = r.num();
    else if (key == "psi.eps0") c.scheme.psi.eps0 = r.num();
    else if (key == "triplet") {
      const auto t = r.fixed<3>();
      c.triplet = {t[0], t[2], t[1]};  // file order q, s, H
    } else if (key == "triplet.state") c.triplet_state = r.fixed<3>();
    else if (key == "triplet.x") c.triplet_x = r.num();
    else if (key == "branch") c.branch = branch_from(r);
    else if (key == "exact") {
      const auto e = r.fixed<4>();
      c.exact.rho0 = e[0];
      c.exact.u0 = e[1];
      c.exact.p0 = e[2];
      c.exact.A = e[3];
    } else if (key == "exact.k") c.exact.k = r.num();
    else if (key == "grids") {
      c.grids.clear();
      for (double v : r.list()) c.grids.push_back(static_cast<int>(v));
    } else if (key == "eoc.fit") c.eoc_fit = r.integer();
    else if (key == "vars") {
      c.vars = r.str();
      if (c.vars != "rho_u_p" && c.vars != "q_s_H") r.fail("expected rho_u_p or q_s_H");
    } else if (key == "left") c.left = r.fixed<3>();
    else if (key == "right") c.right = r.fixed<3>();
    else if (key == "jump") c.jump = r.num();
    else if (key == "left.branch") c.left_branch = branch_from(r);
    else if (key == "right.branch") c.right_branch = branch_from(r);
    else if (key == "nu") c.nu = r.num();
    else if (key == "kappa") c.kappa = r.num();
    else if (key == "side") {
      c.side = r.str();
      if (c.side != "left" && c.side != "right") r.fail("expected left or right");
    } else if (key == "gauss.width") c.gauss_width = r.num();
    else if (key == "gauss.cutoff") c.gauss_cutoff = r.num();
    else if (key == "hll") c.hll = r.boolean();
    else if (key.rfind("check.", 0) == 0) {
      const std::string name = key.substr(6);
      c.checks[name] = value.front() == '[' ? r.list() : std::vector<double>{r.num()};
    } else {
      r.fail("unknown key");
    }
  }
  if (c.id.empty()) throw ConfigError(src + ": missing id");
  if (c.table.empty()) throw ConfigError(src + ": missing table (traceability)");
  if (c.kind != CaseKind::convergence && !(c.t_final > 0.0))
    throw ConfigError(src + ": t_final must be positive");
  if (c.cells < 2) throw ConfigError(src + ": cells must be at least 2");
  for (int o : c.orders)
    if (o < 1 || o > 3) throw ConfigError(src + ": orders must be 1, 2 or 3");

  // Canonical listing: sorted keys, values without blanks outside quotes.
  std::string canon;
  for (const auto& [k, v] : seen) {
    canon += k + "=";
    bool quoted = false;
    for (const char ch : v) {
      if (ch == '"') quoted = !quoted;
      if (quoted || (ch != ' ' && ch != '\t')) canon += ch;
    }
    canon += "\n";
  }
  c.hash = fnv1a(canon);
  return c;
}

CaseSpec load_case(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read case file '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_case(ss.str(), path);
}

std::vector<CaseSpec> load_catalog(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw ConfigError("catalog directory '" + dir.string() + "' not found");
  std::vector<CaseSpec> out;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".case")
      out.push_back(load_case(entry.path()));
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  for (std::size_t k = 1; k < out.size(); ++k)
    if (out[k].id == out[k - 1].id) throw ConfigError("duplicate case id '" + out[k].id + "'");
  return out;
}

bool glob_match(const std::string& pattern, const std::string& text) {
  std::size_t p = 0, t = 0, star = std::string::npos, mark = 0;
  while (t < text.size()) {
    if (p < pattern.size() && (pattern[p] == '?' || pattern[p] == text[t])) {
      ++p;
      ++t;
    } else if (p < pattern.size() && pattern[p] == '*') {
      star = p++;
      mark = t;
    } else if (star != std::string::npos) {
      p = star + 1;
      t = ++mark;
    } else {
      return false;
    }
  }
  while (p < pattern.size() && pattern[p] == '*') ++p;
  return p == pattern.size();
}

std::vector<CaseSpec> select_cases(const std::vector<CaseSpec>& all, const std::string& filter) {
  std::vector<std::string> patterns;
  std::stringstream ss(filter);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!trim(item).empty()) patterns.push_back(trim(item));
  std::vector<CaseSpec> out;
  for (const auto& c : all)
    for (const auto& pat : patterns)
      if (glob_match(pat, c.id)) {
        out.push_back(c);
        break;
      }
  return out;
}

void apply_overrides(CaseSpec& spec, const CaseOverrides& o) {
  if (o.order) spec.orders = {*o.order};
  if (o.cells) {
    if (*o.cells < 2) throw ConfigError("--cells must be at least 2");
    spec.cells = *o.cells;
  }
  if (o.C_theta) spec.scheme.C_theta = *o.C_theta;
  if (o.Lambda) spec.scheme.Lambda = *o.Lambda;
  if (o.eos) {
    spec.eos = *o.eos;
    spec.eos_params.clear();
  }
  if (o.eos_table) spec.eos_table = *o.eos_table;
  std::string canon = spec.hash;
  const auto add = [&canon](const char* key, const std::string& v) { canon += std::string("|") + key + "=" + v; };
  if (o.order) add("order", std::to_string(*o.order));
  if (o.cells) add("cells", std::to_string(*o.cells));
  if (o.C_theta) add("C_theta", format_double(*o.C_theta));
  if (o.Lambda) add("Lambda", format_double(*o.Lambda));
  if (o.eos) add("eos", *o.eos);
  if (o.eos_table) add("eos_table", *o.eos_table);
  if (canon != spec.hash) spec.hash = fnv1a(canon);
}

// ---------------------------------------------------------------------------
// Case construction

std::shared_ptr<const CubicEos> make_analytic_eos(const CaseSpec& spec) {
  CubicParams p = CubicParams::defaults(cubic_variant_from_string(spec.eos));
  for (const auto& [k, v] : spec.eos_params) {
    if (k == "R") p.R = v;
    else if (k == "cv0") p.cv0 = v;
    else if (k == "s0") p.s0 = v;
    else if (k == "a0") p.a0 = v;
    else if (k == "b") p.b = v;
    else if (k == "T0") p.T0 = v;
    else if (k == "kappa") p.kappa = v;
  }
  return std::make_shared<const CubicEos>(p);
}

EosPtr make_eos(const CaseSpec& spec) {
  if (!spec.eos_table.empty()) {
    fs::path path = spec.eos_table;
    if (path.is_relative() && !spec.origin.empty() && !fs::exists(path))
      path = spec.origin.parent_path() / path;
    return std::make_shared<const TabulatedEos>(TabulatedEos::load(path.string()));
  }
  auto analytic = make_analytic_eos(spec);
  if (spec.table_n[0] > 0) {
    return std::make_shared<const TabulatedEos>(TabulatedEos::generate(
        *analytic, spec.table_rho[0], spec.table_rho[1], spec.table_e[0], spec.table_e[1],
        static_cast<std::size_t>(spec.table_n[0]), static_cast<std::size_t>(spec.table_n[1])));
  }
  return analytic;
}

Potential make_potential(const CaseSpec& spec) {
  if (spec.potential == "zero") return Potential::zero();
  if (spec.potential == "linear") return Potential::linear(spec.slope);
  if (spec.potential == "quadratic") return Potential::quadratic(spec.phi0, spec.x0);
  throw ConfigError(spec.id + ": unknown potential '" + spec.potential + "'");
}

SteadyTriplet resolve_triplet(const Eos& eos, const CaseSpec& spec) {
  if (!spec.triplet_state) return spec.triplet;
  const auto& s = *spec.triplet_state;
  const ConservedState w = to_conserved(eos, {s[0], s[1], s[2]});
  const double phi = make_potential(spec)(spec.triplet_x);
  return {w.q, total_enthalpy(eos, w, phi), eos.entropy(1.0 / w.rho, w.internal_energy())};
}

SteadySetup steady_setup(const Eos& eos, const CaseSpec& spec) {
  SteadySetup s;
  s.grid = Grid1D(spec.x_min, spec.x_max, spec.cells);
  const double dx = s.grid.dx();
  const int n = spec.cells;
  const Grid1D wide(spec.x_min - kGhostCells * dx, spec.x_max + kGhostCells * dx,
                    n + 2 * kGhostCells);
  s.triplet = resolve_triplet(eos, spec);
  const auto all = steady_profile(eos, s.triplet, make_potential(spec), wide, spec.branch);
  s.cells.assign(all.begin() + kGhostCells, all.end() - kGhostCells);
  s.bc.left.kind = s.bc.right.kind = BoundaryKind::dirichlet_steady;
  for (int g = 0; g < kGhostCells; ++g) {
    s.bc.left.steady[g] = all[kGhostCells - 1 - g];
    s.bc.right.steady[g] = all[n + kGhostCells + g];
  }
  s.mach_min = s.mach_max = mach_number(eos, all.front());
  for (const auto& w : all) {
    const double m = mach_number(eos, w);
    s.mach_min = std::min(s.mach_min, m);
    s.mach_max = std::max(s.mach_max, m);
  }
  return s;
}

std::vector<ConservedState> gaussian_perturbation(const Eos& eos, const Grid1D& grid,
                                                  const std::vector<ConservedState>& eq,
                                                  double nu, double width, double cutoff) {
  std::vector<ConservedState> w = eq;
  for (int i = 0; i < grid.n_cells; ++i) {
    const double r = grid.center(i) - 0.5;
    if (cutoff > 0.0 && std::abs(r) > cutoff) continue;
    const double factor = 1.0 + nu * std::exp(-width * r * r);
    if (factor == 1.0) continue;
    const double rho = eq[i].rho;
    const double p = pressure_of(eos, eq[i]) * factor;
    w[i] = to_conserved(eos, {rho, eq[i].q / rho, p});
  }
  return w;
}

CaseSpec gaussian_perturbation_case(const CaseSpec& steady, double nu) {
  CaseSpec c = steady;
  c.kind = CaseKind::gaussian;
  c.id = steady.id + "-gaussian";
  c.nu = nu;
  c.cells = 50;
  c.hll = false;
  c.checks.clear();
  return c;
}

CaseSpec boundary_perturbation_case(const CaseSpec& steady, double nu, double kappa,
                                    const std::string& side) {
  if (side != "left" && side != "right") throw ConfigError("side must be left or right");
  CaseSpec c = steady;
  c.kind = CaseKind::boundary_wave;
  c.id = steady.id + "-boundary";
  c.nu = nu;
  c.kappa = kappa;
  c.side = side;
  c.cells = 512;
  c.hll = false;
  c.checks.clear();
  return c;
}

std::vector<ConservedState> riemann_initial_data(const Eos& eos, const CaseSpec& spec,
                                                 const Grid1D& grid, const Potential& pot) {
  std::vector<ConservedState> w(grid.n_cells);
  if (spec.vars == "rho_u_p") {
    const ConservedState L = to_conserved(eos, {spec.left[0], spec.left[1], spec.left[2]});
    const ConservedState R = to_conserved(eos, {spec.right[0], spec.right[1], spec.right[2]});
    for (int i = 0; i < grid.n_cells; ++i) w[i] = grid.center(i) < spec.jump ? L : R;
    return w;
  }
  // Each side is continued as an equilibrium through the cell potentials.
  const auto side = [&](const std::array<double, 3>& v, Branch br, const std::vector<double>& xs) {
    const SteadyTriplet tr{v[0], v[2], v[1]};
    const ConservedState seed =
        solve_steady_state(eos, tr, pot(xs.front()), steady_branch_guess(eos, tr, pot(xs.front()), br));
    return continue_steady(eos, tr, pot, seed, xs);
  };
  std::vector<double> xl, xr;
  for (int i = 0; i < grid.n_cells; ++i) (grid.center(i) < spec.jump ? xl : xr).push_back(grid.center(i));
  std::reverse(xl.begin(), xl.end());
  std::vector<ConservedState> wl, wr;
  if (!xl.empty()) wl = side(spec.left, spec.left_branch, xl);
  if (!xr.empty()) wr = side(spec.right, spec.right_branch, xr);
  std::reverse(wl.begin(), wl.end());
  std::copy(wl.begin(), wl.end(), w.begin());
  std::copy(wr.begin(), wr.end(), w.begin() + static_cast<long>(wl.size()));
  return w;
}

std::vector<bool> unreached_cells(const std::vector<bool>& support, long steps, int order) {
  // Per stage a cell reads its neighbours' traces (order 1: the neighbours
  // themselves), so the stencil radius is 1 at first order and 2 otherwise.
  const long radius = (order == 1 ? 1 : 2) * static_cast<long>(order) * steps;
  const long n = static_cast<long>(support.size());
  std::vector<bool> out(support.size(), true);
  for (long i = 0; i < n; ++i) {
    if (!support[i]) continue;
    for (long j = std::max(0L, i - radius); j <= std::min(n - 1, i + radius); ++j) out[j] = false;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Output

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double rel(double ref, double v) { return ref != 0.0 ? (ref - v) / ref : v - ref; }

}  // namespace

void write_field_csv(const fs::path& path, const Eos& eos, const Grid1D& grid, const Potential& pot,
                     const std::vector<ConservedState>& w,
                     const std::vector<ConservedState>* reference) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  out << "x,rho,u,p,q,E,s,H";
  if (reference) out << ",eta_rho,eta_u,eta_p";
  out << "\n";
  for (int i = 0; i < grid.n_cells; ++i) {
    const double x = grid.center(i);
    const ConservedState& c = w[i];
    const double p = pressure_of(eos, c);
    const double s = eos.entropy(1.0 / c.rho, c.internal_energy());
    const double H = total_enthalpy(eos, c, pot(x));
    out << fmt17(x) << ',' << fmt17(c.rho) << ',' << fmt17(c.q / c.rho) << ',' << fmt17(p) << ','
        << fmt17(c.q) << ',' << fmt17(c.E) << ',' << fmt17(s) << ',' << fmt17(H);
    if (reference) {
      const ConservedState& r = (*reference)[i];
      out << ',' << fmt17(rel(r.rho, c.rho)) << ',' << fmt17(rel(r.q / r.rho, c.q / c.rho)) << ','
          << fmt17(rel(pressure_of(eos, r), p));
    }
    out << "\n";
  }
}

namespace {

json norms_json(const ErrorNorms& n) { return {{"rho", n.rho}, {"q", n.q}, {"E", n.E}}; }
ErrorNorms norms_from(const json& j) {
  return {j.at("rho").get<double>(), j.at("q").get<double>(), j.at("E").get<double>()};
}

json order_json(const OrderResult& o) {
  json j;
  j["order"] = o.order;
  j["ok"] = o.ok;
  if (!o.error.empty()) j["error"] = o.error;
  j["failures"] = o.failures;
  j["norms"] = norms_json(o.norms);
  j["stats"] = {{"steps", o.stats.steps},
                {"interface_fallbacks", o.stats.interface_fallbacks},
                {"lambda_doublings", o.stats.lambda_doublings},
                {"reverted_cells", o.stats.reverted_cells},
                {"min_rho", o.stats.min_rho},
                {"min_p", o.stats.min_p},
                {"entropy_checked_cells", o.stats.entropy_checked_cells},
                {"entropy_violations", o.stats.entropy_violations},
                {"max_entropy_violation", o.stats.max_entropy_violation},
                {"wall_time", o.stats.wall_time}};
  if (!o.grid_cells.empty()) {
    json g = json::array();
    for (std::size_t k = 0; k < o.grid_cells.size(); ++k)
      g.push_back({{"cells", o.grid_cells[k]}, {"errors", norms_json(o.grid_errors[k])}});
    j["grids"] = g;
    j["eoc"] = o.eoc;
  }
  if (!o.entropy.empty()) {
    json e = json::array();
    for (const auto& r : o.entropy)
      e.push_back({{"eta", to_string(r.eta)},
                   {"tolerance", r.tolerance},
                   {"cells_checked", r.cells_checked},
                   {"violations", r.violations},
                   {"unverifiable_interfaces", r.unverifiable_interfaces},
                   {"worst", r.worst},
                   {"worst_cell", r.worst_cell},
                   {"worst_step", r.worst_step}});
    j["entropy"] = e;
  }
  j["eta_max"] = o.eta_max;
  j["background"] = o.background;
  j["background_cells"] = o.background_cells;
  j["amplitude_final"] = o.amplitude_final;
  j["amplitude_max"] = o.amplitude_max;
  j["analytic_difference"] = o.analytic_difference;
  j["csv"] = o.csv;
  return j;
}

OrderResult order_from(const json& j) {
  OrderResult o;
  o.order = j.at("order").get<int>();
  o.ok = j.at("ok").get<bool>();
  o.error = j.value("error", std::string());
  o.failures = j.at("failures").get<std::vector<std::string>>();
  o.norms = norms_from(j.at("norms"));
  const json& s = j.at("stats");
  o.stats.steps = s.at("steps");
  o.stats.interface_fallbacks = s.at("interface_fallbacks");
  o.stats.lambda_doublings = s.at("lambda_doublings");
  o.stats.reverted_cells = s.at("reverted_cells");
  o.stats.min_rho = s.at("min_rho");
  o.stats.min_p = s.at("min_p");
  o.stats.entropy_checked_cells = s.at("entropy_checked_cells");
  o.stats.entropy_violations = s.at("entropy_violations");
  o.stats.max_entropy_violation = s.at("max_entropy_violation");
  o.stats.wall_time = s.at("wall_time");
  if (j.contains("grids")) {
    for (const auto& g : j.at("grids")) {
      o.grid_cells.push_back(g.at("cells").get<int>());
      o.grid_errors.push_back(norms_from(g.at("errors")));
    }
    o.eoc = j.at("eoc");
  }
  if (j.contains("entropy")) {
    for (const auto& e : j.at("entropy")) {
      EntropyReport r;
      r.eta = e.at("eta").get<std::string>() == "s" ? EntropyFunction::linear
                                                     : EntropyFunction::exp_tenth;
      r.tolerance = e.at("tolerance");
      r.cells_checked = e.at("cells_checked");
      r.violations = e.at("violations");
      r.unverifiable_interfaces = e.at("unverifiable_interfaces");
      r.worst = e.at("worst");
      r.worst_cell = e.at("worst_cell");
      r.worst_step = e.at("worst_step");
      o.entropy.push_back(r);
    }
  }
  o.eta_max = j.at("eta_max");
  o.background = j.at("background");
  o.background_cells = j.at("background_cells");
  o.amplitude_final = j.at("amplitude_final");
  o.amplitude_max = j.at("amplitude_max");
  o.analytic_difference = j.at("analytic_difference");
  o.csv = j.at("csv").get<std::vector<std::string>>();
  return o;
}

}  // namespace

std::string record_to_json(const RunRecord& r) {
  json j;
  j["id"] = r.id;
  j["table"] = r.table;
  j["hash"] = r.hash;
  j["kind"] = to_string(r.kind);
  j["eos"] = r.eos;
  j["acceptance"] = r.acceptance;
  j["surrogate"] = r.surrogate;
  j["passed"] = r.passed;
  if (!r.error.empty()) j["error"] = r.error;
  j["mach_min"] = r.mach_min;
  j["mach_max"] = r.mach_max;
  j["wall_time"] = r.wall_time;
  json orders = json::array();
  for (const auto& o : r.orders) orders.push_back(order_json(o));
  j["orders"] = orders;
  if (r.hll) j["hll"] = order_json(*r.hll);
  return j.dump(2);
}

RunRecord record_from_json(const std::string& text) {
  const json j = json::parse(text);
  RunRecord r;
  r.id = j.at("id");
  r.table = j.at("table");
  r.hash = j.at("hash");
  r.kind = case_kind_from_string(j.at("kind"));
  r.eos = j.at("eos");
  r.acceptance = j.at("acceptance");
  r.surrogate = j.at("surrogate");
  r.passed = j.at("passed");
  r.error = j.value("error", std::string());
  r.mach_min = j.at("mach_min");
  r.mach_max = j.at("mach_max");
  r.wall_time = j.at("wall_time");
  for (const auto& o : j.at("orders")) r.orders.push_back(order_from(o));
  if (j.contains("hll")) r.hll = order_from(j.at("hll"));
  return r;
}

// ---------------------------------------------------------------------------
// Running cases

namespace {

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

const std::vector<double>* check(const CaseSpec& spec, const std::string& name) {
  const auto it = spec.checks.find(name);
  return it == spec.checks.end() ? nullptr : &it->second;
}

void expect_max(OrderResult& o, const char* what, double value, double limit) {
  if (!(value <= limit)) o.failures.push_back(std::string(what) + " " + sci(value) + " > " + sci(limit));
}

void expect_min(OrderResult& o, const char* what, double value, double limit) {
  if (!(value >= limit)) o.failures.push_back(std::string(what) + " " + sci(value) + " < " + sci(limit));
}

struct Context {
  const CaseSpec& spec;
  fs::path dir;
  EosPtr eos;
  Potential pot;

  std::string csv_name(const std::string& stem) const { return stem + ".csv"; }
  bool writes() const { return !dir.empty(); }
};

ConservedState component_scale(const std::vector<ConservedState>& w) {
  ConservedState s{0.0, 0.0, 0.0};
  for (const auto& c : w)
    for (std::size_t k = 0; k < 3; ++k) s[k] = std::max(s[k], std::abs(c[k]));
  return s;
}

double relative_l2(const std::vector<ConservedState>& a, const std::vector<ConservedState>& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < 3; ++k) {
      num += (a[i][k] - b[i][k]) * (a[i][k] - b[i][k]);
      den += b[i][k] * b[i][k];
    }
  return std::sqrt(num / den);
}

void run_well_balanced(Context& ctx, RunRecord& rec) {
  const CaseSpec& spec = ctx.spec;
  const SteadySetup setup = steady_setup(*ctx.eos, spec);
  rec.mach_min = setup.mach_min;
  rec.mach_max = setup.mach_max;

  std::optional<SteadySetup> analytic_setup;
  EosPtr analytic;
  if (spec.compare_analytic) {
    analytic = make_analytic_eos(spec);
    analytic_setup = steady_setup(*analytic, spec);
  }

  for (int order : spec.orders) {
    OrderResult o;
    o.order = order;
    try {
      SchemeConfig sc = spec.scheme;
      sc.order = order;
      Solver solver(ctx.eos, ctx.pot, setup.grid, sc, setup.bc);
      const RunResult r = solver.run(setup.cells, spec.t_final);
      o.stats = r.stats;
      o.norms = error_norms(r.w, setup.cells, setup.grid.dx());
      if (const auto* c = check(spec, "wb_tol")) expect_max(o, "well-balanced L2 error", o.norms.max(), (*c)[0]);
      if (const auto* c = check(spec, "wb_rel_tol")) {
        const ErrorNorms size =
            error_norms(setup.cells, std::vector<ConservedState>(setup.cells.size()), setup.grid.dx());
        expect_max(o, "relative well-balanced L2 error",
                   std::max({o.norms.rho / size.rho, o.norms.q / size.q, o.norms.E / size.E}), (*c)[0]);
      }
      if (analytic_setup) {
        Solver ref(analytic, ctx.pot, analytic_setup->grid, sc, analytic_setup->bc);
        const RunResult ra = ref.run(analytic_setup->cells, spec.t_final);
        o.analytic_difference = relative_l2(r.w, ra.w);
        if (const auto* c = check(spec, "equiv_tol"))
          expect_max(o, "relative L2 distance to the analytic run", o.analytic_difference, (*c)[0]);
      }
      if (ctx.writes()) {
        const std::string name = ctx.csv_name("o" + std::to_string(order));
        write_field_csv(ctx.dir / name, *ctx.eos, setup.grid, ctx.pot, r.w, &setup.cells);
        o.csv.push_back(name);
      }
    } catch (const std::exception& e) {
      o.error = e.what();
    }
    rec.orders.push_back(std::move(o));
  }

  if (spec.hll) {
    OrderResult o;
    o.order = 1;
    try {
      SchemeConfig sc = spec.scheme;
      sc.order = 1;
      Solver solver(ctx.eos, ctx.pot, setup.grid, sc, setup.bc);
      const RunResult r = run_plain_hll(solver, setup.cells, spec.t_final);
      o.stats = r.stats;
      o.norms = error_norms(r.w, setup.cells, setup.grid.dx());
      if (const auto* c = check(spec, "hll_range")) {
        expect_min(o, "plain HLL density error", o.norms.rho, (*c)[0]);
        expect_max(o, "plain HLL density error", o.norms.rho, (*c)[1]);
      }
      if (ctx.writes()) {
        write_field_csv(ctx.dir / "hll.csv", *ctx.eos, setup.grid, ctx.pot, r.w, &setup.cells);
        o.csv.push_back("hll.csv");
      }
    } catch (const std::exception& e) {
      o.error = e.what();
    }
    rec.hll = std::move(o);
  }
}

void run_convergence(Context& ctx, RunRecord& rec) {
  const CaseSpec& spec = ctx.spec;
  if (spec.grids.size() < 2) throw ConfigError(spec.id + ": convergence needs at least two grids");
  const double t_final = spec.t_final > 0.0 ? spec.t_final : 0.5;
  for (int order : spec.orders) {
    OrderResult o;
    o.order = order;
    try {
      for (int n : spec.grids) {
        const Grid1D grid(spec.x_min, spec.x_max, n);
        const double dx = grid.dx();
        const auto avg = [&](double xc, double t) {
          return exact_cell_average(*ctx.eos, spec.exact, xc, dx, t);
        };
        std::vector<ConservedState> w0(n), ref(n);
        for (int i = 0; i < n; ++i) {
          w0[i] = avg(grid.center(i), 0.0);
          ref[i] = avg(grid.center(i), t_final);
        }
        BoundaryConditions bc;
        bc.left.kind = bc.right.kind = BoundaryKind::exact;
        bc.left.exact = bc.right.exact = avg;
        SchemeConfig sc = spec.scheme;
        sc.order = order;
        Solver solver(ctx.eos, ctx.pot, grid, sc, bc);
        const RunResult r = solver.run(w0, t_final);
        o.grid_cells.push_back(n);
        o.grid_errors.push_back(error_norms(r.w, ref, dx));
        o.stats.steps += r.stats.steps;
        o.stats.wall_time += r.stats.wall_time;
        o.stats.reverted_cells += r.stats.reverted_cells;
        o.stats.interface_fallbacks += r.stats.interface_fallbacks;
      }
      o.norms = o.grid_errors.back();
      const std::size_t fit = std::min<std::size_t>(std::max(spec.eoc_fit, 2), o.grid_cells.size());
      std::vector<double> errs;
      std::vector<int> ns;
      for (std::size_t k = o.grid_cells.size() - fit; k < o.grid_cells.size(); ++k) {
        errs.push_back(o.grid_errors[k].rho);
        ns.push_back(o.grid_cells[k]);
      }
      o.eoc = eoc(errs, ns);
      if (const auto* c = check(spec, "eoc_tol")) {
        if (!(std::abs(o.eoc - order) <= (*c)[0]))
          o.failures.push_back("EOC " + std::to_string(o.eoc) + " outside " + std::to_string(order) +
                               " +/- " + std::to_string((*c)[0]));
      }
      if (ctx.writes()) {
        const std::string name = ctx.csv_name("o" + std::to_string(order) + "-errors");
        std::ofstream out(ctx.dir / name);
        out << "cells,rho,q,E\n";
        for (std::size_t k = 0; k < o.grid_cells.size(); ++k)
          out << o.grid_cells[k] << ',' << fmt17(o.grid_errors[k].rho) << ','
              << fmt17(o.grid_errors[k].q) << ',' << fmt17(o.grid_errors[k].E) << "\n";
        o.csv.push_back(name);
      }
    } catch (const std::exception& e) {
      o.error = e.what();
    }
    rec.orders.push_back(std::move(o));
  }
}

void run_gaussian(Context& ctx, RunRecord& rec) {
  const CaseSpec& spec = ctx.spec;
  const SteadySetup setup = steady_setup(*ctx.eos, spec);
  rec.mach_min = setup.mach_min;
  rec.mach_max = setup.mach_max;
  const auto w0 =
      gaussian_perturbation(*ctx.eos, setup.grid, setup.cells, spec.nu, spec.gauss_width, spec.gauss_cutoff);
  std::vector<bool> support(w0.size());
  for (std::size_t i = 0; i < w0.size(); ++i)
    support[i] = w0[i].rho != setup.cells[i].rho || w0[i].q != setup.cells[i].q ||
                 w0[i].E != setup.cells[i].E;

  for (int order : spec.orders) {
    OrderResult o;
    o.order = order;
    try {
      SchemeConfig sc = spec.scheme;
      sc.order = order;
      Solver solver(ctx.eos, ctx.pot, setup.grid, sc, setup.bc);
      solver.set_detector_refs(solver.detector_refs_from(setup.cells));
      solver.set_component_refs(component_scale(setup.cells));
      const RunResult r = solver.run(w0, spec.t_final);
      o.stats = r.stats;
      o.norms = error_norms(r.w, setup.cells, setup.grid.dx());
      for (std::size_t i = 0; i < r.w.size(); ++i)
        o.eta_max = std::max(o.eta_max, std::abs(rel(setup.cells[i].rho, r.w[i].rho)));
      const auto outside = unreached_cells(support, r.stats.steps, order);
      o.background = 0.0;
      for (std::size_t i = 0; i < r.w.size(); ++i) {
        if (!outside[i]) continue;
        ++o.background_cells;
        for (std::size_t k = 0; k < 3; ++k) {
          const double ref = setup.cells[i][k];
          const double d = std::abs(r.w[i][k] - ref) / std::max(std::abs(ref), 1e-300);
          o.background = std::max(o.background, d);
        }
      }
      if (const auto* c = check(spec, "background_tol")) {
        if (o.background_cells == 0)
          o.failures.push_back("no cell lies outside the domain of dependence of the perturbation");
        else
          expect_max(o, "background error outside the perturbation cone", o.background, (*c)[0]);
      }
      if (const auto* c = check(spec, "eta_max_factor"))
        expect_max(o, "max |eta_rho| / nu", o.eta_max / spec.nu, (*c)[0]);
      if (ctx.writes()) {
        const std::string name = ctx.csv_name("o" + std::to_string(order));
        write_field_csv(ctx.dir / name, *ctx.eos, setup.grid, ctx.pot, r.w, &setup.cells);
        o.csv.push_back(name);
      }
    } catch (const std::exception& e) {
      o.error = e.what();
    }
    rec.orders.push_back(std::move(o));
  }
}

void run_boundary_wave(Context& ctx, RunRecord& rec) {
  const CaseSpec& spec = ctx.spec;
  SteadySetup setup = steady_setup(*ctx.eos, spec);
  rec.mach_min = setup.mach_min;
  rec.mach_max = setup.mach_max;
  BoundarySide& side = spec.side == "left" ? setup.bc.left : setup.bc.right;
  side.kind = BoundaryKind::perturbed_momentum;
  side.q0 = setup.triplet.q0;
  side.nu = spec.nu;
  side.kappa = spec.kappa;
  // Velocity perturbation, or pressure for the supercritical (all waves one way) row.
  const bool pressure = check(spec, "use_pressure") != nullptr;
  const auto eta_of = [&](const std::vector<ConservedState>& w) {
    double m = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      const ConservedState& r = setup.cells[i];
      const double e = pressure ? rel(pressure_of(*ctx.eos, r), pressure_of(*ctx.eos, w[i]))
                                : rel(r.q / r.rho, w[i].q / w[i].rho);
      m = std::max(m, std::abs(e));
    }
    return m;
  };

  for (int order : spec.orders) {
    OrderResult o;
    o.order = order;
    try {
      SchemeConfig sc = spec.scheme;
      sc.order = order;
      Solver solver(ctx.eos, ctx.pot, setup.grid, sc, setup.bc);
      const auto on_step = [&](const StepRecord& s) {
        o.amplitude_max = std::max(o.amplitude_max, eta_of(*s.after));
      };
      const RunResult r = solver.run(setup.cells, spec.t_final, on_step);
      o.stats = r.stats;
      o.norms = error_norms(r.w, setup.cells, setup.grid.dx());
      o.amplitude_final = eta_of(r.w);
      if (const auto* c = check(spec, "amp_range")) {
        expect_min(o, "final perturbation amplitude / nu", o.amplitude_final / spec.nu, (*c)[0]);
        expect_max(o, "running perturbation amplitude / nu", o.amplitude_max / spec.nu, (*c)[1]);
      }
      if (ctx.writes()) {
        const std::string name = ctx.csv_name("o" + std::to_string(order));
        write_field_csv(ctx.dir / name, *ctx.eos, setup.grid, ctx.pot, r.w, &setup.cells);
        o.csv.push_back(name);
      }
    } catch (const std::exception& e) {
      o.error = e.what();
    }
    rec.orders.push_back(std::move(o));
  }
}

void run_riemann(Context& ctx, RunRecord& rec) {
  const CaseSpec& spec = ctx.spec;
  const Grid1D grid(spec.x_min, spec.x_max, spec.cells);
  const auto w0 = riemann_initial_data(*ctx.eos, spec, grid, ctx.pot);
  rec.mach_min = rec.mach_max = mach_number(*ctx.eos, w0.front());
  for (const auto& w : w0) {
    rec.mach_min = std::min(rec.mach_min, mach_number(*ctx.eos, w));
    rec.mach_max = std::max(rec.mach_max, mach_number(*ctx.eos, w));
  }
  BoundaryConditions bc;  // Neumann on both sides
  const auto* entropy_tol = check(spec, "entropy_tol");

  for (int order : spec.orders) {
    OrderResult o;
    o.order = order;
    try {
      SchemeConfig sc = spec.scheme;
      sc.order = order;
      Solver solver(ctx.eos, ctx.pot, grid, sc, bc);
      std::vector<EntropyReport> reports;
      std::vector<long> uncertified;
      std::function<void(const StepRecord&)> on_step;
      if (order == 1 && entropy_tol) {
        for (EntropyFunction f : {EntropyFunction::linear, EntropyFunction::exp_tenth}) {
          EntropyReport r;
          r.eta = f;
          r.tolerance = (*entropy_tol)[0];
          r.worst = -std::numeric_limits<double>::infinity();
          reports.push_back(r);
        }
        uncertified.assign(reports.size(), 0);
        on_step = [&](const StepRecord& s) {
          for (std::size_t k = 0; k < reports.size(); ++k) {
            EntropyReport& r = reports[k];
            const EntropyReport step = entropy_monitor(*ctx.eos, *s.before, *s.after, *s.interfaces,
                                                       s.dt, grid.dx(), r.eta, r.tolerance);
            // Violations where rho eta(s) is not convex lie outside the entropy guarantee.
            for (std::size_t i = 0; i < step.scaled.size(); ++i) {
              if (!(step.scaled[i] > r.tolerance)) continue;
              const ConservedState& w = (*s.before)[i];
              const double si = ctx.eos->entropy(1.0 / w.rho, w.internal_energy());
              if (!convexity_check(*ctx.eos, w, eta_d1(r.eta, si), eta_d2(r.eta, si)).certified())
                ++uncertified[k];
            }
            r.merge(step, s.step);
          }
        };
      }
      const RunResult r = solver.run(w0, spec.t_final, on_step);
      o.stats = r.stats;
      for (auto& rep : reports) rep.scaled.clear();
      if (!reports.empty()) {
        o.stats.entropy_checked_cells = reports[0].cells_checked;
        o.stats.entropy_violations = reports[0].violations + reports[1].violations;
        o.stats.max_entropy_violation = std::max({0.0, reports[0].worst, reports[1].worst});
        for (std::size_t k = 0; k < reports.size(); ++k) {
          const EntropyReport& rep = reports[k];
          if (rep.violations > 0)
            o.failures.push_back("entropy inequality violated in " + std::to_string(rep.violations) +
                                 " cell-steps for eta = " + to_string(rep.eta) + " (worst " +
                                 sci(rep.worst) + "; " + std::to_string(uncertified[k]) +
                                 " at states where rho eta(s) is not certified convex)");
        }
      }
      o.entropy = std::move(reports);
      if (check(spec, "positivity")) {
        if (!(o.stats.min_rho > 0.0)) o.failures.push_back("minimum density " + sci(o.stats.min_rho));
        if (!(o.stats.min_p > 0.0)) o.failures.push_back("minimum pressure " + sci(o.stats.min_p));
      }
      if (ctx.writes()) {
        const std::string name = ctx.csv_name("o" + std::to_string(order));
        write_field_csv(ctx.dir / name, *ctx.eos, grid, ctx.pot, r.w);
        o.csv.push_back(name);
      }
    } catch (const std::exception& e) {
      o.error = e.what();
    }
    rec.orders.push_back(std::move(o));
  }
}

}  // namespace

RunRecord run_case(const CaseSpec& spec, const fs::path& out_dir) {
  const auto start = std::chrono::steady_clock::now();
  RunRecord rec;
  rec.id = spec.id;
  rec.table = spec.table;
  rec.hash = spec.hash;
  rec.kind = spec.kind;
  rec.eos = spec.eos_table.empty() ? (spec.table_n[0] > 0 ? "table(" + spec.eos + ")" : spec.eos)
                                   : "table:" + spec.eos_table;
  rec.acceptance = spec.acceptance;
  rec.surrogate = spec.surrogate;
  try {
    Context ctx{spec, {}, make_eos(spec), make_potential(spec)};
    if (!out_dir.empty()) {
      ctx.dir = out_dir / spec.id;
      fs::create_directories(ctx.dir);
    }
    switch (spec.kind) {
      case CaseKind::well_balanced: run_well_balanced(ctx, rec); break;
      case CaseKind::convergence: run_convergence(ctx, rec); break;
      case CaseKind::gaussian: run_gaussian(ctx, rec); break;
      case CaseKind::boundary_wave: run_boundary_wave(ctx, rec); break;
      case CaseKind::riemann: run_riemann(ctx, rec); break;
    }
  } catch (const std::exception& e) {
    rec.error = e.what();
  }
  const auto finish = [](OrderResult& o) {
    o.ok = o.error.empty() && o.failures.empty();
    return o.ok;
  };
  rec.passed = rec.error.empty();
  for (auto& o : rec.orders) rec.passed = finish(o) && rec.passed;
  if (rec.hll) rec.passed = finish(*rec.hll) && rec.passed;
  if (const auto* c = check(spec, "runtime_max")) {
    rec.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    for (auto& o : rec.orders)
      if (o.stats.wall_time > (*c)[0]) {
        o.failures.push_back("wall time " + sci(o.stats.wall_time) + " s > " + sci((*c)[0]) + " s");
        o.ok = false;
        rec.passed = false;
      }
  }
  rec.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!out_dir.empty()) {
    fs::create_directories(out_dir / spec.id);
    std::ofstream(out_dir / spec.id / "record.json") << record_to_json(rec) << "\n";
  }
  return rec;
}

bool CatalogSummary::acceptance_passed() const {
  return std::all_of(records.begin(), records.end(),
                     [](const RunRecord& r) { return !r.acceptance || r.passed; });
}

CatalogSummary run_catalog(const std::vector<CaseSpec>& cases, const fs::path& out_dir, int jobs) {
  CatalogSummary summary;
  summary.records.resize(cases.size());
  if (jobs <= 1) {
    for (std::size_t k = 0; k < cases.size(); ++k) summary.records[k] = run_case(cases[k], out_dir);
  } else {
    std::size_t next = 0;
    while (next < cases.size()) {
      std::vector<std::future<RunRecord>> batch;
      const std::size_t first = next;
      for (int j = 0; j < jobs && next < cases.size(); ++j, ++next)
        batch.push_back(std::async(std::launch::async, run_case, std::cref(cases[next]), out_dir));
      for (std::size_t k = 0; k < batch.size(); ++k) summary.records[first + k] = batch[k].get();
    }
  }
  if (!out_dir.empty()) write_summary(summary.records, out_dir);
  return summary;
}

void write_summary(const std::vector<RunRecord>& records, const fs::path& out_dir) {
  fs::create_directories(out_dir);
  json cases = json::array();
  json wb = json::array(), eoc_table = json::array();
  bool accepted = true;
  for (const auto& r : records) {
    accepted = accepted && (!r.acceptance || r.passed);
    cases.push_back({{"id", r.id},
                     {"table", r.table},
                     {"kind", to_string(r.kind)},
                     {"eos", r.eos},
                     {"acceptance", r.acceptance},
                     {"surrogate", r.surrogate},
                     {"passed", r.passed},
                     {"mach", {r.mach_min, r.mach_max}},
                     {"hash", r.hash}});
    if (r.kind == CaseKind::well_balanced) {
      json row = {{"id", r.id}, {"eos", r.eos}, {"surrogate", r.surrogate}};
      for (const auto& o : r.orders) row["FWB" + std::to_string(o.order)] = norms_json(o.norms);
      if (r.hll) row["HLL"] = norms_json(r.hll->norms);
      wb.push_back(row);
    }
    if (r.kind == CaseKind::convergence) {
      json row = {{"id", r.id}, {"eos", r.eos}};
      for (const auto& o : r.orders) {
        json errs = json::array();
        for (std::size_t k = 0; k < o.grid_cells.size(); ++k)
          errs.push_back({o.grid_cells[k], o.grid_errors[k].rho});
        row["FWB" + std::to_string(o.order)] = {{"eoc", o.eoc}, {"rho_errors", errs}};
      }
      eoc_table.push_back(row);
    }
  }
  json j = {{"acceptance_passed", accepted},
            {"cases", cases},
            {"well_balanced_errors", wb},
            {"convergence", eoc_table}};
  std::ofstream(out_dir / "summary.json") << j.dump(2) << "\n";

  std::ofstream md(out_dir / "summary.md");
  md << "# Run summary\n\n";
  md << "Acceptance-tagged cases: " << (accepted ? "all passed" : "FAILURES") << "\n\n";
  md << "| case | table | eos | kind | result | notes |\n|---|---|---|---|---|---|\n";
  for (const auto& r : records) {
    std::string notes = r.error;
    for (const auto& o : r.orders) {
      for (const auto& f : o.failures) notes += (notes.empty() ? "" : "; ") + ("o" + std::to_string(o.order) + ": " + f);
      if (!o.error.empty()) notes += (notes.empty() ? "" : "; ") + ("o" + std::to_string(o.order) + ": " + o.error);
    }
    if (r.hll)
      for (const auto& f : r.hll->failures) notes += (notes.empty() ? "" : "; ") + ("HLL: " + f);
    md << "| " << r.id << (r.acceptance ? " (acceptance)" : "") << (r.surrogate ? " (surrogate)" : "")
       << " | " << r.table << " | " << r.eos << " | " << to_string(r.kind) << " | "
       << (r.passed ? "pass" : "FAIL") << " | " << notes << " |\n";
  }
  bool header = false;
  for (const auto& r : records) {
    if (r.kind != CaseKind::well_balanced) continue;
    if (!header) {
      md << "\n## L2 errors of the preserved equilibria\n\n| case | scheme | rho | q | E |\n|---|---|---|---|---|\n";
      header = true;
    }
    for (const auto& o : r.orders)
      md << "| " << r.id << " | FWB" << o.order << " | " << sci(o.norms.rho) << " | " << sci(o.norms.q)
         << " | " << sci(o.norms.E) << " |\n";
    if (r.hll)
      md << "| " << r.id << " | HLL | " << sci(r.hll->norms.rho) << " | " << sci(r.hll->norms.q) << " | "
         << sci(r.hll->norms.E) << " |\n";
  }
  header = false;
  for (const auto& r : records) {
    if (r.kind != CaseKind::convergence) continue;
    if (!header) {
      md << "\n## Convergence (density L2 error)\n\n| case | scheme | EOC | errors |\n|---|---|---|---|\n";
      header = true;
    }
    for (const auto& o : r.orders) {
      md << "| " << r.id << " | FWB" << o.order << " | " << std::to_string(o.eoc) << " | ";
      for (std::size_t k = 0; k < o.grid_cells.size(); ++k)
        md << (k ? ", " : "") << o.grid_cells[k] << ": " << sci(o.grid_errors[k].rho);
      md << " |\n";
    }
  }
}

std::vector<RunRecord> report(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw ConfigError("report: '" + dir.string() + "' is not a directory");
  std::vector<RunRecord> records;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const fs::path file = entry.path() / "record.json";
    if (!entry.is_directory() || !fs::exists(file)) continue;
    std::ifstream in(file);
    std::stringstream ss;
    ss << in.rdbuf();
    records.push_back(record_from_json(ss.str()));
  }
  std::sort(records.begin(), records.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  write_summary(records, dir);
  return records;
}

}  // namespace fwb

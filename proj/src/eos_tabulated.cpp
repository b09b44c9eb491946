#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "fwb/eos.hpp"
#include "fwb/errors.hpp"

namespace fwb {

namespace {

bool strictly_increasing(const std::vector<double>& v) {
  for (std::size_t k = 1; k < v.size(); ++k)
    if (!(v[k] > v[k - 1])) return false;
  return true;
}

bool is_uniform(const std::vector<double>& v) {
  const double h = (v.back() - v.front()) / static_cast<double>(v.size() - 1);
  for (std::size_t k = 0; k < v.size(); ++k) {
    const double expect = v.front() + h * static_cast<double>(k);
    if (std::abs(v[k] - expect) > 1e-12 * std::max(std::abs(v.back()), std::abs(v.front())))
      return false;
  }
  return true;
}

std::vector<double> linspace(double a, double b, std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t k = 0; k < n; ++k)
    v[k] = k + 1 == n ? b : a + (b - a) * static_cast<double>(k) / static_cast<double>(n - 1);
  return v;
}

}  // namespace

TabulatedEos::TabulatedEos(std::vector<double> rho, std::vector<double> e, std::vector<double> p,
                           std::vector<double> T, std::vector<double> s)
    : rho_(std::move(rho)), e_(std::move(e)), p_(std::move(p)), T_(std::move(T)), s_(std::move(s)) {
  const std::size_t n = rho_.size() * e_.size();
  if (rho_.size() < 2 || e_.size() < 2) throw ConfigError("eos table: need at least 2x2 nodes");
  if (p_.size() != n || T_.size() != n || s_.size() != n)
    throw ConfigError("eos table: value block size does not match the grid");
  if (!strictly_increasing(rho_) || !strictly_increasing(e_))
    throw ConfigError("eos table: grids must be strictly increasing");
  for (std::size_t k = 0; k < n; ++k)
    if (!(p_[k] > 0.0) || !(T_[k] > 0.0))
      throw ConfigError("eos table: pressures and temperatures must be positive");
  for (std::size_t i = 0; i < rho_.size(); ++i)
    for (std::size_t j = 1; j < e_.size(); ++j)
      if (!(at(s_, i, j) < at(s_, i, j - 1)))
        throw ConfigError("eos table: entropy must decrease strictly with e along each row");
  rho_uniform_ = is_uniform(rho_);
  e_uniform_ = is_uniform(e_);
}

TabulatedEos TabulatedEos::generate(const Eos& source, double rho_min, double rho_max,
                                    double e_min, double e_max, std::size_t n_rho,
                                    std::size_t n_e) {
  auto rho = linspace(rho_min, rho_max, n_rho);
  auto e = linspace(e_min, e_max, n_e);
  std::vector<double> p(n_rho * n_e), T(n_rho * n_e), s(n_rho * n_e);
  for (std::size_t i = 0; i < n_rho; ++i) {
    for (std::size_t j = 0; j < n_e; ++j) {
      const double tau = 1.0 / rho[i];
      const std::size_t k = i * n_e + j;
      p[k] = source.pressure(tau, e[j]);
      T[k] = source.temperature(tau, e[j]);
      s[k] = source.entropy(tau, e[j]);
    }
  }
  return TabulatedEos(std::move(rho), std::move(e), std::move(p), std::move(T), std::move(s));
}

void TabulatedEos::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write eos table '" + path + "'");
  char buf[32];
  const auto put = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out << buf;
  };
  const auto line = [&](const char* tag, const std::vector<double>& v) {
    out << tag;
    for (double x : v) {
      out << ' ';
      put(x);
    }
    out << '\n';
  };
  const auto block = [&](const char* tag, const std::vector<double>& v) {
    out << tag << '\n';
    for (std::size_t i = 0; i < rho_.size(); ++i) {
      for (std::size_t j = 0; j < e_.size(); ++j) {
        if (j) out << ' ';
        put(at(v, i, j));
      }
      out << '\n';
    }
  };
  out << "eostab v1 " << rho_.size() << ' ' << e_.size() << '\n';
  line("rho:", rho_);
  line("e:", e_);
  block("p:", p_);
  block("T:", T_);
  block("s:", s_);
  if (!out) throw ConfigError("error while writing eos table '" + path + "'");
}

TabulatedEos TabulatedEos::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open eos table '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  const char* cur = text.data();
  const char* end = cur + text.size();

  const auto skip_ws = [&] {
    while (cur < end && std::isspace(static_cast<unsigned char>(*cur))) ++cur;
  };
  const auto word = [&] {
    skip_ws();
    const char* b = cur;
    while (cur < end && !std::isspace(static_cast<unsigned char>(*cur))) ++cur;
    return std::string(b, cur);
  };
  const auto expect = [&](const std::string& w) {
    const std::string got = word();
    if (got != w) throw ConfigError("eos table: expected '" + w + "', found '" + got + "'");
  };
  const auto number = [&] {
    skip_ws();
    double v = 0.0;
    const auto res = std::from_chars(cur, end, v);
    if (res.ec != std::errc()) throw ConfigError("eos table: malformed number");
    cur = res.ptr;
    return v;
  };
  const auto count = [&] {
    const double v = number();
    if (v < 2 || v != std::floor(v)) throw ConfigError("eos table: invalid node count");
    return static_cast<std::size_t>(v);
  };
  const auto values = [&](std::size_t n) {
    std::vector<double> v(n);
    for (auto& x : v) x = number();
    return v;
  };

  expect("eostab");
  expect("v1");
  const std::size_t n_rho = count();
  const std::size_t n_e = count();
  expect("rho:");
  auto rho = values(n_rho);
  expect("e:");
  auto e = values(n_e);
  expect("p:");
  auto p = values(n_rho * n_e);
  expect("T:");
  auto T = values(n_rho * n_e);
  expect("s:");
  auto s = values(n_rho * n_e);
  return TabulatedEos(std::move(rho), std::move(e), std::move(p), std::move(T), std::move(s));
}

std::size_t TabulatedEos::locate(const std::vector<double>& nodes, bool uniform, double x) const {
  const std::size_t last = nodes.size() - 2;
  std::size_t i;
  if (uniform) {
    const double h = (nodes.back() - nodes.front()) / static_cast<double>(nodes.size() - 1);
    const double f = std::floor((x - nodes.front()) / h);
    i = f <= 0.0 ? 0 : std::min(static_cast<std::size_t>(f), last);
    while (i > 0 && x < nodes[i]) --i;
    while (i < last && x > nodes[i + 1]) ++i;
  } else {
    const auto it = std::upper_bound(nodes.begin(), nodes.end(), x);
    i = it == nodes.begin() ? 0 : static_cast<std::size_t>(it - nodes.begin()) - 1;
    i = std::min(i, last);
  }
  return i;
}

TabulatedEos::Cell TabulatedEos::cell(double rho, double e) const {
  if (!(rho >= rho_.front() && rho <= rho_.back() && e >= e_.front() && e <= e_.back()))
    throw OutOfHull("eos table: query (rho=" + std::to_string(rho) + ", e=" + std::to_string(e) +
                        ") outside the table hull",
                    rho, e);
  Cell c;
  c.i = locate(rho_, rho_uniform_, rho);
  c.j = locate(e_, e_uniform_, e);
  c.wr = (rho - rho_[c.i]) / (rho_[c.i + 1] - rho_[c.i]);
  c.we = (e - e_[c.j]) / (e_[c.j + 1] - e_[c.j]);
  return c;
}

TabulatedEos::Lookup TabulatedEos::lookup(double rho, double e) const {
  const Cell c = cell(rho, e);
  const auto interp = [&](const std::vector<double>& f) {
    return (1.0 - c.wr) * ((1.0 - c.we) * at(f, c.i, c.j) + c.we * at(f, c.i, c.j + 1)) +
           c.wr * ((1.0 - c.we) * at(f, c.i + 1, c.j) + c.we * at(f, c.i + 1, c.j + 1));
  };
  const double p00 = at(p_, c.i, c.j), p01 = at(p_, c.i, c.j + 1);
  const double p10 = at(p_, c.i + 1, c.j), p11 = at(p_, c.i + 1, c.j + 1);
  Lookup r;
  r.p = interp(p_);
  r.T = interp(T_);
  r.s = interp(s_);
  r.dp_drho = ((1.0 - c.we) * (p10 - p00) + c.we * (p11 - p01)) / (rho_[c.i + 1] - rho_[c.i]);
  r.dp_de = ((1.0 - c.wr) * (p01 - p00) + c.wr * (p11 - p10)) / (e_[c.j + 1] - e_[c.j]);
  return r;
}

double TabulatedEos::pressure(double tau, double e) const { return lookup(1.0 / tau, e).p; }
double TabulatedEos::temperature(double tau, double e) const { return lookup(1.0 / tau, e).T; }
double TabulatedEos::entropy(double tau, double e) const { return lookup(1.0 / tau, e).s; }

double TabulatedEos::invert_row(const std::vector<double>& f, double rho, double target) const {
  // At fixed rho the interpolant is piecewise linear in e, so the inverse is exact per cell.
  const Cell c = cell(rho, e_.front());
  const auto g = [&](std::size_t j) {
    return (1.0 - c.wr) * at(f, c.i, j) + c.wr * at(f, c.i + 1, j);
  };
  const std::size_t n = e_.size();
  const bool increasing = g(n - 1) > g(0);
  const double lo_v = increasing ? g(0) : g(n - 1);
  const double hi_v = increasing ? g(n - 1) : g(0);
  if (!(target >= lo_v && target <= hi_v))
    throw OutOfHull("eos table: value " + std::to_string(target) +
                        " not attained along the row at rho=" + std::to_string(rho),
                    rho, target);
  std::size_t lo = 0, hi = n - 1;
  while (hi - lo > 1) {
    const std::size_t mid = (lo + hi) / 2;
    const bool below = increasing ? g(mid) <= target : g(mid) >= target;
    (below ? lo : hi) = mid;
  }
  const double g0 = g(lo), g1 = g(hi);
  const double w = g1 == g0 ? 0.0 : (target - g0) / (g1 - g0);
  return e_[lo] + w * (e_[hi] - e_[lo]);
}

double TabulatedEos::energy_from_entropy(double tau, double s) const {
  return invert_row(s_, 1.0 / tau, s);
}

double TabulatedEos::energy_from_pressure(double tau, double p) const {
  return invert_row(p_, 1.0 / tau, p);
}

double TabulatedEos::sound_speed(double rho, double s) const {
  const double e = energy_from_entropy(1.0 / rho, s);
  const Lookup L = lookup(rho, e);
  const double c2 = L.dp_drho + L.p * L.dp_de / (rho * rho);
  if (!(c2 > 0.0)) throw DomainError("eos table: nonpositive squared sound speed");
  return std::sqrt(c2);
}

ThermoState TabulatedEos::thermo(double tau, double e) const {
  const double rho = 1.0 / tau;
  const Lookup L = lookup(rho, e);
  const double c2 = L.dp_drho + L.p * L.dp_de / (rho * rho);
  if (!(c2 > 0.0)) throw DomainError("eos table: nonpositive squared sound speed");
  return {tau, e, L.p, L.T, L.s, std::sqrt(c2)};
}

bool TabulatedEos::admissible(double tau, double e) const {
  const double rho = 1.0 / tau;
  if (!(rho >= rho_.front() && rho <= rho_.back() && e >= e_.front() && e <= e_.back()))
    return false;
  const Lookup L = lookup(rho, e);
  return L.p > 0.0 && L.T > 0.0;
}

}  // namespace fwb

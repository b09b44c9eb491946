#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "fwb/eos.hpp"
#include "fwb/errors.hpp"

namespace fwb {

std::string to_string(CubicVariant v) {
  switch (v) {
    case CubicVariant::ideal: return "ideal";
    case CubicVariant::vdw: return "vdw";
    case CubicVariant::rk: return "rk";
    case CubicVariant::pr: return "pr";
  }
  return "?";
}

CubicVariant cubic_variant_from_string(std::string_view name) {
  if (name == "ideal") return CubicVariant::ideal;
  if (name == "vdw" || name == "vdW") return CubicVariant::vdw;
  if (name == "rk" || name == "RK") return CubicVariant::rk;
  if (name == "pr" || name == "PR") return CubicVariant::pr;
  throw ConfigError("unknown EOS variant '" + std::string(name) + "'");
}

CubicParams CubicParams::defaults(CubicVariant v) {
  CubicParams p;
  p.variant = v;
  p.R = 0.4;
  p.cv0 = 1.0;
  switch (v) {
    case CubicVariant::ideal:
      p.s0 = std::log(0.4);
      break;
    case CubicVariant::vdw:
      p.s0 = std::log(0.4);
      p.a0 = 15.67;
      p.b = 0.1273;
      break;
    case CubicVariant::rk:
      p.a0 = 15.0;
      p.b = 0.05;
      p.r2 = -1.0;
      break;
    case CubicVariant::pr:
      p.a0 = 15.0;
      p.b = 0.05;
      p.r1 = -1.0 - std::numbers::sqrt2;
      p.r2 = -1.0 + std::numbers::sqrt2;
      p.T0 = 0.3;
      p.kappa = 0.5;
      break;
  }
  return p;
}

CubicEos::CubicEos(CubicParams params) : p_(params) {
  if (!(p_.R > 0.0) || !(p_.cv0 > 0.0) || p_.b < 0.0)
    throw ConfigError("cubic EOS: require R > 0, cv0 > 0, b >= 0");
  if (p_.variant == CubicVariant::ideal && p_.b != 0.0)
    throw ConfigError("cubic EOS: ideal gas requires b = 0");
  if (p_.variant != CubicVariant::ideal && p_.variant != CubicVariant::vdw && !(p_.b > 0.0))
    throw ConfigError("cubic EOS: RK and PR require b > 0");
  if (p_.variant == CubicVariant::pr && !(p_.T0 > 0.0))
    throw ConfigError("cubic EOS: PR requires T0 > 0");
}

std::string CubicEos::name() const { return to_string(p_.variant); }

void CubicEos::check_tau(double tau) const {
  if (!(tau > p_.b) || !std::isfinite(tau))
    throw DomainError("cubic EOS: specific volume " + std::to_string(tau) +
                      " not above covolume " + std::to_string(p_.b));
}

double CubicEos::attraction(double T) const {
  switch (p_.variant) {
    case CubicVariant::ideal: return 0.0;
    case CubicVariant::vdw: return p_.a0;
    case CubicVariant::rk: return p_.a0 / std::sqrt(T);
    case CubicVariant::pr: {
      const double g = 1.0 + p_.kappa * (1.0 - std::sqrt(T / p_.T0));
      return p_.a0 * g * g;
    }
  }
  return 0.0;
}

double CubicEos::attraction_d1(double T) const {
  switch (p_.variant) {
    case CubicVariant::ideal:
    case CubicVariant::vdw: return 0.0;
    case CubicVariant::rk: return -0.5 * p_.a0 / (T * std::sqrt(T));
    case CubicVariant::pr: {
      const double w = std::sqrt(T / p_.T0);
      const double g = 1.0 + p_.kappa * (1.0 - w);
      return -p_.a0 * p_.kappa * g * w / T;
    }
  }
  return 0.0;
}

double CubicEos::attraction_d2(double T) const {
  switch (p_.variant) {
    case CubicVariant::ideal:
    case CubicVariant::vdw: return 0.0;
    case CubicVariant::rk: return 0.75 * p_.a0 / (T * T * std::sqrt(T));
    case CubicVariant::pr: {
      const double w = std::sqrt(T / p_.T0);
      return p_.a0 * p_.kappa * (1.0 + p_.kappa) * w / (2.0 * T * T);
    }
  }
  return 0.0;
}

double CubicEos::volume_function(double tau) const {
  switch (p_.variant) {
    case CubicVariant::ideal: return 0.0;
    case CubicVariant::vdw: return -1.0 / tau;
    case CubicVariant::rk: return -std::log1p(p_.b / tau) / p_.b;
    case CubicVariant::pr: {
      const double d = p_.b * (p_.r2 - p_.r1);
      return std::log1p(d / (tau - p_.b * p_.r2)) / (p_.b * (p_.r1 - p_.r2));
    }
  }
  return 0.0;
}

double CubicEos::volume_function_d1(double tau) const {
  return 1.0 / ((tau - p_.b * p_.r1) * (tau - p_.b * p_.r2));
}

double CubicEos::pressure_tT(double tau, double T) const {
  check_tau(tau);
  if (!(T > 0.0)) throw DomainError("cubic EOS: nonpositive temperature");
  return p_.R * T / (tau - p_.b) - attraction(T) * volume_function_d1(tau);
}

double CubicEos::energy_tT(double tau, double T) const {
  check_tau(tau);
  if (!(T > 0.0)) throw DomainError("cubic EOS: nonpositive temperature");
  return p_.cv0 * T + (attraction(T) - T * attraction_d1(T)) * volume_function(tau);
}

double CubicEos::entropy_tT(double tau, double T) const {
  check_tau(tau);
  if (!(T > 0.0)) throw DomainError("cubic EOS: nonpositive temperature");
  return -(p_.s0 - attraction_d1(T) * volume_function(tau) + p_.R * std::log(tau - p_.b) +
           p_.cv0 * std::log(T));
}

double CubicEos::cv_tT(double tau, double T) const {
  return p_.cv0 - T * attraction_d2(T) * volume_function(tau);
}

double CubicEos::dp_dT(double tau, double T) const {
  return p_.R / (tau - p_.b) - attraction_d1(T) * volume_function_d1(tau);
}

double CubicEos::dp_dtau(double tau, double T) const {
  const double d1 = tau - p_.b * p_.r1;
  const double d2 = tau - p_.b * p_.r2;
  const double dU2 = -(d1 + d2) / (d1 * d1 * d2 * d2);
  const double v = tau - p_.b;
  return -p_.R * T / (v * v) - attraction(T) * dU2;
}

double CubicEos::sound_speed_tT(double tau, double T) const {
  const double pT = dp_dT(tau, T);
  const double c2 = tau * tau * (-dp_dtau(tau, T) + T * pT * pT / cv_tT(tau, T));
  if (!(c2 > 0.0)) throw DomainError("cubic EOS: nonpositive squared sound speed");
  return std::sqrt(c2);
}

double CubicEos::temperature_closed_form(double tau, double e) const {
  const double cv = p_.cv0;
  switch (p_.variant) {
    case CubicVariant::ideal: return e / cv;
    case CubicVariant::vdw: return (e - p_.a0 * volume_function(tau)) / cv;
    case CubicVariant::rk: {
      // y = sqrt(T) solves cv y^3 - e y + xi = 0 with xi < 0.
      const double xi = 1.5 * p_.a0 * volume_function(tau);
      const double rad = 27.0 * xi * xi * cv - 4.0 * e * e * e;
      if (rad >= 0.0) {
        const double c4 = std::cbrt(4.0);
        const double base = std::cbrt(std::sqrt(rad) - xi * std::sqrt(27.0 * cv));
        const double Xi = base * base;
        const double num = Xi + c4 * e;
        return num * num / (3.0 * c4 * cv * Xi);
      }
      // Three real roots: the largest is the only positive one.
      const double P = -e / cv;
      const double Q = xi / cv;
      const double m = 2.0 * std::sqrt(-P / 3.0);
      const double arg = std::clamp(3.0 * Q / (P * m), -1.0, 1.0);
      const double y = m * std::cos(std::acos(arg) / 3.0);
      return y * y;
    }
    case CubicVariant::pr: {
      // z = sqrt(T) solves cv z^2 - B z - c = 0; the attraction sign makes xi < 0.
      const double xi = p_.a0 * (p_.kappa + 1.0) * volume_function(tau);
      const double B = xi * p_.kappa / std::sqrt(p_.T0);
      const double c = e - (p_.kappa + 1.0) * xi;
      if (!(c > 0.0)) throw DomainError("PR EOS: internal energy below the zero-temperature limit");
      const double z = 2.0 * c / (std::sqrt(B * B + 4.0 * cv * c) - B);
      return z * z;
    }
  }
  return 0.0;
}

double CubicEos::temperature(double tau, double e) const {
  check_tau(tau);
  double T = temperature_closed_form(tau, e);
  if ((p_.variant == CubicVariant::rk || p_.variant == CubicVariant::pr) && T > 0.0 && std::isfinite(T)) {
    for (int k = 0; k < 2; ++k) T -= (energy_tT(tau, T) - e) / cv_tT(tau, T);
  }
  if (!(T > 0.0) || !std::isfinite(T))
    throw DomainError("cubic EOS: no positive temperature for (tau, e) = (" +
                      std::to_string(tau) + ", " + std::to_string(e) + ")");
  return T;
}

double CubicEos::pressure(double tau, double e) const {
  return pressure_tT(tau, temperature(tau, e));
}

double CubicEos::entropy(double tau, double e) const {
  return entropy_tT(tau, temperature(tau, e));
}

double CubicEos::temperature_from_entropy(double tau, double s) const {
  check_tau(tau);
  const double C = p_.R * std::log(tau - p_.b) + p_.s0 + s;
  if (p_.variant == CubicVariant::ideal || p_.variant == CubicVariant::vdw)
    return std::exp(-C / p_.cv0);

  // g(y) = cv0 y - a'(e^y) U + C is increasing and concave in y = log T, so
  // Newton converges monotonically after the first step.
  const double U = volume_function(tau);
  const auto g = [&](double y) { return p_.cv0 * y - attraction_d1(std::exp(y)) * U + C; };
  double y = -C / p_.cv0;
  for (int it = 0; it < 100; ++it) {
    const double T = std::exp(y);
    const double dg = p_.cv0 - T * attraction_d2(T) * U;
    const double dy = -g(y) / dg;
    y += std::max(dy, -50.0);
    if (std::abs(dy) <= 1e-15 * std::max(1.0, std::abs(y))) return std::exp(y);
  }

  // Bisection on a geometrically grown bracket.
  double lo = y - 1.0, hi = y + 1.0;
  for (int k = 0; k < 60 && g(lo) > 0.0; ++k) lo -= std::ldexp(1.0, k);
  for (int k = 0; k < 60 && g(hi) < 0.0; ++k) hi += std::ldexp(1.0, k);
  if (g(lo) > 0.0 || g(hi) < 0.0) throw NoConvergence("cubic EOS: entropy inversion failed");
  for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(lo)); ++it) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) < 0.0 ? lo : hi) = mid;
  }
  return std::exp(0.5 * (lo + hi));
}

double CubicEos::energy_from_entropy(double tau, double s) const {
  return energy_tT(tau, temperature_from_entropy(tau, s));
}

double CubicEos::temperature_from_pressure(double tau, double p) const {
  check_tau(tau);
  const double v = tau - p_.b;
  if (p_.variant == CubicVariant::ideal) return p * v / p_.R;
  if (p_.variant == CubicVariant::vdw) return (p + p_.a0 * volume_function_d1(tau)) * v / p_.R;

  double T = std::max(p * v / p_.R, 1e-6);
  for (int it = 0; it < 100; ++it) {
    const double f = pressure_tT(tau, T) - p;
    const double df = dp_dT(tau, T);
    double Tn = T - f / df;
    if (!(df > 0.0) || !std::isfinite(Tn)) break;
    if (Tn <= 0.0) Tn = 0.5 * T;
    if (std::abs(Tn - T) <= 1e-15 * T && dp_dT(tau, Tn) > 0.0) return Tn;
    T = Tn;
  }

  // Bisection fallback on the branch where p grows with T. With a(T) growing
  // at large T (Peng-Robinson) p(T) peaks, and the root below the peak is used.
  double lo = 1e-12, hi = std::max(1.0, 2.0 * T);
  for (int k = 0; k < 200 && pressure_tT(tau, hi) < p && dp_dT(tau, hi) > 0.0; ++k) hi *= 2.0;
  if (!(dp_dT(tau, hi) > 0.0)) {
    double a = lo, b = hi;
    for (int it = 0; it < 200 && b - a > 1e-15 * b; ++it) {
      const double mid = 0.5 * (a + b);
      (dp_dT(tau, mid) > 0.0 ? a : b) = mid;
    }
    hi = a;
  }
  if (pressure_tT(tau, lo) > p || pressure_tT(tau, hi) < p)
    throw NoConvergence("cubic EOS: pressure inversion failed");
  for (int it = 0; it < 300 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (pressure_tT(tau, mid) < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double CubicEos::energy_from_pressure(double tau, double p) const {
  return energy_tT(tau, temperature_from_pressure(tau, p));
}

double CubicEos::sound_speed(double rho, double s) const {
  const double tau = 1.0 / rho;
  return sound_speed_tT(tau, temperature_from_entropy(tau, s));
}

ThermoState CubicEos::thermo(double tau, double e) const {
  ThermoState t;
  t.tau = tau;
  t.e = e;
  t.T = temperature(tau, e);
  t.p = pressure_tT(tau, t.T);
  t.s = entropy_tT(tau, t.T);
  t.c = sound_speed_tT(tau, t.T);
  return t;
}

bool CubicEos::admissible(double tau, double e) const {
  if (!std::isfinite(tau) || !std::isfinite(e) || !(tau > p_.b)) return false;
  try {
    const double T = temperature(tau, e);
    if (!(pressure_tT(tau, T) > 0.0)) return false;
    sound_speed_tT(tau, T);
    return true;
  } catch (const DomainError&) {
    return false;
  }
}

}  // namespace fwb

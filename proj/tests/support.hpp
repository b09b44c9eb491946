#pragma once

#include <cmath>
#include <memory>
#include <random>

#include "fwb/eos.hpp"
#include "fwb/state.hpp"
#include "fwb/steady.hpp"

namespace fwb::testing {

inline constexpr CubicVariant kVariants[] = {CubicVariant::ideal, CubicVariant::vdw,
                                             CubicVariant::rk, CubicVariant::pr};

inline std::shared_ptr<const CubicEos> cubic(CubicVariant v) {
  return std::make_shared<CubicEos>(CubicParams::defaults(v));
}

/// Equilibrium triplets of the well-balanced benchmark, per variant.
inline SteadyTriplet reference_triplet(CubicVariant v) {
  switch (v) {
    case CubicVariant::ideal:
      return {1.0, 5.0, 1.0};
    case CubicVariant::vdw:
      return {2.5, 55.0, -3.0};
    case CubicVariant::rk:
      return {1.0, 12.5, -2.5};
    case CubicVariant::pr:
      return {5.0, 20.0, -2.0};
  }
  return {};
}

/// Sampling box in (tau, T) for a variant.
struct Box {
  double tau_lo, tau_hi, T_lo, T_hi;
};

inline Box box_of(const CubicEos& eos) {
  const double b = eos.covolume();
  return {b > 0.0 ? 1.2 * b : 0.1, 10.0, 0.5, 50.0};
}

class Sampler {
 public:
  explicit Sampler(unsigned seed) : rng_(seed) {}

  double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng_); }
  double log_uniform(double a, double b) { return std::exp(uniform(std::log(a), std::log(b))); }

  /// Random (tau, T) inside the box, log-uniform in both.
  std::pair<double, double> tau_T(const CubicEos& eos) {
    const Box bx = box_of(eos);
    return {log_uniform(bx.tau_lo, bx.tau_hi), log_uniform(bx.T_lo, bx.T_hi)};
  }

  /// Random admissible (tau, e), by rejection.
  std::pair<double, double> admissible_tau_e(const CubicEos& eos) {
    for (;;) {
      const auto [tau, T] = tau_T(eos);
      const double e = eos.energy_tT(tau, T);
      if (eos.admissible(tau, e)) return {tau, e};
    }
  }

  /// Random admissible conserved state with |u| <= u_max.
  ConservedState state(const CubicEos& eos, double u_max) {
    const auto [tau, e] = admissible_tau_e(eos);
    const double u = uniform(-u_max, u_max);
    return {1.0 / tau, u / tau, (e + 0.5 * u * u) / tau};
  }

  /// Random admissible state moving at a Mach number of at most m_max.
  ConservedState state_mach(const CubicEos& eos, double m_max) {
    const auto [tau, e] = admissible_tau_e(eos);
    const double u = uniform(-m_max, m_max) * eos.thermo(tau, e).c;
    return {1.0 / tau, u / tau, (e + 0.5 * u * u) / tau};
  }

  /// Random pair whose densities differ by at most the given ratio.
  std::pair<ConservedState, ConservedState> pair_mach(const CubicEos& eos, double m_max,
                                                      double ratio) {
    const ConservedState wl = state_mach(eos, m_max);
    for (;;) {
      const ConservedState wr = state_mach(eos, m_max);
      if (wr.rho < ratio * wl.rho && wl.rho < ratio * wr.rho) return {wl, wr};
    }
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

inline double rel_diff(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

/// Largest componentwise difference relative to the component magnitude.
inline double rel_diff(const ConservedState& a, const ConservedState& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < 3; ++k) {
    const double scale = std::max(std::abs(a[k]), std::abs(b[k]));
    if (scale > 0.0) m = std::max(m, std::abs(a[k] - b[k]) / scale);
  }
  return m;
}

}  // namespace fwb::testing

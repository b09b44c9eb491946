#pragma once

#include <cstddef>

namespace fwb {

/// Conserved variables of the one-dimensional Euler system: density,
/// momentum and total energy per unit volume.
struct ConservedState {
  double rho = 0.0;
  double q = 0.0;
  double E = 0.0;

  double velocity() const { return q / rho; }
  double specific_volume() const { return 1.0 / rho; }
  /// Specific internal energy.
  double internal_energy() const { return E / rho - 0.5 * q * q / (rho * rho); }

  double& operator[](std::size_t k) { return k == 0 ? rho : (k == 1 ? q : E); }
  double operator[](std::size_t k) const { return k == 0 ? rho : (k == 1 ? q : E); }

  ConservedState& operator+=(const ConservedState& o) {
    rho += o.rho;
    q += o.q;
    E += o.E;
    return *this;
  }
  ConservedState& operator-=(const ConservedState& o) {
    rho -= o.rho;
    q -= o.q;
    E -= o.E;
    return *this;
  }
  ConservedState& operator*=(double a) {
    rho *= a;
    q *= a;
    E *= a;
    return *this;
  }
};

inline ConservedState operator+(ConservedState a, const ConservedState& b) { return a += b; }
inline ConservedState operator-(ConservedState a, const ConservedState& b) { return a -= b; }
inline ConservedState operator*(double s, ConservedState a) { return a *= s; }
inline ConservedState operator*(ConservedState a, double s) { return a *= s; }
inline ConservedState operator/(ConservedState a, double s) { return a *= 1.0 / s; }

/// Primitive description used for initial data.
struct Primitive {
  double rho = 0.0;
  double u = 0.0;
  double p = 0.0;
};

}  // namespace fwb

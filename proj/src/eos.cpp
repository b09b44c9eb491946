#include "fwb/eos.hpp"

#include <cmath>

#include "fwb/errors.hpp"

namespace fwb {

double Eos::sound_speed_fd(double rho, double s, double rel_step) const {
  const double h = rel_step * rho;
  const auto p_at = [&](double r) { return pressure(1.0 / r, energy_from_entropy(1.0 / r, s)); };
  const double c2 = (p_at(rho + h) - p_at(rho - h)) / (2.0 * h);
  if (!(c2 > 0.0)) throw DomainError("sound speed: nonpositive dp/drho at constant entropy");
  return std::sqrt(c2);
}

double Eos::sound_speed(double rho, double s) const { return sound_speed_fd(rho, s); }

ThermoState Eos::thermo(double tau, double e) const {
  ThermoState t;
  t.tau = tau;
  t.e = e;
  t.p = pressure(tau, e);
  t.T = temperature(tau, e);
  t.s = entropy(tau, e);
  t.c = sound_speed(1.0 / tau, t.s);
  return t;
}

bool Eos::admissible(double tau, double e) const {
  if (!std::isfinite(tau) || !std::isfinite(e) || !(tau > covolume())) return false;
  try {
    return temperature(tau, e) > 0.0 && pressure(tau, e) > 0.0;
  } catch (const DomainError&) {
    return false;
  }
}

ConservedState to_conserved(const Eos& eos, const Primitive& w) {
  const double e = eos.energy_from_pressure(1.0 / w.rho, w.p);
  return {w.rho, w.rho * w.u, w.rho * (e + 0.5 * w.u * w.u)};
}

double pressure_of(const Eos& eos, const ConservedState& w) {
  return eos.pressure(1.0 / w.rho, w.internal_energy());
}

}  // namespace fwb

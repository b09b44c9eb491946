#include "fwb/steady.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fwb/errors.hpp"

namespace fwb {

double total_enthalpy(const Eos& eos, const ConservedState& w, double phi) {
  return (w.E + pressure_of(eos, w)) / w.rho + phi;
}

double mach_number(const Eos& eos, const ConservedState& w) {
  const ThermoState t = eos.thermo(1.0 / w.rho, w.internal_energy());
  return std::abs(w.velocity()) / t.c;
}

namespace {

struct Residual {
  double rH = 0.0;
  double rs = 0.0;
  bool ok = false;
};

Residual residual(const Eos& eos, const SteadyTriplet& tr, double phi, double rho, double e) {
  Residual r;
  const double tau = 1.0 / rho;
  if (!(rho > 0.0) || !eos.admissible(tau, e)) return r;
  try {
    const double u = tr.q0 / rho;
    r.rH = (e + eos.pressure(tau, e) * tau + 0.5 * u * u + phi - tr.H0) /
           std::max(1.0, std::abs(tr.H0));
    r.rs = (eos.entropy(tau, e) - tr.s0) / std::max(1.0, std::abs(tr.s0));
    r.ok = std::isfinite(r.rH) && std::isfinite(r.rs);
  } catch (const DomainError&) {
    r.ok = false;
  }
  return r;
}

ConservedState assemble(double rho, double q, double e) {
  return {rho, q, rho * e + 0.5 * q * q / rho};
}

}  // namespace

DensityEnergy steady_branch_guess(const Eos& eos, const SteadyTriplet& tr, double phi,
                                  Branch branch) {
  const double b = eos.covolume();
  const double rho_hi = b > 0.0 ? (1.0 - 1e-9) / b : 1e6;
  const double rho_lo = 1e-8;
  const auto g = [&](double rho) {
    try {
      const double tau = 1.0 / rho;
      const double e = eos.energy_from_entropy(tau, tr.s0);
      const double u = tr.q0 / rho;
      return e + eos.pressure(tau, e) * tau + 0.5 * u * u + phi - tr.H0;
    } catch (const DomainError&) {
      return std::numeric_limits<double>::quiet_NaN();
    }
  };

  const int n = 600;
  const double step = std::log(rho_hi / rho_lo) / n;
  double best_lo = 0.0, best_hi = 0.0;
  bool found = false;
  double prev_rho = rho_lo, prev_g = g(rho_lo);
  for (int k = 1; k <= n; ++k) {
    const double rho = rho_lo * std::exp(step * k);
    const double gk = g(rho);
    if (std::isfinite(prev_g) && std::isfinite(gk) && (prev_g < 0.0) != (gk < 0.0)) {
      if (!found || branch == Branch::subsonic) {
        best_lo = prev_rho;
        best_hi = rho;
      }
      found = true;
    }
    prev_rho = rho;
    prev_g = gk;
  }
  if (!found) throw DomainError("steady state: no equilibrium density for the given triplet");

  double glo = g(best_lo);
  for (int it = 0; it < 200 && best_hi - best_lo > 1e-15 * best_hi; ++it) {
    const double mid = 0.5 * (best_lo + best_hi);
    const double gm = g(mid);
    if ((gm < 0.0) == (glo < 0.0)) {
      best_lo = mid;
      glo = gm;
    } else {
      best_hi = mid;
    }
  }
  const double rho = 0.5 * (best_lo + best_hi);
  return {rho, eos.energy_from_entropy(1.0 / rho, tr.s0)};
}

ConservedState solve_steady_state(const Eos& eos, const SteadyTriplet& tr, double phi,
                                  DensityEnergy guess) {
  double rho = guess.rho, e = guess.e;
  Residual r = residual(eos, tr, phi, rho, e);
  if (!r.ok) throw DomainError("steady state: inadmissible initial guess");

  for (int it = 0; it < 100; ++it) {
    const double norm = std::abs(r.rH) + std::abs(r.rs);
    if (norm <= 1e-15) break;

    const double hr = 1e-7 * rho;
    const double he = 1e-7 * std::max(std::abs(e), 1e-3);
    const Residual rp = residual(eos, tr, phi, rho + hr, e);
    const Residual rm = residual(eos, tr, phi, rho - hr, e);
    const Residual ep = residual(eos, tr, phi, rho, e + he);
    const Residual em = residual(eos, tr, phi, rho, e - he);
    if (!rp.ok || !rm.ok || !ep.ok || !em.ok)
      throw NoConvergence("steady state: Jacobian probe left the admissible set");
    const double a11 = (rp.rH - rm.rH) / (2 * hr), a12 = (ep.rH - em.rH) / (2 * he);
    const double a21 = (rp.rs - rm.rs) / (2 * hr), a22 = (ep.rs - em.rs) / (2 * he);
    const double det = a11 * a22 - a12 * a21;
    if (det == 0.0 || !std::isfinite(det)) throw NoConvergence("steady state: singular Jacobian");
    const double drho = -(a22 * r.rH - a12 * r.rs) / det;
    const double de = -(-a21 * r.rH + a11 * r.rs) / det;

    double w = 1.0;
    Residual rn;
    for (int k = 0; k < 40; ++k, w *= 0.5) {
      rn = residual(eos, tr, phi, rho + w * drho, e + w * de);
      if (rn.ok) break;
    }
    if (!rn.ok) throw NoConvergence("steady state: damping failed to find an admissible step");
    const double new_norm = std::abs(rn.rH) + std::abs(rn.rs);
    if (new_norm >= norm && norm <= 1e-13) break;
    rho += w * drho;
    e += w * de;
    r = rn;
    if (std::abs(w * drho) <= 1e-16 * rho && std::abs(w * de) <= 1e-16 * std::abs(e)) break;
  }

  if (std::abs(r.rH) + std::abs(r.rs) > 1e-12)
    throw NoConvergence("steady state: Newton did not converge");
  const ConservedState w = assemble(rho, tr.q0, e);
  if (!(pressure_of(eos, w) > 0.0)) throw DomainError("steady state: nonpositive pressure root");
  return w;
}

std::vector<ConservedState> continue_steady(const Eos& eos, const SteadyTriplet& tr,
                                            const Potential& potential, ConservedState seed,
                                            const std::vector<double>& xs) {
  std::vector<ConservedState> out;
  out.reserve(xs.size());
  for (double x : xs) {
    seed = solve_steady_state(eos, tr, potential(x), {seed.rho, seed.internal_energy()});
    out.push_back(seed);
  }
  return out;
}

std::vector<ConservedState> steady_profile(const Eos& eos, const SteadyTriplet& tr,
                                           const Potential& potential, const Grid1D& grid,
                                           Branch branch, bool right_to_left) {
  const int n = grid.n_cells;
  std::vector<double> xs(n);
  for (int k = 0; k < n; ++k) xs[k] = grid.center(right_to_left ? n - 1 - k : k);
  const DensityEnergy g0 = steady_branch_guess(eos, tr, potential(xs.front()), branch);
  const ConservedState seed = solve_steady_state(eos, tr, potential(xs.front()), g0);
  auto out = continue_steady(eos, tr, potential, seed, xs);
  if (right_to_left) std::reverse(out.begin(), out.end());
  return out;
}

IssError iss_error(const Eos& eos, const ConservedState& wl, const ConservedState& wr,
                   double phi_l, double phi_r) {
  IssError d;
  d.dq = wr.q - wl.q;
  d.dH = total_enthalpy(eos, wr, phi_r) - total_enthalpy(eos, wl, phi_l);
  d.ds = eos.entropy(1.0 / wr.rho, wr.internal_energy()) -
         eos.entropy(1.0 / wl.rho, wl.internal_energy());
  return d;
}

}  // namespace fwb

#include "fwb/ars.hpp"

#include <cmath>
#include <numbers>

#include "fwb/errors.hpp"

namespace fwb {

double regularized_max(double eps, double z) {
  if (z < 0.5 * eps) return eps;
  if (z >= 1.5 * eps) return z;
  const double z2 = z * z;
  return -z2 * z2 / (2.0 * eps * eps * eps) + 2.0 * z2 * z / (eps * eps) - 2.25 * z2 / eps + z +
         27.0 * eps / 32.0;
}

double psi1(double z) {
  // cos(pi z/2) written as sin(pi (1 - |z|)/2) so that psi1(+-1) is exactly zero.
  const double c = std::sin(0.5 * std::numbers::pi * (1.0 - std::abs(z)));
  return c * std::exp(-2.0 * z * z);
}

double psi(double x, double y, int alpha, PsiParams params) {
  const double z = (x + y) / regularized_max(params.eps0, std::hypot(x, y));
  const double v = psi1(z);
  double r = 1.0;
  for (int k = 0; k < alpha; ++k) r *= v;
  return r;
}

ConservedState physical_flux(const ConservedState& w, double p) {
  const double u = w.q / w.rho;
  return {w.q, w.q * u + p, (w.E + p) * u};
}

InterfaceSide describe_side(const Eos& eos, const ConservedState& w, double phi) {
  if (!(w.rho > 0.0)) throw DomainError("interface: nonpositive density");
  const ThermoState t = eos.thermo(1.0 / w.rho, w.internal_energy());
  InterfaceSide s;
  s.w = w;
  s.phi = phi;
  s.u = w.q / w.rho;
  s.p = t.p;
  s.s = t.s;
  s.c = t.c;
  s.h = (w.E + t.p) / w.rho;
  return s;
}

namespace {

ConservedState hll_from_sides(const InterfaceSide& L, const InterfaceSide& R, double lambda) {
  const ConservedState FL = physical_flux(L.w, L.p);
  const ConservedState FR = physical_flux(R.w, R.p);
  return 0.5 * (L.w + R.w) - (FR - FL) / (2.0 * lambda);
}

double rho_s_hll_from_sides(const InterfaceSide& L, const InterfaceSide& R, double lambda) {
  return 0.5 * (L.w.rho * L.s + R.w.rho * R.s) - (R.w.q * R.s - L.w.q * L.s) / (2.0 * lambda);
}

/// Source averages; `psi3` is psi([phi],[h],3). Returns false if the
/// epsilon correction could not be evaluated (then it is dropped).
bool sources_from_sides(const Eos& eos, const InterfaceSide& L, const InterfaceSide& R,
                        double dx, double psi3, SourceAverages& out) {
  const double dphi = R.phi - L.phi;
  const double hmean = 2.0 * L.w.rho * R.w.rho / (L.w.rho + R.w.rho);
  out.SE = -0.5 * (L.w.q + R.w.q) * dphi / dx;
  out.Sq = -hmean * dphi / dx;
  if (psi3 == 0.0) return true;
  const double s_bar = 0.5 * (L.s + R.s);
  try {
    const double eR = eos.energy_from_entropy(1.0 / R.w.rho, s_bar);
    const double eL = eos.energy_from_entropy(1.0 / L.w.rho, s_bar);
    const double eps =
        -hmean * (eR - eL + 0.5 * (L.p + R.p) * (1.0 / R.w.rho - 1.0 / L.w.rho));
    out.Sq += eps / dx * psi3;
    return true;
  } catch (const DomainError&) {
    return false;
  } catch (const NoConvergence&) {
    return false;
  }
}

}  // namespace

double wave_speed(const Eos& eos, const ConservedState& wl, const ConservedState& wr,
                  double Lambda) {
  const InterfaceSide L = describe_side(eos, wl, 0.0);
  const InterfaceSide R = describe_side(eos, wr, 0.0);
  return Lambda * std::max(std::abs(L.u) + L.c, std::abs(R.u) + R.c);
}

ConservedState hll_state(const Eos& eos, const ConservedState& wl, const ConservedState& wr,
                         double lambda) {
  return hll_from_sides(describe_side(eos, wl, 0.0), describe_side(eos, wr, 0.0), lambda);
}

double hll_entropy_density(const Eos& eos, const ConservedState& wl, const ConservedState& wr,
                           double lambda) {
  return rho_s_hll_from_sides(describe_side(eos, wl, 0.0), describe_side(eos, wr, 0.0), lambda);
}

double delta_rho(const Eos& eos, const ConservedState& wl, const ConservedState& wr, double phi_l,
                 double phi_r) {
  const InterfaceSide L = describe_side(eos, wl, phi_l);
  const InterfaceSide R = describe_side(eos, wr, phi_r);
  return 0.5 * (wr.rho - wl.rho) * psi(phi_r - phi_l, R.h - L.h, 1);
}

SourceAverages source_averages(const Eos& eos, const ConservedState& wl,
                               const ConservedState& wr, double phi_l, double phi_r, double dx) {
  const InterfaceSide L = describe_side(eos, wl, phi_l);
  const InterfaceSide R = describe_side(eos, wr, phi_r);
  SourceAverages out;
  if (!sources_from_sides(eos, L, R, dx, psi(phi_r - phi_l, R.h - L.h, 3), out))
    throw DomainError("source averages: entropy inversion failed");
  return out;
}

InterfaceSolution intermediate_states(const Eos& eos, const ConservedState& wl,
                                      const ConservedState& wr, double phi_l, double phi_r,
                                      double dx, double Lambda) {
  return solve_interface(eos, describe_side(eos, wl, phi_l), describe_side(eos, wr, phi_r), dx,
                         Lambda);
}

InterfaceSolution solve_interface(const Eos& eos, const InterfaceSide& L, const InterfaceSide& R,
                                  double dx, double Lambda, PsiParams params) {
  InterfaceSolution sol;
  sol.wl = L.w;
  sol.wr = R.w;
  const double p1 = psi(R.phi - L.phi, R.h - L.h, 1, params);
  sol.delta_rho = 0.5 * (R.w.rho - L.w.rho) * p1;

  // Grow lambda until both intermediate densities are positive.
  sol.lambda = Lambda * std::max(std::abs(L.u) + L.c, std::abs(R.u) + R.c);
  if (!(sol.lambda > 0.0)) throw DomainError("interface: nonpositive wave speed");
  sol.w_hll = hll_from_sides(L, R, sol.lambda);
  while (!(sol.w_hll.rho > std::abs(sol.delta_rho))) {
    if (sol.lambda_doublings == 3)
      throw PositivityLoss("interface: HLL density not positive after safeguarding", -1);
    sol.lambda *= 2.0;
    ++sol.lambda_doublings;
    sol.w_hll = hll_from_sides(L, R, sol.lambda);
  }

  sol.rho_s_hll = rho_s_hll_from_sides(L, R, sol.lambda);
  sol.s_star = sol.rho_s_hll / sol.w_hll.rho;

  SourceAverages src;
  bool ok = sources_from_sides(eos, L, R, dx, p1 * p1 * p1, src);
  sol.Sq = src.Sq;
  sol.SE = src.SE;

  const double k = dx / (2.0 * sol.lambda);
  sol.w_hat = {sol.w_hll.rho, sol.w_hll.q + sol.Sq * k, sol.w_hll.E + sol.SE * k};

  // rho_HLL -/+ delta_rho, grouped so that an ISS (psi = 1, equal momenta)
  // returns the input densities bit for bit and psi = 0 returns rho_HLL.
  const double jump = 0.5 * (1.0 - p1) * (R.w.rho - L.w.rho);
  const double mass = (R.w.q - L.w.q) / (2.0 * sol.lambda);
  const double rl = p1 == 0.0 ? sol.w_hll.rho : L.w.rho + jump - mass;
  const double rr = p1 == 0.0 ? sol.w_hll.rho : R.w.rho - jump - mass;
  double el = 0.0, er = 0.0;
  if (ok) {
    try {
      el = eos.energy_from_entropy(1.0 / rl, sol.s_star);
      er = rr == rl ? el : eos.energy_from_entropy(1.0 / rr, sol.s_star);
    } catch (const DomainError&) {
      ok = false;
    } catch (const NoConvergence&) {
      ok = false;
    }
  }
  if (!ok) {
    sol.fallback = true;
    sol.delta_rho = 0.0;
    sol.WLstar = sol.WRstar = sol.w_hat;
    return sol;
  }

  // E_{L,R}* = rho* e* + q~^2/(2 rho*) with E_L* + E_R* = 2 E^.
  const double K = 2.0 * sol.w_hat.E - rl * el - rr * er;
  sol.q_tilde_sq = 2.0 * rl * rr / (rl + rr) * K;
  sol.delta_E = 0.5 * (rr * er - rl * el) - 0.5 * K * (rr - rl) / (rl + rr);

  sol.WLstar = {rl, sol.w_hat.q, sol.w_hat.E - sol.delta_E};
  sol.WRstar = {rr, sol.w_hat.q, sol.w_hat.E + sol.delta_E};
  return sol;
}

}  // namespace fwb

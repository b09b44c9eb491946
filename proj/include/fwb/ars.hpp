#pragma once

#include "fwb/eos.hpp"
#include "fwb/state.hpp"

namespace fwb {

/// Regularization floor of the psi switch.
struct PsiParams {
  double eps0 = 1e-12;
};

/// C2 regularized maximum M(eps, z) of eps and z >= 0.
double regularized_max(double eps, double z);
/// psi1(z) = cos(pi z / 2) exp(-2 z^2).
double psi1(double z);
/// psi(x, y, alpha) = psi1((x + y) / M(eps0, |(x, y)|))^alpha. Equals 1 iff x = -y.
double psi(double x, double y, int alpha, PsiParams params = {});

/// Euler flux of a state with known pressure.
ConservedState physical_flux(const ConservedState& w, double p);

/// Per-side data needed by the interface solver, computed once per cell.
struct InterfaceSide {
  ConservedState w;
  double phi = 0.0;
  double u = 0.0;
  double p = 0.0;
  double s = 0.0;
  double c = 0.0;
  double h = 0.0;  ///< specific enthalpy (E + p)/rho, without the potential
};

InterfaceSide describe_side(const Eos& eos, const ConservedState& w, double phi);

struct SourceAverages {
  double Sq = 0.0;
  double SE = 0.0;
};

/// Two-state approximate Riemann solution at one interface.
struct InterfaceSolution {
  ConservedState wl;  ///< left input state
  ConservedState wr;  ///< right input state
  double lambda = 0.0;
  ConservedState w_hll;
  double rho_s_hll = 0.0;
  double s_star = 0.0;
  ConservedState w_hat;
  ConservedState WLstar;
  ConservedState WRstar;
  double Sq = 0.0;
  double SE = 0.0;
  double delta_rho = 0.0;
  double delta_E = 0.0;
  double q_tilde_sq = 0.0;  ///< diagnostic only
  int lambda_doublings = 0;
  bool fallback = false;  ///< intermediate energies unavailable; collapsed to w_hat
};

double wave_speed(const Eos& eos, const ConservedState& wl, const ConservedState& wr,
                  double Lambda);
ConservedState hll_state(const Eos& eos, const ConservedState& wl, const ConservedState& wr,
                         double lambda);
double hll_entropy_density(const Eos& eos, const ConservedState& wl, const ConservedState& wr,
                           double lambda);
double delta_rho(const Eos& eos, const ConservedState& wl, const ConservedState& wr, double phi_l,
                 double phi_r);
SourceAverages source_averages(const Eos& eos, const ConservedState& wl,
                               const ConservedState& wr, double phi_l, double phi_r, double dx);

InterfaceSolution intermediate_states(const Eos& eos, const ConservedState& wl,
                                      const ConservedState& wr, double phi_l, double phi_r,
                                      double dx, double Lambda);

/// Same as intermediate_states with the side thermodynamics precomputed.
InterfaceSolution solve_interface(const Eos& eos, const InterfaceSide& L, const InterfaceSide& R,
                                  double dx, double Lambda, PsiParams params = {});

}  // namespace fwb

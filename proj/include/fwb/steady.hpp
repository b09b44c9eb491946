#pragma once

#include <vector>

#include "fwb/eos.hpp"
#include "fwb/grid.hpp"
#include "fwb/state.hpp"

namespace fwb {

/// Constant discharge, total enthalpy and entropy of a moving equilibrium.
struct SteadyTriplet {
  double q0 = 0.0;
  double H0 = 0.0;
  double s0 = 0.0;
};

/// Which root of the equilibrium relation to pick when two exist.
enum class Branch { subsonic, supersonic };

struct DensityEnergy {
  double rho = 0.0;
  double e = 0.0;
};

/// Specific total enthalpy H = (E + p)/rho + phi.
double total_enthalpy(const Eos& eos, const ConservedState& w, double phi);
double mach_number(const Eos& eos, const ConservedState& w);

/// Locates the requested branch by scanning density along the isentrope s = s0.
DensityEnergy steady_branch_guess(const Eos& eos, const SteadyTriplet& triplet, double phi,
                                  Branch branch);

/// Newton solve in (rho, e) of q = q0, H = H0, s = s0 at potential value phi.
ConservedState solve_steady_state(const Eos& eos, const SteadyTriplet& triplet, double phi,
                                  DensityEnergy guess);

/// Pointwise equilibrium at every cell center, built by continuation. With
/// `right_to_left` the sweep starts at the last cell.
std::vector<ConservedState> steady_profile(const Eos& eos, const SteadyTriplet& triplet,
                                           const Potential& potential, const Grid1D& grid,
                                           Branch branch, bool right_to_left = false);

/// Continues an equilibrium from a known state to the positions xs, in order.
std::vector<ConservedState> continue_steady(const Eos& eos, const SteadyTriplet& triplet,
                                            const Potential& potential, ConservedState seed,
                                            const std::vector<double>& xs);

struct IssError {
  double dq = 0.0;
  double dH = 0.0;
  double ds = 0.0;
};

/// Jumps of q, H and s across an interface.
IssError iss_error(const Eos& eos, const ConservedState& wl, const ConservedState& wr,
                   double phi_l, double phi_r);

}  // namespace fwb

#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "fwb/ars.hpp"
#include "fwb/eos.hpp"
#include "fwb/fv.hpp"
#include "fwb/state.hpp"

namespace fwb {

/// One step of the classical HLL scheme with the centered source
/// -rho_i (phi_{i+1} - phi_{i-1}) / (2 dx), independent of the interface solver.
std::vector<ConservedState> plain_hll_step(const Solver& solver,
                                           const std::vector<ConservedState>& w, double dt,
                                           double t);

/// Runs the plain HLL scheme with the solver's grid, boundary and time step.
RunResult run_plain_hll(Solver& solver, std::vector<ConservedState> w0, double t_final);

/// Entropy functions eta(s) with eta' >= 0 and eta'' >= 0.
enum class EntropyFunction { linear, exp_tenth };
std::string to_string(EntropyFunction f);
double eta(EntropyFunction f, double s);
double eta_d1(EntropyFunction f, double s);
double eta_d2(EntropyFunction f, double s);

struct EntropyReport {
  EntropyFunction eta = EntropyFunction::linear;
  double tolerance = 1e-11;
  long cells_checked = 0;
  long violations = 0;
  long unverifiable_interfaces = 0;
  double worst = 0.0;  ///< largest scaled violation (positive means increase)
  long worst_cell = -1;
  long worst_step = -1;
  std::vector<double> scaled;  ///< per-cell scaled residual of the last step

  void merge(const EntropyReport& other, long step);
};

/// Evaluates rho eta(s)^{n+1} - rho eta(s)^n + dt/dx (G_{i+1/2} - G_{i-1/2}) per
/// cell, with G taken upwind across the interface fan.
EntropyReport entropy_monitor(const Eos& eos, const std::vector<ConservedState>& before,
                              const std::vector<ConservedState>& after,
                              const std::vector<InterfaceSolution>& interfaces, double dt,
                              double dx, EntropyFunction f, double tol = 1e-11);

struct ConvexityReport {
  double bracket[3][2] = {};  ///< coefficients of eta' and eta'' per condition
  double value[3] = {};
  bool holds[3] = {};
  int first_failing = -1;  ///< -1 when every condition holds
  bool certified() const { return first_failing < 0; }
  std::string label() const;
};

/// Sufficient convexity conditions of U(W) = rho eta(s) at (rho, u, e).
ConvexityReport convexity_check(const Eos& eos, const ConservedState& w, double eta1,
                                double eta2);

struct ErrorNorms {
  double rho = 0.0;
  double q = 0.0;
  double E = 0.0;
  double max() const { return std::max({rho, q, E}); }
};

/// Discrete L2 norm sqrt(sum dx (w - ref)^2) per component.
ErrorNorms error_norms(const std::vector<ConservedState>& field,
                       const std::vector<ConservedState>& reference, double dx);

/// Least-squares slope of log(error) against log(dx) with dx ~ 1/n.
double eoc(const std::vector<double>& errors, const std::vector<int>& n_cells);

}  // namespace fwb

#pragma once

#include <array>
#include <functional>
#include <vector>

#include "fwb/ars.hpp"
#include "fwb/eos.hpp"
#include "fwb/grid.hpp"
#include "fwb/state.hpp"

namespace fwb {

constexpr int kGhostCells = 2;

enum class BoundaryKind { exact, dirichlet_steady, neumann, perturbed_momentum };

/// Boundary treatment of one side of the domain.
struct BoundarySide {
  BoundaryKind kind = BoundaryKind::neumann;
  /// State at (x, t); used by `exact`. Ghost cells receive this value.
  std::function<ConservedState(double x, double t)> exact;
  /// Steady ghost states ordered from the boundary outwards.
  std::array<ConservedState, kGhostCells> steady{};
  /// perturbed_momentum: q = q0 (1 + nu sin(kappa pi t)).
  double q0 = 0.0;
  double nu = 0.0;
  double kappa = 0.0;
};

struct BoundaryConditions {
  BoundarySide left;
  BoundarySide right;
};

/// Cells extended by two ghost cells on each side; index k holds cell k - 2.
std::vector<ConservedState> apply_boundary(const std::vector<ConservedState>& cells,
                                           const BoundaryConditions& bc, const Grid1D& grid,
                                           double t);

struct SchemeConfig {
  int order = 1;
  double Lambda = 1.0;
  double C_theta = 1.0;
  double cfl = 0.5;
  /// Smooth-extremum threshold of both limiters, in units of dx times
  /// the component reference magnitude.
  double extremum_ratio = 5.0;
  PsiParams psi;
};

/// Reference magnitudes of the steady-state detector.
struct DetectorRefs {
  double q = 1.0;
  double H = 1.0;
  double s = 1.0;
};

struct RunStats {
  long steps = 0;
  long interface_fallbacks = 0;
  long lambda_doublings = 0;
  long reverted_cells = 0;
  double min_rho = 0.0;
  double min_p = 0.0;
  long entropy_checked_cells = 0;
  long entropy_violations = 0;
  double max_entropy_violation = 0.0;
  double wall_time = 0.0;
};

/// Everything observable about a completed time step.
struct StepRecord {
  long step = 0;
  double t = 0.0;
  double dt = 0.0;
  const std::vector<ConservedState>* before = nullptr;
  const std::vector<ConservedState>* after = nullptr;
  /// First-order interface solutions (order 1 only), n + 1 entries.
  const std::vector<InterfaceSolution>* interfaces = nullptr;
};

struct RunResult {
  std::vector<ConservedState> w;
  double t = 0.0;
  RunStats stats;
};

using Stepper = std::function<std::vector<ConservedState>(const std::vector<ConservedState>&,
                                                          double dt, double t)>;

/// Finite-volume solver: first-order scheme built on the two-state interface
/// solver, and its second/third order extension with a steady-state detector.
class Solver {
 public:
  Solver(EosPtr eos, Potential potential, Grid1D grid, SchemeConfig config,
         BoundaryConditions bc);

  const Eos& eos() const { return *eos_; }
  const Grid1D& grid() const { return grid_; }
  const SchemeConfig& config() const { return config_; }
  const BoundaryConditions& boundary() const { return bc_; }
  const Potential& potential() const { return potential_; }
  /// Potential at extended cell k (cell k - 2).
  const std::vector<double>& phi_extended() const { return phi_ext_; }

  void set_detector_refs(const DetectorRefs& refs) {
    refs_ = refs;
    refs_set_ = true;
  }
  DetectorRefs detector_refs_from(const std::vector<ConservedState>& w) const;
  const DetectorRefs& detector_refs() const { return refs_; }
  /// Per-component magnitudes used by the smooth-extremum switch.
  void set_component_refs(const ConservedState& refs) {
    comp_refs_ = refs;
    comp_refs_set_ = true;
  }

  /// Maximum interface wave speed of the field at time t.
  double max_wave_speed(const std::vector<ConservedState>& w, double t) const;
  double compute_dt(const std::vector<ConservedState>& w, double t) const;

  std::vector<ConservedState> step_first_order(const std::vector<ConservedState>& w, double dt,
                                               double t,
                                               std::vector<InterfaceSolution>* interfaces = nullptr);
  std::vector<ConservedState> step_high_order(const std::vector<ConservedState>& w, double dt,
                                              double t);
  std::vector<ConservedState> step(const std::vector<ConservedState>& w, double dt, double t);

  /// Semi-discrete operator: dW/dt for the given order (1, 2 or 3).
  std::vector<ConservedState> rhs(const std::vector<ConservedState>& w, double t, int order,
                                  std::vector<InterfaceSolution>* interfaces = nullptr);

  /// Face traces (minus = left face, plus = right face) of cells -1..n.
  struct Traces {
    std::vector<ConservedState> minus, plus;
    std::vector<double> theta;  ///< max of the two face weights of each cell
  };
  Traces reconstruct(const std::vector<ConservedState>& ext, const std::vector<InterfaceSide>& sides,
                     int order);

  /// Detector weight theta of each face between extended cells j and j + 1.
  std::vector<double> detector(const std::vector<InterfaceSide>& sides, int order) const;

  /// Time loop up to t_final; `stepper` replaces the scheme when given.
  RunResult run(std::vector<ConservedState> w0, double t_final,
                const std::function<void(const StepRecord&)>& on_step = {},
                const Stepper& stepper = {});

  long interface_fallbacks() const { return fallbacks_; }
  long lambda_doublings() const { return doublings_; }
  long reverted_cells() const { return reverted_; }

 private:
  std::vector<InterfaceSide> describe_all(const std::vector<ConservedState>& ext) const;
  void check_admissible(const std::vector<ConservedState>& w, const char* where) const;

  EosPtr eos_;
  Potential potential_;
  Grid1D grid_;
  SchemeConfig config_;
  BoundaryConditions bc_;
  std::vector<double> phi_ext_;
  DetectorRefs refs_;
  ConservedState comp_refs_{1.0, 1.0, 1.0};
  bool refs_set_ = false;
  bool comp_refs_set_ = false;
  long fallbacks_ = 0;
  long doublings_ = 0;
  long reverted_ = 0;
};

/// Minimum density and pressure of a field.
std::pair<double, double> min_rho_p(const Eos& eos, const std::vector<ConservedState>& w);

}  // namespace fwb

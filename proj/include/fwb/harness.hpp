#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fwb/diagnostics.hpp"
#include "fwb/eos.hpp"
#include "fwb/fv.hpp"
#include "fwb/grid.hpp"
#include "fwb/steady.hpp"

namespace fwb {

/// Parameters of the travelling-wave solution under the potential phi(x) = x.
struct ExactParams {
  double rho0 = 2.0;
  double u0 = 0.25;
  double p0 = 5.0;
  double A = 0.25;
  double k = 4.0;
};

/// rho = rho0 (1 + A sin(k pi xi)), u = u0, p = p0 - rho0 (xi - A/(k pi) cos(k pi xi)),
/// with xi = x - u0 t.
Primitive exact_solution(const ExactParams& params, double x, double t);
/// Five-point Gauss-Legendre average of the exact solution over one cell.
ConservedState exact_cell_average(const Eos& eos, const ExactParams& params, double xc, double dx,
                                  double t);

enum class CaseKind { well_balanced, convergence, gaussian, boundary_wave, riemann };

std::string to_string(CaseKind k);
CaseKind case_kind_from_string(const std::string& name);

/// One catalogue experiment. Read from a key = value file; see catalog/.
struct CaseSpec {
  std::string id;
  std::string table;  ///< source table(s) of the reproduced row
  std::string description;
  CaseKind kind = CaseKind::well_balanced;
  bool acceptance = false;
  bool surrogate = false;

  std::string eos = "ideal";
  std::map<std::string, double> eos_params;  ///< overrides of CubicParams fields
  std::string eos_table;                     ///< eostab file used instead of the analytic EOS
  /// In-memory table generated from the analytic EOS (n_rho > 0 enables it).
  std::array<double, 2> table_rho{0.0, 0.0};
  std::array<double, 2> table_e{0.0, 0.0};
  std::array<int, 2> table_n{0, 0};
  bool compare_analytic = false;

  std::string potential = "quadratic";
  double phi0 = 1.0;
  double x0 = 0.5;
  double slope = 1.0;

  int cells = 50;
  double x_min = 0.0;
  double x_max = 1.0;
  double t_final = 0.0;
  std::vector<int> orders{1, 2, 3};
  SchemeConfig scheme;

  SteadyTriplet triplet;
  /// Alternative triplet source: (rho, u, p) at position triplet_x.
  std::optional<std::array<double, 3>> triplet_state;
  double triplet_x = 0.5;
  Branch branch = Branch::subsonic;

  ExactParams exact;
  std::vector<int> grids;
  int eoc_fit = 4;

  std::string vars = "rho_u_p";  ///< or q_s_H
  std::array<double, 3> left{0.0, 0.0, 0.0};
  std::array<double, 3> right{0.0, 0.0, 0.0};
  double jump = 0.5;
  Branch left_branch = Branch::subsonic;
  Branch right_branch = Branch::subsonic;

  double nu = 0.0;
  double kappa = 0.0;
  std::string side = "right";
  double gauss_width = 100.0;
  double gauss_cutoff = 0.0;  ///< 0: untruncated
  bool hll = false;

  std::map<std::string, std::vector<double>> checks;

  /// FNV-1a hash of the canonical key listing.
  std::string hash;
  std::filesystem::path origin;
};

CaseSpec parse_case(const std::string& text, const std::filesystem::path& origin = {});
CaseSpec load_case(const std::filesystem::path& path);
/// All *.case files of a directory, sorted by id.
std::vector<CaseSpec> load_catalog(const std::filesystem::path& dir);
/// Comma-separated glob patterns (* and ?) over case ids; empty selects nothing.
std::vector<CaseSpec> select_cases(const std::vector<CaseSpec>& all, const std::string& filter);
bool glob_match(const std::string& pattern, const std::string& text);

struct CaseOverrides {
  std::optional<int> order;
  std::optional<int> cells;
  std::optional<double> C_theta;
  std::optional<double> Lambda;
  std::optional<std::string> eos;
  std::optional<std::string> eos_table;
};
void apply_overrides(CaseSpec& spec, const CaseOverrides& o);

/// Analytic EOS of the case, with parameter overrides.
std::shared_ptr<const CubicEos> make_analytic_eos(const CaseSpec& spec);
/// EOS used by the run: the table when one is configured, the analytic EOS otherwise.
EosPtr make_eos(const CaseSpec& spec);
Potential make_potential(const CaseSpec& spec);
/// Steady triplet of the case, computed from triplet_state when given.
SteadyTriplet resolve_triplet(const Eos& eos, const CaseSpec& spec);

/// Equilibrium on the grid plus two ghost cells per side.
struct SteadySetup {
  Grid1D grid;
  std::vector<ConservedState> cells;
  BoundaryConditions bc;
  SteadyTriplet triplet;
  double mach_min = 0.0;
  double mach_max = 0.0;
};
SteadySetup steady_setup(const Eos& eos, const CaseSpec& spec);

/// Gaussian pressure perturbation p_eq (1 + nu exp(-width (x - 1/2)^2)).
std::vector<ConservedState> gaussian_perturbation(const Eos& eos, const Grid1D& grid,
                                                  const std::vector<ConservedState>& eq,
                                                  double nu, double width, double cutoff);
/// Builders of the two perturbation experiments from a steady case.
CaseSpec gaussian_perturbation_case(const CaseSpec& steady, double nu);
CaseSpec boundary_perturbation_case(const CaseSpec& steady, double nu, double kappa,
                                    const std::string& side);

/// Riemann initial data; q_s_H pairs are equilibria at each cell's potential.
std::vector<ConservedState> riemann_initial_data(const Eos& eos, const CaseSpec& spec,
                                                 const Grid1D& grid, const Potential& pot);

/// Cells of a field that information from `support` cannot have reached
/// after `steps` steps of a scheme of the given order.
std::vector<bool> unreached_cells(const std::vector<bool>& support, long steps, int order);

struct OrderResult {
  int order = 0;
  bool ok = true;
  std::string error;
  std::vector<std::string> failures;
  ErrorNorms norms;
  RunStats stats;
  // convergence
  std::vector<int> grid_cells;
  std::vector<ErrorNorms> grid_errors;
  double eoc = 0.0;
  // entropy
  std::vector<EntropyReport> entropy;
  // perturbations
  double eta_max = 0.0;
  double background = -1.0;
  long background_cells = 0;
  double amplitude_final = 0.0;
  double amplitude_max = 0.0;
  // tabulated vs analytic
  double analytic_difference = -1.0;
  std::vector<std::string> csv;
};

struct RunRecord {
  std::string id;
  std::string table;
  std::string hash;
  CaseKind kind = CaseKind::well_balanced;
  std::string eos;
  bool acceptance = false;
  bool surrogate = false;
  bool passed = true;
  std::string error;
  double mach_min = 0.0;
  double mach_max = 0.0;
  std::vector<OrderResult> orders;
  std::optional<OrderResult> hll;
  double wall_time = 0.0;
};

/// Runs one case; artifacts go to out_dir/<id>/ unless out_dir is empty.
RunRecord run_case(const CaseSpec& spec, const std::filesystem::path& out_dir = {});

struct CatalogSummary {
  std::vector<RunRecord> records;
  /// True iff every acceptance-tagged record passed.
  bool acceptance_passed() const;
};

CatalogSummary run_catalog(const std::vector<CaseSpec>& cases,
                           const std::filesystem::path& out_dir, int jobs = 1);

/// Field columns x, rho, u, p, q, E, s, H and, with a reference, the relative
/// perturbations (ref - value)/ref of rho, u and p. 17 significant digits.
void write_field_csv(const std::filesystem::path& path, const Eos& eos, const Grid1D& grid,
                     const Potential& pot, const std::vector<ConservedState>& w,
                     const std::vector<ConservedState>* reference = nullptr);

std::string record_to_json(const RunRecord& r);
RunRecord record_from_json(const std::string& text);
/// summary.json and summary.md of a set of records.
void write_summary(const std::vector<RunRecord>& records, const std::filesystem::path& out_dir);
/// Regenerates the summary from the record.json files below dir.
std::vector<RunRecord> report(const std::filesystem::path& dir);

}  // namespace fwb

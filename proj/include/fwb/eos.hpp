#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "fwb/state.hpp"

namespace fwb {

/// Full thermodynamic description of a state given (tau, e).
struct ThermoState {
  double tau = 0.0;
  double e = 0.0;
  double p = 0.0;
  double T = 0.0;
  double s = 0.0;  ///< mathematical (decreasing in e) entropy
  double c = 0.0;
};

/// Equation of state in terms of specific volume tau and specific internal
/// energy e. Entropy follows the mathematical sign convention.
class Eos {
 public:
  virtual ~Eos() = default;

  virtual std::string name() const = 0;
  /// Co-volume b: admissible states satisfy tau > b.
  virtual double covolume() const { return 0.0; }

  virtual double pressure(double tau, double e) const = 0;
  virtual double temperature(double tau, double e) const = 0;
  virtual double entropy(double tau, double e) const = 0;
  virtual double energy_from_entropy(double tau, double s) const = 0;
  virtual double energy_from_pressure(double tau, double p) const = 0;
  /// Sound speed c(rho, s) = sqrt(dp/drho at constant s).
  virtual double sound_speed(double rho, double s) const;
  virtual ThermoState thermo(double tau, double e) const;

  /// True when (tau, e) lies in the admissible set: tau > b, T > 0, p > 0 and c^2 > 0.
  virtual bool admissible(double tau, double e) const;

  /// Sound speed by a central difference of p(rho, s) along the isentrope.
  double sound_speed_fd(double rho, double s, double rel_step = 1e-6) const;
};

enum class CubicVariant { ideal, vdw, rk, pr };

std::string to_string(CubicVariant v);
CubicVariant cubic_variant_from_string(std::string_view name);

struct CubicParams {
  CubicVariant variant = CubicVariant::ideal;
  double R = 0.4;
  double cv0 = 1.0;
  double s0 = 0.0;
  double a0 = 0.0;
  double b = 0.0;
  double r1 = 0.0;
  double r2 = 0.0;
  double T0 = 1.0;
  double kappa = 0.0;

  /// Reference parameter sets of the benchmark catalogue.
  static CubicParams defaults(CubicVariant v);
};

/// Cubic equation of state p = RT/(tau-b) - a(T)/((tau-b r1)(tau-b r2)) with
/// the thermodynamically consistent caloric closure
///   e = cv0 T + (a - T a') U(tau),   dU/dtau = 1/((tau-b r1)(tau-b r2)).
class CubicEos final : public Eos {
 public:
  explicit CubicEos(CubicParams params);

  std::string name() const override;
  double covolume() const override { return p_.b; }
  const CubicParams& params() const { return p_; }

  double pressure(double tau, double e) const override;
  double temperature(double tau, double e) const override;
  double entropy(double tau, double e) const override;
  double energy_from_entropy(double tau, double s) const override;
  double energy_from_pressure(double tau, double p) const override;
  double sound_speed(double rho, double s) const override;
  ThermoState thermo(double tau, double e) const override;
  bool admissible(double tau, double e) const override;

  // (tau, T) formulation.
  double pressure_tT(double tau, double T) const;
  double energy_tT(double tau, double T) const;
  double entropy_tT(double tau, double T) const;
  double cv_tT(double tau, double T) const;
  double sound_speed_tT(double tau, double T) const;
  double dp_dT(double tau, double T) const;
  double dp_dtau(double tau, double T) const;
  double temperature_from_pressure(double tau, double p) const;
  double temperature_from_entropy(double tau, double s) const;

  double attraction(double T) const;
  double attraction_d1(double T) const;
  double attraction_d2(double T) const;
  /// U(tau) = u(tau)/b, the integral of 1/((tau-b r1)(tau-b r2)).
  double volume_function(double tau) const;
  double volume_function_d1(double tau) const;

 private:
  void check_tau(double tau) const;
  double temperature_closed_form(double tau, double e) const;

  CubicParams p_;
};

/// Bilinearly interpolated equation of state on a (rho, e) tensor grid.
class TabulatedEos final : public Eos {
 public:
  TabulatedEos(std::vector<double> rho, std::vector<double> e, std::vector<double> p,
               std::vector<double> T, std::vector<double> s);

  static TabulatedEos generate(const Eos& source, double rho_min, double rho_max, double e_min,
                               double e_max, std::size_t n_rho, std::size_t n_e);
  static TabulatedEos load(const std::string& path);
  void save(const std::string& path) const;

  std::string name() const override { return "table"; }

  double pressure(double tau, double e) const override;
  double temperature(double tau, double e) const override;
  double entropy(double tau, double e) const override;
  double energy_from_entropy(double tau, double s) const override;
  double energy_from_pressure(double tau, double p) const override;
  double sound_speed(double rho, double s) const override;
  ThermoState thermo(double tau, double e) const override;
  bool admissible(double tau, double e) const override;

  /// Interpolated (p, T, s) at (rho, e).
  struct Lookup {
    double p, T, s, dp_drho, dp_de;
  };
  Lookup lookup(double rho, double e) const;

  std::size_t n_rho() const { return rho_.size(); }
  std::size_t n_e() const { return e_.size(); }
  const std::vector<double>& rho_nodes() const { return rho_; }
  const std::vector<double>& e_nodes() const { return e_; }

 private:
  struct Cell {
    std::size_t i, j;
    double wr, we;
  };
  std::size_t locate(const std::vector<double>& nodes, bool uniform, double x) const;
  Cell cell(double rho, double e) const;
  double at(const std::vector<double>& f, std::size_t i, std::size_t j) const {
    return f[i * e_.size() + j];
  }
  double invert_row(const std::vector<double>& f, double rho, double target) const;

  std::vector<double> rho_, e_, p_, T_, s_;
  bool rho_uniform_ = false;
  bool e_uniform_ = false;
};

/// Shared handle used by the scheme and harness.
using EosPtr = std::shared_ptr<const Eos>;

/// Converts primitive variables to conserved ones.
ConservedState to_conserved(const Eos& eos, const Primitive& w);
/// Pressure of a conserved state.
double pressure_of(const Eos& eos, const ConservedState& w);

}  // namespace fwb

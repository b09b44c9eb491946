#pragma once

#include <string>
#include <vector>

namespace fwb {

/// Uniform partition of [x_min, x_max] into n cells.
struct Grid1D {
  double x_min = 0.0;
  double x_max = 1.0;
  int n_cells = 0;

  Grid1D() = default;
  Grid1D(double a, double b, int n);

  double dx() const { return (x_max - x_min) / n_cells; }
  /// Cell center; negative indices and indices >= n_cells address ghost cells.
  double center(int i) const { return x_min + (i + 0.5) * dx(); }
};

/// Time-independent gravitational potential.
class Potential {
 public:
  enum class Kind { zero, linear, quadratic, sampled };

  static Potential zero();
  /// phi(x) = slope * x
  static Potential linear(double slope = 1.0);
  /// phi(x) = phi0/2 (x - x0)^2
  static Potential quadratic(double phi0, double x0);
  /// Piecewise linear through (xs, values), extrapolated linearly outside.
  static Potential sampled(std::vector<double> xs, std::vector<double> values);

  double operator()(double x) const;
  double derivative(double x) const;

  Kind kind() const { return kind_; }
  double phi0() const { return phi0_; }
  double x0() const { return x0_; }
  std::string describe() const;

 private:
  Kind kind_ = Kind::zero;
  double phi0_ = 0.0;
  double x0_ = 0.0;
  std::vector<double> xs_, values_;
};

}  // namespace fwb

#include "fwb/grid.hpp"

#include <algorithm>
#include <sstream>

#include "fwb/errors.hpp"

namespace fwb {

Grid1D::Grid1D(double a, double b, int n) : x_min(a), x_max(b), n_cells(n) {
  if (!(b > a)) throw ConfigError("grid: x_max must exceed x_min");
  if (n < 3) throw ConfigError("grid: at least 3 cells required");
}

Potential Potential::zero() { return Potential{}; }

Potential Potential::linear(double slope) {
  Potential p;
  p.kind_ = Kind::linear;
  p.phi0_ = slope;
  return p;
}

Potential Potential::quadratic(double phi0, double x0) {
  Potential p;
  p.kind_ = Kind::quadratic;
  p.phi0_ = phi0;
  p.x0_ = x0;
  return p;
}

Potential Potential::sampled(std::vector<double> xs, std::vector<double> values) {
  if (xs.size() < 2 || xs.size() != values.size())
    throw ConfigError("potential: need at least two matching samples");
  for (std::size_t k = 1; k < xs.size(); ++k)
    if (!(xs[k] > xs[k - 1])) throw ConfigError("potential: sample abscissae must increase");
  Potential p;
  p.kind_ = Kind::sampled;
  p.xs_ = std::move(xs);
  p.values_ = std::move(values);
  return p;
}

double Potential::operator()(double x) const {
  switch (kind_) {
    case Kind::zero: return 0.0;
    case Kind::linear: return phi0_ * x;
    case Kind::quadratic: return 0.5 * phi0_ * (x - x0_) * (x - x0_);
    case Kind::sampled: {
      const auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
      std::size_t k = it == xs_.begin() ? 0 : static_cast<std::size_t>(it - xs_.begin()) - 1;
      k = std::min(k, xs_.size() - 2);
      const double w = (x - xs_[k]) / (xs_[k + 1] - xs_[k]);
      return (1.0 - w) * values_[k] + w * values_[k + 1];
    }
  }
  return 0.0;
}

double Potential::derivative(double x) const {
  switch (kind_) {
    case Kind::zero: return 0.0;
    case Kind::linear: return phi0_;
    case Kind::quadratic: return phi0_ * (x - x0_);
    case Kind::sampled: {
      const auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
      std::size_t k = it == xs_.begin() ? 0 : static_cast<std::size_t>(it - xs_.begin()) - 1;
      k = std::min(k, xs_.size() - 2);
      return (values_[k + 1] - values_[k]) / (xs_[k + 1] - xs_[k]);
    }
  }
  return 0.0;
}

std::string Potential::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::zero: os << "zero"; break;
    case Kind::linear: os << "linear(slope=" << phi0_ << ")"; break;
    case Kind::quadratic: os << "quadratic(phi0=" << phi0_ << ", x0=" << x0_ << ")"; break;
    case Kind::sampled: os << "sampled(" << xs_.size() << " points)"; break;
  }
  return os.str();
}

}  // namespace fwb

#pragma once

#include <stdexcept>
#include <string>

namespace fwb {

/// A thermodynamic query outside the admissible set (tau <= b, T <= 0, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A tabulated lookup outside the convex hull of the table nodes.
class OutOfHull : public DomainError {
 public:
  OutOfHull(const std::string& what, double rho, double e)
      : DomainError(what), rho_(rho), e_(e) {}
  double rho() const { return rho_; }
  double e() const { return e_; }

 private:
  double rho_;
  double e_;
};

/// An iterative solver did not reach its tolerance.
class NoConvergence : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The scheme produced a non-admissible state.
class PositivityLoss : public std::runtime_error {
 public:
  PositivityLoss(const std::string& what, long cell) : std::runtime_error(what), cell_(cell) {}
  long cell() const { return cell_; }

 private:
  long cell_;
};

/// Malformed configuration or case file.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace fwb

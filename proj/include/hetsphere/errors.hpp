#pragma once

#include <stdexcept>
#include <string>

namespace hetsphere {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Base for failures of a density to satisfy its invariants.
class DensityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class PositivityViolation : public DensityError {
 public:
  PositivityViolation(double theta, double phi, double value);
  double theta() const { return theta_; }
  double phi() const { return phi_; }
  double value() const { return value_; }

 private:
  double theta_, phi_, value_;
};

class RealityViolation : public DensityError {
 public:
  RealityViolation(int l, int m);
  int l() const { return l_; }
  int m() const { return m_; }

 private:
  int l_, m_;
};

/// Closed-form Green's function requested at a limit point it does not implement.
class SingularPoint : public DomainError {
 public:
  using DomainError::DomainError;
};

class NonConverged : public std::runtime_error {
 public:
  NonConverged(const std::string& what, double estimate);
  double estimate() const { return estimate_; }

 private:
  double estimate_;
};

class UnsupportedOrder : public DomainError {
 public:
  explicit UnsupportedOrder(int p);
};

class NotPositiveDefinite : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hetsphere

#include "hetsphere/errors.hpp"

#include <cstdio>

namespace hetsphere {

namespace {
std::string positivity_message(double theta, double phi, double value) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "density not positive: Sigma(theta=%.6f, phi=%.6f) = %.6e", theta,
                phi, value);
  return buf;
}
}  // namespace

PositivityViolation::PositivityViolation(double theta, double phi, double value)
    : DensityError(positivity_message(theta, phi, value)), theta_(theta), phi_(phi), value_(value) {}

RealityViolation::RealityViolation(int l, int m)
    : DensityError("density not real: c(" + std::to_string(l) + "," + std::to_string(-m) +
                   ") != (-1)^m conj(c(" + std::to_string(l) + "," + std::to_string(m) + "))"),
      l_(l),
      m_(m) {}

NonConverged::NonConverged(const std::string& what, double estimate)
    : std::runtime_error(what), estimate_(estimate) {}

UnsupportedOrder::UnsupportedOrder(int p)
    : DomainError("unsupported sum-rule order " + std::to_string(p) + " (only 2 and 3)") {}

}  // namespace hetsphere

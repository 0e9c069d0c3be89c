#include "hetsphere/greens.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "hetsphere/errors.hpp"
#include "hetsphere/polylog.hpp"

namespace hetsphere {

namespace {
constexpr double kFourPi = 4.0 * std::numbers::pi;
constexpr double kPi2Over6 = std::numbers::pi * std::numbers::pi / 6.0;
}  // namespace

GeodesicCosine GeodesicCosine::between(double theta1, double phi1, double theta2, double phi2) {
  const double x = std::sin(theta1) * std::sin(theta2) * std::cos(phi1 - phi2) +
                   std::cos(theta1) * std::cos(theta2);
  return {std::clamp(x, -1.0, 1.0)};
}

double legendre_p(int l, double x) {
  if (l < 0) throw DomainError("negative Legendre degree");
  double p0 = 1.0, p1 = x;
  if (l == 0) return p0;
  for (int k = 2; k <= l; ++k) {
    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

double green_closed(int q, double x) {
  if (!(x >= -1.0 && x <= 1.0)) throw DomainError("geodesic cosine outside [-1, 1]");
  switch (q) {
    case 0:
      if (x == 1.0) throw SingularPoint("G^(0) is logarithmically singular at x = 1");
      return (std::numbers::ln2 - 1.0 - std::log1p(-x)) / kFourPi;
    case 1: {
      if (x == -1.0) throw SingularPoint("G^(1) closed form needs a limit at x = -1");
      if (x == 1.0) return 1.0 / kFourPi;
      if (x >= 0.0) {
        const double a = std::log((1.0 - x) / (1.0 + x));
        const double b = std::log(2.0 / (1.0 + x));
        return (a * b - 0.5 * b * b + dilog(-(1.0 - x) / (1.0 + x)) + 1.0) / kFourPi;
      }
      // Same function after Li2(z) + Li2(1/z) = -π²/6 - ln²(-z)/2, which keeps
      // the dilog argument inside [-1, 0] and removes the cancelling logs.
      const double c = std::log((1.0 - x) / 2.0);
      return (1.0 - kPi2Over6 - 0.5 * c * c - dilog(-(1.0 + x) / (1.0 - x))) / kFourPi;
    }
    case 2: {
      const double u = 0.5 * (1.0 - x);
      const double v = 0.5 * (1.0 + x);
      const double log_term = (u == 0.0) ? 0.0 : std::log(u) * dilog(u);
      return (kPi2Over6 - 2.0 + 2.0 * kZeta3 + log_term - dilog(v) - 2.0 * trilog(u)) / kFourPi;
    }
    default:
      throw DomainError("closed-form Green's function only for q in {0, 1, 2}, got " +
                        std::to_string(q));
  }
}

namespace {

template <typename Visit>
void for_each_partial_sum(int q, double x, int L, Visit&& visit) {
  if (q < 0) throw DomainError("Green's function order must be >= 0");
  if (L < 1) throw DomainError("series truncation must be >= 1");
  double p0 = 1.0, p1 = x;
  double sum = 0.0, comp = 0.0;
  for (int l = 1; l <= L; ++l) {
    if (l >= 2) {
      const double p2 = ((2.0 * l - 1.0) * x * p1 - (l - 1.0) * p0) / l;
      p0 = p1;
      p1 = p2;
    }
    const double ll = static_cast<double>(l) * (l + 1);
    const double term = (2.0 * l + 1.0) / std::pow(ll, q + 1) * p1;
    const double y = term - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
    visit(sum / kFourPi);
  }
}

}  // namespace

double green_series(int q, double x, int L) {
  double last = 0.0;
  for_each_partial_sum(q, x, L, [&](double s) { last = s; });
  return last;
}

double green_series_cesaro(int q, double x, int L) {
  double total = 0.0;
  for_each_partial_sum(q, x, L, [&](double s) { total += s; });
  return total / L;
}

}  // namespace hetsphere

#include "hetsphere/polylog.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "hetsphere/errors.hpp"

namespace hetsphere {

namespace {

constexpr double kPi2Over6 = std::numbers::pi * std::numbers::pi / 6.0;

void check_unit_interval(double z, const char* name) {
  if (!(z >= -1.0 && z <= 1.0)) {
    throw DomainError(std::string(name) + " argument outside [-1, 1]: " + std::to_string(z));
  }
}

// Σ z^k / k^s for |z| <= 1/2.
double power_series(double z, int s) {
  double sum = 0.0, zk = z;
  for (int k = 1; k < 200; ++k) {
    const double term = zk / std::pow(static_cast<double>(k), s);
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    zk *= z;
  }
  return sum;
}

// Li_3(e^mu) around mu = 0; converges for |mu| < 2π, used for |mu| <= ln 2.
double trilog_log_series(double mu) {
  if (mu == 0.0) return kZeta3;
  // ζ(3 - k) for k = 3, 4, ...; odd k >= 5 give ζ at negative even integers, which vanish.
  static constexpr std::array<double, 16> zeta_neg = {
      -0.5,        -1.0 / 12.0, 0.0, 1.0 / 120.0,        0.0, -1.0 / 252.0,   0.0, 1.0 / 240.0,
      0.0,         -1.0 / 132.0, 0.0, 691.0 / 32760.0,   0.0, -1.0 / 12.0,    0.0, 3617.0 / 8160.0};
  double sum = kZeta3 + kPi2Over6 * mu + 0.5 * mu * mu * (1.5 - std::log(-mu));
  double mk = mu * mu / 2.0;
  for (int k = 3; k < 3 + static_cast<int>(zeta_neg.size()); ++k) {
    mk *= mu / k;
    sum += zeta_neg[k - 3] * mk;
  }
  return sum;
}

}  // namespace

double dilog(double z) {
  check_unit_interval(z, "dilog");
  if (z == 1.0) return kPi2Over6;
  if (z > 0.5) return kPi2Over6 - std::log(z) * std::log1p(-z) - dilog(1.0 - z);
  if (z < -0.5) {
    const double l = std::log1p(-z);
    return -dilog(z / (z - 1.0)) - 0.5 * l * l;
  }
  return power_series(z, 2);
}

double trilog(double z) {
  check_unit_interval(z, "trilog");
  if (z > 0.5) return trilog_log_series(std::log(z));
  if (z < -0.5) return 0.25 * trilog(z * z) - trilog(-z);
  return power_series(z, 3);
}

double hurwitz_zeta(int s, double a) {
  if (s < 2) throw DomainError("hurwitz_zeta needs s >= 2");
  if (!(a >= 1.0)) throw DomainError("hurwitz_zeta needs a >= 1");
  // Direct terms until the Euler-Maclaurin remainder is negligible.
  constexpr double kShift = 16.0;
  const int direct = a < kShift ? static_cast<int>(std::ceil(kShift - a)) : 0;
  double head = 0.0;
  for (int n = direct - 1; n >= 0; --n) head += std::pow(a + n, -s);
  const double b = a + direct;

  // B_2k / (2k)!
  static constexpr std::array<double, 8> bernoulli_over_factorial = {
      1.0 / 12.0,          -1.0 / 720.0,          1.0 / 30240.0,          -1.0 / 1209600.0,
      1.0 / 47900160.0,    -691.0 / 1307674368000.0, 1.0 / 74724249600.0, -3617.0 / 10670622842880000.0};
  double tail = std::pow(b, 1 - s) / (s - 1) + 0.5 * std::pow(b, -s);
  double rising = s;  // s (s+1) ... (s + 2k - 2)
  double power = std::pow(b, -s - 1);
  for (std::size_t k = 0; k < bernoulli_over_factorial.size(); ++k) {
    const double term = bernoulli_over_factorial[k] * rising * power;
    tail += term;
    rising *= (s + 2.0 * k + 1.0) * (s + 2.0 * k + 2.0);
    power /= b * b;
  }
  return tail + head;
}

double riemann_zeta(int s) {
  if (s == 2) return kPi2Over6;
  if (s == 3) return kZeta3;
  return hurwitz_zeta(s, 1.0);
}

}  // namespace hetsphere

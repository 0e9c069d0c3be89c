#include "hetsphere/harmonics.hpp"

#include <cmath>
#include <numbers>

#include "hetsphere/errors.hpp"

namespace hetsphere {

HarmonicIndex::HarmonicIndex(int l_, int m_) : l(l_), m(m_) {
  if (l < 0 || m < -l || m > l) {
    throw DomainError("invalid harmonic index (l=" + std::to_string(l) + ", m=" +
                      std::to_string(m) + ")");
  }
}

HarmonicIndex basis_harmonic(int index) {
  if (index < 0) throw DomainError("negative basis index");
  int l = static_cast<int>(std::sqrt(static_cast<double>(index + 1)));
  while (l * l > index + 1) --l;
  while ((l + 1) * (l + 1) <= index + 1) ++l;
  return HarmonicIndex(l, index + 1 - l * l - l);
}

std::vector<complex> ylm_all(int lmax, double theta, double phi) {
  if (lmax < 0) throw DomainError("negative degree");
  std::vector<complex> out(static_cast<std::size_t>((lmax + 1) * (lmax + 1)));
  const double x = std::cos(theta);
  const double s = std::sin(theta);

  // Normalized associated Legendre functions, column by column in m.
  std::vector<double> p(static_cast<std::size_t>(lmax + 1));
  double pmm = 0.5 / std::sqrt(std::numbers::pi);
  for (int m = 0; m <= lmax; ++m) {
    if (m > 0) pmm *= -std::sqrt((2.0 * m + 1.0) / (2.0 * m)) * s;
    p[m] = pmm;
    if (m < lmax) p[m + 1] = std::sqrt(2.0 * m + 3.0) * x * pmm;
    for (int l = m + 2; l <= lmax; ++l) {
      const double a = std::sqrt((4.0 * l * l - 1.0) / (static_cast<double>(l) * l - m * m));
      const double b = std::sqrt((static_cast<double>(l - 1) * (l - 1) - m * m) /
                                 (4.0 * (l - 1) * (l - 1) - 1.0));
      p[l] = a * (x * p[l - 1] - b * p[l - 2]);
    }
    const complex phase = std::polar(1.0, m * phi);
    const double sign = (m % 2 == 0) ? 1.0 : -1.0;
    for (int l = m; l <= lmax; ++l) {
      const complex y = p[l] * phase;
      out[l * l + l + m] = y;
      if (m > 0) out[l * l + l - m] = sign * std::conj(y);
    }
  }
  return out;
}

complex ylm(HarmonicIndex idx, double theta, double phi) {
  const HarmonicIndex checked(idx.l, idx.m);
  return ylm_all(checked.l, theta, phi)[checked.l * checked.l + checked.l + checked.m];
}

GaussLegendreRule gauss_legendre(int n) {
  if (n < 1) throw DomainError("Gauss-Legendre rule needs at least one node");
  GaussLegendreRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    double p0 = 1.0, p1 = z;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (z * p1 - p0) / (z * z - 1.0);
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    rule.nodes[i] = -z;
    rule.nodes[n - 1 - i] = z;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

}  // namespace hetsphere

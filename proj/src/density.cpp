#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "hetsphere/errors.hpp"
#include "hetsphere/harmonics.hpp"

namespace hetsphere {

DensitySpec::DensitySpec(Coefficients coefficients) {
  for (const auto& [idx, c] : coefficients) {
    const HarmonicIndex checked(idx.l, idx.m);
    if (checked.l == 0) {
      throw DensityError("density coefficient with l = 0 is not allowed (mean density is fixed to 1)");
    }
    if (c == complex(0.0, 0.0)) continue;
    coefficients_.emplace(checked, c);
    band_limit_ = std::max(band_limit_, checked.l);
  }
}

complex DensitySpec::coefficient(int l, int m) const {
  auto it = coefficients_.find(HarmonicIndex(l, m));
  return it == coefficients_.end() ? complex(0.0, 0.0) : it->second;
}

int DensitySpec::m_period() const {
  int g = 0;
  for (const auto& [idx, c] : coefficients_) g = std::gcd(g, std::abs(idx.m));
  return g;
}

double DensitySpec::squared_norm() const {
  double s = 0.0;
  for (const auto& [idx, c] : coefficients_) s += std::norm(c);
  return s;
}

DensitySpec DensitySpec::scaled(double s) const {
  Coefficients out;
  for (const auto& [idx, c] : coefficients_) out.emplace(idx, s * c);
  return DensitySpec(std::move(out));
}

DensitySpec DensitySpec::with_conjugates_completed() const {
  Coefficients out = coefficients_;
  for (const auto& [idx, c] : coefficients_) {
    const HarmonicIndex partner(idx.l, -idx.m);
    if (!out.contains(partner)) {
      out.emplace(partner, (idx.m % 2 == 0 ? 1.0 : -1.0) * std::conj(c));
    }
  }
  return DensitySpec(std::move(out));
}

double wigner_small_d(int l, int m1, int m2, double beta) {
  (void)HarmonicIndex(l, m1);
  (void)HarmonicIndex(l, m2);
  const double c = std::cos(0.5 * beta);
  const double s = std::sin(0.5 * beta);
  auto lf = [](int n) { return std::lgamma(n + 1.0); };
  const double log_norm = 0.5 * (lf(l + m1) + lf(l - m1) + lf(l + m2) + lf(l - m2));
  double sum = 0.0;
  for (int k = std::max(0, m2 - m1); k <= std::min(l + m2, l - m1); ++k) {
    const double mag = std::exp(log_norm - lf(l + m2 - k) - lf(k) - lf(l - k - m1) - lf(k - m2 + m1));
    const double term = mag * std::pow(c, 2 * l - 2 * k + m2 - m1) * std::pow(s, 2 * k - m2 + m1);
    sum += ((k - m2 + m1) % 2 == 0) ? term : -term;
  }
  return sum;
}

DensitySpec rotate_density(const DensitySpec& d, double alpha, double beta, double gamma) {
  bool real = true;
  for (const auto& [idx, c] : d.coefficients()) {
    if (d.coefficient(idx.l, -idx.m) != (idx.m % 2 == 0 ? 1.0 : -1.0) * std::conj(c)) real = false;
  }
  DensitySpec::Coefficients out;
  for (int l = 1; l <= d.band_limit(); ++l) {
    // For real input the m < 0 half follows from the reality rule, kept exact.
    for (int m1 = real ? 0 : -l; m1 <= l; ++m1) {
      complex sum(0.0, 0.0);
      for (int m2 = -l; m2 <= l; ++m2) {
        const complex c = d.coefficient(l, m2);
        if (c == complex(0.0, 0.0)) continue;
        const complex phase = std::polar(1.0, -(m1 * alpha + m2 * gamma));
        sum += phase * wigner_small_d(l, m1, m2, beta) * c;
      }
      if (real && m1 == 0) sum.imag(0.0);
      if (std::abs(sum) <= 1e-15) continue;
      out.emplace(HarmonicIndex(l, m1), sum);
      if (real && m1 > 0) out.emplace(HarmonicIndex(l, -m1), (m1 % 2 == 0 ? 1.0 : -1.0) * std::conj(sum));
    }
  }
  return DensitySpec(std::move(out));
}

DensitySpec kappa_y10(double kappa) { return DensitySpec({{HarmonicIndex(1, 0), complex(kappa, 0.0)}}); }

complex density_eval_complex(const DensitySpec& d, double theta, double phi) {
  complex sum(1.0, 0.0);
  if (d.homogeneous()) return sum;
  const auto y = ylm_all(d.band_limit(), theta, phi);
  for (const auto& [idx, c] : d.coefficients()) sum += c * y[idx.l * idx.l + idx.l + idx.m];
  return sum;
}

double density_eval(const DensitySpec& d, double theta, double phi) {
  return density_eval_complex(d, theta, phi).real();
}

ValidationReport validate_density(const DensitySpec& d, const ValidationOptions& opts) {
  ValidationReport report;
  report.band_limit = d.band_limit();

  for (const auto& [idx, c] : d.coefficients()) {
    const complex expected = (idx.m % 2 == 0 ? 1.0 : -1.0) * std::conj(c);
    const complex partner = d.coefficient(idx.l, -idx.m);
    report.reality_residue = std::max(report.reality_residue, std::abs(partner - expected));
    if (partner != expected) throw RealityViolation(idx.l, idx.m);
  }

  const int n = opts.resolution > 0 ? opts.resolution : std::max(4 * d.band_limit(), 32);
  report.grid_theta = n + 2;
  report.grid_phi = n;
  const auto rule = gauss_legendre(n);
  std::vector<double> thetas;
  thetas.reserve(n + 2);
  thetas.push_back(0.0);
  for (double x : rule.nodes) thetas.push_back(std::acos(-x));
  thetas.push_back(std::numbers::pi);

  report.min_sigma = std::numeric_limits<double>::infinity();
  for (double theta : thetas) {
    for (int j = 0; j < n; ++j) {
      const double phi = 2.0 * std::numbers::pi * j / n;
      const double s = density_eval(d, theta, phi);
      if (s < report.min_sigma) {
        report.min_sigma = s;
        report.min_theta = theta;
        report.min_phi = phi;
      }
    }
  }
  if (!(report.min_sigma > opts.positivity_margin)) {
    throw PositivityViolation(report.min_theta, report.min_phi, report.min_sigma);
  }
  return report;
}

}  // namespace hetsphere

#pragma once

#include <cmath>
#include <numbers>
#include <random>

#include "hetsphere/harmonics.hpp"

namespace testing {

inline constexpr double kPi = std::numbers::pi;

// Random real density with band limit lc whose perturbation is bounded by `bound`.
inline hetsphere::DensitySpec random_density(std::mt19937& rng, int lc, double bound = 0.6) {
  using hetsphere::complex;
  using hetsphere::HarmonicIndex;
  std::normal_distribution<double> normal;
  hetsphere::DensitySpec::Coefficients c;
  double sup = 0.0;
  for (int l = 1; l <= lc; ++l) {
    for (int m = 0; m <= l; ++m) {
      const complex z = m == 0 ? complex(normal(rng), 0.0) : complex(normal(rng), normal(rng));
      c[HarmonicIndex(l, m)] = z;
      if (m > 0) c[HarmonicIndex(l, -m)] = (m % 2 == 0 ? 1.0 : -1.0) * std::conj(z);
      sup += (m == 0 ? 1.0 : 2.0) * std::abs(z) * std::sqrt((2.0 * l + 1.0) / (4.0 * kPi));
    }
  }
  for (auto& [idx, z] : c) z *= bound / sup;
  return hetsphere::DensitySpec(std::move(c));
}

}  // namespace testing

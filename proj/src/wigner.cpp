#include <algorithm>
#include <array>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <mutex>
#include <numbers>

#include "hetsphere/errors.hpp"
#include "hetsphere/harmonics.hpp"

namespace hetsphere {

namespace {

namespace mp = boost::multiprecision;

constexpr int kFloatPathMaxDegree = 64;
// With one small degree the Racah sum has at most 2 l_min + 1 terms and the
// cancellation stays within long-double headroom at any l.
constexpr int kFloatPathSmallDegree = 8;
constexpr int kLogFactorialSize = 3 * 1024 + 2;

void check_indices(int l1, int l2, int l3, int m1, int m2, int m3) {
  (void)HarmonicIndex(l1, m1);
  (void)HarmonicIndex(l2, m2);
  (void)HarmonicIndex(l3, m3);
}

bool selection_fails(int l1, int l2, int l3, int m1, int m2, int m3) {
  return m1 + m2 + m3 != 0 || l3 < std::abs(l1 - l2) || l3 > l1 + l2;
}

// log(n!) accumulated in long double.
const std::vector<long double>& log_factorials() {
  static const std::vector<long double> table = [] {
    std::vector<long double> t(kLogFactorialSize);
    t[0] = 0.0L;
    for (std::size_t n = 1; n < t.size(); ++n) t[n] = t[n - 1] + std::log(static_cast<long double>(n));
    return t;
  }();
  return table;
}

struct RacahRange {
  int kmin, kmax;
};

RacahRange racah_range(int l1, int l2, int l3, int m1, int m2) {
  return {std::max({0, l2 - l3 - m1, l1 - l3 + m2}), std::min({l1 + l2 - l3, l1 - m1, l2 + m2})};
}

double wigner3j_float(int l1, int l2, int l3, int m1, int m2, int m3) {
  const auto& lf = log_factorials();
  const long double log_prefactor =
      0.5L * (lf[l1 + l2 - l3] + lf[l1 - l2 + l3] + lf[-l1 + l2 + l3] - lf[l1 + l2 + l3 + 1] +
              lf[l1 + m1] + lf[l1 - m1] + lf[l2 + m2] + lf[l2 - m2] + lf[l3 + m3] + lf[l3 - m3]);
  const auto [kmin, kmax] = racah_range(l1, l2, l3, m1, m2);

  // Neumaier summation of the alternating series.
  long double sum = 0.0L, comp = 0.0L;
  for (int k = kmin; k <= kmax; ++k) {
    const long double log_den = lf[k] + lf[l3 - l2 + k + m1] + lf[l3 - l1 + k - m2] +
                                lf[l1 + l2 - l3 - k] + lf[l1 - k - m1] + lf[l2 - k + m2];
    long double term = std::exp(log_prefactor - log_den);
    if (k % 2 != 0) term = -term;
    const long double t = sum + term;
    if (std::abs(sum) >= std::abs(term)) {
      comp += (sum - t) + term;
    } else {
      comp += (term - t) + sum;
    }
    sum = t;
  }
  const int phase = l1 - l2 - m3;
  const long double value = sum + comp;
  return static_cast<double>((phase % 2 == 0) ? value : -value);
}

mp::cpp_int factorial(int n) {
  mp::cpp_int f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace

double wigner3j_exact(int l1, int l2, int l3, int m1, int m2, int m3) {
  check_indices(l1, l2, l3, m1, m2, m3);
  if (selection_fails(l1, l2, l3, m1, m2, m3)) return 0.0;

  const auto [kmin, kmax] = racah_range(l1, l2, l3, m1, m2);
  mp::cpp_rational sum = 0;
  for (int k = kmin; k <= kmax; ++k) {
    const mp::cpp_int den = factorial(k) * factorial(l3 - l2 + k + m1) * factorial(l3 - l1 + k - m2) *
                            factorial(l1 + l2 - l3 - k) * factorial(l1 - k - m1) *
                            factorial(l2 - k + m2);
    const mp::cpp_rational term(mp::cpp_int(1), den);
    if (k % 2 == 0) {
      sum += term;
    } else {
      sum -= term;
    }
  }
  if (sum == 0) return 0.0;

  const mp::cpp_rational prefactor_sq(
      factorial(l1 + l2 - l3) * factorial(l1 - l2 + l3) * factorial(-l1 + l2 + l3) *
          factorial(l1 + m1) * factorial(l1 - m1) * factorial(l2 + m2) * factorial(l2 - m2) *
          factorial(l3 + m3) * factorial(l3 - m3),
      factorial(l1 + l2 + l3 + 1));
  const mp::cpp_rational squared = sum * sum * prefactor_sq;

  using big_float = mp::cpp_bin_float_50;
  const big_float magnitude =
      mp::sqrt(big_float(mp::numerator(squared)) / big_float(mp::denominator(squared)));
  double value = magnitude.convert_to<double>();
  if (sum < 0) value = -value;
  if ((l1 - l2 - m3) % 2 != 0) value = -value;
  return value;
}

double wigner3j(int l1, int l2, int l3, int m1, int m2, int m3) {
  check_indices(l1, l2, l3, m1, m2, m3);
  if (selection_fails(l1, l2, l3, m1, m2, m3)) return 0.0;
  if (m1 == 0 && m2 == 0 && (l1 + l2 + l3) % 2 != 0) return 0.0;
  const bool float_ok = std::max({l1, l2, l3}) <= kFloatPathMaxDegree ||
                        (std::min({l1, l2, l3}) <= kFloatPathSmallDegree && l1 + l2 + l3 + 1 < kLogFactorialSize);
  if (!float_ok) return wigner3j_exact(l1, l2, l3, m1, m2, m3);
  return wigner3j_float(l1, l2, l3, m1, m2, m3);
}

namespace {

// ∫ Y_{l1 m1} Y_{l2 m2} Y_{l3 m3} dΩ without conjugation; symmetric in its arguments.
double symmetric_gaunt(int l1, int m1, int l2, int m2, int l3, int m3) {
  if (m1 + m2 + m3 != 0 || (l1 + l2 + l3) % 2 != 0 || l3 < std::abs(l1 - l2) || l3 > l1 + l2) {
    return 0.0;
  }
  const double norm =
      std::sqrt((2.0 * l1 + 1.0) * (2.0 * l2 + 1.0) * (2.0 * l3 + 1.0) / (4.0 * std::numbers::pi));
  return norm * wigner3j(l1, l2, l3, 0, 0, 0) * wigner3j(l1, l2, l3, m1, m2, m3);
}

}  // namespace

double gaunt(int l1, int m1, int l2, int m2, int l3, int m3) {
  check_indices(l1, l2, l3, m1, m2, m3);
  const double g = symmetric_gaunt(l1, -m1, l2, m2, l3, m3);
  return (m1 % 2 == 0) ? g : -g;
}

double GauntTable::operator()(int l1, int m1, int l2, int m2, int l3, int m3) const {
  check_indices(l1, l2, l3, m1, m2, m3);
  if (m1 != m2 + m3 || (l1 + l2 + l3) % 2 != 0 || l3 < std::abs(l1 - l2) || l3 > l1 + l2) {
    return 0.0;
  }
  if (std::max({l1, l2, l3}) >= 1024) return gaunt(l1, m1, l2, m2, l3, m3);

  // The symmetric integral is invariant under permutations and under
  // negating every m (the integrand is conjugated, the value is real).
  std::array<std::pair<int, int>, 3> key{{{l1, -m1}, {l2, m2}, {l3, m3}}};
  std::array<std::pair<int, int>, 3> flipped{{{l1, m1}, {l2, -m2}, {l3, -m3}}};
  std::sort(key.begin(), key.end());
  std::sort(flipped.begin(), flipped.end());
  if (flipped < key) key = flipped;
  std::uint64_t packed = 0;
  for (const auto& [l, m] : key) {
    packed = (packed << 21) | (static_cast<std::uint64_t>(l) << 11) | static_cast<std::uint64_t>(m + 1023);
  }
  const double sign = (m1 % 2 == 0) ? 1.0 : -1.0;
  {
    std::shared_lock lock(mutex_);
    if (auto it = cache_.find(packed); it != cache_.end()) return sign * it->second;
  }
  const double g = symmetric_gaunt(key[0].first, key[0].second, key[1].first, key[1].second,
                                   key[2].first, key[2].second);
  std::unique_lock lock(mutex_);
  cache_.emplace(packed, g);
  max_degree_ = std::max({max_degree_, l1, l2, l3});
  return sign * g;
}

std::size_t GauntTable::size() const {
  std::shared_lock lock(mutex_);
  return cache_.size();
}

int GauntTable::max_degree() const {
  std::shared_lock lock(mutex_);
  return max_degree_;
}

GauntTable& GauntTable::shared() {
  static GauntTable table;
  return table;
}

}  // namespace hetsphere

#pragma once

#include <complex>
#include <compare>
#include <cstdint>
#include <map>
#include <shared_mutex>
#include <unordered_map>
#include <utility>
#include <vector>

namespace hetsphere {

using complex = std::complex<double>;

/// Degree/order pair (l, m) of a spherical harmonic, |m| <= l.
struct HarmonicIndex {
  int l = 0;
  int m = 0;

  HarmonicIndex() = default;
  /// Throws DomainError unless l >= 0 and |m| <= l.
  HarmonicIndex(int l, int m);

  auto operator<=>(const HarmonicIndex&) const = default;
};

// Flat index of (l, m) in the l >= 1 basis: (1,-1) -> 0, (1,0) -> 1, ...
inline int basis_index(int l, int m) { return l * l + l + m - 1; }
inline int basis_dim(int cutoff) { return cutoff * (cutoff + 2); }
HarmonicIndex basis_harmonic(int index);

/// Orthonormal complex spherical harmonic with Condon-Shortley phase.
complex ylm(HarmonicIndex idx, double theta, double phi);

/// All Y_lm with 0 <= l <= lmax at one point, stored at l*l + l + m.
std::vector<complex> ylm_all(int lmax, double theta, double phi);

/// Wigner 3j symbol (l1 l2 l3; m1 m2 m3).
///
/// Racah single sum. Uses a long-double log-factorial table with
/// compensated summation while every l <= 64, or while one l <= 8 (the sum
/// is then short); falls back to exact rational arithmetic otherwise.
double wigner3j(int l1, int l2, int l3, int m1, int m2, int m3);

/// Same symbol evaluated with exact big-integer rationals, rounded once.
double wigner3j_exact(int l1, int l2, int l3, int m1, int m2, int m3);

/// W = ∫ Y*_{l1 m1} Y_{l2 m2} Y_{l3 m3} dΩ.
double gaunt(int l1, int m1, int l2, int m2, int l3, int m3);

/// Memoized Gaunt coefficients. Values are cached under a canonical form of
/// the fully symmetric triple product (sorted, m signs normalized), so
/// permutations and global m negation share one entry.
/// Concurrent readers are safe; insertion takes an exclusive lock.
class GauntTable {
 public:
  double operator()(int l1, int m1, int l2, int m2, int l3, int m3) const;

  std::size_t size() const;
  int max_degree() const;

  /// Process-wide table shared by the coefficient-space engine.
  static GauntTable& shared();

 private:
  mutable std::shared_mutex mutex_;
  mutable std::unordered_map<std::uint64_t, double> cache_;
  mutable int max_degree_ = 0;
};

/// Band-limited density Σ = 1 + Σ' c_lm Y_lm, stored as its l >= 1
/// coefficients. Construction rejects l = 0 and drops exact zeros; the
/// reality and positivity invariants are checked by validate_density.
class DensitySpec {
 public:
  using Coefficients = std::map<HarmonicIndex, complex>;

  DensitySpec() = default;
  explicit DensitySpec(Coefficients coefficients);

  const Coefficients& coefficients() const { return coefficients_; }
  /// Coefficient at (l, m), zero when absent.
  complex coefficient(int l, int m) const;
  int band_limit() const { return band_limit_; }
  bool homogeneous() const { return coefficients_.empty(); }

  /// gcd of |m| over the support; 0 when the density is axisymmetric.
  int m_period() const;

  /// Σ'|c_lm|^2 = ∫ (Σ - 1)^2 dΩ.
  double squared_norm() const;

  /// Same density with every coefficient multiplied by s.
  DensitySpec scaled(double s) const;

  /// Adds the missing (l, -m) partners implied by c_{l,-m} = (-1)^m conj(c_lm).
  /// Conflicting existing partners are left alone for validation to report.
  DensitySpec with_conjugates_completed() const;

 private:
  Coefficients coefficients_;
  int band_limit_ = 0;
};

/// Σ = 1 + κ Y_10.
DensitySpec kappa_y10(double kappa);

/// Wigner small-d matrix element d^l_{m1 m2}(β).
double wigner_small_d(int l, int m1, int m2, double beta);

/// Density rotated by R = R_z(α) R_y(β) R_z(γ): the result evaluated at R r
/// equals d evaluated at r. Each degree mixes through the unitary Wigner D
/// matrix, so reality, positivity and Σ_m |c_lm|^2 per degree are preserved.
DensitySpec rotate_density(const DensitySpec& d, double alpha, double beta, double gamma);

/// Complex sum 1 + Σ c_lm Y_lm; the imaginary part vanishes for real densities.
complex density_eval_complex(const DensitySpec& d, double theta, double phi);
double density_eval(const DensitySpec& d, double theta, double phi);

struct ValidationOptions {
  double positivity_margin = 1e-9;
  /// Grid resolution per direction; 0 selects max(4 L_c, 32).
  int resolution = 0;
};

struct ValidationReport {
  double min_sigma = 1.0;
  double min_theta = 0.0;
  double min_phi = 0.0;
  double reality_residue = 0.0;
  int band_limit = 0;
  int grid_theta = 0;
  int grid_phi = 0;
};

/// Throws RealityViolation or PositivityViolation; returns the report otherwise.
ValidationReport validate_density(const DensitySpec& d, const ValidationOptions& opts = {});

struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [-1, 1], nodes ascending.
GaussLegendreRule gauss_legendre(int n);

}  // namespace hetsphere

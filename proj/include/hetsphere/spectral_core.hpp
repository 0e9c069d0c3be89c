#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <map>
#include <memory>
#include <mutex>

#include "hetsphere/harmonics.hpp"

namespace hetsphere {

using SparseMatrixXcd = Eigen::SparseMatrix<complex>;

struct AssemblyOptions {
  /// Guard against absurd cutoffs; assembly above this throws DomainError.
  int max_cutoff = 512;
};

/// S[(l,m),(l',m')] = ∫ Y*_lm Σ Y_l'm' on the l >= 1 basis truncated at a
/// cutoff, stored as identity + sparse band part S'.
///
/// S' is built from the upper triangle and mirrored, so S is Hermitian
/// bit for bit. S' vanishes when |l - l'| exceeds the density band limit.
class SigmaMatrix {
 public:
  int cutoff() const { return cutoff_; }
  int dim() const { return basis_dim(cutoff_); }

  /// Entry of S (identity included).
  complex operator()(HarmonicIndex row, HarmonicIndex col) const;

  /// S' = S - I, column-major.
  const SparseMatrixXcd& perturbation() const { return perturbation_; }

  Eigen::MatrixXcd dense() const;

  /// 0 when every coupling preserves m, g when couplings shift m by
  /// multiples of g, 1 when nothing decouples.
  int m_period() const { return m_period_; }
  bool block_decomposable() const { return m_period_ != 1; }

 private:
  friend SigmaMatrix assemble_sigma_matrix(const DensitySpec&, int, const AssemblyOptions&);
  int cutoff_ = 0;
  int m_period_ = 0;
  SparseMatrixXcd perturbation_;
};

/// Requires cutoff >= max(1, band limit).
SigmaMatrix assemble_sigma_matrix(const DensitySpec& d, int cutoff, const AssemblyOptions& opts = {});

/// (l(l+1))^-k.
inline double inverse_eigen_power(int l, int k) {
  double ll = static_cast<double>(l) * (l + 1);
  double r = 1.0;
  for (int i = 0; i < k; ++i) r /= ll;
  return r;
}

/// Diagonal of D_q, 1/(l(l+1))^{q+1}, over the basis up to the cutoff.
struct PropagatorWeights {
  int order = 0;
  int cutoff = 0;
  Eigen::VectorXd values;
};
PropagatorWeights propagator_weights(int q, int cutoff);

/// v_lm = ∫ Y*_lm Σ dΩ = c_lm for 1 <= l <= cutoff.
Eigen::VectorXcd border_vector(const DensitySpec& d, int cutoff);

/// Z_p = Σ_{l>=1} (2l+1) / (l(l+1))^p; Z_2 and Z_3 in closed form.
double homogeneous_z(int p);

/// Σ_{l>L} (2l+1) / (l(l+1))^p via partial fractions and Hurwitz zeta.
double homogeneous_z_tail(int p, int L);

/// ∫ (Σ - 1)^3 dΩ from the coefficients.
double cubic_moment(const DensitySpec& d);

struct CutoffPolicy {
  /// 0 selects max(64, 8 L_c).
  int initial_cutoff = 0;
  int max_cutoff = 512;
  double tolerance = 1e-8;
};

struct IntegralValue {
  double value = 0.0;
  double error_estimate = 0.0;
  int cutoff = 0;
};

/// Matrix-trace evaluations against an already assembled SigmaMatrix.
///
/// The *_truncated functions restrict every basis index to the matrix
/// cutoff. The *_completed functions restrict only the outermost index to
/// `first_cutoff` (the matrix must reach first_cutoff + L_c) and add the
/// analytic per-degree tail beyond it, which is exact up to terms of
/// relative order 1/l^2.
namespace trace {

double I2(const SigmaMatrix& s, const Eigen::VectorXcd& v, int q, int p);
double I3(const SigmaMatrix& s, const Eigen::VectorXcd& v, int q, int p, int r);

double J1_truncated(const SigmaMatrix& s, int q, int p);
double J2_truncated(const SigmaMatrix& s, int q, int p, int r);

double J1_completed(const SigmaMatrix& s, const DensitySpec& d, int q, int p, int first_cutoff);
double J2_completed(const SigmaMatrix& s, const DensitySpec& d, int q, int p, int r,
                    int first_cutoff);

}  // namespace trace

/// Direct nested sums over harmonic indices and Gaunt coefficients, all
/// indices truncated at L. Each S entry is recomputed from gaunt(), so this
/// path shares nothing with SigmaMatrix or GauntTable; used to cross-check
/// the trace path.
///
/// The sums run over products of S entries, which fixes the index
/// structure. As usually printed, the I3 quartic term carries an unsummed
/// l'' and the J2 quadratic term is written as 3x one ordering, which only
/// holds for q = p = r.
namespace nested {

double I2(const DensitySpec& d, int q, int p, int L);
double I3(const DensitySpec& d, int q, int p, int r, int L);
double J1(const DensitySpec& d, int q, int p, int L);
double J2(const DensitySpec& d, int q, int p, int r, int L);

}  // namespace nested

/// Evaluates the I/J integral family for one density, caching the
/// SigmaMatrix per cutoff. Thread-safe.
class SpectralEngine {
 public:
  explicit SpectralEngine(DensitySpec d, CutoffPolicy policy = {});

  const DensitySpec& density() const { return density_; }
  const CutoffPolicy& policy() const { return policy_; }

  double I1(int q) const;
  IntegralValue I2(int q, int p) const;
  IntegralValue I3(int q, int p, int r) const;
  IntegralValue J1(int q, int p) const;
  IntegralValue J2(int q, int p, int r) const;

  std::shared_ptr<const SigmaMatrix> sigma(int cutoff) const;

 private:
  template <typename Eval>
  IntegralValue with_doubling(const char* name, Eval&& eval) const;

  DensitySpec density_;
  CutoffPolicy policy_;
  mutable std::mutex mutex_;
  mutable std::map<int, std::shared_ptr<const SigmaMatrix>> cache_;
};

/// Σ'|c_lm|^2 / (l(l+1))^{q+1}; exact finite sum.
double integral_I1(const DensitySpec& d, int q);
IntegralValue integral_I2(const DensitySpec& d, int q, int p, const CutoffPolicy& policy = {});
IntegralValue integral_I3(const DensitySpec& d, int q, int p, int r, const CutoffPolicy& policy = {});
IntegralValue integral_J1(const DensitySpec& d, int q, int p, const CutoffPolicy& policy = {});
IntegralValue integral_J2(const DensitySpec& d, int q, int p, int r, const CutoffPolicy& policy = {});

}  // namespace hetsphere

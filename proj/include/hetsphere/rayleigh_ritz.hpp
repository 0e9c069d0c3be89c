#pragma once

#include <Eigen/Dense>
#include <vector>

#include "hetsphere/harmonics.hpp"

namespace hetsphere {

/// Rayleigh-Ritz eigenvalues of -Δψ = E Σ ψ on the l <= l_max basis, ascending.
struct SpectrumApprox {
  int l_max = 0;
  int dim = 0;
  std::vector<double> eigenvalues;
  /// Count used by numeric_sum_rule by default: dim / 3.
  int n_retained = 0;
};

/// ζ(p) - Σ_{n<=N} n^-p: the Weyl-law completion E_n ≈ n beyond N.
struct WeylTail {
  int p = 2;
  int N = 1;
  double value = 0.0;
};

inline constexpr int kDefaultMaxLmax = 96;

struct SolveOptions {
  /// Lifts the l_max <= 96 guard.
  bool allow_large_lmax = false;
  /// Split into independent m-blocks when the density allows it.
  bool use_blocks = true;
  /// Multiplies the overlap matrix, i.e. solves the pencil for λΣ.
  double overlap_scale = 1.0;
};

/// Overlap matrix on the l >= 1 basis with the constant mode eliminated:
/// B = S - v v^† / 4π, the Schur complement of the l = 0 row and column.
Eigen::MatrixXcd ritz_overlap(const DensitySpec& d, int l_max);

/// Eigenvalues of A x = E B x for diagonal A > 0 and Hermitian B, via
/// Cholesky of B and a standard Hermitian eigensolve. Ascending.
/// Throws NotPositiveDefinite when B has no Cholesky factor.
Eigen::VectorXd solve_pencil(const Eigen::VectorXd& a_diag, const Eigen::MatrixXcd& b);

/// Basis indices of each independent m-block, in merge order.
std::vector<std::vector<int>> m_blocks(const DensitySpec& d, int l_max);

/// Throws DomainError for l_max <= L_c or above the guard, and
/// NotPositiveDefinite when a block overlap fails to factor.
SpectrumApprox solve_spectrum(const DensitySpec& d, int l_max, const SolveOptions& opts = {});

int default_retained(int l_max);

WeylTail weyl_tail(int p, int N);

/// Σ_{n<=N} E_n^-p over the lowest N Ritz values plus weyl_tail(p, N).
/// N = 0 selects spec.n_retained. Throws DomainError for N > dim.
double numeric_sum_rule(const SpectrumApprox& spec, int p, int N = 0);

struct SweepRow {
  int l_max = 0;
  int n_retained = 0;
  double numeric = 0.0;
  double exact = 0.0;
  double abs_err = 0.0;
  double weyl_tail = 0.0;
};

std::vector<SweepRow> convergence_sweep(const DensitySpec& d, int p, const std::vector<int>& l_max_list,
                                        double exact, const SolveOptions& opts = {});

}  // namespace hetsphere

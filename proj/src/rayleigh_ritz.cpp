#include "hetsphere/rayleigh_ritz.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "hetsphere/errors.hpp"
#include "hetsphere/polylog.hpp"
#include "hetsphere/spectral_core.hpp"

namespace hetsphere {

namespace {

void check_lmax(const DensitySpec& d, int l_max, const SolveOptions& opts) {
  if (l_max < d.band_limit() + 1 || l_max < 1) {
    throw DomainError("l_max must exceed the density band limit");
  }
  if (l_max > kDefaultMaxLmax && !opts.allow_large_lmax) {
    throw DomainError("l_max " + std::to_string(l_max) + " exceeds " + std::to_string(kDefaultMaxLmax) +
                      " (dense solve); pass the large-l_max override to proceed");
  }
}

}  // namespace

Eigen::MatrixXcd ritz_overlap(const DensitySpec& d, int l_max) {
  AssemblyOptions assembly;
  assembly.max_cutoff = std::max(assembly.max_cutoff, l_max);
  Eigen::MatrixXcd b = assemble_sigma_matrix(d, l_max, assembly).dense();
  const Eigen::VectorXcd v = border_vector(d, l_max);
  b.noalias() -= v * v.adjoint() / (4.0 * std::numbers::pi);
  return b;
}

Eigen::VectorXd solve_pencil(const Eigen::VectorXd& a_diag, const Eigen::MatrixXcd& b) {
  const Eigen::LLT<Eigen::MatrixXcd> llt(b);
  if (llt.info() != Eigen::Success) throw NotPositiveDefinite("overlap matrix is not positive definite");
  const auto lower = llt.matrixL();
  // C = L^-1 A L^-H
  Eigen::MatrixXcd y = lower.solve(Eigen::MatrixXcd(a_diag.cast<complex>().asDiagonal()));
  Eigen::MatrixXcd c = lower.solve(y.adjoint());
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(c, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) throw NonConverged("Hermitian eigensolver failed", 0.0);
  return eig.eigenvalues();
}

std::vector<std::vector<int>> m_blocks(const DensitySpec& d, int l_max) {
  const int g = d.m_period();
  std::vector<std::vector<int>> blocks;
  if (g == 1) {
    blocks.emplace_back(basis_dim(l_max));
    for (int i = 0; i < basis_dim(l_max); ++i) blocks[0][i] = i;
    return blocks;
  }
  // g = 0: every m is its own block; otherwise residue classes of m mod g.
  const int count = g == 0 ? 2 * l_max + 1 : g;
  blocks.resize(count);
  for (int i = 0; i < basis_dim(l_max); ++i) {
    const int m = basis_harmonic(i).m;
    const int key = g == 0 ? m + l_max : ((m % g) + g) % g;
    blocks[key].push_back(i);
  }
  return blocks;
}

SpectrumApprox solve_spectrum(const DensitySpec& d, int l_max, const SolveOptions& opts) {
  check_lmax(d, l_max, opts);
  if (!(opts.overlap_scale > 0.0)) throw DomainError("overlap scale must be positive");
  const Eigen::MatrixXcd b = ritz_overlap(d, l_max) * opts.overlap_scale;

  Eigen::VectorXd a(basis_dim(l_max));
  for (int i = 0; i < a.size(); ++i) {
    const int l = basis_harmonic(i).l;
    a[i] = static_cast<double>(l) * (l + 1);
  }

  SpectrumApprox out;
  out.l_max = l_max;
  out.dim = basis_dim(l_max);
  out.n_retained = default_retained(l_max);
  out.eigenvalues.reserve(out.dim);

  std::vector<std::vector<int>> blocks;
  if (opts.use_blocks) {
    blocks = m_blocks(d, l_max);
  } else {
    blocks.emplace_back(out.dim);
    for (int i = 0; i < out.dim; ++i) blocks[0][i] = i;
  }
  for (const auto& idx : blocks) {
    const auto n = static_cast<Eigen::Index>(idx.size());
    if (n == 0) continue;
    Eigen::MatrixXcd bb(n, n);
    Eigen::VectorXd ab(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      ab[i] = a[idx[i]];
      for (Eigen::Index j = 0; j < n; ++j) bb(i, j) = b(idx[i], idx[j]);
    }
    const Eigen::VectorXd e = solve_pencil(ab, bb);
    out.eigenvalues.insert(out.eigenvalues.end(), e.data(), e.data() + e.size());
  }
  std::sort(out.eigenvalues.begin(), out.eigenvalues.end());
  return out;
}

int default_retained(int l_max) { return basis_dim(l_max) / 3; }

WeylTail weyl_tail(int p, int N) {
  if (p < 2) throw DomainError("Weyl tail diverges for p < 2");
  if (N < 1) throw DomainError("Weyl tail needs N >= 1");
  return {p, N, hurwitz_zeta(p, N + 1.0)};
}

double numeric_sum_rule(const SpectrumApprox& spec, int p, int N) {
  if (p != 2 && p != 3) throw UnsupportedOrder(p);
  if (N == 0) N = spec.n_retained;
  if (N < 1 || N > static_cast<int>(spec.eigenvalues.size())) {
    throw DomainError("retained count must lie in [1, dim]");
  }
  double sum = 0.0;
  // Smallest terms first.
  for (int n = N - 1; n >= 0; --n) sum += std::pow(spec.eigenvalues[n], -p);
  return sum + weyl_tail(p, N).value;
}

std::vector<SweepRow> convergence_sweep(const DensitySpec& d, int p, const std::vector<int>& l_max_list,
                                        double exact, const SolveOptions& opts) {
  std::vector<SweepRow> rows;
  for (int l_max : l_max_list) {
    const auto spec = solve_spectrum(d, l_max, opts);
    SweepRow row;
    row.l_max = l_max;
    row.n_retained = spec.n_retained;
    row.numeric = numeric_sum_rule(spec, p);
    row.exact = exact;
    row.abs_err = std::abs(row.numeric - exact);
    row.weyl_tail = weyl_tail(p, spec.n_retained).value;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace hetsphere

#include "hetsphere/spectral_core.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "hetsphere/errors.hpp"
#include "hetsphere/polylog.hpp"

namespace hetsphere {

namespace {

constexpr double kFourPi = 4.0 * std::numbers::pi;

int default_initial_cutoff(const DensitySpec& d) { return std::max(64, 8 * d.band_limit()); }

// Diagonal weights (l(l+1))^-k on the basis of `cutoff`, zeroed beyond `first_cutoff`.
Eigen::VectorXd degree_weights(int k, int cutoff, int first_cutoff) {
  Eigen::VectorXd w = Eigen::VectorXd::Zero(basis_dim(cutoff));
  for (int l = 1; l <= std::min(cutoff, first_cutoff); ++l) {
    const double value = inverse_eigen_power(l, k);
    for (int m = -l; m <= l; ++m) w[basis_index(l, m)] = value;
  }
  return w;
}

// Σ_a w_k(a) S'_aa over a with l_a <= first_cutoff.
double linear_term(const SigmaMatrix& s, int k, int first_cutoff) {
  const auto w = degree_weights(k, s.cutoff(), first_cutoff);
  const auto& sp = s.perturbation();
  double sum = 0.0;
  for (int a = 0; a < sp.outerSize(); ++a) {
    if (w[a] == 0.0) continue;
    sum += w[a] * sp.coeff(a, a).real();
  }
  return sum;
}

// Σ_{a,b} w_ka(a) w_kb(b) |S'_ab|^2 with l_a <= first_cutoff.
double quadratic_term(const SigmaMatrix& s, int ka, int kb, int first_cutoff) {
  const auto wa = degree_weights(ka, s.cutoff(), first_cutoff);
  const auto wb = degree_weights(kb, s.cutoff(), s.cutoff());
  const auto& sp = s.perturbation();
  double sum = 0.0;
  for (int a = 0; a < sp.outerSize(); ++a) {
    if (wa[a] == 0.0) continue;
    double col = 0.0;
    for (SparseMatrixXcd::InnerIterator it(sp, a); it; ++it) col += wb[it.row()] * std::norm(it.value());
    sum += wa[a] * col;
  }
  return sum;
}

// tr(D1 S' D2 S' D3 S') with the outer index limited to l <= first_cutoff.
double cubic_term(const SigmaMatrix& s, int k1, int k2, int k3, int first_cutoff) {
  const auto w1 = degree_weights(k1, s.cutoff(), first_cutoff);
  const auto w2 = degree_weights(k2, s.cutoff(), s.cutoff());
  const auto w3 = degree_weights(k3, s.cutoff(), s.cutoff());
  const auto& sp = s.perturbation();
  const SparseMatrixXcd scaled = sp * w3.cast<complex>().asDiagonal();
  const SparseMatrixXcd product = (scaled * sp).pruned();  // P = S' D3 S'
  // Σ_a w1(a) Σ_b S'_ab w2(b) P_ba, with S'_ab = conj(S'_ba).
  const SparseMatrixXcd overlap = sp.conjugate().cwiseProduct(product);
  complex sum(0.0, 0.0);
  for (int a = 0; a < overlap.outerSize(); ++a) {
    if (w1[a] == 0.0) continue;
    complex col(0.0, 0.0);
    for (SparseMatrixXcd::InnerIterator it(overlap, a); it; ++it) col += w2[it.row()] * it.value();
    sum += w1[a] * col;
  }
  return sum.real();
}

void require_first_cutoff(const SigmaMatrix& s, const DensitySpec& d, int first_cutoff) {
  if (first_cutoff <= d.band_limit()) {
    throw DomainError("completed trace needs the outer cutoff above the band limit");
  }
  if (s.cutoff() < first_cutoff + d.band_limit()) {
    throw DomainError("SigmaMatrix cutoff must reach outer cutoff + band limit");
  }
}

// Partial-fraction coefficients of 1/(l^a (l+1)^b): {1/l^i} and {1/(l+1)^j}.
struct PartialFractions {
  std::vector<double> at_l;       // index i -> coefficient of 1/l^i
  std::vector<double> at_lplus1;  // index j -> coefficient of 1/(l+1)^j
};

PartialFractions partial_fractions(int a, int b) {
  PartialFractions pf;
  pf.at_l.assign(a + b + 1, 0.0);
  pf.at_lplus1.assign(a + b + 1, 0.0);
  if (b == 0) {
    pf.at_l[a] = 1.0;
    return pf;
  }
  if (a == 0) {
    pf.at_lplus1[b] = 1.0;
    return pf;
  }
  // 1/(l^a (l+1)^b) = 1/(l^a (l+1)^(b-1)) - 1/(l^(a-1) (l+1)^b)
  const auto left = partial_fractions(a, b - 1);
  const auto right = partial_fractions(a - 1, b);
  for (std::size_t i = 0; i < pf.at_l.size(); ++i) {
    if (i < left.at_l.size()) pf.at_l[i] += left.at_l[i];
    if (i < right.at_l.size()) pf.at_l[i] -= right.at_l[i];
    if (i < left.at_lplus1.size()) pf.at_lplus1[i] += left.at_lplus1[i];
    if (i < right.at_lplus1.size()) pf.at_lplus1[i] -= right.at_lplus1[i];
  }
  return pf;
}

}  // namespace

// ---------------------------------------------------------------------------
// SigmaMatrix

complex SigmaMatrix::operator()(HarmonicIndex row, HarmonicIndex col) const {
  if (row.l < 1 || col.l < 1 || row.l > cutoff_ || col.l > cutoff_) {
    throw DomainError("SigmaMatrix index outside the l >= 1 basis of this cutoff");
  }
  const int a = basis_index(row.l, row.m);
  const int b = basis_index(col.l, col.m);
  return perturbation_.coeff(a, b) + (a == b ? 1.0 : 0.0);
}

Eigen::MatrixXcd SigmaMatrix::dense() const {
  Eigen::MatrixXcd m = Eigen::MatrixXcd(perturbation_);
  m.diagonal().array() += 1.0;
  return m;
}

SigmaMatrix assemble_sigma_matrix(const DensitySpec& d, int cutoff, const AssemblyOptions& opts) {
  if (cutoff < std::max(1, d.band_limit())) {
    throw DomainError("SigmaMatrix cutoff " + std::to_string(cutoff) + " below band limit");
  }
  if (cutoff > opts.max_cutoff) {
    throw DomainError("SigmaMatrix cutoff " + std::to_string(cutoff) + " exceeds guard " +
                      std::to_string(opts.max_cutoff));
  }
  const auto& table = GauntTable::shared();
  SigmaMatrix s;
  s.cutoff_ = cutoff;
  s.m_period_ = d.m_period();

  std::vector<Eigen::Triplet<complex>> triplets;
  std::map<int, complex> row;
  for (int l = 1; l <= cutoff; ++l) {
    for (int m = -l; m <= l; ++m) {
      const int a = basis_index(l, m);
      row.clear();
      for (const auto& [idx, c] : d.coefficients()) {
        const int mb = m - idx.m;
        const int lb_min = std::max({std::abs(l - idx.l), std::abs(mb), 1});
        for (int lb = lb_min; lb <= std::min(l + idx.l, cutoff); ++lb) {
          if ((l + lb + idx.l) % 2 != 0) continue;
          const int b = basis_index(lb, mb);
          if (b < a) continue;
          const double w = table(l, m, lb, mb, idx.l, idx.m);
          if (w != 0.0) row[b] += c * w;
        }
      }
      for (const auto& [b, value] : row) {
        if (b == a) {
          triplets.emplace_back(a, a, complex(value.real(), 0.0));
        } else {
          triplets.emplace_back(a, b, value);
          triplets.emplace_back(b, a, std::conj(value));
        }
      }
    }
  }
  s.perturbation_.resize(basis_dim(cutoff), basis_dim(cutoff));
  s.perturbation_.setFromTriplets(triplets.begin(), triplets.end());
  s.perturbation_.makeCompressed();
  return s;
}

PropagatorWeights propagator_weights(int q, int cutoff) {
  if (q < 0) throw DomainError("propagator order must be >= 0");
  return {q, cutoff, degree_weights(q + 1, cutoff, cutoff)};
}

Eigen::VectorXcd border_vector(const DensitySpec& d, int cutoff) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(basis_dim(cutoff));
  for (const auto& [idx, c] : d.coefficients()) {
    if (idx.l <= cutoff) v[basis_index(idx.l, idx.m)] = c;
  }
  return v;
}

// ---------------------------------------------------------------------------
// Homogeneous sums

double homogeneous_z_tail(int p, int L) {
  if (p < 2) throw DomainError("Z_p diverges for p < 2");
  if (L < 0) throw DomainError("negative truncation");
  if (p == 2) return 1.0 / ((L + 1.0) * (L + 1.0));
  if (p >= 6) {
    // Terms fall like l^(1-2p); direct summation converges in a few dozen terms.
    double sum = 0.0;
    for (int l = L + 1;; ++l) {
      const double term = (2.0 * l + 1.0) * inverse_eigen_power(l, p);
      sum += term;
      if (term < 1e-20 * sum) break;
    }
    return sum;
  }
  // (2l+1)/(l(l+1))^p = 1/(l^(p-1) (l+1)^p) + 1/(l^p (l+1)^(p-1))
  const auto first = partial_fractions(p - 1, p);
  const auto second = partial_fractions(p, p - 1);
  double sum = 0.0;
  // The 1/l and 1/(l+1) parts cancel pairwise and telescope.
  sum += (first.at_l[1] + second.at_l[1]) / (L + 1.0);
  for (int i = 2; i <= 2 * p; ++i) {
    const double a = (i < static_cast<int>(first.at_l.size()) ? first.at_l[i] : 0.0) +
                     (i < static_cast<int>(second.at_l.size()) ? second.at_l[i] : 0.0);
    const double b = (i < static_cast<int>(first.at_lplus1.size()) ? first.at_lplus1[i] : 0.0) +
                     (i < static_cast<int>(second.at_lplus1.size()) ? second.at_lplus1[i] : 0.0);
    if (a != 0.0) sum += a * hurwitz_zeta(i, L + 1.0);
    if (b != 0.0) sum += b * hurwitz_zeta(i, L + 2.0);
  }
  return sum;
}

double homogeneous_z(int p) {
  if (p < 2) throw DomainError("Z_p diverges for p < 2");
  if (p == 2) return 1.0;
  if (p == 3) return 2.0 * (kZeta3 - 1.0);
  return homogeneous_z_tail(p, 0);
}

double cubic_moment(const DensitySpec& d) {
  const auto& table = GauntTable::shared();
  complex sum(0.0, 0.0);
  for (const auto& [ia, ca] : d.coefficients()) {
    const double sign = (ia.m % 2 == 0) ? 1.0 : -1.0;
    for (const auto& [ib, cb] : d.coefficients()) {
      for (const auto& [ic, cc] : d.coefficients()) {
        if (ia.m + ib.m + ic.m != 0) continue;
        // ∫ Y_a Y_b Y_c = (-1)^{m_a} ∫ Y*_{l_a,-m_a} Y_b Y_c
        sum += ca * cb * cc * sign * table(ia.l, -ia.m, ib.l, ib.m, ic.l, ic.m);
      }
    }
  }
  return sum.real();
}

// ---------------------------------------------------------------------------
// Trace path

namespace trace {

double I2(const SigmaMatrix& s, const Eigen::VectorXcd& v, int q, int p) {
  const auto dq = degree_weights(q + 1, s.cutoff(), s.cutoff());
  const auto dp = degree_weights(p + 1, s.cutoff(), s.cutoff());
  const Eigen::VectorXcd y = dp.cast<complex>().cwiseProduct(v);
  const Eigen::VectorXcd z = y + s.perturbation() * y;
  return v.conjugate().cwiseProduct(dq.cast<complex>()).dot(z.conjugate()).real();
}

double I3(const SigmaMatrix& s, const Eigen::VectorXcd& v, int q, int p, int r) {
  const auto dq = degree_weights(q + 1, s.cutoff(), s.cutoff());
  const auto dp = degree_weights(p + 1, s.cutoff(), s.cutoff());
  const auto dr = degree_weights(r + 1, s.cutoff(), s.cutoff());
  const auto& sp = s.perturbation();
  Eigen::VectorXcd y = dr.cast<complex>().cwiseProduct(v);
  y = y + sp * y;
  y = dp.cast<complex>().cwiseProduct(y);
  y = y + sp * y;
  complex sum(0.0, 0.0);
  for (Eigen::Index a = 0; a < v.size(); ++a) sum += std::conj(v[a]) * dq[a] * y[a];
  return sum.real();
}

double J1_truncated(const SigmaMatrix& s, int q, int p) {
  const int L = s.cutoff();
  return homogeneous_z(q + p + 2) - homogeneous_z_tail(q + p + 2, L) + 2.0 * linear_term(s, q + p + 2, L) +
         quadratic_term(s, q + 1, p + 1, L);
}

double J2_truncated(const SigmaMatrix& s, int q, int p, int r) {
  const int L = s.cutoff();
  const int k = q + p + r + 3;
  return homogeneous_z(k) - homogeneous_z_tail(k, L) + 3.0 * linear_term(s, k, L) +
         quadratic_term(s, q + r + 2, p + 1, L) + quadratic_term(s, q + 1, p + r + 2, L) +
         quadratic_term(s, q + p + 2, r + 1, L) + cubic_term(s, q + 1, p + 1, r + 1, L);
}

double J1_completed(const SigmaMatrix& s, const DensitySpec& d, int q, int p, int first_cutoff) {
  require_first_cutoff(s, d, first_cutoff);
  const int k = q + p + 2;
  const double tail = d.squared_norm() / kFourPi * homogeneous_z_tail(k, first_cutoff);
  return homogeneous_z(k) + 2.0 * linear_term(s, k, first_cutoff) +
         quadratic_term(s, q + 1, p + 1, first_cutoff) + tail;
}

double J2_completed(const SigmaMatrix& s, const DensitySpec& d, int q, int p, int r,
                    int first_cutoff) {
  require_first_cutoff(s, d, first_cutoff);
  const int k = q + p + r + 3;
  const double zt = homogeneous_z_tail(k, first_cutoff);
  const double tail = (3.0 * d.squared_norm() + cubic_moment(d)) / kFourPi * zt;
  const int L = first_cutoff;
  return homogeneous_z(k) + 3.0 * linear_term(s, k, L) + quadratic_term(s, q + r + 2, p + 1, L) +
         quadratic_term(s, q + 1, p + r + 2, L) + quadratic_term(s, q + p + 2, r + 1, L) +
         cubic_term(s, q + 1, p + 1, r + 1, L) + tail;
}

}  // namespace trace

// ---------------------------------------------------------------------------
// Engine

SpectralEngine::SpectralEngine(DensitySpec d, CutoffPolicy policy)
    : density_(std::move(d)), policy_(policy) {
  if (policy_.initial_cutoff == 0) policy_.initial_cutoff = default_initial_cutoff(density_);
  policy_.initial_cutoff = std::max(policy_.initial_cutoff, density_.band_limit() + 1);
  if (!(policy_.tolerance > 0.0)) throw DomainError("cutoff tolerance must be positive");
  if (policy_.initial_cutoff > policy_.max_cutoff) {
    throw DomainError("initial cutoff exceeds the maximum cutoff");
  }
}

std::shared_ptr<const SigmaMatrix> SpectralEngine::sigma(int cutoff) const {
  std::lock_guard lock(mutex_);
  auto& slot = cache_[cutoff];
  if (!slot) {
    AssemblyOptions opts;
    opts.max_cutoff = std::max(opts.max_cutoff, policy_.max_cutoff + density_.band_limit());
    slot = std::make_shared<const SigmaMatrix>(assemble_sigma_matrix(density_, cutoff, opts));
  }
  return slot;
}

template <typename Eval>
IntegralValue SpectralEngine::with_doubling(const char* name, Eval&& eval) const {
  int L = policy_.initial_cutoff;
  double previous = eval(L);
  double estimate = 0.0;
  while (2 * L <= policy_.max_cutoff) {
    L *= 2;
    const double current = eval(L);
    estimate = std::abs(current - previous);
    if (estimate <= policy_.tolerance) return {current, estimate, L};
    previous = current;
  }
  throw NonConverged(std::string(name) + " did not reach tolerance by cutoff " +
                         std::to_string(policy_.max_cutoff),
                     estimate);
}

double SpectralEngine::I1(int q) const { return integral_I1(density_, q); }

IntegralValue SpectralEngine::I2(int q, int p) const {
  if (density_.homogeneous()) return {0.0, 0.0, 0};
  const int lc = density_.band_limit();
  return with_doubling("I2", [&](int L) {
    const auto s = sigma(L + lc);
    return trace::I2(*s, border_vector(density_, s->cutoff()), q, p);
  });
}

IntegralValue SpectralEngine::I3(int q, int p, int r) const {
  if (density_.homogeneous()) return {0.0, 0.0, 0};
  const int lc = density_.band_limit();
  return with_doubling("I3", [&](int L) {
    const auto s = sigma(L + lc);
    return trace::I3(*s, border_vector(density_, s->cutoff()), q, p, r);
  });
}

IntegralValue SpectralEngine::J1(int q, int p) const {
  if (density_.homogeneous()) return {homogeneous_z(q + p + 2), 0.0, 0};
  const int lc = density_.band_limit();
  return with_doubling("J1", [&](int L) { return trace::J1_completed(*sigma(L + lc), density_, q, p, L); });
}

IntegralValue SpectralEngine::J2(int q, int p, int r) const {
  if (density_.homogeneous()) return {homogeneous_z(q + p + r + 3), 0.0, 0};
  const int lc = density_.band_limit();
  return with_doubling("J2",
                       [&](int L) { return trace::J2_completed(*sigma(L + lc), density_, q, p, r, L); });
}

double integral_I1(const DensitySpec& d, int q) {
  if (q < 0) throw DomainError("Green's function order must be >= 0");
  double sum = 0.0;
  for (const auto& [idx, c] : d.coefficients()) sum += std::norm(c) * inverse_eigen_power(idx.l, q + 1);
  return sum;
}

IntegralValue integral_I2(const DensitySpec& d, int q, int p, const CutoffPolicy& policy) {
  return SpectralEngine(d, policy).I2(q, p);
}
IntegralValue integral_I3(const DensitySpec& d, int q, int p, int r, const CutoffPolicy& policy) {
  return SpectralEngine(d, policy).I3(q, p, r);
}
IntegralValue integral_J1(const DensitySpec& d, int q, int p, const CutoffPolicy& policy) {
  return SpectralEngine(d, policy).J1(q, p);
}
IntegralValue integral_J2(const DensitySpec& d, int q, int p, int r, const CutoffPolicy& policy) {
  return SpectralEngine(d, policy).J2(q, p, r);
}

}  // namespace hetsphere

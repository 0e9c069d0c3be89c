#include <cmath>
#include <vector>

#include "hetsphere/errors.hpp"
#include "hetsphere/spectral_core.hpp"

namespace hetsphere {

namespace {

struct Coupling {
  int col;
  complex value;
};

// Rows of S = 1 + Σ' c W, built entry by entry from gaunt() with no caching.
std::vector<std::vector<Coupling>> direct_rows(const DensitySpec& d, int L) {
  if (L < std::max(1, d.band_limit())) throw DomainError("nested sum cutoff below band limit");
  std::vector<std::vector<Coupling>> rows(basis_dim(L));
  for (int a = 0; a < basis_dim(L); ++a) {
    const auto ia = basis_harmonic(a);
    for (int lb = std::max(1, ia.l - d.band_limit()); lb <= std::min(L, ia.l + d.band_limit()); ++lb) {
      for (int mb = -lb; mb <= lb; ++mb) {
        complex s = (lb == ia.l && mb == ia.m) ? 1.0 : 0.0;
        for (const auto& [idx, c] : d.coefficients()) s += c * gaunt(ia.l, ia.m, lb, mb, idx.l, idx.m);
        if (s != complex(0.0, 0.0)) rows[a].push_back({basis_index(lb, mb), s});
      }
    }
  }
  return rows;
}

double weight(int index, int q) { return inverse_eigen_power(basis_harmonic(index).l, q + 1); }

}  // namespace

namespace nested {

double I2(const DensitySpec& d, int q, int p, int L) {
  const auto rows = direct_rows(d, L);
  complex sum(0.0, 0.0);
  for (const auto& [ia, ca] : d.coefficients()) {
    if (ia.l > L) continue;
    const int a = basis_index(ia.l, ia.m);
    for (const auto& [b, s] : rows[a]) {
      sum += std::conj(ca) * weight(a, q) * s * weight(b, p) * d.coefficient(basis_harmonic(b).l, basis_harmonic(b).m);
    }
  }
  return sum.real();
}

double I3(const DensitySpec& d, int q, int p, int r, int L) {
  const auto rows = direct_rows(d, L);
  complex sum(0.0, 0.0);
  for (const auto& [ia, ca] : d.coefficients()) {
    if (ia.l > L) continue;
    const int a = basis_index(ia.l, ia.m);
    for (const auto& [b, sab] : rows[a]) {
      for (const auto& [c, sbc] : rows[b]) {
        const auto ic = basis_harmonic(c);
        const complex cc = d.coefficient(ic.l, ic.m);
        if (cc == complex(0.0, 0.0)) continue;
        sum += std::conj(ca) * weight(a, q) * sab * weight(b, p) * sbc * weight(c, r) * cc;
      }
    }
  }
  return sum.real();
}

double J1(const DensitySpec& d, int q, int p, int L) {
  const auto rows = direct_rows(d, L);
  double sum = 0.0;
  for (int a = 0; a < static_cast<int>(rows.size()); ++a) {
    for (const auto& [b, sab] : rows[a]) sum += weight(a, q) * weight(b, p) * std::norm(sab);
  }
  return sum;
}

double J2(const DensitySpec& d, int q, int p, int r, int L) {
  const auto rows = direct_rows(d, L);
  complex sum(0.0, 0.0);
  for (int a = 0; a < static_cast<int>(rows.size()); ++a) {
    for (const auto& [b, sab] : rows[a]) {
      for (const auto& [c, sbc] : rows[b]) {
        // S_ca = conj(S_ac); look it up in row a.
        for (const auto& [x, sax] : rows[a]) {
          if (x != c) continue;
          sum += weight(a, q) * sab * weight(b, p) * sbc * weight(c, r) * std::conj(sax);
        }
      }
    }
  }
  return sum.real();
}

}  // namespace nested

}  // namespace hetsphere

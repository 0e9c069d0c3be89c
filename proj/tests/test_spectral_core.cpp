#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "hetsphere/errors.hpp"
#include "hetsphere/polylog.hpp"
#include "hetsphere/quadrature_oracle.hpp"
#include "hetsphere/spectral_core.hpp"
#include "support.hpp"

using namespace hetsphere;
using testing::kPi;
using doctest::Approx;

TEST_CASE("sigma matrix structure") {
  const auto id = assemble_sigma_matrix(DensitySpec(), 6);
  CHECK(id.perturbation().nonZeros() == 0);
  CHECK(id({3, 1}, {3, 1}) == complex(1.0, 0.0));

  const double kappa = 0.8;
  const auto s = assemble_sigma_matrix(kappa_y10(kappa), 10);
  CHECK(s.dim() == 120);
  CHECK(s({1, 0}, {2, 0}).real() == Approx(kappa * gaunt(1, 0, 2, 0, 1, 0)).epsilon(1e-15));
  // ∫ Y10 Y20 Y10 = (3/4π) sqrt(5/4π) ∫ cos^2 θ P_2(cos θ) dΩ = 1/sqrt(5π)
  CHECK(s({1, 0}, {2, 0}).real() == Approx(kappa / std::sqrt(5.0 * kPi)).epsilon(1e-14));
  CHECK(s({1, 0}, {3, 0}) == complex(0.0, 0.0));
  CHECK(s.m_period() == 0);
  CHECK(s.block_decomposable());
  CHECK_THROWS_AS(s({0, 0}, {1, 0}), DomainError);
  CHECK_THROWS_AS(assemble_sigma_matrix(kappa_y10(1.0), 600), DomainError);
  AssemblyOptions big;
  big.max_cutoff = 700;
  CHECK_NOTHROW(assemble_sigma_matrix(DensitySpec(), 600, big));
  std::mt19937 rng(1);
  CHECK_THROWS_AS(assemble_sigma_matrix(testing::random_density(rng, 3), 2), DomainError);
}

TEST_CASE("sigma matrix is exactly Hermitian, banded and positive definite") {
  std::mt19937 rng(2);
  for (int trial = 0; trial < 5; ++trial) {
    const auto d = testing::random_density(rng, 1 + trial % 3, 0.9);
    validate_density(d);
    for (int cutoff : {4, 9, 16}) {
      const auto s = assemble_sigma_matrix(d, cutoff);
      const Eigen::MatrixXcd m = s.dense();
      CHECK((m - m.adjoint()).cwiseAbs().maxCoeff() == 0.0);
      for (int a = 0; a < s.dim(); ++a) {
        for (int b = 0; b < s.dim(); ++b) {
          if (std::abs(basis_harmonic(a).l - basis_harmonic(b).l) > d.band_limit()) CHECK(m(a, b) == complex(0.0, 0.0));
        }
      }
      const Eigen::LLT<Eigen::MatrixXcd> llt(m);
      CHECK(llt.info() == Eigen::Success);
    }
  }
}

TEST_CASE("sigma matrix entries match quadrature of Y* Σ Y") {
  std::mt19937 rng(4);
  const auto d = testing::random_density(rng, 2);
  const auto s = assemble_sigma_matrix(d, 4);
  const auto grid = exact_sphere_grid(10);
  for (int a = 0; a < s.dim(); a += 3) {
    for (int b = 0; b < s.dim(); b += 2) {
      const auto ia = basis_harmonic(a), ib = basis_harmonic(b);
      const complex q = integrate_sphere_complex(
          [&](double t, double p) { return std::conj(ylm(ia, t, p)) * density_eval(d, t, p) * ylm(ib, t, p); }, grid);
      CHECK(std::abs(q - s(ia, ib)) < 1e-13);
    }
  }
}

TEST_CASE("propagator weights and border vector") {
  const auto w = propagator_weights(1, 5);
  CHECK(w.values.size() == basis_dim(5));
  CHECK(w.values[basis_index(2, -1)] == Approx(1.0 / 36.0).epsilon(1e-15));
  for (int i = 1; i < w.values.size(); ++i) CHECK(w.values[i] <= w.values[i - 1]);
  const auto v = border_vector(kappa_y10(0.7), 3);
  CHECK(v[basis_index(1, 0)] == complex(0.7, 0.0));
  CHECK(v.norm() == Approx(0.7));
}

TEST_CASE("homogeneous sums") {
  CHECK(homogeneous_z(2) == 1.0);
  CHECK(homogeneous_z(3) == Approx(0.4041138063191885).epsilon(1e-15));
  CHECK_THROWS_AS(homogeneous_z(1), DomainError);
  for (int p = 4; p <= 8; ++p) {
    double direct = 0.0;
    for (int l = 1000000; l >= 1; --l) direct += (2.0 * l + 1.0) * inverse_eigen_power(l, p);
    CHECK(std::abs(homogeneous_z(p) - direct) < 1e-12);
  }
  for (int p = 2; p <= 7; ++p) {
    for (int L : {0, 3, 40, 300}) {
      // Direct tail up to 10^6; beyond that only the leading 1/l^(2p-1) behaviour remains.
      double direct = 0.0;
      for (int l = 1000000; l > L; --l) direct += (2.0 * l + 1.0) * inverse_eigen_power(l, p);
      direct += 1.0 / ((p - 1.0) * std::pow(1e6, 2 * p - 2));
      CHECK(homogeneous_z_tail(p, L) == Approx(direct).epsilon(1e-11));
    }
  }
  CHECK(homogeneous_z_tail(2, 99) == Approx(1e-4).epsilon(1e-14));
}

TEST_CASE("cubic moment matches quadrature") {
  std::mt19937 rng(8);
  const auto d = testing::random_density(rng, 3);
  const auto grid = exact_sphere_grid(9);
  const double q = integrate_sphere([&](double t, double p) { return std::pow(density_eval(d, t, p) - 1.0, 3); }, grid);
  CHECK(cubic_moment(d) == Approx(q).epsilon(1e-12));
  CHECK(cubic_moment(kappa_y10(1.0)) == Approx(0.0).scale(1e-15));
}

TEST_CASE("I1 closed forms") {
  CHECK(integral_I1(kappa_y10(1.3), 0) == Approx(1.69 / 2.0).epsilon(1e-15));
  CHECK(integral_I1(kappa_y10(1.3), 1) == Approx(1.69 / 4.0).epsilon(1e-15));
  CHECK(integral_I1(DensitySpec(), 2) == 0.0);
}

TEST_CASE("kappa family component integrals") {
  for (double k : {0.25, 1.0, 2.0}) {
    const SpectralEngine e(kappa_y10(k));
    const double k2 = k * k, k4 = k2 * k2;
    CHECK(e.I2(0, 0).value == Approx(k2 / 4.0).epsilon(1e-12));
    CHECK(e.I3(0, 0, 0).value == Approx(k2 / 8.0 + k4 / (120.0 * kPi)).epsilon(1e-12));
    CHECK(std::abs(e.J1(0, 0).value - (1.0 + k2 / (8.0 * kPi))) < 1e-8);
    CHECK(std::abs(e.J2(0, 0, 0).value - (2.0 * (kZeta3 - 1.0) + 3.0 * k2 / (32.0 * kPi))) < 1e-8);
  }
  CHECK(SpectralEngine(kappa_y10(1.0)).I3(0, 0, 0).value == Approx(0.1276525823).epsilon(1e-9));
  CHECK(SpectralEngine(kappa_y10(1.0)).J1(0, 0).value == Approx(1.0397887357).epsilon(1e-9));
  CHECK(SpectralEngine(kappa_y10(1.0)).J2(0, 0, 0).value == Approx(0.4339553581).epsilon(1e-9));
}

TEST_CASE("homogeneous density short-circuits") {
  const SpectralEngine e{DensitySpec()};
  CHECK(e.I2(0, 0).value == 0.0);
  CHECK(e.I3(1, 0, 2).value == 0.0);
  CHECK(e.J1(0, 0).value == 1.0);
  CHECK(e.J2(0, 0, 0).value == Approx(2.0 * (kZeta3 - 1.0)).epsilon(1e-15));
  CHECK(e.J1(1, 1).value == Approx(homogeneous_z(4)).epsilon(1e-15));
}

TEST_CASE("I2 (1,0) equals the direct double sum") {
  const auto d = kappa_y10(1.0);
  const double v = SpectralEngine(d).I2(1, 0).value;
  CHECK(std::abs(v - nested::I2(d, 1, 0, 12)) < 1e-10);
}

TEST_CASE("dual-path equivalence on random densities") {
  std::mt19937 rng(17);
  const int L = 9;
  for (int trial = 0; trial < 4; ++trial) {
    const auto d = testing::random_density(rng, 1 + trial % 3);
    const auto s = assemble_sigma_matrix(d, L);
    const auto v = border_vector(d, L);
    for (int q = 0; q <= 2; ++q) {
      for (int p = 0; p + q <= 2; ++p) {
        CHECK(std::abs(trace::I2(s, v, q, p) - nested::I2(d, q, p, L)) < 1e-10);
        CHECK(std::abs(trace::J1_truncated(s, q, p) - nested::J1(d, q, p, L)) < 1e-10);
        for (int r = 0; r + p + q <= 2; ++r) {
          CHECK(std::abs(trace::I3(s, v, q, p, r) - nested::I3(d, q, p, r, L)) < 1e-10);
          CHECK(std::abs(trace::J2_truncated(s, q, p, r) - nested::J2(d, q, p, r, L)) < 1e-10);
        }
      }
    }
  }
}

TEST_CASE("tail completion beats plain truncation") {
  std::mt19937 rng(23);
  const auto d = testing::random_density(rng, 2);
  const double reference = SpectralEngine(d).J1(0, 0).value;
  const auto s = assemble_sigma_matrix(d, 34);
  const double completed = trace::J1_completed(s, d, 0, 0, 32);
  const double truncated = trace::J1_truncated(assemble_sigma_matrix(d, 32), 0, 0) + homogeneous_z_tail(2, 32);
  CHECK(std::abs(completed - reference) < 1e-7);
  CHECK(std::abs(completed - reference) < 0.01 * std::abs(truncated - reference));
  CHECK_THROWS_AS(trace::J1_completed(assemble_sigma_matrix(d, 32), d, 0, 0, 32), DomainError);
}

TEST_CASE("rotation invariance of the integral family") {
  std::mt19937 rng(31);
  const auto d = testing::random_density(rng, 2);
  const auto r = rotate_density(d, 1.3, 0.6, 2.2);
  const SpectralEngine a(d), b(r);
  CHECK(a.I1(0) == Approx(b.I1(0)).epsilon(1e-13));
  CHECK(std::abs(a.I2(0, 0).value - b.I2(0, 0).value) < 1e-10);
  CHECK(std::abs(a.I3(0, 0, 0).value - b.I3(0, 0, 0).value) < 1e-10);
  CHECK(std::abs(a.J1(0, 0).value - b.J1(0, 0).value) < 1e-10);
  CHECK(std::abs(a.J2(0, 0, 0).value - b.J2(0, 0, 0).value) < 1e-10);
}

TEST_CASE("cutoff doubling: estimates shrink and values are Cauchy") {
  std::mt19937 rng(41);
  const auto d = testing::random_density(rng, 2);
  double previous_value = 0.0, previous_delta = 1.0;
  for (int L : {16, 32, 64, 128}) {
    const double v = trace::J1_completed(assemble_sigma_matrix(d, L + 2), d, 0, 0, L);
    if (L > 16) {
      const double delta = std::abs(v - previous_value);
      CHECK(delta < previous_delta);
      previous_delta = delta;
    }
    previous_value = v;
  }
  CutoffPolicy strict;
  strict.tolerance = 1e-30;
  strict.max_cutoff = 128;
  CHECK_THROWS_AS(SpectralEngine(d, strict).J1(0, 0), NonConverged);
  const auto ok = SpectralEngine(d).J1(0, 0);
  CHECK(ok.error_estimate <= 1e-8);
  CHECK(ok.cutoff >= 64);
}

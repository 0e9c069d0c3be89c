#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "hetsphere/errors.hpp"
#include "hetsphere/quadrature_oracle.hpp"
#include "hetsphere/spectral_core.hpp"
#include "support.hpp"

using namespace hetsphere;
using testing::kPi;
using doctest::Approx;

TEST_CASE("sphere grid exactness") {
  const auto g = make_sphere_grid(6, 12);
  CHECK(g.size() == 72);
  CHECK(integrate_sphere([](double, double) { return 1.0; }, g) == Approx(4.0 * kPi).epsilon(1e-14));
  const auto e = exact_sphere_grid(6);
  CHECK(std::abs(integrate_sphere([](double t, double p) { return std::norm(ylm({3, 2}, t, p)); }, e) - 1.0) < 1e-13);
  const auto d = kappa_y10(1.0);
  CHECK(std::abs(integrate_sphere([&](double t, double p) { return density_eval(d, t, p); }, e) - 4.0 * kPi) < 1e-13);
  // Degree 2 n_theta is one beyond the rule.
  const auto small = make_sphere_grid(2, 8);
  CHECK(std::abs(integrate_sphere([](double t, double) { return std::pow(std::cos(t), 4); }, small) - 4.0 * kPi / 5.0) >
        1e-6);
}

TEST_CASE("projection recovers coefficients") {
  std::mt19937 rng(12);
  const auto d = testing::random_density(rng, 3);
  const auto back = project_density([&](double t, double p) { return density_eval(d, t, p); }, 5, exact_sphere_grid(8));
  CHECK(back.band_limit() == 3);
  for (const auto& [idx, c] : d.coefficients()) CHECK(std::abs(back.coefficient(idx.l, idx.m) - c) < 1e-13);
}

TEST_CASE("tanh-sinh rule") {
  const auto r = tanh_sinh(5);
  double w = 0.0, logint = 0.0;
  for (std::size_t i = 0; i < r.x.size(); ++i) {
    w += r.weights[i];
    CHECK(std::abs(r.x[i]) < 1.0);
    CHECK(std::abs(r.complement[i] - (1.0 - std::abs(r.x[i]))) < 2e-16);
    logint += r.weights[i] * std::log(r.complement[i] * (2.0 - r.complement[i]));
  }
  CHECK(w == Approx(2.0).epsilon(1e-14));
  // ∫ log(1 - x^2) dx = 4 log 2 - 4
  CHECK(logint == Approx(4.0 * std::log(2.0) - 4.0).epsilon(1e-12));
}

TEST_CASE("oracle I1") {
  const auto a = oracle_I1(kappa_y10(1.0), 0);
  CHECK(std::abs(a.value - 0.5) < 1e-4 * 0.5);
  CHECK(a.error_estimate < 1e-4);
  CHECK(std::abs(oracle_I1(DensitySpec(), 1).value) < 1e-10);
  CHECK(std::abs(oracle_I1(kappa_y10(1.0), 1).value - 0.25) < 1e-4 * 0.25);
  CHECK_THROWS_AS(oracle_I1(kappa_y10(1.0), 3), DomainError);
}

TEST_CASE("oracle J1") {
  CHECK(std::abs(oracle_J1(DensitySpec(), 1, 1).value - homogeneous_z(4)) < 1e-6);
  CHECK(std::abs(oracle_J1(kappa_y10(1.0), 0, 0).value - (1.0 + 1.0 / (8.0 * kPi))) < 1e-3);
  CHECK(std::abs(oracle_J1(DensitySpec(), 0, 0).value - 1.0) < 1e-3);
}

TEST_CASE("oracles agree with the engine on random densities") {
  std::mt19937 rng(99);
  for (int trial = 0; trial < 2; ++trial) {
    const auto d = testing::random_density(rng, 2);
    const SpectralEngine engine(d);
    for (int q = 0; q <= 2; ++q) {
      const auto o = oracle_I1(d, q);
      const double exact = engine.I1(q);
      CHECK(std::abs(o.value - exact) <= std::max(o.error_estimate, 1e-4 * exact));
    }
    for (auto [q, p] : {std::pair{0, 0}, std::pair{1, 0}, std::pair{1, 1}}) {
      const auto o = oracle_J1(d, q, p);
      const double exact = engine.J1(q, p).value;
      CHECK(std::abs(o.value - exact) <= std::max(o.error_estimate, 1e-4 * exact));
    }
  }
}

TEST_CASE("oracle converges under refinement") {
  OracleOptions opts;
  opts.initial_level = 1;
  opts.tolerance = 1e-12;
  opts.max_level = 6;
  const auto d = kappa_y10(1.0);
  const double exact = 1.0 + 1.0 / (8.0 * kPi);
  double previous = 1.0;
  for (int level = 1; level <= 4; ++level) {
    OracleOptions o = opts;
    o.initial_level = level;
    o.max_level = level + 1;
    o.tolerance = 1.0;  // accept the first refinement
    const double err = std::abs(oracle_J1(d, 0, 0, o).value - exact);
    CHECK(err <= previous);
    previous = std::max(err, 1e-13);
  }
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "hetsphere/errors.hpp"
#include "hetsphere/polylog.hpp"
#include "hetsphere/sumrules.hpp"
#include "support.hpp"

using namespace hetsphere;
using testing::kPi;
using doctest::Approx;

namespace {

double z2_kappa(double k) { return 1.0 + std::pow(k, 4) / (64.0 * kPi * kPi); }
double z3_kappa(double k) {
  return 2.0 * (kZeta3 - 1.0) + 11.0 * std::pow(k, 4) / (640.0 * kPi * kPi) - std::pow(k, 6) / (512.0 * std::pow(kPi, 3));
}

}  // namespace

TEST_CASE("E0 coefficients") {
  const auto h = e0_coefficients(DensitySpec());
  CHECK(h.e1 == 1.0);
  CHECK(h.e2 == 0.0);
  CHECK(h.e3 == 0.0);
  CHECK(h.e4 == 0.0);
  for (double k : {0.5, 1.0, 1.7}) {
    const auto e = e0_coefficients(kappa_y10(k));
    CHECK(e.e1 == 1.0);
    CHECK(e.e2 == Approx(-k * k / (8.0 * kPi)).epsilon(1e-14));
    CHECK(e.e3 == Approx(std::pow(k, 4) / (32.0 * kPi * kPi)).epsilon(1e-10));
  }
}

TEST_CASE("E0 fourth-order coefficient from the components") {
  SumRuleComponents c;
  c.I1_0 = 0.3;
  c.I1_1 = 0.2;
  c.I1_2 = 0.1;
  c.I2_00 = 0.15;
  c.I2_10 = 0.07;
  c.I3_000 = 0.05;
  const auto e = e0_coefficients(c);
  const double p = kPi;
  CHECK(e.e4 == Approx((-0.1 + 0.14 - 0.05) / (4 * p) - 0.06 / (16 * p * p) + 5 * 0.3 * 0.15 / (16 * p * p) -
                       5 * 0.027 / (64 * p * p * p))
                    .epsilon(1e-15));
}

TEST_CASE("exact sum rules: homogeneous and kappa family") {
  CHECK(exact_sum_rule(DensitySpec(), 2).value == 1.0);
  CHECK(exact_sum_rule(DensitySpec(), 3).value == Approx(0.4041138063191885).epsilon(1e-15));
  for (double k : {0.25, 0.5, 1.0, 1.5, 2.0}) {
    const auto reports = exact_sum_rules(kappa_y10(k), {2, 3});
    CHECK(std::abs(reports[0].value - z2_kappa(k)) <= 1e-8 * z2_kappa(k));
    CHECK(std::abs(reports[1].value - z3_kappa(k)) <= 1e-8 * z3_kappa(k));
    CHECK(reports[0].error_estimate < 1e-7);
  }
  CHECK(exact_sum_rule(kappa_y10(1.0), 2).value == Approx(1.0015831).epsilon(1e-7));
  CHECK(exact_sum_rule(kappa_y10(1.0), 3).value == Approx(0.4057923).epsilon(1e-7));
  CHECK_THROWS_AS(exact_sum_rule(kappa_y10(1.0), 4), UnsupportedOrder);
  CHECK_THROWS_AS(assemble_sum_rule(1, SumRuleComponents{}), UnsupportedOrder);
}

TEST_CASE("sum rules are positive and rotation invariant") {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 3; ++trial) {
    const auto d = testing::random_density(rng, 1 + trial, 0.8);
    const auto r = rotate_density(d, 0.3 + trial, 1.2, -0.4 * trial);
    const auto a = exact_sum_rules(d, {2, 3});
    const auto b = exact_sum_rules(r, {2, 3});
    CHECK(a[0].value > 0.0);
    CHECK(a[1].value > 0.0);
    CHECK(std::abs(a[0].value - b[0].value) < 1e-10);
    CHECK(std::abs(a[1].value - b[1].value) < 1e-10);
  }
}

TEST_CASE("report JSON round trip reproduces the value exactly") {
  std::mt19937 rng(9);
  const auto report = exact_sum_rule(testing::random_density(rng, 2), 3);
  const auto doc = nlohmann::json::parse(report_to_json(report).dump());
  for (const char* key : {"I1_0", "I2_00", "I3_000", "J1_00", "J2_000"}) CHECK(doc["components"].contains(key));
  for (const char* key : {"e1", "e2", "e3", "e4"}) CHECK(doc["e0"].contains(key));
  const auto back = report_from_json(doc);
  CHECK(back.value == report.value);
  CHECK(assemble_sum_rule(back.order, back.components) == back.value);
  CHECK(back.cutoff == report.cutoff);
  CHECK_THROWS_AS(report_from_json(nlohmann::json::parse(R"({"order":2})")), std::invalid_argument);
}

TEST_CASE("scaling helper") {
  CHECK(scaled_sum_rule(1.5, 2, 2.0) == 6.0);
  CHECK(scaled_sum_rule(1.5, 3, 0.5) == Approx(0.1875));
  CHECK_THROWS_AS(scaled_sum_rule(1.0, 2, -1.0), DomainError);
}

TEST_CASE("Laurent coefficients of 1/E0^2 match the perturbative structure") {
  for (double k : {0.5, 1.0, 2.0}) {
    const SpectralEngine engine(kappa_y10(k));
    const auto c = sum_rule_components(engine);
    const auto e = e0_coefficients(c);
    const auto series = inverse_power_laurent(e, 2);
    // 1/(γ e1)^2 - 2 e2/(γ e1^3) + (3 e2^2 - 2 e1 e3)/e1^4, written through the integrals.
    CHECK(series[0] == 1.0);
    CHECK(series[1] == Approx(c.I1_0 / (2.0 * kPi)).epsilon(1e-14));
    CHECK(series[2] == Approx(c.I2_00 / (2.0 * kPi) - c.I1_0 * c.I1_0 / (16.0 * kPi * kPi) - c.I1_1 / (2.0 * kPi))
                           .epsilon(1e-12));
  }
}

TEST_CASE("Laurent expansion agrees with direct evaluation at small γ") {
  const E0Coefficients e{1.0, -0.04, 0.003, -0.0007};
  for (int p : {2, 3}) {
    const auto series = inverse_power_laurent(e, p);
    for (double g : {1e-2, 5e-3}) {
      const double e0 = e.e1 * g + e.e2 * g * g + e.e3 * g * g * g + e.e4 * g * g * g * g;
      double approx = 0.0;
      for (int n = 0; n <= p; ++n) approx += series[n] * std::pow(g, n - p);
      // Remainder is O(γ): relative to γ^-p the mismatch is O(γ^{p+1}).
      CHECK(std::abs(std::pow(e0, -p) - approx) * std::pow(g, p) < 10.0 * std::pow(g, p + 1));
    }
  }
}

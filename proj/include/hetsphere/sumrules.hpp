#pragma once

#include <vector>

#include "json.hpp"

#include "hetsphere/spectral_core.hpp"

namespace hetsphere {

/// Coefficients of E_0(γ) = Σ e_k γ^k for the lowest eigenvalue of the
/// shifted operator, at total mass 4π.
struct E0Coefficients {
  double e1 = 1.0;
  double e2 = 0.0;
  double e3 = 0.0;
  double e4 = 0.0;
};

/// Every integral the order-2 and order-3 sum rules and E_0 need.
struct SumRuleComponents {
  double I1_0 = 0.0;
  double I1_1 = 0.0;
  double I1_2 = 0.0;
  double I2_00 = 0.0;
  double I2_10 = 0.0;
  double I3_000 = 0.0;
  double J1_00 = 0.0;
  double J2_000 = 0.0;
};

struct SumRuleReport {
  int order = 2;
  double value = 0.0;
  SumRuleComponents components;
  E0Coefficients e0;
  /// Largest cutoff any truncated integral needed.
  int cutoff = 0;
  /// First-order propagation of the integral truncation estimates.
  double error_estimate = 0.0;
};

E0Coefficients e0_coefficients(const SumRuleComponents& c);
E0Coefficients e0_coefficients(const DensitySpec& d, const CutoffPolicy& policy = {});

/// Evaluates every component for one density.
SumRuleComponents sum_rule_components(const SpectralEngine& engine, int* cutoff = nullptr,
                                      double* error_estimate = nullptr);

/// Z̃_2 or Z̃_3 from stored components. Throws UnsupportedOrder otherwise.
double assemble_sum_rule(int order, const SumRuleComponents& c);

SumRuleReport exact_sum_rule(const DensitySpec& d, int order, const CutoffPolicy& policy = {});
/// Shares one engine (and its cached matrices) across several orders.
std::vector<SumRuleReport> exact_sum_rules(const DensitySpec& d, const std::vector<int>& orders,
                                           const CutoffPolicy& policy = {});

/// Z̃_p for the density λΣ given Z̃_p for Σ: eigenvalues scale by 1/λ.
double scaled_sum_rule(double value, int order, double lambda);

/// Laurent coefficients of 1/E_0(γ)^p, from γ^-p through γ^0.
std::vector<double> inverse_power_laurent(const E0Coefficients& e0, int p);

nlohmann::json report_to_json(const SumRuleReport& r);
/// Inverse of report_to_json; `value` is taken from the document as stored.
SumRuleReport report_from_json(const nlohmann::json& doc);

}  // namespace hetsphere

#include "hetsphere/sumrules.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hetsphere/errors.hpp"

namespace hetsphere {

namespace {

constexpr double kPi = std::numbers::pi;

void require_order(int order) {
  if (order != 2 && order != 3) throw UnsupportedOrder(order);
}

struct Evaluated {
  SumRuleComponents c;
  IntegralValue i2_00, i2_10, i3, j1, j2;
};

Evaluated evaluate(const SpectralEngine& engine) {
  Evaluated ev;
  ev.c.I1_0 = engine.I1(0);
  ev.c.I1_1 = engine.I1(1);
  ev.c.I1_2 = engine.I1(2);
  ev.i2_00 = engine.I2(0, 0);
  ev.i2_10 = engine.I2(1, 0);
  ev.i3 = engine.I3(0, 0, 0);
  ev.j1 = engine.J1(0, 0);
  ev.j2 = engine.J2(0, 0, 0);
  ev.c.I2_00 = ev.i2_00.value;
  ev.c.I2_10 = ev.i2_10.value;
  ev.c.I3_000 = ev.i3.value;
  ev.c.J1_00 = ev.j1.value;
  ev.c.J2_000 = ev.j2.value;
  return ev;
}

}  // namespace

E0Coefficients e0_coefficients(const SumRuleComponents& c) {
  const double four_pi = 4.0 * kPi;
  E0Coefficients e;
  e.e1 = 1.0;
  e.e2 = 0.0 - c.I1_0 / four_pi;
  e.e3 = (c.I1_1 - c.I2_00) / four_pi + c.I1_0 * c.I1_0 / (8.0 * kPi * kPi);
  e.e4 = (-c.I1_2 + 2.0 * c.I2_10 - c.I3_000) / four_pi - c.I1_1 * c.I1_0 / (16.0 * kPi * kPi) +
         5.0 * c.I1_0 * c.I2_00 / (16.0 * kPi * kPi) -
         5.0 * c.I1_0 * c.I1_0 * c.I1_0 / (64.0 * kPi * kPi * kPi);
  return e;
}

E0Coefficients e0_coefficients(const DensitySpec& d, const CutoffPolicy& policy) {
  return e0_coefficients(sum_rule_components(SpectralEngine(d, policy)));
}

SumRuleComponents sum_rule_components(const SpectralEngine& engine, int* cutoff, double* error_estimate) {
  const auto ev = evaluate(engine);
  if (cutoff) *cutoff = std::max({ev.i2_00.cutoff, ev.i2_10.cutoff, ev.i3.cutoff, ev.j1.cutoff, ev.j2.cutoff});
  if (error_estimate) {
    *error_estimate = std::max({ev.i2_00.error_estimate, ev.i2_10.error_estimate, ev.i3.error_estimate,
                                ev.j1.error_estimate, ev.j2.error_estimate});
  }
  return ev.c;
}

double assemble_sum_rule(int order, const SumRuleComponents& c) {
  require_order(order);
  const double a = c.I1_0 / (4.0 * kPi);
  if (order == 2) return c.J1_00 - c.I2_00 / (2.0 * kPi) + a * a;
  return c.J2_000 - 3.0 * c.I3_000 / (4.0 * kPi) + 3.0 * c.I1_0 * c.I2_00 / (16.0 * kPi * kPi) - a * a * a;
}

std::vector<SumRuleReport> exact_sum_rules(const DensitySpec& d, const std::vector<int>& orders,
                                           const CutoffPolicy& policy) {
  for (int p : orders) require_order(p);
  const auto ev = evaluate(SpectralEngine(d, policy));
  const auto& c = ev.c;
  const auto& i2_00 = ev.i2_00;
  const auto& i3 = ev.i3;
  const auto& j1 = ev.j1;
  const auto& j2 = ev.j2;
  const auto e0 = e0_coefficients(c);

  std::vector<SumRuleReport> out;
  for (int p : orders) {
    SumRuleReport r;
    r.order = p;
    r.components = c;
    r.e0 = e0;
    r.value = assemble_sum_rule(p, c);
    if (p == 2) {
      r.cutoff = std::max(i2_00.cutoff, j1.cutoff);
      r.error_estimate = j1.error_estimate + i2_00.error_estimate / (2.0 * kPi);
    } else {
      r.cutoff = std::max({i2_00.cutoff, i3.cutoff, j2.cutoff});
      r.error_estimate = j2.error_estimate + 3.0 * i3.error_estimate / (4.0 * kPi) +
                         3.0 * c.I1_0 * i2_00.error_estimate / (16.0 * kPi * kPi);
    }
    out.push_back(r);
  }
  return out;
}

SumRuleReport exact_sum_rule(const DensitySpec& d, int order, const CutoffPolicy& policy) {
  return exact_sum_rules(d, {order}, policy).front();
}

double scaled_sum_rule(double value, int order, double lambda) {
  if (!(lambda > 0.0)) throw DomainError("density scale must be positive");
  return std::pow(lambda, order) * value;
}

std::vector<double> inverse_power_laurent(const E0Coefficients& e0, int p) {
  if (p < 1) throw DomainError("Laurent order must be >= 1");
  if (e0.e1 == 0.0) throw DomainError("E_0 has no linear term");
  // E_0 = e1 γ (1 + u), u = a1 γ + a2 γ^2 + a3 γ^3; expand (1 + u)^-p to γ^p.
  const std::vector<double> a = {0.0, e0.e2 / e0.e1, e0.e3 / e0.e1, e0.e4 / e0.e1};
  std::vector<double> series(p + 1, 0.0);
  series[0] = 1.0;
  // Power series of (1 + u)^s via g' (1 + u) = s u' g.
  const double s = -p;
  for (int n = 1; n <= p; ++n) {
    double acc = 0.0;
    for (int k = 1; k <= n && k < static_cast<int>(a.size()); ++k) {
      acc += (s * k - (n - k)) * a[k] * series[n - k];
    }
    series[n] = acc / n;
  }
  const double lead = std::pow(e0.e1, -p);
  for (double& v : series) v *= lead;
  return series;
}

nlohmann::json report_to_json(const SumRuleReport& r) {
  const auto& c = r.components;
  return {
      {"order", r.order},
      {"value", r.value},
      {"components",
       {{"I1_0", c.I1_0},
        {"I1_1", c.I1_1},
        {"I1_2", c.I1_2},
        {"I2_00", c.I2_00},
        {"I2_10", c.I2_10},
        {"I3_000", c.I3_000},
        {"J1_00", c.J1_00},
        {"J2_000", c.J2_000}}},
      {"e0", {{"e1", r.e0.e1}, {"e2", r.e0.e2}, {"e3", r.e0.e3}, {"e4", r.e0.e4}}},
      {"cutoff", r.cutoff},
      {"error_estimate", r.error_estimate},
  };
}

SumRuleReport report_from_json(const nlohmann::json& doc) {
  try {
    SumRuleReport r;
    r.order = doc.at("order").get<int>();
    r.value = doc.at("value").get<double>();
    const auto& c = doc.at("components");
    r.components.I1_0 = c.at("I1_0").get<double>();
    r.components.I1_1 = c.value("I1_1", 0.0);
    r.components.I1_2 = c.value("I1_2", 0.0);
    r.components.I2_00 = c.at("I2_00").get<double>();
    r.components.I2_10 = c.value("I2_10", 0.0);
    r.components.I3_000 = c.at("I3_000").get<double>();
    r.components.J1_00 = c.at("J1_00").get<double>();
    r.components.J2_000 = c.at("J2_000").get<double>();
    const auto& e = doc.at("e0");
    r.e0 = {e.at("e1").get<double>(), e.at("e2").get<double>(), e.at("e3").get<double>(),
            e.at("e4").get<double>()};
    r.cutoff = doc.value("cutoff", 0);
    r.error_estimate = doc.value("error_estimate", 0.0);
    return r;
  } catch (const nlohmann::json::exception& ex) {
    throw std::invalid_argument(std::string("malformed sum-rule report: ") + ex.what());
  }
}

}  // namespace hetsphere

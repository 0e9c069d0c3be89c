#include "hetsphere/quadrature_oracle.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "hetsphere/errors.hpp"
#include "hetsphere/greens.hpp"

namespace hetsphere {

namespace {

constexpr double kPi = std::numbers::pi;

using Vec3 = std::array<double, 3>;

Vec3 unit_vector(double theta, double phi) {
  return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
}

void to_angles(const Vec3& r, double& theta, double& phi) {
  theta = std::atan2(std::hypot(r[0], r[1]), r[2]);
  phi = std::atan2(r[1], r[0]);
  if (phi < 0.0) phi += 2.0 * kPi;
}

// Tangent frame at (theta, phi): e1 along increasing θ, e2 along increasing φ.
void tangent_frame(double theta, double phi, Vec3& e1, Vec3& e2) {
  e1 = {std::cos(theta) * std::cos(phi), std::cos(theta) * std::sin(phi), -std::sin(theta)};
  e2 = {-std::sin(phi), std::cos(phi), 0.0};
}

// Values of a kernel K(x) on the tanh-sinh nodes, times the weights.
std::vector<double> weighted_kernel(const TanhSinhRule& rule, const std::function<double(double)>& kernel) {
  std::vector<double> out(rule.x.size());
  for (std::size_t i = 0; i < rule.x.size(); ++i) out[i] = rule.weights[i] * kernel(rule.x[i]);
  return out;
}

// ∫ dΩ Σ(Ω) ∫ dΩ' K(Ω·Ω') Σ(Ω') with K given on the tanh-sinh nodes.
double double_integral(const DensitySpec& d, const TanhSinhRule& rule, const std::vector<double>& kernel,
                       const SphereGrid& outer, int n_psi) {
  std::vector<double> sin_psi(n_psi), cos_psi(n_psi);
  for (int k = 0; k < n_psi; ++k) {
    sin_psi[k] = std::sin(2.0 * kPi * k / n_psi);
    cos_psi[k] = std::cos(2.0 * kPi * k / n_psi);
  }
  const double psi_weight = 2.0 * kPi / n_psi;

  double total = 0.0;
  for (std::size_t i = 0; i < outer.theta.size(); ++i) {
    for (double phi0 : outer.phi) {
      const double theta0 = outer.theta[i];
      const Vec3 e3 = unit_vector(theta0, phi0);
      Vec3 e1, e2;
      tangent_frame(theta0, phi0, e1, e2);
      double inner = 0.0;
      for (std::size_t j = 0; j < rule.x.size(); ++j) {
        const double x = rule.x[j];
        // sin of the geodesic angle, from 1 - |x| to keep precision near the poles of the rule.
        const double c = rule.complement[j];
        const double s = std::sqrt(c * (2.0 - c));
        double ring = 0.0;
        for (int k = 0; k < n_psi; ++k) {
          Vec3 r;
          for (int a = 0; a < 3; ++a) r[a] = x * e3[a] + s * (cos_psi[k] * e1[a] + sin_psi[k] * e2[a]);
          double theta, phi;
          to_angles(r, theta, phi);
          ring += density_eval(d, theta, phi);
        }
        inner += kernel[j] * ring * psi_weight;
      }
      total += outer.theta_weights[i] * outer.phi_weight * density_eval(d, theta0, phi0) * inner;
    }
  }
  return total;
}

template <typename Kernel>
OracleValue refine(const DensitySpec& d, const Kernel& kernel, const OracleOptions& opts, const char* name) {
  const int lc = d.band_limit();
  const SphereGrid coarse = exact_sphere_grid(2 * lc + opts.extra_degree);
  const SphereGrid fine = exact_sphere_grid(2 * lc + opts.extra_degree + 4);
  const int n_psi = lc + 3;

  auto at_level = [&](int level, const SphereGrid& grid) {
    const auto rule = tanh_sinh(level);
    return double_integral(d, rule, weighted_kernel(rule, kernel), grid, n_psi);
  };

  double previous = at_level(opts.initial_level, coarse);
  double estimate = 0.0;
  for (int level = opts.initial_level + 1; level <= opts.max_level; ++level) {
    const double current = at_level(level, coarse);
    const double outer_check = at_level(level, fine);
    estimate = std::max(std::abs(current - previous), std::abs(outer_check - current));
    if (estimate <= opts.tolerance * std::max(std::abs(current), 1e-300) || estimate < 1e-13) {
      return {current, estimate, level};
    }
    previous = current;
  }
  throw NonConverged(std::string(name) + " refinement stalled", estimate);
}

void check_order(int q) {
  if (q < 0 || q > 2) throw DomainError("oracle needs a closed-form Green's function, q in {0, 1, 2}");
}

}  // namespace

SphereGrid make_sphere_grid(int n_theta, int n_phi) {
  if (n_theta < 1 || n_phi < 1) throw DomainError("sphere grid needs positive sizes");
  SphereGrid g;
  g.n_theta = n_theta;
  g.n_phi = n_phi;
  const auto rule = gauss_legendre(n_theta);
  for (int i = 0; i < n_theta; ++i) {
    g.theta.push_back(std::acos(rule.nodes[i]));
    g.theta_weights.push_back(rule.weights[i]);
  }
  for (int j = 0; j < n_phi; ++j) g.phi.push_back(2.0 * kPi * j / n_phi);
  g.phi_weight = 2.0 * kPi / n_phi;
  return g;
}

SphereGrid exact_sphere_grid(int degree) {
  if (degree < 0) throw DomainError("negative degree");
  return make_sphere_grid(degree / 2 + 1, degree + 1);
}

double integrate_sphere(const std::function<double(double, double)>& f, const SphereGrid& grid) {
  double total = 0.0;
  for (std::size_t i = 0; i < grid.theta.size(); ++i) {
    double ring = 0.0;
    for (double phi : grid.phi) ring += f(grid.theta[i], phi);
    total += grid.theta_weights[i] * ring;
  }
  return total * grid.phi_weight;
}

complex integrate_sphere_complex(const std::function<complex(double, double)>& f, const SphereGrid& grid) {
  complex total(0.0, 0.0);
  for (std::size_t i = 0; i < grid.theta.size(); ++i) {
    complex ring(0.0, 0.0);
    for (double phi : grid.phi) ring += f(grid.theta[i], phi);
    total += grid.theta_weights[i] * ring;
  }
  return total * grid.phi_weight;
}

DensitySpec project_density(const std::function<double(double, double)>& f, int lmax, const SphereGrid& grid,
                            double drop_below) {
  std::vector<complex> acc((lmax + 1) * (lmax + 1), complex(0.0, 0.0));
  for (std::size_t i = 0; i < grid.theta.size(); ++i) {
    for (double phi : grid.phi) {
      const double w = grid.theta_weights[i] * grid.phi_weight * f(grid.theta[i], phi);
      const auto y = ylm_all(lmax, grid.theta[i], phi);
      for (std::size_t k = 0; k < acc.size(); ++k) acc[k] += w * std::conj(y[k]);
    }
  }
  DensitySpec::Coefficients out;
  for (int l = 1; l <= lmax; ++l) {
    for (int m = -l; m <= l; ++m) {
      const complex c = acc[l * l + l + m];
      if (std::abs(c) >= drop_below) out.emplace(HarmonicIndex(l, m), c);
    }
  }
  return DensitySpec(std::move(out));
}

TanhSinhRule tanh_sinh(int level) {
  if (level < 0 || level > 12) throw DomainError("tanh-sinh level out of range");
  const double h = std::ldexp(1.0, -level);
  TanhSinhRule rule;
  auto add = [&](double t) {
    const double u = 0.5 * kPi * std::sinh(t);
    const double cu = std::cosh(u);
    const double w = h * 0.5 * kPi * std::cosh(t) / (cu * cu);
    const double x = std::tanh(u);
    // 1 - |tanh u| = 2 / (1 + e^{2|u|})
    const double complement = 2.0 / (1.0 + std::exp(2.0 * std::abs(u)));
    if (std::abs(x) >= 1.0 || !(w > 0.0)) return false;
    rule.x.push_back(x);
    rule.complement.push_back(complement);
    rule.weights.push_back(w);
    return true;
  };
  add(0.0);
  for (int k = 1;; ++k) {
    const bool right = add(k * h);
    const bool left = add(-k * h);
    if (!right && !left) break;
  }
  return rule;
}

OracleValue oracle_I1(const DensitySpec& d, int q, const OracleOptions& opts) {
  check_order(q);
  return refine(d, [q](double x) { return green_closed(q, x); }, opts, "oracle_I1");
}

OracleValue oracle_J1(const DensitySpec& d, int q, int p, const OracleOptions& opts) {
  check_order(q);
  check_order(p);
  return refine(d, [q, p](double x) { return green_closed(q, x) * green_closed(p, x); }, opts, "oracle_J1");
}

}  // namespace hetsphere

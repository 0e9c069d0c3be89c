#pragma once

#include <functional>
#include <vector>

#include "hetsphere/harmonics.hpp"

namespace hetsphere {

/// Gauss-Legendre in cos θ times a uniform φ trapezoid. Integrates
/// spherical polynomials of degree <= min(2 n_theta - 1, n_phi - 1) exactly.
struct SphereGrid {
  int n_theta = 0;
  int n_phi = 0;
  std::vector<double> theta;
  std::vector<double> theta_weights;  // Gauss-Legendre weights in cos θ
  std::vector<double> phi;
  double phi_weight = 0.0;

  std::size_t size() const { return theta.size() * phi.size(); }
};

SphereGrid make_sphere_grid(int n_theta, int n_phi);
/// Smallest grid exact for degree `degree`.
SphereGrid exact_sphere_grid(int degree);

double integrate_sphere(const std::function<double(double, double)>& f, const SphereGrid& grid);
complex integrate_sphere_complex(const std::function<complex(double, double)>& f, const SphereGrid& grid);

/// c_lm = ∫ Y*_lm f dΩ for 1 <= l <= lmax on `grid`; coefficients below
/// `drop_below` in magnitude are omitted.
DensitySpec project_density(const std::function<double(double, double)>& f, int lmax, const SphereGrid& grid,
                            double drop_below = 1e-14);

/// Nodes and weights of a tanh-sinh rule on [-1, 1] at step 2^-level.
/// `complement` holds 1 - |x| computed without cancellation; nodes that
/// round to ±1 are dropped.
struct TanhSinhRule {
  std::vector<double> x;
  std::vector<double> complement;
  std::vector<double> weights;
};
TanhSinhRule tanh_sinh(int level);

struct OracleOptions {
  /// Outer grid is exact for degree 2 L_c + extra_degree.
  int extra_degree = 4;
  /// First tanh-sinh level; each refinement halves the step.
  int initial_level = 3;
  int max_level = 7;
  /// Relative target for the refinement estimate.
  double tolerance = 1e-4;
};

struct OracleValue {
  double value = 0.0;
  double error_estimate = 0.0;
  int level = 0;
};

/// ∫∫ Σ(Ω) G^(q)(Ω, Ω') Σ(Ω') dΩ dΩ' by direct product quadrature with
/// the closed-form Green's function. The inner integral runs in a frame
/// centred on Ω (geodesic cosine x by tanh-sinh, which absorbs the
/// logarithmic endpoint singularities, azimuth by trapezoid); the outer
/// integral uses a Gauss-Legendre sphere grid. q in {0, 1, 2}.
/// Throws NonConverged when refinement does not reach the tolerance.
OracleValue oracle_I1(const DensitySpec& d, int q, const OracleOptions& opts = {});

/// ∫∫ Σ(Ω) G^(q)(Ω, Ω') Σ(Ω') G^(p)(Ω', Ω) dΩ dΩ', same scheme.
OracleValue oracle_J1(const DensitySpec& d, int q, int p, const OracleOptions& opts = {});

}  // namespace hetsphere

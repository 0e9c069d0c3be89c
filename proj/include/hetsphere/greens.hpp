#pragma once

namespace hetsphere {

/// Cosine of the geodesic angle between two points of the unit sphere.
struct GeodesicCosine {
  double x = 0.0;

  static GeodesicCosine between(double theta1, double phi1, double theta2, double phi2);
};

/// Legendre polynomial P_l(x) by the three-term recurrence.
double legendre_p(int l, double x);

/// Closed-form regularized Green's function G^(q)(x), q in {0, 1, 2},
/// including the 1/4π prefactor.
///
/// Throws SingularPoint at (q=0, x=1) and (q=1, x=-1), DomainError for
/// |x| > 1 or any other q.
double green_closed(int q, double x);
inline double green_closed(int q, GeodesicCosine c) { return green_closed(q, c.x); }

/// Partial Legendre sum (1/4π) Σ_{l=1}^{L} (2l+1) / (l(l+1))^{q+1} P_l(x).
double green_series(int q, double x, int L);

/// Cesàro (C,1) mean of the partial sums green_series(q, x, 1..L).
double green_series_cesaro(int q, double x, int L);

}  // namespace hetsphere

#pragma once

namespace hetsphere {

inline constexpr double kZeta3 = 1.2020569031595942853997381615114;

/// Li_2(z) on [-1, 1] to ~1e-15 absolute. Throws DomainError outside.
double dilog(double z);

/// Li_3(z) on [-1, 1] to ~1e-15 absolute. Throws DomainError outside.
double trilog(double z);

/// Hurwitz zeta Σ_{n>=0} (n + a)^-s for integer s >= 2 and a >= 1.
double hurwitz_zeta(int s, double a);

/// Riemann zeta at an integer s >= 2.
double riemann_zeta(int s);

}  // namespace hetsphere

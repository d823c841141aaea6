#pragma once

#include <cmath>

#include "jbc/types.hpp"

namespace jbc {

namespace fault {
/// Test hook: negates S(t, lambda) everywhere so the verification suite can
/// be shown to fail. Never set outside tests.
inline bool flip_s_sign = false;
}  // namespace fault

/// Wave kernel S(t, lambda): sin(sqrt(lambda) t)/sqrt(lambda) for lambda > 0,
/// sinh(sqrt(|lambda|) t)/sqrt(|lambda|) for lambda < 0, and t at lambda = 0.
template <class Real>
Real s_kernel(Real t, Real lambda) {
  using std::sin;
  using std::sinh;
  using std::sqrt;
  const Real sign = fault::flip_s_sign ? Real(-1) : Real(1);
  if (lambda > 0) {
    const Real w = sqrt(lambda);
    return sign * sin(w * t) / w;
  }
  if (lambda < 0) {
    const Real w = sqrt(-lambda);
    return sign * sinh(w * t) / w;
  }
  return sign * t;
}

/// dS/dt: cos(sqrt(lambda) t), cosh(sqrt(|lambda|) t), or 1.
template <class Real>
Real c_kernel(Real t, Real lambda) {
  using std::cos;
  using std::cosh;
  using std::sqrt;
  if (lambda > 0) return cos(sqrt(lambda) * t);
  if (lambda < 0) return cosh(sqrt(-lambda) * t);
  return Real(1);
}

/// Integral of S(tau, lambda) over [0, t].
double s_antiderivative(double t, double lambda);

/// Integral over u in [0, t] of S(shift + u, lambda_j) * S(u, lambda_k).
///
/// Uses the Lagrange identity for the two solutions of y'' = -lambda y,
///   (lambda_j - lambda_k) * integral = [y1 y2' - y1' y2] from 0 to t,
/// and falls back to composite Gauss-Legendre when the bracket cancels
/// (lambda_j close to lambda_k, including the diagonal).
double lagrange_integral(double shift, double t, double lambda_j, double lambda_k);
Wide lagrange_integral(Wide shift, Wide t, Wide lambda_j, Wide lambda_k);

}  // namespace jbc

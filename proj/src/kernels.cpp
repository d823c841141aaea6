#include "jbc/kernels.hpp"

#include <algorithm>

#include <boost/math/quadrature/gauss.hpp>

namespace jbc {

double s_antiderivative(double t, double lambda) {
  const double x = lambda * t * t;
  if (std::abs(x) < 1e-4) {
    // t^2/2 - lambda t^4/24 + lambda^2 t^6/720 - lambda^3 t^8/40320
    const double t2 = t * t;
    return t2 * (0.5 - x / 24.0 + x * x / 720.0 - x * x * x / 40320.0);
  }
  if (lambda > 0.0) {
    const double w = std::sqrt(lambda);
    const double s = std::sin(0.5 * w * t);
    return 2.0 * s * s / lambda;
  }
  const double w = std::sqrt(-lambda);
  const double s = std::sinh(0.5 * w * t);
  return 2.0 * s * s / -lambda;
}

namespace {

template <class Real>
Real lagrange_integral_impl(Real shift, Real t, Real lambda_j, Real lambda_k) {
  using std::abs;
  using std::ceil;
  using std::sqrt;
  if (t <= 0) return Real(0);
  if (lambda_j != lambda_k) {
    const Real s1 = s_kernel(shift + t, lambda_j);
    const Real c1 = c_kernel(shift + t, lambda_j);
    const Real s2 = s_kernel(t, lambda_k);
    const Real c2 = c_kernel(t, lambda_k);
    const Real s0 = s_kernel(shift, lambda_j);
    const Real bracket = s1 * c2 - c1 * s2 - s0;
    const Real scale = abs(s1 * c2) + abs(c1 * s2) + abs(s0);
    // Accept the closed form while at most three digits cancel.
    if (abs(bracket) >= Real(1e-3) * scale) return bracket / (lambda_j - lambda_k);
  }
  const Real omega = sqrt(std::max({Real(1), abs(lambda_j), abs(lambda_k)}));
  const int panels = std::max(1, static_cast<int>(ceil((shift + t) * omega / 2)));
  using Rule = boost::math::quadrature::gauss<Real, 30>;
  const Real width = t / panels;
  Real acc = 0;
  for (int p = 0; p < panels; ++p) {
    const Real a = width * p;
    acc += Rule::integrate([&](Real u) { return s_kernel(shift + u, lambda_j) * s_kernel(u, lambda_k); }, a,
                           p + 1 == panels ? t : a + width);
  }
  return acc;
}

}  // namespace

double lagrange_integral(double shift, double t, double lambda_j, double lambda_k) {
  return lagrange_integral_impl(shift, t, lambda_j, lambda_k);
}

Wide lagrange_integral(Wide shift, Wide t, Wide lambda_j, Wide lambda_k) {
  return lagrange_integral_impl(shift, t, lambda_j, lambda_k);
}

}  // namespace jbc

#pragma once

#include <cmath>
#include <span>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>

#include "jbc/types.hpp"

namespace jbc {

/// Composite Simpson weights for m equally spaced nodes (m odd, m >= 3).
std::vector<double> simpson_weights(int m, double h);

/// Composite Simpson over equally spaced samples. An even sample count closes
/// with the 3/8 rule on the last three intervals; two samples use the trapezoid.
template <class T>
T composite_simpson(std::span<const T> f, double h) {
  const auto n = f.size();
  if (n < 2) return T(0);
  if (n == 2) return T(0.5 * h) * (f[0] + f[1]);
  if (n == 4) return T(3.0 * h / 8.0) * (f[0] + T(3) * f[1] + T(3) * f[2] + f[3]);
  std::size_t simpson_end = (n % 2 == 1) ? n - 1 : n - 4;
  T acc = f[0] + f[simpson_end];
  for (std::size_t i = 1; i < simpson_end; ++i) acc += T(i % 2 == 1 ? 4.0 : 2.0) * f[i];
  T total = acc * T(h / 3.0);
  if (simpson_end != n - 1) {
    const std::size_t i = simpson_end;
    total += T(3.0 * h / 8.0) * (f[i] + T(3) * f[i + 1] + T(3) * f[i + 2] + f[i + 3]);
  }
  return total;
}

/// Running integral from the first node, exact for piecewise cubics
/// (four-point interpolant on each interval). Requires at least 4 samples.
std::vector<double> cumulative_integral(std::span<const double> f, double h);

/// Second derivative on a uniform grid: 5-point central stencil in the
/// interior and 6-point one-sided stencils on the two nodes at each end.
std::vector<Complex> second_derivative(std::span<const Complex> f, double h);

/// Composite 30-point Gauss-Legendre on [a, b] with the given panel count.
template <class F>
auto gauss_legendre(F&& f, double a, double b, int panels) {
  using Result = decltype(f(a));
  Result acc = Result(0);
  const double width = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * width;
    acc += boost::math::quadrature::gauss<double, 30>::integrate(f, lo, lo + width);
  }
  return acc;
}

}  // namespace jbc

#include "jbc/quadrature.hpp"

namespace jbc {

std::vector<double> simpson_weights(int m, double h) {
  if (m < 3 || m % 2 == 0) throw DomainError("Simpson weights need an odd node count >= 3");
  std::vector<double> w(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    double c = (i == 0 || i == m - 1) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    w[static_cast<std::size_t>(i)] = c * h / 3.0;
  }
  return w;
}

std::vector<double> cumulative_integral(std::span<const double> f, double h) {
  const std::size_t n = f.size();
  if (n < 4) throw DomainError("cumulative integral needs at least 4 samples");
  std::vector<double> out(n, 0.0);
  const double c = h / 24.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    double piece;
    if (i == 0) {
      piece = 9.0 * f[0] + 19.0 * f[1] - 5.0 * f[2] + f[3];
    } else if (i + 2 < n) {
      piece = -f[i - 1] + 13.0 * f[i] + 13.0 * f[i + 1] - f[i + 2];
    } else {
      piece = f[i - 2] - 5.0 * f[i - 1] + 19.0 * f[i] + 9.0 * f[i + 1];
    }
    out[i + 1] = out[i] + c * piece;
  }
  return out;
}

std::vector<Complex> second_derivative(std::span<const Complex> f, double h) {
  const std::size_t n = f.size();
  if (n < 6) throw DomainError("second derivative stencil needs at least 6 samples");
  const double c = 1.0 / (12.0 * h * h);
  std::vector<Complex> out(n);
  for (std::size_t i = 2; i + 2 < n; ++i) {
    out[i] = c * (-f[i - 2] + 16.0 * f[i - 1] - 30.0 * f[i] + 16.0 * f[i + 1] - f[i + 2]);
  }
  auto edge0 = [&](auto at) {
    return c * (45.0 * at(0) - 154.0 * at(1) + 214.0 * at(2) - 156.0 * at(3) + 61.0 * at(4) - 10.0 * at(5));
  };
  auto edge1 = [&](auto at) {
    return c * (10.0 * at(0) - 15.0 * at(1) - 4.0 * at(2) + 14.0 * at(3) - 6.0 * at(4) + at(5));
  };
  auto fwd = [&](std::size_t k) { return f[k]; };
  auto bwd = [&](std::size_t k) { return f[n - 1 - k]; };
  out[0] = edge0(fwd);
  out[1] = edge1(fwd);
  out[n - 1] = edge0(bwd);
  out[n - 2] = edge1(bwd);
  return out;
}

}  // namespace jbc

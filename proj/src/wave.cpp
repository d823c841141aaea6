#include "jbc/wave.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/quadrature/gauss.hpp>

#include "jbc/quadrature.hpp"

namespace jbc {

namespace {

void check_time(double t, double T) {
  if (!(t >= 0.0) || t > T * (1.0 + 1e-14)) throw DomainError("time t must lie in [0, T]");
}

StateVector to_state(const SpectralData& sd, const WideComplexVector& h) {
  const int n = sd.size();
  WideComplexVector u = WideComplexVector::Zero(n);
  for (int k = 0; k < n; ++k) {
    for (int m = 0; m < n; ++m) u(m) += h(k) * Wide(sd.phi()(m, k));
  }
  return to_complex(u);
}

StateVector forward_sbasis(const SpectralData& sd, const SBasisControl& f, double t) {
  const int n = sd.size();
  if (f.size() != n) throw DimensionError("S-basis control and spectral data differ in N");
  WideComplexVector h = WideComplexVector::Zero(n);
  for (int k = 0; k < n; ++k) {
    for (int j = 0; j < n; ++j) {
      h(k) += f.coeffs(j) * lagrange_integral(Wide(f.T) - Wide(t), Wide(t), Wide(sd.lambda(j)), Wide(sd.lambda(k)));
    }
    h(k) /= Wide(sd.rho(k));
  }
  return to_state(sd, h);
}

// Integral over (0, t) of f(tau) kernel(t - tau) for sampled f: Simpson over the
// grid nodes up to t, plus a quadratic-interpolant tail when t is off-grid.
template <class Kernel>
Complex convolve_sampled(const SampledControl& f, double t, Kernel&& kernel) {
  const TimeGrid& grid = f.grid;
  const double h = grid.step();
  const int m = grid.size();
  int last = std::min(m - 1, static_cast<int>(std::floor(t / h + 1e-9)));
  std::vector<Complex> integrand(static_cast<std::size_t>(last + 1));
  for (int j = 0; j <= last; ++j) {
    integrand[static_cast<std::size_t>(j)] = f.values[static_cast<std::size_t>(j)] * kernel(t - grid.at(j));
  }
  Complex acc = composite_simpson<Complex>(integrand, h);
  const double tail = t - grid.at(last);
  if (tail > 1e-12 * h && last + 1 < m) {
    const int i0 = std::clamp(last - 1, 0, m - 3);
    const double x0 = grid.at(i0);
    auto interp = [&](double x) {
      const double s = (x - x0) / h;
      const Complex f0 = f.values[static_cast<std::size_t>(i0)];
      const Complex f1 = f.values[static_cast<std::size_t>(i0 + 1)];
      const Complex f2 = f.values[static_cast<std::size_t>(i0 + 2)];
      return f0 * (0.5 * (s - 1.0) * (s - 2.0)) - f1 * (s * (s - 2.0)) + f2 * (0.5 * s * (s - 1.0));
    };
    auto piece = [&](double tau) { return interp(tau) * kernel(t - tau); };
    const double a = grid.at(last);
    acc += boost::math::quadrature::gauss<double, 7>::integrate(
        [&](double tau) { return piece(tau).real(); }, a, t);
    acc += Complex(0.0, 1.0) * boost::math::quadrature::gauss<double, 7>::integrate(
                                   [&](double tau) { return piece(tau).imag(); }, a, t);
  }
  return acc;
}

StateVector forward_sampled(const SpectralData& sd, const SampledControl& f, double t) {
  if (f.grid.size() < 3) throw DomainError("sampled control grid too coarse (m < 3)");
  const int n = sd.size();
  WideComplexVector h(n);
  for (int k = 0; k < n; ++k) {
    const double lambda = sd.lambda(k);
    const Complex v = convolve_sampled(f, t, [lambda](double u) { return s_kernel(u, lambda); });
    h(k) = to_wide(v / sd.rho(k));
  }
  return to_state(sd, h);
}

}  // namespace

StateVector solve_forward(const SpectralData& sd, const Control& f, double t) {
  check_time(t, horizon(f));
  t = std::min(t, horizon(f));
  if (t == 0.0) return StateVector::Zero(sd.size());
  if (const auto* sb = std::get_if<SBasisControl>(&f)) return forward_sbasis(sd, *sb, t);
  return forward_sampled(sd, std::get<SampledControl>(f), t);
}

double response_function(const SpectralData& sd, double t) {
  double acc = 0.0;
  for (int k = 0; k < sd.size(); ++k) acc += s_kernel(t, sd.lambda(k)) / sd.rho(k);
  return acc;
}

std::vector<Complex> apply_response(const SpectralData& sd, const Control& f, const TimeGrid& grid) {
  std::vector<Complex> out(static_cast<std::size_t>(grid.size()));
  if (const auto* sampled = std::get_if<SampledControl>(&f)) {
    if (!(sampled->grid == grid)) throw DimensionError("response grid differs from the control grid");
    if (grid.size() < 3) throw DomainError("sampled control grid too coarse (m < 3)");
    for (int i = 0; i < grid.size(); ++i) {
      out[static_cast<std::size_t>(i)] =
          convolve_sampled(*sampled, grid.at(i), [&](double u) { return response_function(sd, u); });
    }
    return out;
  }
  const auto& sb = std::get<SBasisControl>(f);
  if (sb.size() != sd.size()) throw DimensionError("S-basis control and spectral data differ in N");
  if (std::abs(grid.horizon() - sb.T) > 1e-14 * sb.T) {
    throw DimensionError("response grid horizon differs from the control horizon");
  }
  const double omega = std::sqrt(std::max(1.0, std::max(std::abs(sd.lambdas().minCoeff()),
                                                        std::abs(sd.lambdas().maxCoeff()))));
  for (int i = 0; i < grid.size(); ++i) {
    const double t = grid.at(i);
    if (t == 0.0) {
      out[static_cast<std::size_t>(i)] = 0.0;
      continue;
    }
    const int panels = std::max(1, static_cast<int>(std::ceil(t * omega / 2.0)));
    const double re = gauss_legendre(
        [&](double s) { return response_function(sd, t - s) * sb(sd, s).real(); }, 0.0, t, panels);
    const double im = gauss_legendre(
        [&](double s) { return response_function(sd, t - s) * sb(sd, s).imag(); }, 0.0, t, panels);
    out[static_cast<std::size_t>(i)] = Complex(re, im);
  }
  return out;
}

StateVector control_operator(const SpectralData& sd, const Control& f) {
  if (const auto* sb = std::get_if<SBasisControl>(&f)) {
    return control_operator(sd, gram_matrix(sd, sb->T), *sb);
  }
  return solve_forward(sd, f, horizon(f));
}

StateVector control_operator(const SpectralData& sd, const GramMatrix& G, const SBasisControl& f) {
  if (std::abs(G.T - f.T) > 1e-14 * f.T) throw DomainError("Gram matrix horizon differs from control horizon");
  return to_state(sd, ct_image(sd, G, f));
}

}  // namespace jbc

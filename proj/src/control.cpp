#include "jbc/control.hpp"

#include <cmath>

#include "jbc/kernels.hpp"

namespace jbc {

TimeGrid::TimeGrid(double T, int m) : T_(T), m_(m) {
  if (!(T > 0.0) || !std::isfinite(T)) throw DomainError("time horizon T must be positive");
  if (m < 2) throw DomainError("time grid needs at least 2 samples");
}

std::vector<double> TimeGrid::points() const {
  std::vector<double> t(static_cast<std::size_t>(m_));
  for (int i = 0; i < m_; ++i) t[static_cast<std::size_t>(i)] = at(i);
  return t;
}

Complex SBasisControl::operator()(const SpectralData& sd, double t) const {
  if (size() != sd.size()) throw DimensionError("S-basis control and spectral data differ in N");
  WideComplex acc(0);
  const Wide tau(T - t);
  for (int k = 0; k < size(); ++k) {
    acc += coeffs(k) * s_kernel(tau, Wide(sd.lambda(k)));
  }
  return to_complex(acc);
}

SBasisControl make_sbasis(double T, const Eigen::VectorXcd& coeffs) {
  if (!(T > 0.0)) throw DomainError("time horizon T must be positive");
  return SBasisControl{T, to_wide(coeffs)};
}

SampledControl::SampledControl(TimeGrid g, std::vector<Complex> v) : grid(g), values(std::move(v)) {
  if (static_cast<int>(values.size()) != grid.size()) {
    throw DimensionError("sample count differs from the time grid size");
  }
}

double horizon(const Control& f) {
  return std::visit(
      [](const auto& c) {
        if constexpr (std::is_same_v<std::decay_t<decltype(c)>, SBasisControl>) {
          return c.T;
        } else {
          return c.grid.horizon();
        }
      },
      f);
}

SampledControl sample(const SpectralData& sd, const SBasisControl& f, const TimeGrid& grid) {
  if (std::abs(grid.horizon() - f.T) > 1e-14 * f.T) {
    throw DomainError("grid horizon differs from the control horizon");
  }
  std::vector<Complex> v(static_cast<std::size_t>(grid.size()));
  for (int i = 0; i < grid.size(); ++i) v[static_cast<std::size_t>(i)] = f(sd, grid.at(i));
  return SampledControl(grid, std::move(v));
}

SampledControl sample(const TimeGrid& grid, const std::function<Complex(double)>& f) {
  std::vector<Complex> v(static_cast<std::size_t>(grid.size()));
  for (int i = 0; i < grid.size(); ++i) v[static_cast<std::size_t>(i)] = f(grid.at(i));
  return SampledControl(grid, std::move(v));
}

}  // namespace jbc

#pragma once

#include <functional>
#include <variant>
#include <vector>

#include "jbc/jacobi.hpp"
#include "jbc/types.hpp"

namespace jbc {

/// Uniform samples t_i = i T / (m - 1), i = 0..m-1.
class TimeGrid {
 public:
  TimeGrid(double T, int m);

  double horizon() const { return T_; }
  int size() const { return m_; }
  double step() const { return T_ / (m_ - 1); }
  double at(int i) const { return i == m_ - 1 ? T_ : i * step(); }
  std::vector<double> points() const;

  bool operator==(const TimeGrid&) const = default;

 private:
  double T_;
  int m_;
};

/// Control in F^T_1: f(t) = sum_k c_k S(T - t, lambda_k).
struct SBasisControl {
  double T = 1.0;
  WideComplexVector coeffs;

  int size() const { return static_cast<int>(coeffs.size()); }
  /// f(t), evaluated in binary128 before rounding.
  Complex operator()(const SpectralData& sd, double t) const;
};

SBasisControl make_sbasis(double T, const Eigen::VectorXcd& coeffs);

/// Control given by samples on a time grid.
struct SampledControl {
  TimeGrid grid;
  std::vector<Complex> values;

  SampledControl(TimeGrid g, std::vector<Complex> v);
};

using Control = std::variant<SBasisControl, SampledControl>;

double horizon(const Control& f);

SampledControl sample(const SpectralData& sd, const SBasisControl& f, const TimeGrid& grid);
SampledControl sample(const TimeGrid& grid, const std::function<Complex(double)>& f);

}  // namespace jbc

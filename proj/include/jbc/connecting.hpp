#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "jbc/control.hpp"
#include "jbc/jacobi.hpp"

namespace jbc {

/// G(j, k) = integral over (0, T) of S(u, lambda_j) S(u, lambda_k) du: the
/// L2(0, T) Gram matrix of the basis S_k(T - t) of F^T_1.
/// Entries are computed in binary128; g is the rounded copy.
struct GramMatrix {
  Eigen::MatrixXd g;
  double T = 1.0;
  WideMatrix gw;

  GramMatrix() = default;
  GramMatrix(WideMatrix wide, double horizon);

  int size() const { return static_cast<int>(g.rows()); }
  const WideMatrix& wide() const { return gw; }
};

GramMatrix gram_matrix(const SpectralData& sd, double T);
GramMatrix gram_matrix(const Eigen::VectorXd& lambdas, double T);

/// sum_k S_k(T - t) S_k(T - s) / rho_k
double ct_kernel_spectral(const SpectralData& sd, double T, double t, double s);

/// (1/2) * integral of r over [|t - s|, 2T - s - t], in closed form per spectral term.
double ct_kernel_dynamic(const SpectralData& sd, double T, double t, double s);

/// C^T on F^T_1: coefficient k of the image is (G c)_k / rho_k.
SBasisControl apply_ct(const SpectralData& sd, const GramMatrix& G, const SBasisControl& f);

/// (G c)_k / rho_k, the S-basis coefficients of C^T f.
WideComplexVector ct_image(const SpectralData& sd, const GramMatrix& G, const SBasisControl& f);

/// (f, g) in L2(0, T) for S-basis controls: c_f^T G conj(c_g).
WideComplex ft_inner(const GramMatrix& G, const SBasisControl& f, const SBasisControl& g);

/// (C^T f)(t_i) by Simpson quadrature of the dynamic kernel; needs m odd >= 3.
SampledControl apply_ct_grid(const SpectralData& sd, double T, const SampledControl& f);

/// Response function samples r(n h), n = 0..2(m-1), h = T/(m-1): the range
/// (0, 2T) the dynamic kernel needs.
struct ResponseSamples {
  double T = 1.0;
  int m = 0;
  std::vector<double> values;

  double step() const { return T / (m - 1); }
};

ResponseSamples sample_response(const SpectralData& sd, double T, int m);

/// Low-rank spectral factorization of the symmetrized grid operator
/// D K D (D^2 = Simpson weights), truncated at a relative threshold.
struct TruncatedOperator {
  Eigen::VectorXd values;   // retained eigenvalues, descending
  Eigen::MatrixXd vectors;  // m x rank
  Eigen::VectorXd sqrt_weights;
  Eigen::VectorXd probe_values;  // every Ritz value computed, descending
  int rank = 0;
  double condition = 0.0;

  /// Minimum-norm least-squares solution of C f = rhs restricted to the retained range.
  std::vector<Complex> solve(std::span<const Complex> rhs) const;
  /// C f through the truncated factorization.
  std::vector<Complex> apply(std::span<const Complex> f) const;
};

/// Grid discretization of C^T: (C f)_i = sum_j w_j K(t_i, t_j) f_j with K
/// from the dynamic representation and w the Simpson weights on [0, T].
class CtGridOperator {
 public:
  /// Data-driven route: K from the running integral of sampled r.
  static CtGridOperator from_response(const ResponseSamples& r);
  /// K from the closed-form integral of the spectral response function.
  static CtGridOperator from_spectral(const SpectralData& sd, double T, int m);

  const TimeGrid& grid() const { return grid_; }
  const std::vector<double>& weights() const { return weights_; }
  double kernel(int i, int j) const;
  Eigen::MatrixXd dense_kernel() const;

  std::vector<Complex> apply(std::span<const Complex> f) const;

  /// Randomized subspace iteration with probe_rank columns; eigenvalues of
  /// D K D below rel_threshold * max are discarded.
  TruncatedOperator truncate(int probe_rank, double rel_threshold = 1e-10,
                             std::uint64_t seed = 0x5eed) const;

 private:
  CtGridOperator(TimeGrid grid, std::vector<double> running_integral);

  TimeGrid grid_;
  std::vector<double> running_;  // integral of r over [0, n h], n = 0..2(m-1)
  std::vector<double> weights_;
};

}  // namespace jbc

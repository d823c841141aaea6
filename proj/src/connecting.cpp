#include "jbc/connecting.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "jbc/kernels.hpp"
#include "jbc/quadrature.hpp"

namespace jbc {

GramMatrix gram_matrix(const SpectralData& sd, double T) { return gram_matrix(sd.lambdas(), T); }

GramMatrix::GramMatrix(WideMatrix wide, double horizon)
    : g(wide.cast<double>()), T(horizon), gw(std::move(wide)) {}

GramMatrix gram_matrix(const Eigen::VectorXd& lambdas, double T) {
  if (!(T > 0.0)) throw DomainError("time horizon T must be positive");
  const auto n = lambdas.size();
  WideMatrix g(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index k = j; k < n; ++k) {
      g(j, k) = lagrange_integral(Wide(0), Wide(T), Wide(lambdas(j)), Wide(lambdas(k)));
      g(k, j) = g(j, k);
    }
  }
  return GramMatrix(std::move(g), T);
}

double ct_kernel_spectral(const SpectralData& sd, double T, double t, double s) {
  double acc = 0.0;
  for (int k = 0; k < sd.size(); ++k) {
    acc += s_kernel(T - t, sd.lambda(k)) * s_kernel(T - s, sd.lambda(k)) / sd.rho(k);
  }
  return acc;
}

double ct_kernel_dynamic(const SpectralData& sd, double T, double t, double s) {
  const double lower = std::abs(t - s);
  const double upper = 2.0 * T - s - t;
  double acc = 0.0;
  for (int k = 0; k < sd.size(); ++k) {
    acc += (s_antiderivative(upper, sd.lambda(k)) - s_antiderivative(lower, sd.lambda(k))) / sd.rho(k);
  }
  return 0.5 * acc;
}

WideComplexVector ct_image(const SpectralData& sd, const GramMatrix& G, const SBasisControl& f) {
  if (f.size() != sd.size() || G.size() != sd.size()) {
    throw DimensionError("control, Gram matrix and spectral data differ in N");
  }
  WideComplexVector y = G.wide().cast<WideComplex>() * f.coeffs;
  for (int k = 0; k < sd.size(); ++k) y(k) /= Wide(sd.rho(k));
  return y;
}

SBasisControl apply_ct(const SpectralData& sd, const GramMatrix& G, const SBasisControl& f) {
  return SBasisControl{f.T, ct_image(sd, G, f)};
}

WideComplex ft_inner(const GramMatrix& G, const SBasisControl& f, const SBasisControl& g) {
  if (f.size() != G.size() || g.size() != G.size()) {
    throw DimensionError("controls and Gram matrix differ in N");
  }
  const WideComplexVector Gg = G.wide().cast<WideComplex>() * g.coeffs.conjugate();
  return (f.coeffs.array() * Gg.array()).sum();
}

SampledControl apply_ct_grid(const SpectralData& sd, double T, const SampledControl& f) {
  if (std::abs(f.grid.horizon() - T) > 1e-14 * T) {
    throw DomainError("grid horizon differs from T");
  }
  const auto op = CtGridOperator::from_spectral(sd, T, f.grid.size());
  return SampledControl(f.grid, op.apply(f.values));
}

ResponseSamples sample_response(const SpectralData& sd, double T, int m) {
  if (!(T > 0.0)) throw DomainError("time horizon T must be positive");
  if (m < 2) throw DomainError("grid needs at least 2 samples");
  ResponseSamples out{T, m, {}};
  const double h = out.step();
  out.values.resize(static_cast<std::size_t>(2 * (m - 1) + 1));
  for (std::size_t n = 0; n < out.values.size(); ++n) {
    const double t = static_cast<double>(n) * h;
    double acc = 0.0;
    for (int k = 0; k < sd.size(); ++k) acc += s_kernel(t, sd.lambda(k)) / sd.rho(k);
    out.values[n] = acc;
  }
  return out;
}

CtGridOperator::CtGridOperator(TimeGrid grid, std::vector<double> running_integral)
    : grid_(grid),
      running_(std::move(running_integral)),
      weights_(simpson_weights(grid.size(), grid.step())) {}

CtGridOperator CtGridOperator::from_response(const ResponseSamples& r) {
  if (r.m < 3 || r.m % 2 == 0) throw DomainError("grid size m must be odd and >= 3");
  if (static_cast<int>(r.values.size()) != 2 * (r.m - 1) + 1) {
    throw DimensionError("response samples must cover [0, 2T] with 2(m-1)+1 points");
  }
  return CtGridOperator(TimeGrid(r.T, r.m), cumulative_integral(r.values, r.step()));
}

CtGridOperator CtGridOperator::from_spectral(const SpectralData& sd, double T, int m) {
  if (m < 3 || m % 2 == 0) throw DomainError("grid size m must be odd and >= 3");
  TimeGrid grid(T, m);
  const double h = grid.step();
  std::vector<double> running(static_cast<std::size_t>(2 * (m - 1) + 1));
  for (std::size_t n = 0; n < running.size(); ++n) {
    const double x = static_cast<double>(n) * h;
    double acc = 0.0;
    for (int k = 0; k < sd.size(); ++k) acc += s_antiderivative(x, sd.lambda(k)) / sd.rho(k);
    running[n] = acc;
  }
  return CtGridOperator(grid, std::move(running));
}

double CtGridOperator::kernel(int i, int j) const {
  const int m = grid_.size();
  return 0.5 * (running_[static_cast<std::size_t>(2 * (m - 1) - i - j)] -
                running_[static_cast<std::size_t>(std::abs(i - j))]);
}

Eigen::MatrixXd CtGridOperator::dense_kernel() const {
  const int m = grid_.size();
  Eigen::MatrixXd K(m, m);
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < m; ++i) K(i, j) = kernel(i, j);
  }
  return K;
}

std::vector<Complex> CtGridOperator::apply(std::span<const Complex> f) const {
  const int m = grid_.size();
  if (static_cast<int>(f.size()) != m) throw DimensionError("sample count differs from grid size");
  std::vector<Complex> wf(f.size());
  for (int j = 0; j < m; ++j) wf[static_cast<std::size_t>(j)] = weights_[static_cast<std::size_t>(j)] * f[static_cast<std::size_t>(j)];
  std::vector<Complex> out(f.size());
  for (int i = 0; i < m; ++i) {
    Complex acc = 0.0;
    for (int j = 0; j < m; ++j) acc += kernel(i, j) * wf[static_cast<std::size_t>(j)];
    out[static_cast<std::size_t>(i)] = acc;
  }
  return out;
}

namespace {

Eigen::MatrixXd orthonormal_basis(const Eigen::MatrixXd& Y) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(Y);
  return qr.householderQ() * Eigen::MatrixXd::Identity(Y.rows(), Y.cols());
}

}  // namespace

TruncatedOperator CtGridOperator::truncate(int probe_rank, double rel_threshold,
                                           std::uint64_t seed) const {
  const int m = grid_.size();
  const int k = std::clamp(probe_rank, 1, m);

  Eigen::VectorXd d(m);
  for (int i = 0; i < m; ++i) d(i) = std::sqrt(weights_[static_cast<std::size_t>(i)]);
  const Eigen::MatrixXd A = d.asDiagonal() * dense_kernel() * d.asDiagonal();

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd omega(m, k);
  for (int j = 0; j < k; ++j) {
    for (int i = 0; i < m; ++i) omega(i, j) = normal(rng);
  }
  Eigen::MatrixXd Q = orthonormal_basis(A * omega);
  for (int pass = 0; pass < 3; ++pass) Q = orthonormal_basis(A * Q);

  Eigen::MatrixXd B = Q.transpose() * A * Q;
  B = 0.5 * (B + B.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(B);
  // Eigen sorts ascending; reverse to descending.
  const Eigen::VectorXd ritz = eig.eigenvalues().reverse();
  const Eigen::MatrixXd vecs = Q * eig.eigenvectors().rowwise().reverse();

  TruncatedOperator out;
  out.sqrt_weights = d;
  out.probe_values = ritz;
  const double top = std::max(ritz(0), 0.0);
  int rank = 0;
  while (rank < k && ritz(rank) > rel_threshold * top) ++rank;
  out.rank = rank;
  out.values = ritz.head(rank);
  out.vectors = vecs.leftCols(rank);
  out.condition = rank > 0 ? ritz(0) / ritz(rank - 1) : std::numeric_limits<double>::infinity();
  return out;
}

std::vector<Complex> TruncatedOperator::solve(std::span<const Complex> rhs) const {
  const auto m = sqrt_weights.size();
  if (static_cast<Eigen::Index>(rhs.size()) != m) throw DimensionError("rhs length differs from grid size");
  Eigen::VectorXcd b(m);
  for (Eigen::Index i = 0; i < m; ++i) b(i) = sqrt_weights(i) * rhs[static_cast<std::size_t>(i)];
  Eigen::VectorXcd coeff = vectors.transpose().cast<Complex>() * b;
  for (int l = 0; l < rank; ++l) coeff(l) /= values(l);
  const Eigen::VectorXcd x = vectors.cast<Complex>() * coeff;
  std::vector<Complex> f(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i) f[static_cast<std::size_t>(i)] = x(i) / sqrt_weights(i);
  return f;
}

std::vector<Complex> TruncatedOperator::apply(std::span<const Complex> f) const {
  const auto m = sqrt_weights.size();
  if (static_cast<Eigen::Index>(f.size()) != m) throw DimensionError("control length differs from grid size");
  Eigen::VectorXcd x(m);
  for (Eigen::Index i = 0; i < m; ++i) x(i) = sqrt_weights(i) * f[static_cast<std::size_t>(i)];
  Eigen::VectorXcd coeff = vectors.transpose().cast<Complex>() * x;
  for (int l = 0; l < rank; ++l) coeff(l) *= values(l);
  const Eigen::VectorXcd y = vectors.cast<Complex>() * coeff;
  std::vector<Complex> out(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i) out[static_cast<std::size_t>(i)] = y(i) / sqrt_weights(i);
  return out;
}

}  // namespace jbc

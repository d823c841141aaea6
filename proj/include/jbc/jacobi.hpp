#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "jbc/types.hpp"

namespace jbc {

/// Finite Jacobi matrix: diagonal b_1..b_N, positive off-diagonal a_1..a_{N-1}.
///
/// The recurrence conventions a_0 = 1 and a_N = 1 are implied and not stored.
class JacobiMatrix {
 public:
  /// Throws DomainError unless |a| = |b| - 1, |b| >= 1, every a_k > 0 and
  /// all entries are finite.
  JacobiMatrix(std::vector<double> a, std::vector<double> b);

  int size() const { return static_cast<int>(b_.size()); }
  std::span<const double> off_diagonal() const { return a_; }
  std::span<const double> diagonal() const { return b_; }

  /// a_k with 1-based k in [0, N]; a_0 = a_N = 1.
  double a(int k) const;
  /// b_k with 1-based k in [1, N].
  double b(int k) const { return b_[static_cast<std::size_t>(k - 1)]; }

  Eigen::MatrixXd dense() const;
  /// Gershgorin interval containing the spectrum.
  std::pair<double, double> gershgorin() const;
  double max_abs_entry() const;

  bool operator==(const JacobiMatrix&) const = default;

 private:
  std::vector<double> a_;
  std::vector<double> b_;
};

/// phi_1(x), ..., phi_{N+1}(x) from the three-term recurrence
/// a_n phi_{n+1} = (x - b_n) phi_n - a_{n-1} phi_{n-1}, phi_1 = 1, phi_0 = 0.
template <class Scalar>
std::vector<Scalar> eval_polynomials(const JacobiMatrix& J, Scalar x) {
  const int n = J.size();
  std::vector<Scalar> phi(static_cast<std::size_t>(n + 1));
  Scalar prev(0);
  Scalar cur(1);
  phi[0] = cur;
  for (int k = 1; k <= n; ++k) {
    Scalar next = ((x - Scalar(J.b(k))) * cur - Scalar(J.a(k - 1)) * prev) / Scalar(J.a(k));
    prev = cur;
    cur = next;
    phi[static_cast<std::size_t>(k)] = cur;
  }
  return phi;
}

/// Derivatives phi'_1(x), ..., phi'_{N+1}(x).
template <class Scalar>
std::vector<Scalar> eval_polynomial_derivatives(const JacobiMatrix& J, Scalar x) {
  const int n = J.size();
  std::vector<Scalar> dphi(static_cast<std::size_t>(n + 1));
  Scalar p_prev(0), p_cur(1);
  Scalar d_prev(0), d_cur(0);
  dphi[0] = d_cur;
  for (int k = 1; k <= n; ++k) {
    const Scalar ak(J.a(k)), akm1(J.a(k - 1)), bk(J.b(k));
    Scalar p_next = ((x - bk) * p_cur - akm1 * p_prev) / ak;
    Scalar d_next = ((x - bk) * d_cur + p_cur - akm1 * d_prev) / ak;
    p_prev = p_cur;
    p_cur = p_next;
    d_prev = d_cur;
    d_cur = d_next;
    dphi[static_cast<std::size_t>(k)] = d_cur;
  }
  return dphi;
}

/// Number of eigenvalues strictly below x (Sturm sequence of LDL^T pivots).
int sturm_count(const JacobiMatrix& J, double x);

/// Eigenvalues lambda_k (roots of phi_{N+1}), weights rho_k = |phi(lambda_k)|^2
/// and the matrix Phi(m, k) = phi_m(lambda_k). Immutable; copies share storage.
class SpectralData {
 public:
  SpectralData(JacobiMatrix J, Eigen::VectorXd lambdas, Eigen::VectorXd rhos, Eigen::MatrixXd phi);

  int size() const { return static_cast<int>(impl_->lambdas.size()); }
  const JacobiMatrix& matrix() const { return impl_->matrix; }
  const Eigen::VectorXd& lambdas() const { return impl_->lambdas; }
  const Eigen::VectorXd& rhos() const { return impl_->rhos; }
  const Eigen::MatrixXd& phi() const { return impl_->phi; }
  double lambda(int k) const { return impl_->lambdas(k); }
  double rho(int k) const { return impl_->rhos(k); }

  /// True when both refer to the same spectrum (shared storage or equal data).
  bool same_as(const SpectralData& other) const;

 private:
  struct Impl {
    JacobiMatrix matrix;
    Eigen::VectorXd lambdas;
    Eigen::VectorXd rhos;
    Eigen::MatrixXd phi;
  };
  std::shared_ptr<const Impl> impl_;
};

/// Sturm bisection for every root of phi_{N+1}, Newton polish, then Phi and rho.
SpectralData spectral_decomposition(const JacobiMatrix& J);

StateVector apply_matrix(const JacobiMatrix& J, const StateVector& v);
Eigen::VectorXd apply_matrix(const JacobiMatrix& J, const Eigen::VectorXd& v);

/// rho(x) = sum over lambda_k < x of 1/rho_k.
double eval_spectral_function(const SpectralData& sd, double x);

struct Range {
  double lo;
  double hi;
};

/// Uniform random Jacobi matrix; deterministic for a given seed.
JacobiMatrix random_jacobi(int n, std::uint64_t seed, Range b_range = {-5.0, 5.0},
                           Range a_range = {0.1, 5.0});

}  // namespace jbc

#include "jbc/jacobi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

namespace jbc {

JacobiMatrix::JacobiMatrix(std::vector<double> a, std::vector<double> b)
    : a_(std::move(a)), b_(std::move(b)) {
  if (b_.empty()) throw DomainError("Jacobi matrix must have size >= 1");
  if (a_.size() + 1 != b_.size()) {
    throw DomainError("Jacobi matrix needs |a| = |b| - 1, got |a| = " + std::to_string(a_.size()) +
                      ", |b| = " + std::to_string(b_.size()));
  }
  for (std::size_t k = 0; k < a_.size(); ++k) {
    if (!std::isfinite(a_[k]) || !(a_[k] > 0.0)) {
      throw DomainError("off-diagonal entry a_" + std::to_string(k + 1) + " must be positive");
    }
  }
  for (double v : b_) {
    if (!std::isfinite(v)) throw DomainError("diagonal entries must be finite");
  }
}

double JacobiMatrix::a(int k) const {
  if (k <= 0 || k >= size()) return 1.0;
  return a_[static_cast<std::size_t>(k - 1)];
}

Eigen::MatrixXd JacobiMatrix::dense() const {
  const int n = size();
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) A(i, i) = b_[static_cast<std::size_t>(i)];
  for (int i = 0; i + 1 < n; ++i) {
    A(i, i + 1) = a_[static_cast<std::size_t>(i)];
    A(i + 1, i) = a_[static_cast<std::size_t>(i)];
  }
  return A;
}

std::pair<double, double> JacobiMatrix::gershgorin() const {
  const int n = size();
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (int k = 1; k <= n; ++k) {
    double radius = 0.0;
    if (k > 1) radius += a(k - 1);
    if (k < n) radius += a(k);
    lo = std::min(lo, b(k) - radius);
    hi = std::max(hi, b(k) + radius);
  }
  return {lo, hi};
}

double JacobiMatrix::max_abs_entry() const {
  double m = 0.0;
  for (double v : a_) m = std::max(m, std::abs(v));
  for (double v : b_) m = std::max(m, std::abs(v));
  return m;
}

int sturm_count(const JacobiMatrix& J, double x) {
  const int n = J.size();
  double max_a2 = 1.0;
  for (double v : J.off_diagonal()) max_a2 = std::max(max_a2, v * v);
  const double pivmin = std::numeric_limits<double>::min() * max_a2;

  int count = 0;
  double q = J.b(1) - x;
  if (std::abs(q) < pivmin) q = -pivmin;
  if (q < 0.0) ++count;
  for (int k = 2; k <= n; ++k) {
    const double ak = J.a(k - 1);
    q = (J.b(k) - x) - ak * ak / q;
    if (std::abs(q) < pivmin) q = -pivmin;
    if (q < 0.0) ++count;
  }
  return count;
}

SpectralData::SpectralData(JacobiMatrix J, Eigen::VectorXd lambdas, Eigen::VectorXd rhos,
                           Eigen::MatrixXd phi)
    : impl_(std::make_shared<const Impl>(
          Impl{std::move(J), std::move(lambdas), std::move(rhos), std::move(phi)})) {
  const auto n = impl_->matrix.size();
  if (impl_->lambdas.size() != n || impl_->rhos.size() != n || impl_->phi.rows() != n ||
      impl_->phi.cols() != n) {
    throw DimensionError("spectral data dimensions do not match the matrix size");
  }
}

bool SpectralData::same_as(const SpectralData& other) const {
  if (impl_ == other.impl_) return true;
  return impl_->matrix == other.impl_->matrix && impl_->lambdas == other.impl_->lambdas;
}

namespace {

// Eigenvalue number k (0-based, ascending) given count(lo) <= k < count(hi).
double bisect_eigenvalue(const JacobiMatrix& J, int k, double lo, double hi) {
  for (int iter = 0; iter < 400; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double width = hi - lo;
    if (width <= 2.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(lo), std::abs(hi))) {
      break;
    }
    if (sturm_count(J, mid) > k) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Newton on phi_{N+1}, kept inside the bracket and only while |phi_{N+1}| decreases.
double newton_polish(const JacobiMatrix& J, double x, double lo, double hi) {
  const auto n = static_cast<std::size_t>(J.size());
  double fx = eval_polynomials(J, x)[n];
  for (int iter = 0; iter < 4 && fx != 0.0; ++iter) {
    const double dfx = eval_polynomial_derivatives(J, x)[n];
    if (dfx == 0.0 || !std::isfinite(dfx)) break;
    const double candidate = x - fx / dfx;
    if (!(candidate >= lo && candidate <= hi)) break;
    const double fc = eval_polynomials(J, candidate)[n];
    if (!(std::abs(fc) < std::abs(fx))) break;
    x = candidate;
    fx = fc;
  }
  return x;
}

}  // namespace

SpectralData spectral_decomposition(const JacobiMatrix& J) {
  const int n = J.size();
  auto [glo, ghi] = J.gershgorin();
  const double pad = 4.0 * std::numeric_limits<double>::epsilon() * std::max({1.0, std::abs(glo), std::abs(ghi)});
  glo -= pad;
  ghi += pad;

  Eigen::VectorXd lambdas(n);
  for (int k = 0; k < n; ++k) {
    double lo = glo;
    double hi = ghi;
    if (sturm_count(J, lo) > k || sturm_count(J, hi) <= k) {
      throw ConvergenceError("Sturm bracket does not enclose eigenvalue " + std::to_string(k + 1));
    }
    double x = bisect_eigenvalue(J, k, lo, hi);
    // Re-bracket around the bisection result for the polish step.
    const double h = 8.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(x));
    lo = x - h;
    hi = x + h;
    lambdas(k) = newton_polish(J, x, lo, hi);
    if (!std::isfinite(lambdas(k))) throw ConvergenceError("eigenvalue iteration diverged");
  }
  for (int k = 1; k < n; ++k) {
    if (!(lambdas(k) > lambdas(k - 1))) {
      throw ConvergenceError("eigenvalues are not numerically distinct");
    }
  }

  Eigen::MatrixXd phi(n, n);
  Eigen::VectorXd rhos(n);
  const auto last = static_cast<std::size_t>(n);
  for (int k = 0; k < n; ++k) {
    // The forward recurrence amplifies the eigenvalue's rounding error along
    // decaying eigenvectors, so phi is evaluated at a binary128 root.
    Wide x(lambdas(k));
    for (int iter = 0; iter < 3; ++iter) {
      const Wide f = eval_polynomials(J, x)[last];
      const Wide df = eval_polynomial_derivatives(J, x)[last];
      if (f == 0 || df == 0) break;
      x -= f / df;
    }
    const auto values = eval_polynomials(J, x);
    Wide norm2(0);
    for (int m = 0; m < n; ++m) {
      const Wide v = values[static_cast<std::size_t>(m)];
      phi(m, k) = static_cast<double>(v);
      norm2 += v * v;
    }
    rhos(k) = static_cast<double>(norm2);
  }
  return SpectralData(J, std::move(lambdas), std::move(rhos), std::move(phi));
}

StateVector apply_matrix(const JacobiMatrix& J, const StateVector& v) {
  const int n = J.size();
  if (v.size() != n) throw DimensionError("state vector length differs from matrix size");
  StateVector out(n);
  for (int k = 1; k <= n; ++k) {
    Complex acc = J.b(k) * v(k - 1);
    if (k > 1) acc += J.a(k - 1) * v(k - 2);
    if (k < n) acc += J.a(k) * v(k);
    out(k - 1) = acc;
  }
  return out;
}

Eigen::VectorXd apply_matrix(const JacobiMatrix& J, const Eigen::VectorXd& v) {
  return apply_matrix(J, StateVector(v.cast<Complex>())).real();
}

double eval_spectral_function(const SpectralData& sd, double x) {
  double acc = 0.0;
  for (int k = 0; k < sd.size(); ++k) {
    if (sd.lambda(k) < x) acc += 1.0 / sd.rho(k);
  }
  return acc;
}

JacobiMatrix random_jacobi(int n, std::uint64_t seed, Range b_range, Range a_range) {
  if (n < 1) throw DomainError("matrix size must be >= 1");
  if (!(a_range.lo > 0.0) || a_range.hi < a_range.lo || b_range.hi < b_range.lo) {
    throw DomainError("invalid generator ranges (a_range must be positive)");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> bdist(b_range.lo, b_range.hi);
  std::uniform_real_distribution<double> adist(a_range.lo, a_range.hi);
  std::vector<double> b(static_cast<std::size_t>(n));
  std::vector<double> a(static_cast<std::size_t>(n - 1));
  for (auto& v : b) v = bdist(rng);
  for (auto& v : a) v = adist(rng);
  return JacobiMatrix(std::move(a), std::move(b));
}

}  // namespace jbc

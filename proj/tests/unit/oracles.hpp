#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "jbc/jacobi.hpp"

// Independent reference computations used by the unit and acceptance tests.
namespace oracle {

using jbc::Complex;

inline jbc::JacobiMatrix symmetric2() { return jbc::JacobiMatrix({1.0}, {0.0, 0.0}); }

/// Eigenvalues and orthonormal eigenvectors from a dense symmetric solver.
inline Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> dense_eigen(const jbc::JacobiMatrix& J) {
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(J.dense());
}

/// Composite Simpson on [a, b] with m (odd) nodes.
template <class F>
auto simpson(F&& f, double a, double b, int m) -> decltype(f(a)) {
  const double h = (b - a) / (m - 1);
  decltype(f(a)) acc = f(a) + f(b);
  for (int i = 1; i < m - 1; ++i) acc += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return acc * (h / 3.0);
}

/// u'' = -J u + f(t) e_1, u(0) = u'(0) = 0, classical RK4.
inline Eigen::VectorXd rk4(const jbc::JacobiMatrix& J, const std::function<double(double)>& f, double T,
                           int steps) {
  const int n = J.size();
  const Eigen::MatrixXd A = J.dense();
  Eigen::VectorXd y = Eigen::VectorXd::Zero(2 * n);
  auto rhs = [&](double t, const Eigen::VectorXd& s) {
    Eigen::VectorXd d(2 * n);
    d.head(n) = s.tail(n);
    d.tail(n) = -A * s.head(n);
    d(n) += f(t);
    return d;
  };
  const double h = T / steps;
  for (int i = 0; i < steps; ++i) {
    const double t = i * h;
    const Eigen::VectorXd k1 = rhs(t, y);
    const Eigen::VectorXd k2 = rhs(t + h / 2, y + h / 2 * k1);
    const Eigen::VectorXd k3 = rhs(t + h / 2, y + h / 2 * k2);
    const Eigen::VectorXd k4 = rhs(t + h, y + h * k3);
    y += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
  }
  return y.head(n);
}

/// Monomial coefficients (ascending) of phi_1..phi_N from the recurrence.
inline std::vector<Eigen::VectorXd> monomial_polynomials(const jbc::JacobiMatrix& J) {
  const int n = J.size();
  std::vector<Eigen::VectorXd> p;
  Eigen::VectorXd prev = Eigen::VectorXd::Zero(n + 1);
  Eigen::VectorXd cur = Eigen::VectorXd::Zero(n + 1);
  cur(0) = 1.0;
  p.push_back(cur);
  for (int k = 1; k < n; ++k) {
    Eigen::VectorXd next = -J.b(k) * cur - J.a(k - 1) * prev;
    next.tail(n).noalias() += cur.head(n);
    next /= J.a(k);
    prev = cur;
    cur = next;
    p.push_back(cur);
  }
  return p;
}

/// Roots of sum_j c_j z^j via the companion matrix.
inline Eigen::VectorXcd polynomial_roots(Eigen::VectorXcd c) {
  int deg = static_cast<int>(c.size()) - 1;
  while (deg > 0 && std::abs(c(deg)) == 0.0) --deg;
  if (deg == 0) return {};
  Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(deg, deg);
  for (int i = 1; i < deg; ++i) C(i, i - 1) = 1.0;
  for (int i = 0; i < deg; ++i) C(i, deg - 1) = -c(i) / c(deg);
  return Eigen::ComplexEigenSolver<Eigen::MatrixXcd>(C, false).eigenvalues();
}

/// Least-squares fit of values at the atoms lambda_k with weights 1/rho_k in
/// the monomial basis of degree < N, evaluated back at the atoms.
inline Eigen::VectorXcd weighted_least_squares(const Eigen::VectorXd& lambdas, const Eigen::VectorXd& rhos,
                                               const Eigen::VectorXcd& values) {
  const auto n = lambdas.size();
  Eigen::MatrixXd V(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    for (Eigen::Index j = 0; j < n; ++j) V(k, j) = std::pow(lambdas(k), static_cast<double>(j));
  }
  const Eigen::VectorXd w = rhos.cwiseInverse().cwiseSqrt();
  const Eigen::MatrixXcd A = (w.asDiagonal() * V).cast<Complex>();
  const Eigen::VectorXcd rhs = w.cast<Complex>().cwiseProduct(values);
  const Eigen::VectorXcd c = A.colPivHouseholderQr().solve(rhs);
  return V.cast<Complex>() * c;
}

}  // namespace oracle

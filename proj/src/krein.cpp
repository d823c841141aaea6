#include "jbc/krein.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "jbc/kernels.hpp"
#include "jbc/quadrature.hpp"
#include "jbc/wave.hpp"

namespace jbc {

namespace {

Eigen::LLT<WideMatrix> factor_gram(const GramMatrix& G) {
  Eigen::LLT<WideMatrix> llt(G.wide());
  if (llt.info() != Eigen::Success) {
    throw InconsistentDataError(
        "Gram matrix of the S-basis is not positive definite: spectral data inconsistent with "
        "controllability");
  }
  return llt;
}

WideComplexVector solve_with(const Eigen::LLT<WideMatrix>& llt, const WideComplexVector& rhs) {
  const WideVector re = llt.solve(WideVector(rhs.real()));
  const WideVector im = llt.solve(WideVector(rhs.imag()));
  WideComplexVector out(rhs.size());
  for (Eigen::Index i = 0; i < rhs.size(); ++i) out(i) = WideComplex(re(i), im(i));
  return out;
}

double sup_norm(const WideComplexVector& v) {
  double m = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) m = std::max(m, static_cast<double>(abs(v(i))));
  return m;
}

// Phi^T v as a binary128 vector.
WideComplexVector phi_transpose(const SpectralData& sd, const Eigen::VectorXcd& v) {
  const int n = sd.size();
  WideComplexVector out = WideComplexVector::Zero(n);
  for (int k = 0; k < n; ++k) {
    for (int m = 0; m < n; ++m) out(k) += Wide(sd.phi()(m, k)) * to_wide(v(m));
  }
  return out;
}

}  // namespace

WideComplexVector solve_gram(const GramMatrix& G, const WideComplexVector& rhs) {
  if (rhs.size() != G.size()) throw DimensionError("right-hand side length differs from Gram size");
  return solve_with(factor_gram(G), rhs);
}

F1Solution solve_f1(const SpectralData& sd, const GramMatrix& G) {
  const int n = sd.size();
  if (G.size() != n) throw DimensionError("Gram matrix and spectral data differ in N");
  WideComplexVector ones = WideComplexVector::Constant(n, WideComplex(1));
  SBasisControl f{G.T, solve_gram(G, ones)};

  // Both sides of C^T f_1 = r(T - .) are S-basis expansions; compare pointwise.
  const WideComplexVector image = ct_image(sd, G, f);
  double residual = 0.0;
  TimeGrid grid(G.T, 201);
  for (int i = 0; i < grid.size(); ++i) {
    const Wide tau(G.T - grid.at(i));
    WideComplex diff(0);
    for (int k = 0; k < n; ++k) {
      diff += (image(k) - WideComplex(Wide(1) / Wide(sd.rho(k)))) * s_kernel(tau, Wide(sd.lambda(k)));
    }
    residual = std::max(residual, static_cast<double>(abs(diff)));
  }
  return {std::move(f), residual};
}

SpecialControls solve_special_controls(const SpectralData& sd, const GramMatrix& G) {
  const int n = sd.size();
  if (G.size() != n) throw DimensionError("Gram matrix and spectral data differ in N");
  const auto llt = factor_gram(G);
  SpecialControls out;
  for (int k = 0; k < n; ++k) {
    const Eigen::VectorXcd d = Eigen::VectorXcd::Unit(n, k);
    SBasisControl f{G.T, solve_with(llt, phi_transpose(sd, d))};
    const StateVector u = control_operator(sd, G, f);
    out.max_state_error = std::max(out.max_state_error, (u - d).cwiseAbs().maxCoeff());
    out.controls.push_back(std::move(f));
  }
  return out;
}

Eigen::MatrixXcd control_gram(const SpectralData& sd, const GramMatrix& G,
                              const std::vector<SBasisControl>& controls) {
  const auto n = static_cast<Eigen::Index>(controls.size());
  Eigen::MatrixXcd out(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const SBasisControl image = apply_ct(sd, G, controls[static_cast<std::size_t>(j)]);
    for (Eigen::Index k = 0; k < n; ++k) {
      out(j, k) = to_complex(ft_inner(G, image, controls[static_cast<std::size_t>(k)]));
    }
  }
  return out;
}

KreinResidualReport verify_krein_system(const JacobiMatrix& J, const SpectralData& sd,
                                        const GramMatrix& G, const SpecialControls& fc) {
  const int n = sd.size();
  if (J.size() != n || fc.size() != n) throw DimensionError("Krein system dimensions differ");
  std::vector<WideComplexVector> images;
  images.reserve(static_cast<std::size_t>(n));
  for (const auto& f : fc.controls) images.push_back(ct_image(sd, G, f));

  KreinResidualReport report;
  for (int k = 1; k <= n; ++k) {
    const auto& cur = images[static_cast<std::size_t>(k - 1)];
    WideComplexVector lhs(n);
    for (int j = 0; j < n; ++j) lhs(j) = Wide(sd.lambda(j)) * cur(j);
    WideComplexVector rhs = Wide(J.b(k)) * cur;
    if (k > 1) rhs += Wide(J.a(k - 1)) * images[static_cast<std::size_t>(k - 2)];
    if (k < n) rhs += Wide(J.a(k)) * images[static_cast<std::size_t>(k)];
    const double r = sup_norm(lhs - rhs);
    report.residuals.push_back(r);
    report.max_residual = std::max(report.max_residual, r);
  }
  return report;
}

SpecialControlSolution solve_special_control_problem(const SpectralData& sd, const GramMatrix& G,
                                                     Complex z) {
  const int n = sd.size();
  if (G.size() != n) throw DimensionError("Gram matrix and spectral data differ in N");
  const auto phi = eval_polynomials(sd.matrix(), z);
  Eigen::VectorXcd target(n);
  for (int k = 0; k < n; ++k) target(k) = std::conj(phi[static_cast<std::size_t>(k)]);
  SBasisControl j{G.T, solve_gram(G, phi_transpose(sd, target))};
  const StateVector u = control_operator(sd, G, j);
  const double err = (u - target).cwiseAbs().maxCoeff();
  return {std::move(j), std::move(target), err};
}

Reconstruction reconstruct_exact(const Eigen::VectorXd& lambdas, const Eigen::VectorXd& response_coeffs,
                                 double T) {
  const auto n = lambdas.size();
  if (n < 1 || response_coeffs.size() != n) throw DimensionError("eigenvalue and coefficient counts differ");
  const GramMatrix G = gram_matrix(lambdas, T);
  const auto llt = factor_gram(G);
  const WideMatrix Gw = G.wide();
  const WideVector w = response_coeffs.cast<Wide>();
  const WideVector lam = lambdas.cast<Wide>();

  // Controls are coefficient vectors c; C^T f has coefficients w .* (G c).
  auto image = [&](const WideVector& c) -> WideVector { return w.cwiseProduct(Gw * c); };
  auto inner = [&](const WideVector& p, const WideVector& q) -> Wide { return p.dot(Gw * q); };
  auto preimage = [&](const WideVector& e) -> WideVector {
    return llt.solve(WideVector(e.cwiseQuotient(w)));
  };

  Reconstruction out;
  out.rank = static_cast<int>(n);
  {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(G.g);
    out.condition = eig.eigenvalues().maxCoeff() / eig.eigenvalues().minCoeff();
  }

  // C^T f_1 = r(T - .), whose S-basis coefficients are w.
  WideVector c = preimage(w);
  WideVector e = image(c);
  out.residuals.push_back(static_cast<double>((e - w).cwiseAbs().maxCoeff()));
  WideVector e_prev = WideVector::Zero(n);
  Wide a_prev(0);
  for (Eigen::Index k = 1; k <= n; ++k) {
    const WideVector y = lam.cwiseProduct(e);  // -(C^T f_k)''
    const Wide bk = inner(y, c);
    out.b.push_back(static_cast<double>(bk));
    if (k == n) break;
    const WideVector v = y - bk * e - a_prev * e_prev;
    const WideVector g = preimage(v);
    const Wide s = inner(v, g);
    if (!(s > 0)) {
      throw IllPosedError("non-positive normalization (w, g) at step " + std::to_string(k), static_cast<int>(k));
    }
    const Wide ak = sqrt(s);
    out.a.push_back(static_cast<double>(ak));
    const WideVector e_next = image(WideVector(g / ak));
    out.residuals.push_back(static_cast<double>((e_next * ak - v).cwiseAbs().maxCoeff()));
    e_prev = e;
    e = e_next;
    c = g / ak;
    a_prev = ak;
  }
  return out;
}

namespace {

Complex grid_inner(std::span<const Complex> p, std::span<const Complex> q, const std::vector<double>& w) {
  Complex acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) acc += w[i] * p[i] * std::conj(q[i]);
  return acc;
}

// Sup norm over interior nodes (two nodes dropped at each end).
double interior_sup(std::span<const Complex> v) {
  double m = 0.0;
  for (std::size_t i = 2; i + 2 < v.size(); ++i) m = std::max(m, std::abs(v[i]));
  return m;
}

}  // namespace

Reconstruction reconstruct(const ResponseSamples& r, int N, const ReconstructOptions& options) {
  if (N < 1) throw DomainError("N must be >= 1");
  const auto op = CtGridOperator::from_response(r);
  const auto trunc = op.truncate(N + options.oversample, options.rel_threshold);
  if (trunc.rank != N) {
    throw RankError("numerical rank of the connecting operator is " + std::to_string(trunc.rank) +
                        ", expected N = " + std::to_string(N),
                    trunc.rank, N);
  }
  const int m = op.grid().size();
  const double h = op.grid().step();
  const auto& w = op.weights();

  Reconstruction out;
  out.rank = trunc.rank;
  out.condition = trunc.condition;

  std::vector<Complex> target(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) target[static_cast<std::size_t>(i)] = r.values[static_cast<std::size_t>(m - 1 - i)];

  auto subtract = [](std::span<const Complex> x, std::span<const Complex> y) {
    std::vector<Complex> d(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) d[i] = x[i] - y[i];
    return d;
  };

  std::vector<Complex> f = trunc.solve(target);
  std::vector<Complex> cf = trunc.apply(f);
  out.residuals.push_back(interior_sup(subtract(cf, target)) / std::max(interior_sup(target), 1e-300));
  std::vector<Complex> cf_prev(static_cast<std::size_t>(m), 0.0);
  double a_prev = 0.0;

  for (int k = 1; k <= N; ++k) {
    std::vector<Complex> y = second_derivative(cf, h);
    for (auto& v : y) v = -v;
    const double bk = grid_inner(y, f, w).real();
    out.b.push_back(bk);
    if (k == N) break;
    std::vector<Complex> v(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
      const auto u = static_cast<std::size_t>(i);
      v[u] = y[u] - bk * cf[u] - a_prev * cf_prev[u];
    }
    std::vector<Complex> g = trunc.solve(v);
    const double s = grid_inner(v, g, w).real();
    if (!(s > 0.0)) {
      throw IllPosedError("non-positive normalization (w, g) at step " + std::to_string(k) +
                              "; data too noisy or N inconsistent",
                          k);
    }
    const double ak = std::sqrt(s);
    out.a.push_back(ak);
    const std::vector<Complex> cg = trunc.apply(g);
    out.residuals.push_back(interior_sup(subtract(cg, v)) / std::max(interior_sup(v), 1e-300));
    for (auto& x : g) x /= ak;
    cf_prev = std::move(cf);
    cf.resize(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) cf[static_cast<std::size_t>(i)] = cg[static_cast<std::size_t>(i)] / ak;
    f = std::move(g);
    a_prev = ak;
  }
  return out;
}

}  // namespace jbc

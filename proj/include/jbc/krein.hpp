#pragma once

#include <vector>

#include "jbc/connecting.hpp"
#include "jbc/control.hpp"
#include "jbc/jacobi.hpp"

namespace jbc {

/// Solves G c = rhs in binary128 (Cholesky). Throws InconsistentDataError
/// when G is not positive definite.
WideComplexVector solve_gram(const GramMatrix& G, const WideComplexVector& rhs);

struct F1Solution {
  SBasisControl control;
  /// sup over a 201-point time grid of |(C^T f_1)(t) - r(T - t)|.
  double residual = 0.0;
};

/// f_1 in F^T_1 with C^T f_1 = r(T - .), i.e. G c = (1, ..., 1).
F1Solution solve_f1(const SpectralData& sd, const GramMatrix& G);

/// f_1..f_N with W^T f_k = d_k.
struct SpecialControls {
  std::vector<SBasisControl> controls;
  /// max over k of |W^T f_k - d_k|_inf.
  double max_state_error = 0.0;

  int size() const { return static_cast<int>(controls.size()); }
};

/// c^(k) = G^{-1} Phi^T d_k for k = 1..N.
SpecialControls solve_special_controls(const SpectralData& sd, const GramMatrix& G);

/// [(C^T f_j, f_k)] for the given controls; the identity for special controls.
Eigen::MatrixXcd control_gram(const SpectralData& sd, const GramMatrix& G,
                              const std::vector<SBasisControl>& controls);

struct KreinResidualReport {
  std::vector<double> residuals;  // one per equation of the system
  double max_residual = 0.0;
};

/// Coefficient-wise residual of
///   -(C^T f_k)'' = a_{k-1} C^T f_{k-1} + b_k C^T f_k + a_k C^T f_{k+1}
/// in the S-basis, where -(C^T f)'' has coefficients lambda_k (G c)_k / rho_k.
KreinResidualReport verify_krein_system(const JacobiMatrix& J, const SpectralData& sd,
                                        const GramMatrix& G, const SpecialControls& fc);

struct SpecialControlSolution {
  SBasisControl control;
  Eigen::VectorXcd target;  // conj(phi_k(z))
  double state_error = 0.0;  // |W^T j_z - target|_inf
};

/// j_z in F^T_1 driving the system to the state conj(phi_k(z)), k = 1..N.
SpecialControlSolution solve_special_control_problem(const SpectralData& sd, const GramMatrix& G,
                                                     Complex z);

struct Reconstruction {
  std::vector<double> a;
  std::vector<double> b;
  std::vector<double> residuals;
  int rank = 0;
  double condition = 0.0;

  JacobiMatrix matrix() const { return JacobiMatrix(a, b); }
};

struct ReconstructOptions {
  double rel_threshold = 1e-10;
  int oversample = 10;
};

/// Recovers {a_k}, {b_k} from response samples on (0, 2T): builds the grid
/// connecting operator, solves C^T f_1 = r(T - .) by truncated eigen-expansion,
/// then runs the Krein recursion with a finite-difference second derivative.
/// Throws RankError when the numerical rank differs from N and
/// IllPosedError when a normalization inner product is not positive.
Reconstruction reconstruct(const ResponseSamples& r, int N, const ReconstructOptions& options = {});

/// The same recursion carried out exactly in the S-basis: eigenvalues lambda_k,
/// response coefficients w_k = 1/rho_k, differentiation by multiplication with
/// lambda_k, Gram solves in binary128.
Reconstruction reconstruct_exact(const Eigen::VectorXd& lambdas, const Eigen::VectorXd& response_coeffs,
                                 double T);

}  // namespace jbc

#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "jbc/connecting.hpp"
#include "jbc/jacobi.hpp"

namespace jbc {

/// Element of B_N: G(x) = sum_m g_m phi_m(x), a polynomial of degree <= N-1.
class BElement {
 public:
  BElement(SpectralData sd, Eigen::VectorXcd coeffs);

  const SpectralData& spectral() const { return sd_; }
  const Eigen::VectorXcd& coeffs() const { return coeffs_; }
  int size() const { return static_cast<int>(coeffs_.size()); }

  Complex operator()(Complex z) const;
  Complex derivative(Complex z) const;
  /// G(lambda_1), ..., G(lambda_N).
  Eigen::VectorXcd at_eigenvalues() const;
  /// G^#(z) = conj(G(conj z)); in the real phi-basis the coefficients conjugate.
  BElement conjugate_reflection() const;

 private:
  SpectralData sd_;
  Eigen::VectorXcd coeffs_;
};

/// (F u)(x) = sum_k u_k phi_k(x).
BElement fourier_image(const SpectralData& sd, const StateVector& u);

/// Orthogonal projection onto L_N in L_{2,rho}: coefficient k is
/// sum_j a(lambda_j) phi_k(lambda_j) / rho_j.
BElement project_PN(const SpectralData& sd, const std::function<Complex(double)>& a);

/// sum_k H(lambda_k) conj(G(lambda_k)) / rho_k. Linear in H, conjugate-linear in G.
Complex bn_inner(const BElement& H, const BElement& G);
double bn_norm(const BElement& G);

/// Direct route: coefficients conj(phi_m(z)) (Christoffel-Darboux sum).
BElement reproducing_kernel(const SpectralData& sd, Complex z);
/// Control route: Fourier image of W^T j_z.
BElement reproducing_kernel_control(const SpectralData& sd, const GramMatrix& G, Complex z);

/// E(z) = sqrt(pi) (1 - i z) J_i(z) / |J_i|.
class HermiteBiehlerFn {
 public:
  HermiteBiehlerFn(BElement kernel_at_i, double kernel_norm);

  Complex operator()(Complex z) const;
  Complex derivative(Complex z) const;
  const BElement& kernel_at_i() const { return kernel_; }
  double kernel_norm() const { return norm_; }
  int degree() const { return kernel_.size(); }

 private:
  BElement kernel_;
  double norm_;
};

HermiteBiehlerFn hermite_biehler_E(const SpectralData& sd);

struct HbReport {
  double min_margin = 0.0;
  int samples = 0;
  int violations = 0;
  bool passed() const { return samples > 0 && violations == 0; }
};

/// |E(z)| - |E(conj z)| at every sample; samples must lie in the open upper half-plane.
HbReport verify_hb(const HermiteBiehlerFn& E, std::span<const Complex> samples);

/// Number of zeros of E in the open upper half-plane by the argument principle.
int count_zeros_upper_half_plane(const HermiteBiehlerFn& E);

/// (conj(E(z)) E(xi) - E(conj z) conj(E(conj xi))) / (2 i (conj z - xi)), with the
/// derivative form when |conj z - xi| < 1e-8.
Complex repr_ker_from_E(const HermiteBiehlerFn& E, Complex z, Complex xi);

struct QuadratureResult {
  Complex value;
  double error_estimate = 0.0;
  int panels = 0;
};

/// (1/pi) * integral over R of F conj(G) / |E|^2, via x = tan(theta) on
/// 64-point Gauss-Legendre panels. Initial breakpoints are graded around the
/// real parts of the zeros of E, and panels next to very narrow peaks are
/// evaluated in binary128. Each panel is bisected until it agrees with its two
/// halves to its share of tol or to the rounding level.
QuadratureResult be_inner_report(const BElement& F, const BElement& G, const HermiteBiehlerFn& E,
                                 double tol = 1e-8);
Complex be_inner(const BElement& F, const BElement& G, const HermiteBiehlerFn& E, double tol = 1e-8);

struct AxiomReport {
  double point_evaluation_max_ratio = 0.0;  // |G(z)| / (sqrt(J_z(z)) |G|), must be <= 1
  double conjugation_max_diff = 0.0;        // | |G#| - |G| | and |G#(z) - conj G(conj z)|
  double blaschke_max_diff = 0.0;           // | |B G| - |G| | relative, N >= 2 only
  double blaschke_max_remainder = 0.0;      // division remainder, must vanish
  bool blaschke_checked = false;
  double tolerance = 1e-10;
  bool passed() const;
};

/// The three conditions of the de Branges characterization on random elements.
AxiomReport verify_axioms(const SpectralData& sd, std::uint64_t seed, int trials = 20);

/// Coefficients h with G = (x - omega) H; returns the remainder G(omega)-type
/// defect of the division in `remainder`.
Eigen::VectorXcd divide_by_linear(const SpectralData& sd, const Eigen::VectorXcd& g, Complex omega,
                                  Complex& remainder);
/// Coefficients of (x - omega) H for H with N-1 coefficients.
Eigen::VectorXcd multiply_by_linear(const SpectralData& sd, const Eigen::VectorXcd& h, Complex omega);

struct KappaReport {
  Complex kappa_E;
  double kappa_E_spread = 0.0;  // stdev / |mean|
  Complex kappa_B;
  double kappa_B_spread = 0.0;
  Complex product;
};

/// kappa_E = repr_ker_from_E(z, xi) / J_z(xi) and kappa_B = be_inner / bn_inner
/// over random arguments.
KappaReport measure_kappas(const SpectralData& sd, std::uint64_t seed, int kernel_pairs = 20,
                           int inner_pairs = 10);

}  // namespace jbc

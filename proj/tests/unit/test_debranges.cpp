#include <doctest.h>

#include <numbers>
#include <random>

#include "jbc/connecting.hpp"
#include "jbc/debranges.hpp"
#include "jbc/kernels.hpp"
#include "jbc/wave.hpp"
#include "oracles.hpp"

using namespace jbc;

namespace {

constexpr Complex kI(0.0, 1.0);
constexpr double kPi = std::numbers::pi;

Eigen::VectorXcd random_coeffs(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> g;
  Eigen::VectorXcd c(n);
  for (int k = 0; k < n; ++k) {
    const double re = g(rng);
    c(k) = Complex(re, g(rng));
  }
  return c;
}

Complex random_point(std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  const double x = u(rng);
  return {x, u(rng)};
}

StateVector unit(int n, int k) {
  StateVector d = StateVector::Zero(n);
  d(k) = 1.0;
  return d;
}

}  // namespace

TEST_CASE("Fourier images") {
  const SpectralData sym = spectral_decomposition(oracle::symmetric2());
  const BElement one = fourier_image(sym, unit(2, 0));
  const BElement lin = fourier_image(sym, unit(2, 1));
  for (Complex z : {Complex(0.3, 0.0), Complex(-2.0, 1.5)}) {
    CHECK(std::abs(one(z) - 1.0) == 0.0);
    CHECK(std::abs(lin(z) - z) < 1e-15);
  }
  const SpectralData sd = spectral_decomposition(random_jacobi(6, 4));
  std::mt19937_64 rng(1);
  const StateVector u = random_coeffs(rng, 6);
  const StateVector v = random_coeffs(rng, 6);
  CHECK(std::abs(bn_inner(fourier_image(sd, u), fourier_image(sd, v)) - v.dot(u)) < 1e-12 * u.norm() * v.norm());
}

TEST_CASE("projection onto polynomials of degree < N") {
  const SpectralData sd = spectral_decomposition(random_jacobi(5, 8));
  const JacobiMatrix& J = sd.matrix();
  const BElement p2 = project_PN(sd, [&](double x) { return Complex(eval_polynomials(J, x)[1]); });
  CHECK((p2.coeffs() - unit(5, 1)).cwiseAbs().maxCoeff() < 1e-12);

  const BElement p = project_PN(sd, [](double x) { return Complex(std::pow(x, 5.0)); });
  Eigen::VectorXcd atoms(5);
  for (int k = 0; k < 5; ++k) atoms(k) = std::pow(sd.lambda(k), 5.0);
  const Eigen::VectorXcd ls = oracle::weighted_least_squares(sd.lambdas(), sd.rhos(), atoms);
  CHECK((p.at_eigenvalues() - ls).cwiseAbs().maxCoeff() < 1e-9 * ls.cwiseAbs().maxCoeff());

  std::mt19937_64 rng(2);
  const Eigen::VectorXcd c = random_coeffs(rng, 5);
  const SBasisControl f = make_sbasis(1.0, c);
  const BElement integral = project_PN(sd, [&](double x) {
    Complex acc = 0.0;
    for (int j = 0; j < 5; ++j) acc += c(j) * lagrange_integral(0.0, 1.0, x, sd.lambda(j));
    return acc;
  });
  const BElement image = fourier_image(sd, control_operator(sd, gram_matrix(sd, 1.0), f));
  CHECK((integral.coeffs() - image.coeffs()).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("B_N inner product") {
  const SpectralData sd = spectral_decomposition(random_jacobi(4, 12));
  const BElement one = fourier_image(sd, unit(4, 0));
  const BElement phi2 = fourier_image(sd, unit(4, 1));
  CHECK(std::abs(bn_inner(one, one) - 1.0) < 1e-12);
  CHECK(std::abs(bn_inner(one, phi2)) < 1e-12);

  const GramMatrix G = gram_matrix(sd, 1.0);
  std::mt19937_64 rng(3);
  const SBasisControl h = make_sbasis(1.0, random_coeffs(rng, 4));
  const SBasisControl g = make_sbasis(1.0, random_coeffs(rng, 4));
  const Complex lhs = bn_inner(fourier_image(sd, control_operator(sd, G, h)), fourier_image(sd, control_operator(sd, G, g)));
  const Complex rhs = to_complex(ft_inner(G, apply_ct(sd, G, h), g));
  CHECK(std::abs(lhs - rhs) < 1e-10 * std::max(1.0, std::abs(rhs)));

  const SpectralData other = spectral_decomposition(random_jacobi(4, 13));
  CHECK_THROWS_AS(bn_inner(one, fourier_image(other, unit(4, 0))), InconsistentDataError);
}

TEST_CASE("reproducing kernel") {
  const SpectralData sym = spectral_decomposition(oracle::symmetric2());
  const BElement ji = reproducing_kernel(sym, kI);
  for (Complex x : {Complex(0.5, 0.0), Complex(-1.0, 2.0)}) CHECK(std::abs(ji(x) - (1.0 - kI * x)) < 1e-15);

  const SpectralData sd = spectral_decomposition(random_jacobi(7, 5));
  CHECK(reproducing_kernel(sd, sd.lambda(0))(sd.lambda(0)).real() == doctest::Approx(sd.rho(0)).epsilon(1e-12));
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    const BElement g(sd, random_coeffs(rng, 7));
    const Complex z = random_point(rng, -2.0, 2.0);
    CHECK(std::abs(bn_inner(g, reproducing_kernel(sd, z)) - g(z)) < 1e-10 * std::max(1.0, std::abs(g(z))));
  }
  const GramMatrix G = gram_matrix(sd, 1.0);
  const Complex z(0.4, -0.9);
  CHECK((reproducing_kernel_control(sd, G, z).coeffs() - reproducing_kernel(sd, z).coeffs()).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("Hermite-Biehler function fixtures") {
  const SpectralData sym = spectral_decomposition(oracle::symmetric2());
  const HermiteBiehlerFn E = hermite_biehler_E(sym);
  CHECK(E.kernel_norm() * E.kernel_norm() == doctest::Approx(2.0).epsilon(1e-15));
  for (Complex z : {Complex(0.0, 0.0), Complex(1.0, 1.0), Complex(-2.5, 0.3)}) {
    CHECK(std::abs(E(z) - std::sqrt(kPi / 2) * (1.0 - kI * z) * (1.0 - kI * z)) < 1e-14 * std::max(1.0, std::abs(E(z))));
  }
  CHECK(std::abs(E(Complex(0.0, -1.0))) < 1e-15);
  const Complex pts[] = {kI};
  CHECK(verify_hb(E, pts).min_margin > 0.0);
  CHECK(std::abs(E(Complex(1.0, 1.0))) / std::abs(E(Complex(1.0, -1.0))) == doctest::Approx(5.0).epsilon(1e-14));

  const SpectralData one = spectral_decomposition(JacobiMatrix({}, {0.0}));
  const HermiteBiehlerFn E1 = hermite_biehler_E(one);
  CHECK(E1.kernel_norm() == doctest::Approx(1.0));
  CHECK(std::abs(E1(Complex(0.7, 0.2)) - std::sqrt(kPi) * (1.0 - kI * Complex(0.7, 0.2))) < 1e-15);
}

TEST_CASE("zeros of E lie in the closed lower half-plane") {
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    const int n = 1 + static_cast<int>(seed % 10);
    const SpectralData sd = spectral_decomposition(random_jacobi(n, seed));
    const HermiteBiehlerFn E = hermite_biehler_E(sd);
    CAPTURE(seed);
    CHECK(count_zeros_upper_half_plane(E) == 0);

    // J_i in monomials; E adds the zero at z = -i.
    const auto mono = oracle::monomial_polynomials(sd.matrix());
    Eigen::VectorXcd c = Eigen::VectorXcd::Zero(n);
    const Eigen::VectorXcd k = E.kernel_at_i().coeffs();
    for (int m = 0; m < n; ++m) c += k(m) * mono[static_cast<std::size_t>(m)].head(n).cast<Complex>();
    for (Eigen::Index r = 0; r < oracle::polynomial_roots(c).size(); ++r) {
      const Complex root = oracle::polynomial_roots(c)(r);
      CHECK(root.imag() < 1e-8 * std::max(1.0, std::abs(root)));
    }

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> re(-10.0, 10.0);
    std::uniform_real_distribution<double> im(1e-3, 5.0);
    std::vector<Complex> pts;
    for (int i = 0; i < 200; ++i) {
      const double x = re(rng);
      pts.emplace_back(x, im(rng));
    }
    const HbReport hb = verify_hb(E, pts);
    CHECK(hb.passed());
    CHECK(hb.min_margin > 0.0);
  }
}

TEST_CASE("kernel from E") {
  const SpectralData sym = spectral_decomposition(oracle::symmetric2());
  const HermiteBiehlerFn E = hermite_biehler_E(sym);
  std::mt19937_64 rng(4);
  for (int i = 0; i < 5; ++i) {
    const Complex z = random_point(rng, -2.0, 2.0);
    const Complex xi = random_point(rng, -2.0, 2.0);
    CHECK(std::abs(repr_ker_from_E(E, z, xi) - kPi * (1.0 + std::conj(z) * xi)) < 1e-12 * std::abs(1.0 + std::conj(z) * xi) * kPi);
  }
  const SpectralData sd = spectral_decomposition(random_jacobi(5, 14));
  const HermiteBiehlerFn F = hermite_biehler_E(sd);
  const Complex z(0.3, 0.8);
  const Complex diag = repr_ker_from_E(F, z, z);
  CHECK(std::abs(diag.imag()) < 1e-12 * diag.real());
  CHECK(diag.real() == doctest::Approx(kPi * reproducing_kernel(sd, z)(z).real()).epsilon(1e-12));
  const KappaReport k = measure_kappas(sd, 3);
  CHECK(k.kappa_E_spread < 1e-9);
  CHECK(std::abs(k.kappa_E - kPi) < 1e-9);
}

TEST_CASE("de Branges inner product") {
  const SpectralData sym = spectral_decomposition(oracle::symmetric2());
  const HermiteBiehlerFn E = hermite_biehler_E(sym);
  const BElement one = fourier_image(sym, unit(2, 0));
  const BElement lin = fourier_image(sym, unit(2, 1));
  CHECK(std::abs(be_inner(one, one, E, 1e-12) - 1.0 / kPi) < 1e-10);
  CHECK(std::abs(be_inner(one, lin, E, 1e-12)) < 1e-10);

  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const SpectralData sd = spectral_decomposition(random_jacobi(3 + static_cast<int>(seed), seed));
    const KappaReport k = measure_kappas(sd, seed, 20, 10);
    CHECK(k.kappa_B_spread < 1e-6);
    CHECK(std::abs(k.kappa_B - 1.0 / kPi) < 1e-6);
    CHECK(std::abs(k.product - 1.0) < 1e-6);
  }
}

TEST_CASE("axioms") {
  const AxiomReport one = verify_axioms(spectral_decomposition(JacobiMatrix({}, {0.0})), 1);
  CHECK(one.passed());
  CHECK_FALSE(one.blaschke_checked);

  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const AxiomReport r = verify_axioms(spectral_decomposition(random_jacobi(2 + static_cast<int>(seed), seed)), seed);
    CHECK(r.passed());
    CHECK(r.blaschke_checked);
    CHECK(r.point_evaluation_max_ratio <= 1.0 + 1e-10);
  }

  const SpectralData sd = spectral_decomposition(random_jacobi(3, 6));
  std::mt19937_64 rng(10);
  const Complex omega(0.5, 0.5);
  const Eigen::VectorXcd h = random_coeffs(rng, 2);
  const BElement G(sd, multiply_by_linear(sd, h, omega));
  const BElement BG(sd, multiply_by_linear(sd, h, std::conj(omega)));
  CHECK(std::abs(G(omega)) < 1e-12 * bn_norm(G));
  CHECK(std::abs(bn_norm(BG) - bn_norm(G)) < 1e-10 * bn_norm(G));
  Complex remainder;
  const Eigen::VectorXcd back = divide_by_linear(sd, G.coeffs(), omega, remainder);
  CHECK(std::abs(remainder) < 1e-12);
  CHECK((back - h).cwiseAbs().maxCoeff() < 1e-12);

  const SpectralData sym = spectral_decomposition(oracle::symmetric2());
  const BElement phi2 = fourier_image(sym, unit(2, 1));
  const Complex z(0.0, 2.0);
  CHECK(std::abs(phi2(z)) == doctest::Approx(2.0));
  CHECK(reproducing_kernel(sym, z)(z).real() == doctest::Approx(5.0));
  CHECK(bn_norm(phi2) == doctest::Approx(1.0));
  CHECK(phi2.conjugate_reflection().coeffs() == phi2.coeffs().conjugate());
}

// One line per acceptance criterion; exit status is the number of failures.
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include <fmt/format.h>

#include "jbc/connecting.hpp"
#include "jbc/debranges.hpp"
#include "jbc/krein.hpp"
#include "jbc/wave.hpp"
#include "oracles.hpp"

using namespace jbc;
namespace fs = std::filesystem;

namespace {

constexpr Complex kI(0.0, 1.0);

// Instances whose Gram matrix at T = 1 stays within binary128 reach.
constexpr int kMaxGramN = 7;

struct Outcome {
  bool passed = true;
  std::string detail;
};

Eigen::VectorXcd random_coeffs(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> g;
  Eigen::VectorXcd c(n);
  for (int k = 0; k < n; ++k) {
    const double re = g(rng);
    c(k) = Complex(re, g(rng));
  }
  return c;
}

Outcome spectral() {
  double eig = 0.0, weight = 0.0, ortho = 0.0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const int n = 1 + static_cast<int>(seed % 12);
    const JacobiMatrix J = random_jacobi(n, 1000 + seed);
    const SpectralData sd = spectral_decomposition(J);
    const auto dense = oracle::dense_eigen(J);
    double w = 0.0;
    for (int k = 0; k < n; ++k) {
      eig = std::max(eig, std::abs(sd.lambda(k) - dense.eigenvalues()(k)));
      w += 1.0 / sd.rho(k);
    }
    weight = std::max(weight, std::abs(w - 1.0));
    const Eigen::MatrixXd P = sd.phi() * sd.rhos().cwiseInverse().asDiagonal() * sd.phi().transpose();
    ortho = std::max(ortho, (P - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff());
  }
  return {eig < 1e-10 && weight < 1e-12 && ortho < 1e-10,
          fmt::format("50 matrices N<=12: eigenvalues {:.1e}, sum 1/rho {:.1e}, rows {:.1e}", eig, weight, ortho)};
}

Outcome kernel_identity() {
  double err = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const int n = 1 + static_cast<int>(seed % 8);
    const SpectralData sd = spectral_decomposition(random_jacobi(n, 2000 + seed));
    for (int i = 0; i < 50; ++i) {
      for (int j = 0; j < 50; ++j) {
        const double t = i / 49.0;
        const double s = j / 49.0;
        err = std::max(err, std::abs(ct_kernel_dynamic(sd, 1.0, t, s) - ct_kernel_spectral(sd, 1.0, t, s)));
      }
    }
  }
  return {err < 1e-10, fmt::format("20 matrices N<=8, 50x50 grid: sup {:.1e}", err)};
}

Outcome krein_round_trip() {
  double f1 = 0.0, gram = 0.0, system = 0.0;
  for (std::uint64_t seed = 0; seed < 21; ++seed) {
    const int n = 1 + static_cast<int>(seed % kMaxGramN);
    const JacobiMatrix J = random_jacobi(n, 3000 + seed);
    const SpectralData sd = spectral_decomposition(J);
    const GramMatrix G = gram_matrix(sd, 1.0);
    StateVector d1 = StateVector::Zero(n);
    d1(0) = 1.0;
    f1 = std::max(f1, (control_operator(sd, G, solve_f1(sd, G).control) - d1).norm());
    const SpecialControls fc = solve_special_controls(sd, G);
    gram = std::max(gram, (control_gram(sd, G, fc.controls) - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff());
    system = std::max(system, verify_krein_system(J, sd, G, fc).max_residual);
  }
  return {f1 < 1e-9 && gram < 1e-8 && system < 1e-9,
          fmt::format("21 matrices N<={}: |W f_1 - d_1| {:.1e}, control Gram {:.1e}, system {:.1e}", kMaxGramN, f1,
                      gram, system)};
}

double coefficient_error(const Reconstruction& r, const JacobiMatrix& J, bool relative) {
  double err = 0.0;
  auto upd = [&](double got, double want) {
    err = std::max(err, std::abs(got - want) / (relative ? std::abs(want) : 1.0));
  };
  for (int k = 1; k <= J.size(); ++k) upd(r.b[static_cast<std::size_t>(k - 1)], J.b(k));
  for (int k = 1; k < J.size(); ++k) upd(r.a[static_cast<std::size_t>(k - 1)], J.a(k));
  return err;
}

Outcome reconstruction() {
  double exact = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const int n = 1 + static_cast<int>(seed % 5);
    const JacobiMatrix J = random_jacobi(n, 4000 + seed);
    const SpectralData sd = spectral_decomposition(J);
    exact = std::max(exact, coefficient_error(reconstruct_exact(sd.lambdas(), sd.rhos().cwiseInverse(), 1.0), J, false));
  }
  // Positive, well-separated spectra at T = 4: the regime where the rank-N
  // structure of the grid operator survives the 1e-10 truncation.
  double grid = 0.0;
  double slowest = 0.0;
  bool ok = true;
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    const int n = 2 + static_cast<int>(seed % 4);
    const JacobiMatrix J = random_jacobi(n, 5000 + seed, {4.0, 12.0}, {0.5, 2.0});
    const SpectralData sd = spectral_decomposition(J);
    const auto start = std::chrono::steady_clock::now();
    try {
      grid = std::max(grid, coefficient_error(reconstruct(sample_response(sd, 4.0, 4001), n), J, true));
    } catch (const Error& e) {
      ok = false;
      std::cerr << "grid path, seed " << 5000 + seed << ": " << e.what() << "\n";
    }
    slowest = std::max(slowest, std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
  }
  return {ok && exact < 1e-8 && grid < 1e-3 && slowest < 10.0,
          fmt::format("exact path 20 matrices N<=5: {:.1e}; grid path m=4001 N=2..5: relative {:.1e}, slowest {:.2f} s",
                      exact, grid, slowest)};
}

Outcome reproducing() {
  double err = 0.0;
  std::mt19937_64 rng(6000);
  std::uniform_real_distribution<double> box(-2.0, 2.0);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + trial % 12;
    const SpectralData sd = spectral_decomposition(random_jacobi(n, 6000 + static_cast<std::uint64_t>(trial)));
    const BElement g(sd, random_coeffs(rng, n));
    const double x = box(rng);
    const Complex z(x, box(rng));
    err = std::max(err, std::abs(bn_inner(g, reproducing_kernel(sd, z)) - g(z)) / std::max(1.0, std::abs(g(z))));
  }
  double route = 0.0;
  for (int trial = 0; trial < 21; ++trial) {
    const int n = 1 + trial % kMaxGramN;
    const SpectralData sd = spectral_decomposition(random_jacobi(n, 6500 + static_cast<std::uint64_t>(trial)));
    const GramMatrix G = gram_matrix(sd, 1.0);
    const double x = box(rng);
    const Complex z(x, box(rng));
    const BElement direct = reproducing_kernel(sd, z);
    const BElement control = reproducing_kernel_control(sd, G, z);
    route = std::max(route, (direct.coeffs() - control.coeffs()).cwiseAbs().maxCoeff() /
                                std::max(1.0, direct.coeffs().cwiseAbs().maxCoeff()));
  }
  return {err < 1e-10 && route < 1e-9,
          fmt::format("100 pairs N<=12: {:.1e} (relative to max(1,|G(z)|)); control vs direct N<={}: {:.1e}", err,
                      kMaxGramN, route)};
}

Outcome hermite_biehler() {
  double min_margin = std::numeric_limits<double>::infinity();
  int zeros = 0;
  std::mt19937_64 rng(7000);
  std::uniform_real_distribution<double> re(-10.0, 10.0);
  std::uniform_real_distribution<double> im(1e-3, 10.0);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const int n = 1 + static_cast<int>(seed % 12);
    const HermiteBiehlerFn E = hermite_biehler_E(spectral_decomposition(random_jacobi(n, 7000 + seed)));
    std::vector<Complex> pts;
    for (int i = 0; i < 200; ++i) {
      const double x = re(rng);
      pts.emplace_back(x, im(rng));
    }
    min_margin = std::min(min_margin, verify_hb(E, pts).min_margin);
    zeros += count_zeros_upper_half_plane(E);
  }
  const HermiteBiehlerFn E2 = hermite_biehler_E(spectral_decomposition(oracle::symmetric2()));
  const double norm2 = E2.kernel_at_i()(kI).real();
  double fixture = 0.0;
  for (Complex z : {Complex(0.0), Complex(1.0, 1.0), Complex(-0.7, 2.0), Complex(3.0, -0.5)}) {
    const Complex expected = std::sqrt(std::numbers::pi / 2) * (1.0 - kI * z) * (1.0 - kI * z);
    fixture = std::max(fixture, std::abs(E2(z) - expected) / std::abs(expected));
  }
  return {min_margin > 0.0 && zeros == 0 && norm2 == 2.0 && fixture < 1e-14,
          fmt::format("20 matrices N<=12, 200 points each: min margin {:.2e}, zeros in C+ {}; N=2: |J_i|^2 = {}, "
                      "E vs sqrt(pi/2)(1-iz)^2 {:.1e}",
                      min_margin, zeros, norm2, fixture)};
}

Outcome kappas() {
  double spread = 0.0, product = 0.0;
  Complex kE = 0.0, kB = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const int n = 1 + static_cast<int>(seed % 12);
    const KappaReport k = measure_kappas(spectral_decomposition(random_jacobi(n, 8000 + seed)), seed);
    spread = std::max({spread, k.kappa_E_spread, k.kappa_B_spread});
    product = std::max(product, std::abs(k.product - 1.0));
    kE = k.kappa_E;
    kB = k.kappa_B;
  }
  return {spread < 1e-6 && product < 1e-6,
          fmt::format("20 matrices N<=12: spread {:.1e}, |kE kB - 1| {:.1e}; kappa_E = {:.10f}, kappa_B = {:.10f} "
                      "(pi = {:.10f}, 1/pi = {:.10f})",
                      spread, product, kE.real(), kB.real(), std::numbers::pi, 1 / std::numbers::pi)};
}

Outcome axioms() {
  double worst = 0.0;
  bool ok = true;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const int n = 2 + static_cast<int>(seed % 11);
    const AxiomReport r = verify_axioms(spectral_decomposition(random_jacobi(n, 9000 + seed)), seed);
    ok = ok && r.passed() && r.blaschke_checked;
    worst = std::max({worst, r.conjugation_max_diff, r.blaschke_max_diff, r.blaschke_max_remainder,
                      r.point_evaluation_max_ratio - 1.0});
  }
  return {ok, fmt::format("20 matrices N=2..12: worst defect {:.1e}", worst)};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run(const std::string& args) {
  const std::string cmd = std::string("\"") + JBC_CLI_PATH + "\" " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

bool same_tree(const fs::path& a, const fs::path& b) {
  for (const auto& entry : fs::directory_iterator(a)) {
    const fs::path other = b / entry.path().filename();
    if (!fs::exists(other) || slurp(entry.path()) != slurp(other)) return false;
  }
  return true;
}

Outcome cli() {
  const fs::path root = fs::temp_directory_path() / "jbc_acceptance";
  fs::remove_all(root);
  int verify_pass = 0;
  int identical = 0;
  for (int seed = 0; seed < 10; ++seed) {
    if (run(fmt::format("verify --seed {}", seed)) == 0) ++verify_pass;
    bool same = true;
    for (const char* cmd : {"spectra", "debranges"}) {
      const fs::path a = root / fmt::format("{}_{}_a", cmd, seed);
      const fs::path b = root / fmt::format("{}_{}_b", cmd, seed);
      run(fmt::format("{} --seed {} --out \"{}\"", cmd, seed, a.string()));
      run(fmt::format("{} --seed {} --out \"{}\"", cmd, seed, b.string()));
      same = same && fs::exists(a) && !fs::is_empty(a) && same_tree(a, b);
    }
    if (same) ++identical;
  }
  const int fault = run("verify --inject-sign-fault");
  const int usage = run("verify --grid 10");
  const int missing = run("simulate --control /nonexistent.csv");
  const fs::path r = root / "spectra_0_a" / "response_function.csv";
  const int rank = run(fmt::format("reconstruct --n 9 --r \"{}\" --out \"{}\"", r.string(), (root / "rank").string()));
  fs::remove_all(root);
  return {verify_pass == 10 && identical == 10 && fault == 1 && usage == 2 && missing == 2 && rank == 1,
          fmt::format("10 seeds: verify exit 0 x{}, byte-identical reruns x{}; injected fault exit {}, bad grid exit "
                      "{}, missing file exit {}, wrong N exit {}",
                      verify_pass, identical, fault, usage, missing, rank)};
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"spectral correctness", spectral},
      {"dynamic = spectral connecting kernel", kernel_identity},
      {"Krein round trip", krein_round_trip},
      {"inverse reconstruction", reconstruction},
      {"reproducing property", reproducing},
      {"Hermite-Biehler", hermite_biehler},
      {"convention constants", kappas},
      {"de Branges axioms", axioms},
      {"CLI determinism and exit codes", cli},
  };
  int failures = 0;
  int index = 0;
  for (const auto& [name, check] : criteria) {
    ++index;
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.passed) ++failures;
    std::cout << fmt::format("[{}] {} {}: {}\n", index, o.passed ? "PASS" : "FAIL", name, o.detail) << std::flush;
  }
  std::cout << fmt::format("{} of 9 criteria passed\n", 9 - failures);
  return failures;
}

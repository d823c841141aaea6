#include "jbc/verify.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>
#include <fmt/format.h>

#include "jbc/connecting.hpp"
#include "jbc/debranges.hpp"
#include "jbc/kernels.hpp"
#include "jbc/krein.hpp"
#include "jbc/wave.hpp"

namespace jbc {

namespace {

constexpr Complex kI(0.0, 1.0);

class Collector {
 public:
  void at_most(std::string name, double value, double tol) {
    const bool ok = std::isfinite(value) && value <= tol;
    report_.checks.push_back({std::move(name), value, tol, "<=", ok});
  }
  void positive(std::string name, double value) {
    report_.checks.push_back({std::move(name), value, 0.0, ">", std::isfinite(value) && value > 0.0});
  }
  void equal(std::string name, double value, double expected) {
    report_.checks.push_back({std::move(name), value, expected, "==", value == expected});
  }
  // A check whose computation threw counts as failed.
  template <class F>
  void guarded(const std::string& name, F&& body) {
    try {
      body();
    } catch (const std::exception&) {
      report_.checks.push_back({name, std::numeric_limits<double>::quiet_NaN(), 0.0, "ok", false});
    }
  }
  VerifyReport take() { return std::move(report_); }

 private:
  VerifyReport report_;
};

// u'' = -J u + f(t) e_1 by classical RK4 with zero initial data.
Eigen::VectorXd rk4_state(const JacobiMatrix& J, const std::function<double(double)>& f, double T, int steps) {
  const int n = J.size();
  Eigen::VectorXd u = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
  const double h = T / steps;
  auto accel = [&](const Eigen::VectorXd& x, double t) {
    Eigen::VectorXd a = -apply_matrix(J, x);
    a(0) += f(t);
    return a;
  };
  for (int s = 0; s < steps; ++s) {
    const double t = s * h;
    const Eigen::VectorXd k1u = v;
    const Eigen::VectorXd k1v = accel(u, t);
    const Eigen::VectorXd k2u = v + 0.5 * h * k1v;
    const Eigen::VectorXd k2v = accel(u + 0.5 * h * k1u, t + 0.5 * h);
    const Eigen::VectorXd k3u = v + 0.5 * h * k2v;
    const Eigen::VectorXd k3v = accel(u + 0.5 * h * k2u, t + 0.5 * h);
    const Eigen::VectorXd k4u = v + h * k3v;
    const Eigen::VectorXd k4v = accel(u + h * k3u, t + h);
    u += h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
    v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
  }
  return u;
}

double max_coeff_error(const Reconstruction& rc, const JacobiMatrix& J, bool relative) {
  const int n = J.size();
  double e = 0.0;
  auto scale = [&](double x) { return relative ? std::max(1.0, std::abs(x)) : 1.0; };
  for (int k = 1; k <= n; ++k) {
    e = std::max(e, std::abs(rc.b[static_cast<std::size_t>(k - 1)] - J.b(k)) / scale(J.b(k)));
    if (k < n) e = std::max(e, std::abs(rc.a[static_cast<std::size_t>(k - 1)] - J.a(k)) / scale(J.a(k)));
  }
  return e;
}

Eigen::VectorXcd random_coeffs(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXcd c(n);
  for (int i = 0; i < n; ++i) {
    const double x = normal(rng);
    c(i) = Complex(x, normal(rng));
  }
  return c;
}

}  // namespace

bool VerifyReport::passed() const {
  return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

std::vector<std::string> VerifyReport::failures() const {
  std::vector<std::string> out;
  for (const auto& c : checks) {
    if (!c.passed) out.push_back(c.name);
  }
  return out;
}

VerifyReport run_verification(const JacobiMatrix& J, const VerifyOptions& options) {
  Collector out;
  const int n = J.size();
  const double T = options.T;
  std::mt19937_64 rng(options.seed ^ 0x9e3779b97f4a7c15ULL);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  const SpectralData sd = spectral_decomposition(J);

  // jacobi_core
  {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> oracle(J.dense(), Eigen::EigenvaluesOnly);
    out.at_most("spectral.eigenvalues_vs_dense", (oracle.eigenvalues() - sd.lambdas()).cwiseAbs().maxCoeff(), 1e-10);
    out.at_most("spectral.weight_sum", std::abs(sd.rhos().cwiseInverse().sum() - 1.0), 1e-12);
    const Eigen::MatrixXd gram = sd.phi() * sd.rhos().cwiseInverse().asDiagonal() * sd.phi().transpose();
    out.at_most("spectral.orthonormality", (gram - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff(), 1e-10);
    double eig_res = 0.0;
    for (int k = 0; k < n; ++k) {
      const Eigen::VectorXd v = sd.phi().col(k);
      eig_res = std::max(eig_res, (apply_matrix(J, v) - sd.lambda(k) * v).norm() /
                                      ((J.dense().norm() + std::abs(sd.lambda(k))) * v.norm()));
    }
    out.at_most("spectral.eigen_residual", eig_res, 1e-10);
  }

  // wave_dynamics
  {
    double init = 0.0;
    double ode = 0.0;
    const double h = 1e-5;
    for (int k = 0; k < n; ++k) {
      const double lam = sd.lambda(k);
      init = std::max(init, std::abs(s_kernel(0.0, lam)));
      init = std::max(init, std::abs((s_kernel(h, lam) - s_kernel(-h, lam)) / (2.0 * h) - 1.0));
      const double t = T * unit(rng);
      // S' should equal C and C' should equal -lambda S.
      const double ds = (s_kernel(t + h, lam) - s_kernel(t - h, lam)) / (2.0 * h);
      const double dc = (c_kernel(t + h, lam) - c_kernel(t - h, lam)) / (2.0 * h);
      const double scale = std::max(1.0, std::abs(c_kernel(t, lam)) + std::abs(lam * s_kernel(t, lam)));
      ode = std::max(ode, (std::abs(ds - c_kernel(t, lam)) + std::abs(dc + lam * s_kernel(t, lam))) / scale);
    }
    out.at_most("wave.kernel_initial_values", init, 1e-6);
    out.at_most("wave.kernel_ode", ode, 1e-6);

    out.guarded("wave.duhamel_vs_rk4", [&] {
      auto f = [](double t) { return std::cos(2.0 * t) + t; };
      const TimeGrid grid(T, options.grid_m);
      const SampledControl fs = sample(grid, [&](double t) { return Complex(f(t), 0.0); });
      const StateVector u = solve_forward(sd, Control(fs), T);
      const Eigen::VectorXd ref = rk4_state(J, f, T, 20000);
      out.at_most("wave.duhamel_vs_rk4", (u.real() - ref).cwiseAbs().maxCoeff() / std::max(1.0, ref.cwiseAbs().maxCoeff()),
                  1e-8);
    });

    out.guarded("wave.response_is_first_coordinate", [&] {
      const TimeGrid grid(T, 101);
      const SBasisControl f = make_sbasis(T, random_coeffs(rng, n));
      const auto resp = apply_response(sd, Control(f), grid);
      double err = 0.0;
      double scale = 1.0;
      for (int i = 0; i < grid.size(); ++i) {
        const Complex u1 = solve_forward(sd, Control(f), grid.at(i))(0);
        err = std::max(err, std::abs(resp[static_cast<std::size_t>(i)] - u1));
        scale = std::max(scale, std::abs(u1));
      }
      out.at_most("wave.response_is_first_coordinate", err / scale, 1e-8);
    });
  }

  const GramMatrix G = gram_matrix(sd, T);

  // connecting
  {
    double err = 0.0;
    for (int i = 0; i < 50; ++i) {
      for (int j = 0; j < 50; ++j) {
        const double t = T * i / 49.0;
        const double s = T * j / 49.0;
        err = std::max(err, std::abs(ct_kernel_dynamic(sd, T, t, s) - ct_kernel_spectral(sd, T, t, s)));
      }
    }
    out.at_most("connecting.dynamic_equals_spectral", err, 1e-10);

    out.guarded("connecting.defining_identity", [&] {
      const SBasisControl f = make_sbasis(T, random_coeffs(rng, n));
      const SBasisControl g = make_sbasis(T, random_coeffs(rng, n));
      const Complex lhs = to_complex(ft_inner(G, apply_ct(sd, G, f), g));
      const StateVector wf = control_operator(sd, G, f);
      const StateVector wg = control_operator(sd, G, g);
      const Complex rhs = wg.dot(wf);
      out.at_most("connecting.defining_identity", std::abs(lhs - rhs) / std::max(1.0, wf.norm() * wg.norm()), 1e-10);
    });
  }

  // krein
  out.guarded("krein.special_controls", [&] {
    const SpecialControls fc = solve_special_controls(sd, G);
    out.at_most("krein.special_controls_state", fc.max_state_error, 1e-9);
    const Eigen::MatrixXcd cg = control_gram(sd, G, fc.controls);
    out.at_most("krein.control_gram_identity", (cg - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff(), 1e-8);
    out.at_most("krein.system_residual", verify_krein_system(J, sd, G, fc).max_residual, 1e-9);
  });

  out.guarded("krein.exact_reconstruction", [&] {
    const Reconstruction rc = reconstruct_exact(sd.lambdas(), sd.rhos().cwiseInverse(), T);
    out.at_most("krein.exact_reconstruction", max_coeff_error(rc, J, false), 1e-8);
  });

  out.guarded("krein.grid_reconstruction", [&] {
    const int nc = std::clamp(n, 1, 5);
    const JacobiMatrix Jc = random_jacobi(nc, options.seed + 1, {4.0, 12.0}, {0.5, 2.0});
    const SpectralData sdc = spectral_decomposition(Jc);
    const Reconstruction rc = reconstruct(sample_response(sdc, 4.0, options.grid_m), nc);
    out.at_most("krein.grid_reconstruction", max_coeff_error(rc, Jc, true), 1e-3);
  });

  // debranges
  std::vector<Complex> route_points;
  out.guarded("debranges.reproducing", [&] {
    std::uniform_real_distribution<double> box(-2.0, 2.0);
    double err = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
      const BElement g(sd, random_coeffs(rng, n));
      const double x = box(rng);
      const Complex z(x, box(rng));
      if (trial < 5) route_points.push_back(z);
      err = std::max(err, std::abs(bn_inner(g, reproducing_kernel(sd, z)) - g(z)) / std::max(1.0, std::abs(g(z))));
    }
    out.at_most("debranges.reproducing_property", err, 1e-10);
  });

  out.guarded("debranges.route_equality", [&] {
    double route = 0.0;
    for (const Complex& z : route_points) {
      const BElement jz = reproducing_kernel(sd, z);
      const BElement jc = reproducing_kernel_control(sd, G, z);
      route = std::max(route, (jc.coeffs() - jz.coeffs()).cwiseAbs().maxCoeff() /
                                  std::max(1.0, jz.coeffs().cwiseAbs().maxCoeff()));
    }
    out.at_most("debranges.route_equality", route, 1e-9);
  });

  out.guarded("debranges.hermite_biehler", [&] {
    const HermiteBiehlerFn E = hermite_biehler_E(sd);
    const Complex jii = E.kernel_at_i()(kI);
    out.at_most("debranges.kernel_norm_at_i",
                std::abs(jii - E.kernel_norm() * E.kernel_norm()) / (E.kernel_norm() * E.kernel_norm()), 1e-12);
    std::vector<Complex> pts;
    std::uniform_real_distribution<double> re(-10.0, 10.0);
    std::uniform_real_distribution<double> im(0.01, 10.0);
    for (int i = 0; i < 200; ++i) {
      const double x = re(rng);
      pts.emplace_back(x, im(rng));
    }
    out.positive("debranges.hb_margin", verify_hb(E, pts).min_margin);
    out.equal("debranges.zeros_in_upper_half_plane", count_zeros_upper_half_plane(E), 0.0);
  });

  out.guarded("debranges.kappa", [&] {
    const KappaReport k = measure_kappas(sd, options.seed);
    out.at_most("debranges.kappa_constancy", std::max(k.kappa_E_spread, k.kappa_B_spread), 1e-6);
    out.at_most("debranges.kappa_product", std::abs(k.product - 1.0), 1e-6);
  });

  out.guarded("debranges.axioms", [&] {
    const AxiomReport a = verify_axioms(sd, options.seed);
    out.at_most("debranges.axiom_point_evaluation", a.point_evaluation_max_ratio - 1.0, a.tolerance);
    out.at_most("debranges.axiom_conjugation", a.conjugation_max_diff, a.tolerance);
    if (a.blaschke_checked) {
      out.at_most("debranges.axiom_blaschke", std::max(a.blaschke_max_diff, a.blaschke_max_remainder), a.tolerance);
    }
  });

  return out.take();
}

std::string format_report(const VerifyReport& report) {
  std::size_t width = 5;
  for (const auto& c : report.checks) width = std::max(width, c.name.size());
  std::string s = fmt::format("{:<{}}  {:>12}  {:>2}  {:>10}  {}\n", "check", width, "value", "", "tolerance", "result");
  for (const auto& c : report.checks) {
    s += fmt::format("{:<{}}  {:>12.4e}  {:>2}  {:>10.1e}  {}\n", c.name, width, c.value, c.relation, c.tolerance,
                     c.passed ? "PASS" : "FAIL");
  }
  s += report.passed() ? "all checks passed\n" : fmt::format("{} check(s) failed\n", report.failures().size());
  return s;
}

}  // namespace jbc

#include <cmath>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "jbc/connecting.hpp"
#include "jbc/debranges.hpp"
#include "jbc/io.hpp"
#include "jbc/jacobi.hpp"
#include "jbc/kernels.hpp"
#include "jbc/krein.hpp"
#include "jbc/verify.hpp"
#include "jbc/wave.hpp"

namespace fs = std::filesystem;
using namespace jbc;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

class UsageError : public Error {
 public:
  using Error::Error;
};

struct RunConfig {
  std::optional<JacobiMatrix> matrix;
  int n = 4;
  std::uint64_t seed = 0;
  Range b_range{-5.0, 5.0};
  Range a_range{0.1, 5.0};
  double T = 1.0;
  int grid_m = 2001;
  double rank_threshold = 1e-10;
  fs::path out = ".";

  JacobiMatrix jacobi() const { return matrix ? *matrix : random_jacobi(n, seed, b_range, a_range); }
};

// Command-line values that override the config file.
struct Flags {
  std::string config;
  std::optional<std::string> out;
  std::optional<double> T;
  std::optional<int> grid;
  std::optional<std::uint64_t> seed;
  std::optional<int> n;
  bool exact_path = false;
  std::string control;
  std::string response;
  bool sign_fault = false;
};

Range range_from_json(const io::Json& j, const char* key, Range fallback) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    throw io::IoError(std::string("'") + key + "' must be [lo, hi]");
  }
  return {v[0].get<double>(), v[1].get<double>()};
}

RunConfig load_config(const Flags& flags) {
  RunConfig cfg;
  if (!flags.config.empty()) {
    const io::Json j = io::read_json(flags.config);
    if (j.contains("a") || j.contains("b")) {
      cfg.matrix = io::jacobi_from_json(j);
    }
    const io::Json gen = j.contains("generator") ? j.at("generator") : j;
    if (gen.contains("n")) cfg.n = gen.at("n").get<int>();
    if (gen.contains("seed")) cfg.seed = gen.at("seed").get<std::uint64_t>();
    cfg.b_range = range_from_json(gen, "b_range", cfg.b_range);
    cfg.a_range = range_from_json(gen, "a_range", cfg.a_range);
    if (j.contains("T")) cfg.T = j.at("T").get<double>();
    if (j.contains("grid_m")) cfg.grid_m = j.at("grid_m").get<int>();
    if (j.contains("rank_threshold")) cfg.rank_threshold = j.at("rank_threshold").get<double>();
    if (j.contains("out")) cfg.out = j.at("out").get<std::string>();
  }
  if (flags.n) cfg.n = *flags.n;
  if (flags.seed) cfg.seed = *flags.seed;
  if (flags.T) cfg.T = *flags.T;
  if (flags.grid) cfg.grid_m = *flags.grid;
  if (flags.out) cfg.out = *flags.out;

  if (!(cfg.T > 0.0) || !std::isfinite(cfg.T)) throw UsageError("T must be positive");
  if (cfg.grid_m < 201) throw UsageError("grid must be at least 201");
  if (cfg.grid_m % 2 == 0) ++cfg.grid_m;
  if (!cfg.matrix && cfg.n < 1) throw UsageError("n must be at least 1");
  if (!(cfg.rank_threshold > 0.0 && cfg.rank_threshold < 1.0)) throw UsageError("rank_threshold must lie in (0, 1)");
  return cfg;
}

int cmd_spectra(const RunConfig& cfg) {
  const JacobiMatrix J = cfg.jacobi();
  const SpectralData sd = spectral_decomposition(J);
  io::write_json(cfg.out / "matrix.json", io::to_json(J));
  io::write_json(cfg.out / "spectra.json", io::to_json(sd));

  const int n = J.size();
  auto [lo, hi] = J.gershgorin();
  io::Table poly;
  poly.header.push_back("lambda");
  for (int m = 1; m <= n; ++m) poly.header.push_back(fmt::format("phi_{}", m));
  constexpr int kSamples = 401;
  for (int i = 0; i < kSamples; ++i) {
    const double x = lo + (hi - lo) * i / (kSamples - 1);
    const auto phi = eval_polynomials(J, x);
    std::vector<double> row{x};
    row.insert(row.end(), phi.begin(), phi.begin() + n);
    poly.rows.push_back(std::move(row));
  }
  io::write_csv(cfg.out / "polynomials.csv", poly);
  io::write_csv(cfg.out / "response_function.csv", io::to_table(sample_response(sd, cfg.T, cfg.grid_m)));
  std::cout << fmt::format("N = {}, lambdas in [{}, {}], wrote {}\n", n, sd.lambda(0), sd.lambda(n - 1),
                           cfg.out.string());
  return kExitPass;
}

int cmd_simulate(const RunConfig& cfg, const Flags& flags) {
  if (flags.control.empty()) throw UsageError("simulate needs --control <file>");
  const SpectralData sd = spectral_decomposition(cfg.jacobi());
  const Control f = io::read_control(flags.control);
  const double T = horizon(f);
  const TimeGrid grid = std::holds_alternative<SampledControl>(f) ? std::get<SampledControl>(f).grid
                                                                   : TimeGrid(T, cfg.grid_m);
  const int n = sd.size();
  io::Table traj;
  traj.header.push_back("t");
  for (int k = 1; k <= n; ++k) traj.header.push_back(fmt::format("u_{}", k));
  for (int i = 0; i < grid.size(); ++i) {
    const StateVector u = solve_forward(sd, f, grid.at(i));
    std::vector<double> row{grid.at(i)};
    for (int k = 0; k < n; ++k) row.push_back(u(k).real());
    traj.rows.push_back(std::move(row));
  }
  io::write_csv(cfg.out / "trajectory.csv", traj);

  const auto response = apply_response(sd, f, grid);
  io::write_csv(cfg.out / "response.csv", io::to_table(SampledControl(grid, response)));
  std::cout << fmt::format("simulated {} steps on [0, {}], wrote {}\n", grid.size(), T, cfg.out.string());
  return kExitPass;
}

int cmd_reconstruct(const RunConfig& cfg, const Flags& flags) {
  if (flags.response.empty()) throw UsageError("reconstruct needs --r <file>");
  Reconstruction rec;
  if (flags.exact_path) {
    // Spectral data {lambdas, rhos}; the response coefficients are 1/rho_k.
    const io::Json j = io::read_json(flags.response);
    if (!j.contains("lambdas") || !j.contains("rhos")) throw io::IoError("exact path expects spectra.json");
    const auto lambdas = j.at("lambdas").get<std::vector<double>>();
    const auto rhos = j.at("rhos").get<std::vector<double>>();
    if (lambdas.size() != rhos.size() || lambdas.empty()) throw io::IoError("lambdas and rhos differ in length");
    Eigen::VectorXd lam(static_cast<Eigen::Index>(lambdas.size()));
    Eigen::VectorXd w(lam.size());
    for (Eigen::Index k = 0; k < lam.size(); ++k) {
      lam(k) = lambdas[static_cast<std::size_t>(k)];
      w(k) = 1.0 / rhos[static_cast<std::size_t>(k)];
    }
    rec = reconstruct_exact(lam, w, cfg.T);
  } else {
    const ResponseSamples r = io::response_from_table(io::read_csv(flags.response));
    const int n = cfg.matrix ? cfg.matrix->size() : cfg.n;
    rec = reconstruct(r, n, ReconstructOptions{cfg.rank_threshold});
  }
  io::write_json(cfg.out / "reconstruction.json", io::to_json(rec));
  std::cout << fmt::format("recovered N = {}, rank {}, condition {:.3e}\n", rec.b.size(), rec.rank, rec.condition);
  return kExitPass;
}

int cmd_debranges(const RunConfig& cfg) {
  const JacobiMatrix J = cfg.jacobi();
  const SpectralData sd = spectral_decomposition(J);
  const HermiteBiehlerFn E = hermite_biehler_E(sd);

  auto [lo, hi] = J.gershgorin();
  lo -= 1.0;
  hi += 1.0;
  io::Table samples{{"lambda", "re", "im", "abs2"}, {}};
  constexpr int kSamples = 401;
  for (int i = 0; i < kSamples; ++i) {
    const double x = lo + (hi - lo) * i / (kSamples - 1);
    const Complex e = E(Complex(x, 0.0));
    samples.rows.push_back({x, e.real(), e.imag(), std::norm(e)});
  }
  io::write_csv(cfg.out / "E_samples.csv", samples);

  io::Table margins{{"x", "y", "margin"}, {}};
  double min_margin = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 40; ++i) {
    for (int k = 1; k <= 20; ++k) {
      const double x = -10.0 + 0.5 * i;
      const double y = 0.5 * k;
      const double margin = std::abs(E(Complex(x, y))) - std::abs(E(Complex(x, -y)));
      min_margin = std::min(min_margin, margin);
      margins.rows.push_back({x, y, margin});
    }
  }
  io::write_csv(cfg.out / "hb_margin.csv", margins);

  const KappaReport kappa = measure_kappas(sd, cfg.seed);
  io::write_json(cfg.out / "kappa.json", io::to_json(kappa));
  const AxiomReport axioms = verify_axioms(sd, cfg.seed);
  io::write_json(cfg.out / "axioms.json", io::to_json(axioms));

  std::cout << fmt::format("kappa_E = {:.12g}, kappa_B = {:.12g}, min HB margin {:.3e}, axioms {}\n",
                           kappa.kappa_E.real(), kappa.kappa_B.real(), min_margin,
                           axioms.passed() ? "pass" : "FAIL");
  return axioms.passed() && min_margin > 0.0 ? kExitPass : kExitFail;
}

int cmd_verify(const RunConfig& cfg, const Flags& flags) {
  fault::flip_s_sign = flags.sign_fault;
  const VerifyReport report = run_verification(cfg.jacobi(), VerifyOptions{cfg.T, cfg.grid_m, cfg.seed});
  std::cout << format_report(report);
  return report.passed() ? kExitPass : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Boundary control and de Branges spaces for finite Jacobi matrices"};
  app.require_subcommand(1);
  Flags flags;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", flags.config, "JSON matrix {a, b} or generator {n, seed, b_range, a_range}");
    sub->add_option("--out", flags.out, "Output directory");
    sub->add_option("--T", flags.T, "Time horizon");
    sub->add_option("--grid", flags.grid, "Grid size m (odd, >= 201)");
    sub->add_option("--seed", flags.seed, "Generator seed");
    sub->add_option("--n", flags.n, "Generated matrix size");
  };
  auto* spectra = app.add_subcommand("spectra", "Spectral data, polynomials and response function");
  auto* simulate = app.add_subcommand("simulate", "Forward solution for a control");
  auto* recon = app.add_subcommand("reconstruct", "Recover the matrix from response data");
  auto* debranges = app.add_subcommand("debranges", "Hermite-Biehler function, kappa and axiom reports");
  auto* verify = app.add_subcommand("verify", "Run every invariant check");
  for (auto* sub : {spectra, simulate, recon, debranges, verify}) common(sub);
  simulate->add_option("--control", flags.control, "Control: .json S-basis coefficients or CSV t,re,im");
  recon->add_option("--r", flags.response, "Response CSV t,r on [0, 2T], or spectra.json with --exact-path");
  recon->add_flag("--exact-path", flags.exact_path, "Run the recursion exactly in the S-basis");
  verify->add_flag("--inject-sign-fault", flags.sign_fault)->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    const RunConfig cfg = load_config(flags);
    if (spectra->parsed()) return cmd_spectra(cfg);
    if (simulate->parsed()) return cmd_simulate(cfg, flags);
    if (recon->parsed()) return cmd_reconstruct(cfg, flags);
    if (debranges->parsed()) return cmd_debranges(cfg);
    return cmd_verify(cfg, flags);
  } catch (const RankError& e) {
    std::cerr << fmt::format("rank error: detected {}, expected {}: {}\n", e.detected(), e.expected(), e.what());
    return kExitFail;
  } catch (const IllPosedError& e) {
    std::cerr << fmt::format("ill-posed at step {}: {}\n", e.step(), e.what());
    return kExitFail;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const io::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: bad config: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFail;
  }
}

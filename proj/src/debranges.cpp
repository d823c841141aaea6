#include "jbc/debranges.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Eigenvalues>
#include <boost/math/quadrature/gauss.hpp>

#include "jbc/krein.hpp"
#include "jbc/wave.hpp"

namespace jbc {

namespace {

constexpr Complex kI(0.0, 1.0);

void require_same(const SpectralData& a, const SpectralData& b) {
  if (!a.same_as(b)) throw InconsistentDataError("B_N elements built over different spectral data");
}

Complex random_complex(std::mt19937_64& rng, double lo_re, double hi_re, double lo_im, double hi_im) {
  std::uniform_real_distribution<double> re(lo_re, hi_re);
  std::uniform_real_distribution<double> im(lo_im, hi_im);
  const double x = re(rng);
  return {x, im(rng)};
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

struct Sample {
  Complex value;
  double noise;
};

// Coefficients of F, G and J_i in the working precision R.
template <class R>
struct Terms {
  std::vector<R> fr, fi, gr, gi, jr, ji;
  R nu2 = 0;
};

// Zeros of E other than z = -i: by the Christoffel-Darboux identity they solve
// phi_{N+1}(z) = c phi_N(z) with c = conj(phi_{N+1}(i) / phi_N(i)), i.e. they are
// eigenvalues of J with b_N shifted by c.
std::vector<Complex> zeros_of_E(const JacobiMatrix& J) {
  const int n = J.size();
  const auto at_i = eval_polynomials(J, kI);
  const Complex c = std::conj(at_i[static_cast<std::size_t>(n)] / at_i[static_cast<std::size_t>(n - 1)]);
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(n, n);
  for (int k = 1; k <= n; ++k) {
    A(k - 1, k - 1) = J.b(k);
    if (k < n) A(k - 1, k) = A(k, k - 1) = J.a(k);
  }
  A(n - 1, n - 1) += c;
  const Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(A, false);
  std::vector<Complex> out;
  for (int k = 0; k < n; ++k) {
    const Complex z = solver.eigenvalues()(k);
    if (std::abs(z + kI) > 1e-6) out.push_back(z);
  }
  return out;
}

}  // namespace

BElement::BElement(SpectralData sd, Eigen::VectorXcd coeffs) : sd_(std::move(sd)), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != sd_.size()) throw DimensionError("B_N element needs N coefficients");
}

Complex BElement::operator()(Complex z) const {
  const auto phi = eval_polynomials(sd_.matrix(), z);
  Complex acc = 0.0;
  for (int m = 0; m < size(); ++m) acc += coeffs_(m) * phi[static_cast<std::size_t>(m)];
  return acc;
}

Complex BElement::derivative(Complex z) const {
  const auto dphi = eval_polynomial_derivatives(sd_.matrix(), z);
  Complex acc = 0.0;
  for (int m = 0; m < size(); ++m) acc += coeffs_(m) * dphi[static_cast<std::size_t>(m)];
  return acc;
}

Eigen::VectorXcd BElement::at_eigenvalues() const {
  return sd_.phi().transpose().cast<Complex>() * coeffs_;
}

BElement BElement::conjugate_reflection() const { return BElement(sd_, coeffs_.conjugate()); }

BElement fourier_image(const SpectralData& sd, const StateVector& u) {
  if (u.size() != sd.size()) throw DimensionError("state vector length differs from N");
  return BElement(sd, u);
}

BElement project_PN(const SpectralData& sd, const std::function<Complex(double)>& a) {
  const int n = sd.size();
  Eigen::VectorXcd values(n);
  for (int j = 0; j < n; ++j) values(j) = a(sd.lambda(j)) / sd.rho(j);
  return BElement(sd, sd.phi().cast<Complex>() * values);
}

Complex bn_inner(const BElement& H, const BElement& G) {
  require_same(H.spectral(), G.spectral());
  const Eigen::VectorXcd h = H.at_eigenvalues();
  const Eigen::VectorXcd g = G.at_eigenvalues();
  Complex acc = 0.0;
  for (int k = 0; k < H.size(); ++k) acc += h(k) * std::conj(g(k)) / H.spectral().rho(k);
  return acc;
}

double bn_norm(const BElement& G) { return std::sqrt(std::max(0.0, bn_inner(G, G).real())); }

BElement reproducing_kernel(const SpectralData& sd, Complex z) {
  const auto phi = eval_polynomials(sd.matrix(), z);
  Eigen::VectorXcd c(sd.size());
  for (int m = 0; m < sd.size(); ++m) c(m) = std::conj(phi[static_cast<std::size_t>(m)]);
  return BElement(sd, std::move(c));
}

BElement reproducing_kernel_control(const SpectralData& sd, const GramMatrix& G, Complex z) {
  const auto jz = solve_special_control_problem(sd, G, z);
  return fourier_image(sd, control_operator(sd, G, jz.control));
}

HermiteBiehlerFn::HermiteBiehlerFn(BElement kernel_at_i, double kernel_norm)
    : kernel_(std::move(kernel_at_i)), norm_(kernel_norm) {
  if (!(norm_ > 0.0)) throw DomainError("reproducing kernel norm must be positive");
}

Complex HermiteBiehlerFn::operator()(Complex z) const {
  return std::sqrt(std::numbers::pi) * (1.0 - kI * z) * kernel_(z) / norm_;
}

Complex HermiteBiehlerFn::derivative(Complex z) const {
  return std::sqrt(std::numbers::pi) * (-kI * kernel_(z) + (1.0 - kI * z) * kernel_.derivative(z)) / norm_;
}

HermiteBiehlerFn hermite_biehler_E(const SpectralData& sd) {
  BElement Ji = reproducing_kernel(sd, kI);
  const double norm = bn_norm(Ji);
  return HermiteBiehlerFn(std::move(Ji), norm);
}

HbReport verify_hb(const HermiteBiehlerFn& E, std::span<const Complex> samples) {
  HbReport report;
  report.min_margin = std::numeric_limits<double>::infinity();
  for (const Complex z : samples) {
    if (!(z.imag() > 0.0)) throw DomainError("Hermite-Biehler samples must lie in the open upper half-plane");
    const double margin = std::abs(E(z)) - std::abs(E(std::conj(z)));
    report.min_margin = std::min(report.min_margin, margin);
    if (!(margin > 0.0)) ++report.violations;
    ++report.samples;
  }
  return report;
}

int count_zeros_upper_half_plane(const HermiteBiehlerFn& E) {
  // Monomial coefficients by interpolation on the unit circle.
  const int deg = E.degree();
  const int n = deg + 1;
  Eigen::VectorXcd coeff = Eigen::VectorXcd::Zero(n);
  for (int k = 0; k < n; ++k) {
    const Complex w = std::polar(1.0, 2.0 * std::numbers::pi * k / n);
    const Complex ew = E(w);
    for (int j = 0; j < n; ++j) coeff(j) += ew * std::pow(w, -j) / static_cast<double>(n);
  }
  // Fujiwara bound on the modulus of every zero.
  double bound = 0.0;
  for (int j = 1; j <= deg; ++j) {
    const double ratio = std::abs(coeff(deg - j) / coeff(deg)) / (j == deg ? 2.0 : 1.0);
    bound = std::max(bound, std::pow(ratio, 1.0 / j));
  }
  const double R = 1.0 + 4.0 * bound;
  // Contour hugs the real axis from above so real zeros are not counted.
  const double lift = 1e-9 * R;

  double winding = 0.0;
  // Adaptive accumulation of the argument increment along a path segment.
  auto accumulate = [&](auto&& path, double s0, double s1) {
    struct Piece {
      double a, b;
      Complex fa, fb;
      int depth;
    };
    std::vector<Piece> stack{{s0, s1, E(path(s0)), E(path(s1)), 0}};
    while (!stack.empty()) {
      Piece p = stack.back();
      stack.pop_back();
      const double step = std::arg(p.fb / p.fa);
      const double mid = 0.5 * (p.a + p.b);
      const Complex fm = E(path(mid));
      const double halves = std::arg(fm / p.fa) + std::arg(p.fb / fm);
      // Several zeros under one piece can alias to a small net step; the
      // midpoint exposes that as a disagreement between the halves.
      if ((std::abs(step) > 0.5 || std::abs(halves - step) > 1e-6) && p.depth < 60) {
        stack.push_back({mid, p.b, fm, p.fb, p.depth + 1});
        stack.push_back({p.a, mid, p.fa, fm, p.depth + 1});
      } else {
        winding += step;
      }
    }
  };
  const int pieces = 64 * (deg + 1);
  auto line = [&](double s) { return Complex(s, lift); };
  for (int i = 0; i < pieces; ++i) {
    accumulate(line, -R + 2.0 * R * i / pieces, -R + 2.0 * R * (i + 1) / pieces);
  }
  auto arc = [&](double th) { return Complex(R * std::cos(th), lift + R * std::sin(th)); };
  for (int i = 0; i < pieces; ++i) {
    accumulate(arc, std::numbers::pi * i / pieces, std::numbers::pi * (i + 1) / pieces);
  }
  return static_cast<int>(std::lround(winding / (2.0 * std::numbers::pi)));
}

Complex repr_ker_from_E(const HermiteBiehlerFn& E, Complex z, Complex xi) {
  const Complex zc = std::conj(z);
  const Complex Ez = E(z);
  const Complex Ezc = E(zc);
  if (std::abs(zc - xi) < 1e-8) {
    const Complex num_derivative = std::conj(Ez) * E.derivative(zc) - Ezc * std::conj(E.derivative(z));
    return num_derivative / (-2.0 * kI);
  }
  const Complex num = std::conj(Ez) * E(xi) - Ezc * std::conj(E(std::conj(xi)));
  return num / (2.0 * kI * (zc - xi));
}

QuadratureResult be_inner_report(const BElement& F, const BElement& G, const HermiteBiehlerFn& E,
                                 double tol) {
  require_same(F.spectral(), G.spectral());
  require_same(F.spectral(), E.kernel_at_i().spectral());
  const JacobiMatrix& J = F.spectral().matrix();
  const int n = F.size();

  // J_i and its norm are recomputed from the recurrence at z = i rather than
  // rounded from E.
  auto terms = [&]<class R>(R) {
    Terms<R> t;
    R pr_prev(0), pi_prev(0), pr(1), pi(0);
    for (int m = 0; m < n; ++m) {
      t.fr.push_back(R(F.coeffs()(m).real()));
      t.fi.push_back(R(F.coeffs()(m).imag()));
      t.gr.push_back(R(G.coeffs()(m).real()));
      t.gi.push_back(R(G.coeffs()(m).imag()));
      t.jr.push_back(pr);
      t.ji.push_back(-pi);
      t.nu2 += pr * pr + pi * pi;
      // (i - b) phi_m - a_{m-1} phi_{m-1}, divided by a_m.
      const R a(J.a(m + 1)), am1(J.a(m)), b(J.b(m + 1));
      const R nr = (-b * pr - pi - am1 * pr_prev) / a;
      const R ni = (pr - b * pi - am1 * pi_prev) / a;
      pr_prev = pr;
      pi_prev = pi;
      pr = nr;
      pi = ni;
    }
    return t;
  };
  const Terms<double> narrow = terms(0.0);
  const Terms<Wide> wide = terms(Wide(0));

  // |E(x)|^2 = pi (1 + x^2) |J_i(x)|^2 / |J_i|^2, so the weight (1 + x^2) / |E|^2
  // reduces to a ratio of degree N-1 polynomials; phi is rescaled per node
  // since the ratio is homogeneous in it.
  auto integrand = [&]<class R>(const Terms<R>& c, R theta) -> Sample {
    using std::abs;
    using std::tan;
    const R eps = std::numeric_limits<R>::epsilon();
    const R x = tan(theta);
    const auto phi = eval_polynomials(J, x);
    const auto dphi = eval_polynomial_derivatives(J, x);
    R scale(0);
    for (int m = 0; m < n; ++m) scale = std::max(scale, R(abs(phi[static_cast<std::size_t>(m)])));
    R fr(0), fi(0), gr(0), gi(0), jr(0), ji(0);
    R dfr(0), dfi(0), dgr(0), dgi(0), djr(0), dji(0);
    R sf(0), sg(0), sj(0);
    for (int m = 0; m < n; ++m) {
      const auto k = static_cast<std::size_t>(m);
      const R p = phi[k] / scale;
      const R dp = dphi[k] / scale;
      fr += c.fr[k] * p;
      fi += c.fi[k] * p;
      gr += c.gr[k] * p;
      gi += c.gi[k] * p;
      jr += c.jr[k] * p;
      ji += c.ji[k] * p;
      dfr += c.fr[k] * dp;
      dfi += c.fi[k] * dp;
      dgr += c.gr[k] * dp;
      dgi += c.gi[k] * dp;
      djr += c.jr[k] * dp;
      dji += c.ji[k] * dp;
      sf += (abs(c.fr[k]) + abs(c.fi[k])) * abs(p);
      sg += (abs(c.gr[k]) + abs(c.gi[k])) * abs(p);
      sj += (abs(c.jr[k]) + abs(c.ji[k])) * abs(p);
    }
    const R j2 = jr * jr + ji * ji;
    const R w = c.nu2 / (R(std::numbers::pi) * j2);
    const Complex v(static_cast<double>(w * (fr * gr + fi * gi)), static_cast<double>(w * (fi * gr - fr * gi)));
    const R tiny(1e-300);
    const R af = std::max(R(sqrt(fr * fr + fi * fi)), tiny);
    const R ag = std::max(R(sqrt(gr * gr + gi * gi)), tiny);
    const R aj = sqrt(j2);
    // Rounding in each sum relative to its size, plus the effect of rounding
    // theta and tan(theta) on x; both dominate near zeros of J_i.
    const R dx = eps * ((1 + x * x) * abs(theta) + abs(x));
    const R rel = R(n) * eps * (sf / af + sg / ag + 2 * sj / aj) +
                  dx * ((abs(dfr) + abs(dfi)) / af + (abs(dgr) + abs(dgi)) / ag + 2 * (abs(djr) + abs(dji)) / aj);
    return {v, std::abs(v) * std::min(static_cast<double>(rel), 1.0)};
  };
  using Rule = boost::math::quadrature::gauss<double, 64>;
  auto rule = [&]<class R>(const Terms<R>& c, double a, double b) -> Sample {
    const R mid = (R(a) + R(b)) / 2;
    const R half = (R(b) - R(a)) / 2;
    const auto& x = Rule::abscissa();
    const auto& w = Rule::weights();
    constexpr double kEps = std::numeric_limits<double>::epsilon();
    Sample acc{0.0, 0.0};
    for (std::size_t i = 0; i < x.size(); ++i) {
      const Sample l = integrand(c, R(mid - half * R(x[i])));
      const Sample r = integrand(c, R(mid + half * R(x[i])));
      acc.value += w[i] * (l.value + r.value);
      acc.noise += w[i] * (l.noise + r.noise + kEps * (std::abs(l.value) + std::abs(r.value)));
    }
    const double h = static_cast<double>(half);
    return {acc.value * h, acc.noise * h};
  };

  // Each zeta = alpha - i gamma of E puts a peak of width gamma at alpha; the
  // initial breakpoints are graded geometrically around it. Within
  // 1e-5 (1 + |alpha|) of a peak narrower than that, double precision cannot
  // place x well enough relative to gamma and the panels run in binary128.
  constexpr int kInitialPanels = 8;
  std::vector<double> cuts;
  std::vector<std::pair<double, double>> wide_zones;
  for (int p = 0; p <= kInitialPanels; ++p) cuts.push_back(-0.5 * std::numbers::pi + p * std::numbers::pi / kInitialPanels);
  for (const Complex& zeta : zeros_of_E(J)) {
    const double alpha = zeta.real();
    const double gamma = std::abs(zeta.imag());
    const double reach = 1e-5 * (1.0 + std::abs(alpha));
    if (gamma < reach) wide_zones.emplace_back(std::atan(alpha - reach), std::atan(alpha + reach));
    cuts.push_back(std::atan(alpha));
    for (double d = gamma; d < 1e3 * (1.0 + std::abs(alpha)); d *= 4.0) {
      cuts.push_back(std::atan(alpha - d));
      cuts.push_back(std::atan(alpha + d));
    }
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  auto panel = [&](double a, double b) -> Sample {
    for (const auto& [lo, hi] : wide_zones) {
      if (a < hi && b > lo) return rule(wide, a, b);
    }
    return rule(narrow, a, b);
  };

  // Panels are bisected where a 64-point rule and its two halves disagree.
  struct Piece {
    double a, b;
    Sample whole;
    int depth;
  };
  std::vector<Piece> stack;
  for (std::size_t p = cuts.size() - 1; p > 0; --p) stack.push_back({cuts[p - 1], cuts[p], panel(cuts[p - 1], cuts[p]), 0});
  QuadratureResult out;
  out.value = 0.0;
  while (!stack.empty()) {
    const Piece p = stack.back();
    stack.pop_back();
    const double mid = 0.5 * (p.a + p.b);
    const Sample left = panel(p.a, mid);
    const Sample right = panel(mid, p.b);
    const double err = std::abs(left.value + right.value - p.whole.value);
    const double share = tol * (p.b - p.a);
    const double floor = 4.0 * (left.noise + right.noise + p.whole.noise);
    const bool unresolvable = p.b - p.a <= 64.0 * std::numeric_limits<double>::epsilon() * std::abs(mid);
    if (err <= std::max(share, floor) || unresolvable) {
      out.value += left.value + right.value;
      out.error_estimate += err;
      out.panels += 2;
    } else if (p.depth >= 50) {
      throw ConvergenceError("be_inner quadrature did not reach the requested tolerance");
    } else {
      stack.push_back({mid, p.b, right, p.depth + 1});
      stack.push_back({p.a, mid, left, p.depth + 1});
    }
  }
  out.value /= std::numbers::pi;
  out.error_estimate /= std::numbers::pi;
  return out;
}

Complex be_inner(const BElement& F, const BElement& G, const HermiteBiehlerFn& E, double tol) {
  return be_inner_report(F, G, E, tol).value;
}

Eigen::VectorXcd multiply_by_linear(const SpectralData& sd, const Eigen::VectorXcd& h, Complex omega) {
  const int n = sd.size();
  if (h.size() != n - 1) throw DimensionError("factor must have N-1 coefficients");
  const JacobiMatrix& J = sd.matrix();
  auto hm = [&](int m) -> Complex { return (m >= 1 && m <= n - 1) ? h(m - 1) : Complex(0.0); };
  Eigen::VectorXcd g(n);
  for (int j = 1; j <= n; ++j) {
    g(j - 1) = J.a(j) * hm(j + 1) + (J.b(j) - omega) * hm(j) + J.a(j - 1) * hm(j - 1);
  }
  // a_N multiplies h_{N+1} = 0 and a_0 multiplies h_0 = 0.
  return g;
}

Eigen::VectorXcd divide_by_linear(const SpectralData& sd, const Eigen::VectorXcd& g, Complex omega,
                                  Complex& remainder) {
  const int n = sd.size();
  if (g.size() != n) throw DimensionError("dividend must have N coefficients");
  if (n < 2) throw DomainError("division by a linear factor needs N >= 2");
  const JacobiMatrix& J = sd.matrix();
  Eigen::VectorXcd h = Eigen::VectorXcd::Zero(n + 1);  // h(m) for m = 0..N, h_0 = h_N = 0
  h(n - 1) = g(n - 1) / J.a(n - 1);
  for (int j = n - 1; j >= 2; --j) {
    h(j - 1) = (g(j - 1) - (J.b(j) - omega) * h(j) - J.a(j) * h(j + 1)) / J.a(j - 1);
  }
  remainder = g(0) - (J.b(1) - omega) * h(1) - J.a(1) * h(2);
  return h.segment(1, n - 1);
}

bool AxiomReport::passed() const {
  const bool ok12 = point_evaluation_max_ratio <= 1.0 + tolerance && conjugation_max_diff <= tolerance;
  const bool ok3 = !blaschke_checked || (blaschke_max_diff <= tolerance && blaschke_max_remainder <= tolerance);
  return ok12 && ok3;
}

AxiomReport verify_axioms(const SpectralData& sd, std::uint64_t seed, int trials) {
  std::mt19937_64 rng(seed);
  const int n = sd.size();
  AxiomReport report;
  for (int t = 0; t < trials; ++t) {
    const BElement G(sd, random_coeffs(rng, n));
    const Complex z = random_complex(rng, -5.0, 5.0, -5.0, 5.0);
    const double norm = bn_norm(G);

    // 1) |G(z)| <= |J_z| |G| with |J_z|^2 = J_z(z).
    const BElement Jz = reproducing_kernel(sd, z);
    const double kernel_norm = std::sqrt(std::max(0.0, Jz(z).real()));
    report.point_evaluation_max_ratio =
        std::max(report.point_evaluation_max_ratio, std::abs(G(z)) / (kernel_norm * norm));

    // 2) G# in B_N with the same norm.
    const BElement Gs = G.conjugate_reflection();
    const double scale = std::max(1.0, norm);
    report.conjugation_max_diff = std::max(report.conjugation_max_diff, std::abs(bn_norm(Gs) - norm) / scale);
    const double pointwise = std::abs(Gs(z) - std::conj(G(std::conj(z)))) / std::max(1.0, std::abs(G(std::conj(z))));
    report.conjugation_max_diff = std::max(report.conjugation_max_diff, pointwise);

    // 3) Blaschke factor (x - conj w)/(x - w) applied to G with G(w) = 0.
    if (n >= 2) {
      report.blaschke_checked = true;
      const Complex omega = random_complex(rng, -3.0, 3.0, -3.0, 3.0);
      Eigen::VectorXcd g = random_coeffs(rng, n);
      // Subtract G(omega) phi_1 so that omega becomes a zero.
      g(0) -= BElement(sd, g)(omega);
      Complex remainder;
      const Eigen::VectorXcd h = divide_by_linear(sd, g, omega, remainder);
      const BElement with_zero(sd, g);
      const BElement reflected(sd, multiply_by_linear(sd, h, std::conj(omega)));
      const double gn = bn_norm(with_zero);
      report.blaschke_max_remainder =
          std::max(report.blaschke_max_remainder, std::abs(remainder) / std::max(1.0, g.norm()));
      report.blaschke_max_diff = std::max(report.blaschke_max_diff, std::abs(bn_norm(reflected) - gn) / std::max(1.0, gn));
    }
  }
  return report;
}

KappaReport measure_kappas(const SpectralData& sd, std::uint64_t seed, int kernel_pairs, int inner_pairs) {
  std::mt19937_64 rng(seed);
  const HermiteBiehlerFn E = hermite_biehler_E(sd);
  auto summarize = [](const std::vector<Complex>& values, Complex& mean, double& spread) {
    mean = 0.0;
    for (const auto& v : values) mean += v;
    mean /= static_cast<double>(values.size());
    double var = 0.0;
    for (const auto& v : values) var += std::norm(v - mean);
    spread = std::sqrt(var / static_cast<double>(values.size())) / std::abs(mean);
  };

  KappaReport report;
  std::vector<Complex> ratios;
  while (static_cast<int>(ratios.size()) < kernel_pairs) {
    const Complex z = random_complex(rng, -3.0, 3.0, -3.0, 3.0);
    const Complex xi = random_complex(rng, -3.0, 3.0, -3.0, 3.0);
    const Complex direct = reproducing_kernel(sd, z)(xi);
    if (std::abs(direct) < 1e-6) continue;
    ratios.push_back(repr_ker_from_E(E, z, xi) / direct);
  }
  summarize(ratios, report.kappa_E, report.kappa_E_spread);

  ratios.clear();
  const int n = sd.size();
  while (static_cast<int>(ratios.size()) < inner_pairs) {
    const BElement F(sd, random_coeffs(rng, n));
    const BElement G(sd, random_coeffs(rng, n));
    const Complex bn = bn_inner(F, G);
    if (std::abs(bn) < 1e-3 * bn_norm(F) * bn_norm(G)) continue;
    ratios.push_back(be_inner(F, G, E, 1e-10 * std::abs(bn)) / bn);
  }
  summarize(ratios, report.kappa_B, report.kappa_B_spread);
  report.product = report.kappa_E * report.kappa_B;
  return report;
}

}  // namespace jbc

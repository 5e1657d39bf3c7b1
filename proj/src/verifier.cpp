#include "spectral_lift/verifier.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <random>

#include "spectral_lift/errors.hpp"
#include "spectral_lift/group_model.hpp"

namespace spectral_lift {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Matrix conjugate_by(const Matrix& u, const Matrix& a) {
  if (auto mono = MonomialMatrix::detect(u)) return mono->conjugate(a);
  return multiply(multiply(u, a), u.adjoint());
}

std::vector<double> descending_eigenvalues(const HermitianOperator& a) {
  auto ev = eigenvalues(a);
  std::reverse(ev.begin(), ev.end());
  return ev;
}

HermitianOperator psd_sqrt(const HermitianOperator& a) {
  const double floor = -kZeroThreshold * (1.0 + spectral_norm(a));
  return apply_scalar_function(
      a, [](double x) { return std::sqrt(std::max(x, 0.0)); }, Interval{floor, kInf});
}

HermitianOperator positive_inverse(const HermitianOperator& a) {
  return apply_scalar_function(
      a, [](double x) { return 1.0 / x; }, Interval{std::numeric_limits<double>::min(), kInf});
}

// Largest lambda in (0, hi] with feasible(lambda); 0 when none.
template <class Feasible>
double bisect_largest(double hi, Feasible&& feasible) {
  if (feasible(hi)) return hi;
  double lo = 0.0;
  for (int it = 0; it < 200 && hi - lo > kBisectionRelTol * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (feasible(mid) ? lo : hi) = mid;
  }
  return lo;
}

std::vector<Matrix> anti_hermitian_parts(const Matrix& u) {
  const Complex i(0.0, 1.0);
  return {Matrix(0.5 * (u - u.adjoint())), Matrix((0.5 * i) * (u + u.adjoint()))};
}

}  // namespace

std::uint64_t sub_seed(std::uint64_t master, std::uint64_t index) {
  // splitmix64 finalizer
  std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Matrix random_hermitian(Index dim, double lo, double hi, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix x(dim, dim);
  for (Index j = 0; j < dim; ++j) {
    for (Index i = 0; i < dim; ++i) x(i, j) = Complex(normal(rng), normal(rng));
  }
  const HermitianOperator h = HermitianOperator::symmetrized(0.5 * (x + x.adjoint()));
  const auto ev = eigenvalues(h);
  const double w = hi - lo;
  const double a = lo + 0.01 * w, b = hi - 0.01 * w;
  const double spread = ev.back() - ev.front();
  const double scale = spread > 0.0 ? (b - a) / spread : 0.0;
  Matrix out = scale * h.matrix();
  out.diagonal().array() += a - scale * ev.front();
  return out;
}

// ---------------------------------------------------------------------------

T1Result check_T1(const HermitianOperator& theta, const HermitianOperator& g) {
  if (theta.dim() != g.dim()) throw DimensionMismatch("check_T1: Theta and G differ in size");
  const double nt = spectral_norm(theta), ng = spectral_norm(g);
  auto witness = [&](double lambda) {
    return psd_order_leq(HermitianOperator::symmetrized(lambda * g.matrix()), theta, kOrderTol,
                         lambda * ng, nt);
  };
  T1Result r;
  if (ng == 0.0) {
    r.lambda = kBisectionCeiling;
    r.capped = true;
  } else {
    const double bracket = std::min(kBisectionCeiling, nt / ng);
    r.lambda = bisect_largest(bracket, [&](double l) { return witness(l).holds; });
    r.capped = r.lambda >= kBisectionCeiling;
    // below the bisection resolution the order test only sees rounding slack
    if (r.lambda < kBisectionRelTol * bracket) r.lambda = 0.0;
  }
  if (!(r.lambda > 0.0)) throw VerificationFailure("no lambda > 0 with lambda G <= Theta");
  r.recheck = witness(r.lambda);
  r.pass = r.recheck.holds;
  return r;
}

T2Result sandwich_constant(const HermitianOperator& s, const HermitianOperator& a, const Matrix& u,
                           const std::string& label) {
  const Matrix usu = conjugate_by(u, s.matrix());
  const HermitianOperator conj = HermitianOperator::symmetrized(usu);
  const double ns = spectral_norm(s), na = spectral_norm(a);
  double witness = 0.0;
  auto feasible = [&](double c) {
    const HermitianOperator lower = HermitianOperator::symmetrized(s.matrix() - c * a.matrix());
    const HermitianOperator upper = HermitianOperator::symmetrized(s.matrix() + c * a.matrix());
    const auto w1 = psd_order_leq(lower, conj, kOrderTol, ns + c * na, ns);
    const auto w2 = psd_order_leq(conj, upper, kOrderTol, ns, ns + c * na);
    witness = std::min(w1.min_eigenvalue, w2.min_eigenvalue);
    return w1.holds && w2.holds;
  };
  T2Result r;
  r.label = label;
  if (feasible(0.0)) {
    r.c = 0.0;
    r.finite = true;
  } else {
    double hi = 1.0;
    while (hi < kBisectionCeiling && !feasible(hi)) hi *= 2.0;
    hi = std::min(hi, kBisectionCeiling);
    if (!feasible(hi)) {
      r.finite = false;
      r.c = kBisectionCeiling;
      r.violation = witness;
      return r;
    }
    double lo = hi == 1.0 ? 0.0 : 0.5 * hi;
    for (int it = 0; it < 200 && hi - lo > kBisectionRelTol * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      (feasible(mid) ? hi : lo) = mid;
    }
    r.c = hi;
    r.finite = true;
  }
  r.recheck = feasible(r.c * (1.0 + 1e-6));
  r.violation = witness;
  return r;
}

std::vector<T2Result> check_T2(const HermitianOperator& theta, const FredholmModule& m) {
  if (theta.dim() != m.dim) throw DimensionMismatch("check_T2: Theta does not match the module");
  const HermitianOperator s = psd_sqrt(theta);
  std::vector<T2Result> out;
  for (const auto& g : m.unitaries) out.push_back(sandwich_constant(s, theta, g.matrix, g.label));
  return out;
}

T3Result check_T3(const HermitianOperator& theta, double p, int r) {
  auto mu = descending_eigenvalues(theta);
  for (double& x : mu) x = std::max(x, 0.0);
  T3Result out;
  out.q = chain_exponent(p, r);
  out.target = 0.5 * out.q;
  out.fit = fit_decay(mu, kZeroThreshold * (mu.empty() ? 0.0 : mu.front()));
  out.partial_sum = schatten_sum(mu, out.target, mu.size());
  out.pass = out.fit.implied_order <= out.target;
  return out;
}

ChainResult check_singular_chain(const HermitianOperator& theta, const HermitianOperator& g,
                                 const FredholmModule& m, int ball_radius, double q,
                                 Index h1_dim) {
  if (theta.dim() != g.dim()) throw DimensionMismatch("check_singular_chain: size mismatch");
  auto mu_theta = descending_eigenvalues(theta);
  auto mu_g = descending_eigenvalues(g);
  const auto n = static_cast<std::size_t>(std::min<Index>(h1_dim, theta.dim()));
  const GroupModel model(m.group);
  std::vector<double> weights;
  for (const auto& u : model.ball(ball_radius)) weights.push_back(model.weight(u));
  const int r = m.group.growth_order();

  ChainResult out;
  out.q = q;
  out.terms = static_cast<Index>(n);
  double g_sum = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double th = std::max(mu_theta[k], 0.0);
    const double gk = std::max(mu_g[k], 0.0);
    out.lhs += std::pow(th, q);
    if (gk > 0.0) {
      const double fg = f(gk);
      for (double w : weights) out.rhs += std::pow(f_inv(w * fg), q);
      g_sum += std::pow(gk, q - 0.5 * (r + 1));
    }
  }
  out.allowance = kChainSlack * std::max(out.lhs, out.rhs);
  out.margin = out.rhs + out.allowance - out.lhs;
  out.holds = out.margin >= 0.0;
  out.constant = g_sum > 0.0 ? out.lhs / g_sum : 0.0;
  out.averaged_top = mu_theta.empty() ? 0.0 : f(std::max(mu_theta.front(), 0.0));
  out.concavity_bound = concavity_bound(q);
  out.hypothesis = out.averaged_top <= out.concavity_bound;
  return out;
}

// ---------------------------------------------------------------------------

TrialCounts check_rotfeld(int trials, Index dim, const std::function<double(double)>& phi,
                          Interval spectrum, std::uint64_t seed) {
  TrialCounts c;
  c.worst_margin = kInf;
  const Interval any{-kInf, kInf};
  for (int t = 0; t < trials; ++t) {
    const std::uint64_t s = sub_seed(seed, static_cast<std::uint64_t>(t));
    const Matrix a = random_hermitian(dim, spectrum.lo, spectrum.hi, s);
    const Matrix b = random_hermitian(dim, spectrum.lo, spectrum.hi, sub_seed(s, 1));
    const auto sum = descending_eigenvalues(
        apply_scalar_function(HermitianOperator::symmetrized(a + b), phi, any));
    const auto pa = descending_eigenvalues(apply_scalar_function(HermitianOperator::symmetrized(a), phi, any));
    const auto pb = descending_eigenvalues(apply_scalar_function(HermitianOperator::symmetrized(b), phi, any));
    double lhs = 0.0, rhs = 0.0, margin = kInf;
    for (Index n = 0; n < dim; ++n) {
      lhs += std::abs(sum[n]);
      rhs += std::abs(pa[n]) + std::abs(pb[n]);
      const double slack = kRotfeldSlack * rhs;
      margin = std::min(margin, rhs == 0.0 ? (lhs == 0.0 ? 0.0 : -kInf) : (rhs + slack - lhs) / rhs);
    }
    ++c.trials;
    c.worst_margin = std::min(c.worst_margin, margin);
    if (margin >= 0.0) {
      ++c.passed;
    } else {
      ++c.failed;
      c.failing_seeds.push_back(s);
    }
  }
  if (trials == 0) c.worst_margin = 0.0;
  return c;
}

Complex f_inv_complex(Complex z) {
  const Complex w = std::log((1.0 + std::sqrt(1.0 - z * z)) / z);
  return 1.0 / (w * w);
}

LoewnerResult check_loewner(int trials, Index dim, std::uint64_t seed, int pick_samples) {
  LoewnerResult out;
  TrialCounts& c = out.monotone;
  c.worst_margin = kInf;
  constexpr double delta = 0.01;
  const Interval domain{0.0, 1.0};
  auto finv = [](double x) { return f_inv(x); };
  for (int t = 0; t < trials; ++t) {
    const std::uint64_t s = sub_seed(seed, static_cast<std::uint64_t>(t));
    const Matrix a = random_hermitian(dim, delta, 0.5, s);
    const double top = eigenvalues(HermitianOperator::symmetrized(a)).back();

    std::mt19937_64 rng(sub_seed(s, 1));
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Matrix x(dim, dim);
    for (Index j = 0; j < dim; ++j) {
      for (Index i = 0; i < dim; ++i) x(i, j) = Complex(normal(rng), normal(rng));
    }
    const HermitianOperator w0 = HermitianOperator::symmetrized(x * x.adjoint());
    const double room = (0.95 - top) * unit(rng);
    const Matrix b = a + (room / spectral_norm(w0)) * w0.matrix();

    const HermitianOperator fa = apply_scalar_function(HermitianOperator::symmetrized(a), finv, domain);
    const HermitianOperator fb = apply_scalar_function(HermitianOperator::symmetrized(b), finv, domain);
    const auto w = psd_order_leq(fa, fb, kLoewnerTol);
    const double margin = w.min_eigenvalue - w.threshold;
    ++c.trials;
    c.worst_margin = std::min(c.worst_margin, margin);
    if (w.holds) {
      ++c.passed;
    } else {
      ++c.failed;
      c.failing_seeds.push_back(s);
    }
  }
  if (trials == 0) c.worst_margin = 0.0;

  // Grid on the upper half-plane: 20 real parts in [-1.5, 1.5] times
  // log-spaced imaginary parts in [1e-3, 10].
  const int cols = 20;
  const int rows = std::max(1, (pick_samples + cols - 1) / cols);
  out.min_pick_imag = kInf;
  for (int k = 0; k < pick_samples; ++k) {
    const int i = k % cols, j = k / cols;
    const double re = -1.5 + 3.0 * i / (cols - 1);
    const double im = rows == 1 ? 1.0 : std::pow(10.0, -3.0 + 4.0 * j / (rows - 1));
    out.min_pick_imag = std::min(out.min_pick_imag, f_inv_complex(Complex(re, im)).imag());
    ++out.pick_samples;
  }
  if (pick_samples == 0) out.min_pick_imag = 0.0;
  out.pick_pass = out.min_pick_imag >= -kPickTol;
  return out;
}

LogRatioResult check_log_ratio(std::span<const double> ts) {
  LogRatioResult out;
  for (double t : ts) {
    if (!(t > 0.0 && t <= 0.1)) throw DomainError("asymptotic samples need t in (0, 0.1]", t);
    const double l = std::log(t);
    out.samples.push_back({t, f_inv(t) * l * l});
  }
  out.increasing = true;
  out.below_one = true;
  for (std::size_t i = 0; i < out.samples.size(); ++i) {
    if (out.samples[i].ratio >= 1.0) out.below_one = false;
    if (i > 0 && !(out.samples[i].t < out.samples[i - 1].t &&
                   out.samples[i].ratio > out.samples[i - 1].ratio)) {
      out.increasing = false;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

SandwichPart sandwich_part(const HermitianOperator& d, const HermitianOperator& abs_d_inv,
                     const HermitianOperator& f, const Matrix& x, const std::string& label) {
  SandwichPart part;
  part.label = label;
  const HermitianOperator dx = HermitianOperator::symmetrized(commutator(d.matrix(), x));
  const HermitianOperator fx = HermitianOperator::symmetrized(commutator(f.matrix(), x));
  part.commutator_norm = spectral_norm(dx);
  const Matrix bound = part.commutator_norm * abs_d_inv.matrix();
  const double lo = eigenvalues(HermitianOperator::symmetrized(bound - fx.matrix())).front();
  const double hi = eigenvalues(HermitianOperator::symmetrized(bound + fx.matrix())).front();
  part.sandwich_margin = std::min(lo, hi);

  const auto mu_f = singular_values(fx.matrix());
  const auto mu_inv = descending_eigenvalues(abs_d_inv);
  const double tol = kSandwichTol * (1.0 + part.commutator_norm * (mu_inv.empty() ? 0.0 : mu_inv.front()));
  part.decay_margin = kInf;
  for (std::size_t m = 0; m < mu_f.size(); ++m) {
    part.decay_margin =
        std::min(part.decay_margin, part.commutator_norm * mu_inv[m / 2] - mu_f[m]);
  }
  if (mu_f.empty()) part.decay_margin = 0.0;
  part.decay_holds = part.decay_margin >= -tol;
  return part;
}

SandwichResult check_sandwich(const SpectralTriple& t, const FredholmModule& m, int quadrature_points) {
  if (t.D.dim() != m.dim) throw DimensionMismatch("check_sandwich: triple does not match the module");
  SandwichResult out;
  const HermitianOperator inv = positive_inverse(t.abs_d);
  out.sandwich_margin = kInf;
  bool decay = true;
  for (const auto& g : m.unitaries) {
    const auto xs = anti_hermitian_parts(g.matrix);
    const char* suffix[] = {".re", ".im"};
    for (std::size_t k = 0; k < xs.size(); ++k) {
      out.parts.push_back(sandwich_part(t.D, inv, t.F, xs[k], g.label + suffix[k]));
      out.sandwich_margin = std::min(out.sandwich_margin, out.parts.back().sandwich_margin);
      decay = decay && out.parts.back().decay_holds;
    }
  }
  const HermitianOperator d2 = HermitianOperator::symmetrized(multiply(t.D.matrix(), t.D.matrix()));
  const HermitianOperator quad = inverse_sqrt_by_integral(d2, quadrature_points);
  out.integral_residual =
      spectral_norm(HermitianOperator::symmetrized(quad.matrix() - inv.matrix())) / spectral_norm(inv);
  out.pass = out.sandwich_margin >= -kSandwichTol && out.integral_residual <= kQuadratureTol && decay;
  return out;
}

double unitary_commutator_norm(const HermitianOperator& a, const Matrix& u) {
  return spectral_norm(HermitianOperator::symmetrized(a.matrix() - conjugate_by(u, a.matrix())));
}

AbsDEquivalence check_abs_d_equivalence(const HermitianOperator& t, const FredholmModule& m,
                         const HermitianOperator& g) {
  if (t.dim() != m.dim || g.dim() != m.dim) throw DimensionMismatch("check_abs_d_equivalence: size mismatch");
  AbsDEquivalence out;
  const HermitianOperator inv = positive_inverse(t);
  const HermitianOperator inv2 = HermitianOperator::symmetrized(multiply(inv.matrix(), inv.matrix()));
  bool finite = true;
  for (int k = 0; k < static_cast<int>(m.unitaries.size()); ++k) {
    const auto& gen = m.unitaries[static_cast<std::size_t>(k)];
    out.c_u.push_back(sandwich_constant(inv, inv2, gen.matrix, gen.label));
    finite = finite && out.c_u.back().finite;
    out.t_commutator_norms.push_back(unitary_commutator_norm(t, gen.matrix));
    out.ft_norms.push_back(operator_norm(multiply(interior_commutator(m, k), t.matrix())));
  }
  out.lambda = check_T1(inv2, g).lambda;
  out.holds = finite && out.lambda > 0.0;
  return out;
}

EquivalenceWitness equivalence_synthetic_sweep(const std::function<double(int)>& profile,
                                   std::span<const int> sizes) {
  EquivalenceWitness out;
  for (int n : sizes) {
    const FredholmModule m = build_circle_module(n);
    std::vector<double> diag(static_cast<std::size_t>(m.dim));
    for (Index i = 0; i < m.dim; ++i) diag[i] = profile(std::abs(static_cast<int>(i) - n));
    const HermitianOperator t = HermitianOperator::diagonal(diag);
    const Matrix& u = m.unitaries.front().matrix;
    out.sizes.push_back(n);
    out.t_commutator_norms.push_back(unitary_commutator_norm(t, u));
    out.ft_norms.push_back(operator_norm(multiply(interior_commutator(m, 0), t.matrix())));
    const HermitianOperator inv = positive_inverse(t);
    const HermitianOperator inv2 = HermitianOperator::symmetrized(inv.matrix() * inv.matrix());
    out.c_u.push_back(sandwich_constant(inv, inv2, u, m.unitaries.front().label).c);
  }
  auto growth = [](const std::vector<double>& v) {
    double worst = 0.0;
    for (std::size_t i = 1; i < v.size(); ++i) {
      worst = std::max(worst, v[i - 1] > 0.0 ? v[i] / v[i - 1] : (v[i] > 0.0 ? kInf : 1.0));
    }
    return worst;
  };
  out.max_ratio = std::max(growth(out.t_commutator_norms), growth(out.ft_norms));
  out.bounded = out.max_ratio <= kSweepRatio;
  return out;
}

// ---------------------------------------------------------------------------

SweepResult commutator_norm_sweep(const std::function<FredholmModule(int)>& builder,
                                  std::span<const int> sizes, const LiftConfig& cfg,
                                  double ratio_threshold) {
  if (sizes.size() < 2) throw DomainError("a sweep needs at least two sizes", static_cast<double>(sizes.size()));
  for (std::size_t i = 1; i < sizes.size(); ++i) {
    if (sizes[i] <= sizes[i - 1]) throw DomainError("sweep sizes must ascend", sizes[i]);
  }
  SweepResult out;
  for (int n : sizes) {
    const auto start = std::chrono::steady_clock::now();
    const FredholmModule m = builder(n);
    if (out.labels.empty()) {
      for (const auto& g : m.unitaries) out.labels.push_back(g.label);
    }
    const SpectralTriple t = build_triple(m, cfg);
    const QuantumMetric metric = lift_metric(m, cfg);

    SweepRow row;
    row.size = n;
    row.dim = m.dim;
    row.kernel_dim = t.provenance.kernel_dim;
    for (const auto& g : m.unitaries) row.commutator_norms.push_back(unitary_commutator_norm(t.D, g.matrix));
    row.mu_theta = descending_eigenvalues(t.theta);
    row.mu_g = descending_eigenvalues(metric.G);
    try {
      row.theta_implied_order =
          check_T3(t.theta, t.provenance.resolved.p, m.group.growth_order()).fit.implied_order;
    } catch (const DomainError&) {
      row.theta_implied_order = std::numeric_limits<double>::quiet_NaN();
    }
    row.lambda = check_T1(t.theta, metric.G).lambda;
    for (const auto& c : check_T2(t.theta, m)) row.c_u.push_back(c.c);
    row.sign_residual = spectral_norm(
        HermitianOperator::symmetrized(spectral_sign(t.D).matrix() - t.F.matrix()));
    row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    out.rows.push_back(std::move(row));
  }
  for (std::size_t i = 1; i < out.rows.size(); ++i) {
    for (std::size_t k = 0; k < out.labels.size(); ++k) {
      const double prev = out.rows[i - 1].commutator_norms[k];
      const double cur = out.rows[i].commutator_norms[k];
      const double ratio = prev > 0.0 ? cur / prev : (cur > 0.0 ? kInf : 1.0);
      out.max_ratio = std::max(out.max_ratio, ratio);
    }
  }
  out.bounded = out.max_ratio <= ratio_threshold;
  return out;
}

// ---------------------------------------------------------------------------

bool VerificationReport::passed() const {
  bool ok = sign_residual <= kSignTol && f_abs_d_residual <= kSignTol && d_asymmetry <= kSignTol;
  ok = ok && t1.pass && t1.lambda > 0.0;
  for (const auto& c : t2) ok = ok && c.finite && c.recheck;
  // Outside the concave range the chain is not a theorem; it is reported only.
  ok = ok && t3.pass && (chain.holds || !chain.hypothesis) && sandwich.pass && equivalence.holds;
  ok = ok && rotfeld.failed == 0 && loewner.monotone.failed == 0 && loewner.pick_pass;
  ok = ok && log_ratio.increasing && log_ratio.below_one;
  return ok;
}

VerificationReport verify(const SpectralTriple& t, const FredholmModule& m, const VerifyOptions& opts) {
  if (t.D.dim() != m.dim || t.theta.dim() != m.dim || t.abs_d.dim() != m.dim) {
    throw DimensionMismatch("triple has dimension " + std::to_string(t.D.dim()) +
                            ", module has " + std::to_string(m.dim));
  }
  VerificationReport r;
  r.seed = opts.seed;
  for (const auto& g : m.unitaries) r.labels.push_back(g.label);
  const LiftConfig& cfg = t.provenance.config;
  const QuantumMetric metric = lift_metric(m, cfg);
  r.p_hat = t.provenance.resolved.p;
  r.growth_order = m.group.growth_order();

  r.sign_residual = spectral_norm(HermitianOperator::symmetrized(spectral_sign(t.D).matrix() - t.F.matrix()));
  r.f_abs_d_residual = operator_norm(commutator(t.F.matrix(), t.abs_d.matrix()));
  r.d_asymmetry = hermiticity_residual(t.D.matrix());
  for (const auto& g : m.unitaries) r.commutator_norms.push_back(unitary_commutator_norm(t.D, g.matrix));

  const Index dim0 = t.provenance.kernel_dim;
  const HermitianOperator theta1 =
      dim0 == 0 ? t.theta
                : HermitianOperator::symmetrized(multiply(multiply(t.P1, t.theta.matrix()), t.P1));
  r.t1 = check_T1(theta1, metric.G);
  r.t2 = check_T2(t.theta, m);
  r.t3 = check_T3(t.theta, r.p_hat, r.growth_order);
  r.chain = check_singular_chain(theta1, metric.G, m, t.provenance.resolved.ball_radius, r.t3.q,
                                 m.dim - dim0);
  r.sandwich = check_sandwich(t, m, opts.quadrature_points);
  r.equivalence = check_abs_d_equivalence(t.abs_d, m, metric.G);
  r.rotfeld = check_rotfeld(
      opts.rotfeld_trials, opts.rotfeld_dim, [](double x) { return f_inv(x); },
      Interval{0.0, 0.5 * kFInvInflection}, opts.seed);
  r.loewner = check_loewner(opts.loewner_trials, opts.loewner_dim, sub_seed(opts.seed, 0x10e), opts.pick_samples);
  const double ts[] = {1e-3, 1e-6, 1e-9, 1e-12};
  r.log_ratio = check_log_ratio(ts);
  return r;
}

}  // namespace spectral_lift

#include "spectral_lift/lift_engine.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "spectral_lift/errors.hpp"
#include "spectral_lift/interchange.hpp"

namespace spectral_lift {
namespace {

double max_abs(const Matrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

std::vector<double> diagonal_of(const Matrix& m) {
  std::vector<double> d(static_cast<std::size_t>(m.rows()));
  for (Index i = 0; i < m.rows(); ++i) d[i] = m(i, i).real();
  return d;
}

// Group Z acting by diagonal phases: commutes with every diagonal operator.
FredholmModule phase_module(Index n) {
  FredholmModule m;
  m.dim = n;
  m.F = HermitianOperator::identity(n);
  Matrix u = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) u(i, i) = std::polar(1.0, 0.7 * (i + 1));
  m.unitaries.push_back({"u1", u});
  return m;
}

QuantumMetric metric_of(HermitianOperator g) {
  QuantumMetric q;
  q.G = std::move(g);
  return q;
}

TEST(ScalarPair, Examples) {
  EXPECT_EQ(f(0.0), 0.0);
  EXPECT_EQ(f_inv(0.0), 0.0);
  EXPECT_NEAR(f_inv(1.0 / std::cosh(2.0)), 0.25, 1e-14);
  EXPECT_NEAR(f_inv(0.2658022), 0.25, 1e-6);
  EXPECT_NEAR(f(1.0), 1.0 / std::cosh(1.0), 1e-15);
  EXPECT_NEAR(f(1.0), 0.6480543, 1e-7);
  EXPECT_NEAR(f_inv(0.6480543), 1.0, 1e-6);
  EXPECT_THROW(f_inv(1.0), DomainError);
  EXPECT_THROW(f_inv(-0.1), DomainError);
  EXPECT_THROW(f(-1.0), DomainError);
}

TEST(ScalarPair, MatchesCoshOracle) {
  for (double s : {1e-3, 0.05, 0.3, 1.0, 4.0, 50.0}) EXPECT_NEAR(f(s), oracle::f(s), 1e-14 * (1 + oracle::f(s)));
  for (double t : {1e-6, 0.01, 0.2, 0.5, 0.9}) EXPECT_NEAR(f_inv(t), oracle::f_inv(t), 1e-12 * oracle::f_inv(t));
}

TEST(ScalarPair, StableNearEndpoints) {
  // near 0: f_inv(t) ~ 1/log(2/t)^2
  for (double t : {1e-300, 1e-200, 1e-50}) {
    const double expect = 1.0 / std::pow(std::log(2.0 / t), 2);
    EXPECT_NEAR(f_inv(t), expect, 1e-10 * expect);
  }
  EXPECT_GE(f(1e-6), 0.0);
  EXPECT_EQ(f(1e-6), 0.0);  // e^{-1000} underflows cleanly, no NaN
  // near 1: 1 - t = d gives arcosh(1/t) ~ sqrt(2d)
  for (double d : {1e-8, 1e-12}) {
    const double v = f_inv(1.0 - d);
    EXPECT_TRUE(std::isfinite(v));
    EXPECT_NEAR(v, 1.0 / (2.0 * d), 1e-3 / (2.0 * d));
  }
  EXPECT_NEAR(f(1e12), 1.0 - 0.5e-12, 1e-15);
}

TEST(ScalarPair, RoundTrip) {
  for (int i = 1; i < 200; ++i) {
    const double t = i / 200.0 * 0.999;
    EXPECT_NEAR(f(f_inv(t)), t, 1e-12);
  }
}

TEST(QuantumMetric, CircleRankOne) {
  const int n = 8;
  const auto m = build_circle_module(n);
  const auto q = quantum_metric(m, LiftConfig{});
  ASSERT_EQ(q.coefficients.size(), 1u);
  EXPECT_DOUBLE_EQ(q.coefficients[0], 0.125);
  EXPECT_DOUBLE_EQ(q.commutator_norms[0], 2.0);
  EXPECT_DOUBLE_EQ(q.scale, 1.0);
  // [F,u]*[F,u] = 4 (P_{-1} + P_N): the interior mode and the wrap mode
  Matrix g = Matrix::Zero(m.dim, m.dim);
  g(n - 1, n - 1) = g(2 * n, 2 * n) = 0.5;
  EXPECT_LE(max_abs(q.G.matrix() - g), 1e-15);
}

TEST(QuantumMetric, ZeroGeneratorDropsOut) {
  const auto c = build_circle_module(6);
  FredholmModule m = c;
  m.group = GroupSpec::free_abelian(2);
  m.unitaries.push_back({"u2", Matrix::Identity(m.dim, m.dim)});
  LiftConfig cfg;
  cfg.p = 1.0;
  const auto q2 = quantum_metric(m, cfg);
  const auto q1 = quantum_metric(c, cfg);
  EXPECT_EQ(q2.coefficients[1], 0.0);
  EXPECT_DOUBLE_EQ(q2.coefficients[0], q1.coefficients[0]);
  EXPECT_LE(max_abs(q2.G.matrix() - q1.G.matrix() * (q2.scale / q1.scale)), 1e-15);
}

TEST(QuantumMetric, DegenerateThrows) {
  auto m = build_circle_module(4);
  m.F = HermitianOperator::identity(m.dim);
  EXPECT_THROW(quantum_metric(m, LiftConfig{}), DegenerateModule);
  EXPECT_EQ(max_abs(lift_metric(m, LiftConfig{}).G.matrix()), 0.0);
}

TEST(QuantumMetric, ScaleRespectsGuards) {
  for (const auto& m : {build_circle_module(10), build_torus_module(2, 4)}) {
    for (double margin : {0.1, 0.5}) {
      LiftConfig cfg;
      cfg.scale_margin = margin;
      const auto res = resolve(m, cfg);
      const auto q = quantum_metric(m, cfg);
      const double norm = spectral_norm(q.G);
      EXPECT_LE(norm, cfg.epsilon_guard * (1 - margin) * (1 + 1e-12));
      EXPECT_LE((res.weight_sum + res.tail_bound) * f(norm), 1 - margin + 1e-12);
      EXPECT_GT(q.scale, 0.0);
      EXPECT_LE(q.scale, 1.0);
    }
  }
}

TEST(AdmissibleScale, Cases) {
  LiftConfig cfg;
  EXPECT_EQ(admissible_scale(0.0, 1.0, cfg), 1.0);
  EXPECT_EQ(admissible_scale(0.1, 0.5, cfg), 1.0);
  const double s = admissible_scale(100.0, 0.99, cfg);
  EXPECT_LE(100.0 * s, 0.81 + 1e-12);
  const double c = admissible_scale(0.5, 0.8, cfg, 0.01);
  EXPECT_LE(0.8 * f(0.5 * c), 0.01 * (1 + 1e-9));
  EXPECT_GT(0.8 * f(0.5 * c), 0.01 * (1 - 1e-6));
}

TEST(Average, IdentityAndZero) {
  const auto m = build_torus_module(2, 3);
  const GroupModel model(m.group);
  const auto one = average(HermitianOperator::identity(m.dim), m, 4);
  EXPECT_LE(max_abs(one.value.matrix() - model.ball_weight(4) * Matrix::Identity(m.dim, m.dim)), 1e-14);
  EXPECT_GT(one.tail_bound, 0.0);
  EXPECT_EQ(max_abs(average(HermitianOperator::zero(m.dim), m, 4).value.matrix()), 0.0);
}

TEST(Average, CircleClosedForm) {
  const int n = 10, k = 5;
  const auto m = build_circle_module(n);
  std::vector<double> d(static_cast<std::size_t>(m.dim), 0.0);
  d[n - 1] = oracle::f(0.5);
  const auto avg = average(HermitianOperator::diagonal(d), m, k);
  for (Index i = 0; i < m.dim; ++i) {
    const int mode = static_cast<int>(i) - n;
    const double expect =
        std::abs(mode + 1) <= k ? std::exp(-(1.0 + std::abs(mode + 1))) * oracle::f(0.5) : 0.0;
    EXPECT_NEAR(avg.value.matrix()(i, i).real(), expect, 1e-15) << mode;
  }
  Matrix off = avg.value.matrix();
  off.diagonal().setZero();
  EXPECT_EQ(max_abs(off), 0.0);
}

TEST(Average, DensePathMatchesMonomial) {
  const auto m = build_circle_module(5);
  FredholmModule dense = m;
  // a unitary change of basis hides the monomial structure
  Matrix w = Matrix::Identity(m.dim, m.dim);
  const double c = std::cos(0.3), s = std::sin(0.3);
  w(0, 0) = c, w(0, 1) = -s, w(1, 0) = s, w(1, 1) = c;
  dense.unitaries[0].matrix = w * m.unitaries[0].matrix * w.adjoint();
  ASSERT_FALSE(MonomialMatrix::detect(dense.unitaries[0].matrix));
  std::mt19937_64 rng(9);
  std::normal_distribution<double> g;
  Matrix t(m.dim, m.dim);
  for (Index i = 0; i < m.dim; ++i)
    for (Index j = 0; j < m.dim; ++j) t(i, j) = Complex(g(rng), g(rng));
  const auto h = HermitianOperator::symmetrized(t);
  const auto direct = average(h, m, 3).value.matrix();
  const auto via = average(HermitianOperator::symmetrized(w * h.matrix() * w.adjoint()), dense, 3).value.matrix();
  EXPECT_LE(max_abs(w.adjoint() * via * w - direct), 1e-12);
}

TEST(KernelSplit, CircleHasNoKernel) {
  const auto m = build_circle_module(8);
  const auto split = kernel_split(m, quantum_metric(m, LiftConfig{}), LiftConfig{});
  EXPECT_EQ(split.dim0, 0);
  EXPECT_EQ(max_abs(split.P0), 0.0);
  for (double x : oracle::circle_averaged(8, 12)) EXPECT_GT(x, 0.0);
}

TEST(KernelSplit, InertBlockIsKernel) {
  const auto m = fixture::circle_with_inert_block(6, 2);
  const auto split = kernel_split(m, quantum_metric(m, LiftConfig{}), LiftConfig{});
  ASSERT_EQ(split.dim0, 2);
  Matrix p0 = Matrix::Zero(m.dim, m.dim);
  p0(m.dim - 2, m.dim - 2) = p0(m.dim - 1, m.dim - 1) = 1.0;
  EXPECT_LE(max_abs(split.P0 - p0), 1e-12);
  EXPECT_TRUE(split.consistent);
}

TEST(KernelSplit, PositiveMetricHasNoKernel) {
  const auto m = phase_module(5);
  LiftConfig cfg;
  cfg.p = 2.0;
  const auto split = kernel_split(m, metric_of(HermitianOperator::diagonal(std::vector<double>{0.1, 0.2, 0.3, 0.4, 0.5})), cfg);
  EXPECT_EQ(split.dim0, 0);
}

TEST(Theta, CircleMatchesClosedForm) {
  const int n = 16;
  const auto m = build_circle_module(n);
  const auto th = diagonal_of(theta(quantum_metric(m, LiftConfig{}), m, LiftConfig{}).matrix());
  const auto expect = oracle::circle_theta(n, std::max(12, n));
  for (std::size_t i = 0; i < th.size(); ++i) EXPECT_NEAR(th[i], expect[i], 1e-8 * expect[i]) << i;
  // the quoted scalar chain at e_{-1}
  EXPECT_NEAR(th[n - 1], 0.1646490, 1e-5);
}

TEST(Theta, CommutingCaseCollapses) {
  const auto m = fixture::cyclic_module(6);
  LiftConfig cfg;
  cfg.p = 2.0;
  cfg.ball_radius = 3;
  const double rho = std::exp(-1.0) + 2 * std::exp(-2.0) + 2 * std::exp(-3.0) + std::exp(-4.0);
  const auto th = theta(metric_of(HermitianOperator::diagonal(std::vector<double>(6, 0.3))), m, cfg);
  EXPECT_LE(max_abs(th.matrix() - oracle::f_inv(rho * oracle::f(0.3)) * Matrix::Identity(6, 6)), 1e-12);

  const std::vector<double> g{0.05, 0.1, 0.2, 0.4, 0.6};
  const auto pm = phase_module(5);
  const GroupModel model(pm.group);
  const double w = model.ball_weight(3);
  const auto tp = diagonal_of(theta(metric_of(HermitianOperator::diagonal(g)), pm, cfg).matrix());
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_NEAR(tp[i], oracle::f_inv(w * oracle::f(g[i])), 1e-12);
}

TEST(Theta, DomainBreachThrows) {
  const auto m = build_circle_module(4);
  LiftConfig cfg;
  cfg.scale_margin = 0.5;
  EXPECT_THROW(theta(metric_of(HermitianOperator::diagonal(std::vector<double>(9, 50.0))), m, cfg),
               DomainError);
}

TEST(G0, Examples) {
  LiftConfig cfg;
  EXPECT_EQ(g0_default(1, cfg).matrix()(0, 0), Complex(1.0));
  cfg.g0_exponent = 2.0;
  const auto d = diagonal_of(g0_default(3, cfg).matrix());
  EXPECT_DOUBLE_EQ(d[0], 1.0);
  EXPECT_DOUBLE_EQ(d[1], 0.25);
  EXPECT_DOUBLE_EQ(d[2], 1.0 / 9.0);
  LiftConfig two;
  two.p = 2.0;
  const auto e = diagonal_of(g0_default(4, two).matrix());
  for (std::size_t i = 0; i < 4; ++i) EXPECT_DOUBLE_EQ(e[i], std::pow(i + 1.0, -3.0));
  EXPECT_THROW(g0_default(0, cfg), DomainError);
}

TEST(Triple, CircleAbsDMatchesClosedForm) {
  const int n = 16;
  const auto t = build_triple(build_circle_module(n), LiftConfig{});
  const auto d = diagonal_of(t.abs_d.matrix());
  const auto expect = oracle::circle_abs_d(n, std::max(12, n));
  for (std::size_t i = 0; i < d.size(); ++i) EXPECT_NEAR(d[i], expect[i], 1e-8 * expect[i]);
  EXPECT_NEAR(d[n - 1], 4.9288980, 1e-4);
}

TEST(Triple, CircleAbsDGrowsLinearly) {
  // 2 (1 + |m+1| + log(2/f(g1))) once the wrap source is far away
  const int n = 40;
  const auto d = diagonal_of(build_triple(build_circle_module(n), LiftConfig{}).abs_d.matrix());
  for (int mode : {-15, -10, 8, 12}) {
    EXPECT_NEAR(d[static_cast<std::size_t>(mode + n)],
                2.0 * (1 + std::abs(mode + 1) + std::log(2.0 / oracle::f(0.5))), 1e-3)
        << mode;
  }
}

TEST(Triple, InertBlockUsesG0) {
  const auto m = fixture::circle_with_inert_block(6, 3);
  const auto t = build_triple(m, LiftConfig{});
  EXPECT_EQ(t.provenance.kernel_dim, 3);
  EXPECT_LE(t.provenance.block_leakage, 1e-12);
  const Matrix p0 = t.P0;
  const Matrix th0 = p0 * t.theta.matrix() * p0;
  EXPECT_GT(eigenvalues(HermitianOperator::symmetrized(th0)).back(), 0.0);
}

class TripleInvariants : public ::testing::TestWithParam<int> {};

FredholmModule invariant_case(int which) {
  switch (which) {
    case 0: return build_circle_module(12);
    case 1: return build_torus_module(2, 4);
    case 2: return fixture::circle_with_inert_block(5, 2);
    default: {
      auto m = build_circle_module(5);
      m.F = HermitianOperator::identity(m.dim);
      return m;
    }
  }
}

TEST_P(TripleInvariants, Structure) {
  const auto m = invariant_case(GetParam());
  const auto t = build_triple(m, LiftConfig{});
  const Matrix& f = t.F.matrix();
  const Matrix& a = t.abs_d.matrix();
  const double scale = 1.0 + max_abs(a);
  EXPECT_LE(max_abs(commutator(f, a)), 1e-8 * scale);
  EXPECT_LE(max_abs(t.D.matrix() - f * a), 1e-8 * scale);
  EXPECT_LE(hermiticity_residual(t.D.matrix()), 1e-8 * scale);
  EXPECT_LE(max_abs(spectral_sign(t.D).matrix() - f), 1e-8);
  EXPECT_GT(eigenvalues(t.abs_d).front(), 0.0);
  const Index n = m.dim;
  EXPECT_LE(max_abs(t.P0 + t.P1 - Matrix::Identity(n, n)), 1e-12);
  EXPECT_LE(max_abs(t.P0 * t.P1), 1e-12);
  EXPECT_LE(max_abs(t.P0 * t.P0 - t.P0), 1e-12);
}

INSTANTIATE_TEST_SUITE_P(Modules, TripleInvariants, ::testing::Values(0, 1, 2, 3));

TEST(LiftProperties, ThetaMonotoneOnCommutingFamily) {
  const auto m = phase_module(6);
  LiftConfig cfg;
  cfg.p = 2.0;
  cfg.ball_radius = 4;
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.0, 0.8);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> a(6), b(6);
    for (std::size_t i = 0; i < 6; ++i) {
      a[i] = u(rng);
      b[i] = a[i] + 0.1 * u(rng);
    }
    const auto ta = theta(metric_of(HermitianOperator::diagonal(a)), m, cfg);
    const auto tb = theta(metric_of(HermitianOperator::diagonal(b)), m, cfg);
    EXPECT_TRUE(psd_order_leq(ta, tb, 1e-12).holds);
  }
}

TEST(Concavity, InflectionPoints) {
  EXPECT_NEAR(concavity_bound(1.0), 0.09530004409079099, 1e-12);
  // second difference of the oracle (f^-1)^q changes sign at t_q
  for (double q : {1.0, 2.0, 3.5}) {
    const double t = concavity_bound(q);
    auto g = [q](double x) { return std::pow(oracle::f_inv(x), q); };
    auto second = [&](double x) {
      const double h = 1e-3 * x;
      return g(x + h) - 2 * g(x) + g(x - h);
    };
    EXPECT_LT(second(0.9 * t), 0.0) << q;
    EXPECT_GT(second(1.1 * t), 0.0) << q;
  }
  EXPECT_NEAR(concavity_bound(2.0), 0.01346, 1e-4);
  EXPECT_GT(concavity_bound(2.0), concavity_bound(3.0));
  EXPECT_DOUBLE_EQ(chain_exponent(2.0, 2), 5.5);
}

TEST(Interchange, ConfigAndTripleRoundTrip) {
  LiftConfig cfg;
  cfg.p = 1.5;
  cfg.ball_radius = 9;
  cfg.mode = SummabilityMode::weak;
  cfg.concave_range = true;
  const auto back = lift_config_from_json(to_json(cfg));
  EXPECT_EQ(back.p, cfg.p);
  EXPECT_EQ(back.ball_radius, cfg.ball_radius);
  EXPECT_EQ(back.mode, cfg.mode);
  EXPECT_EQ(back.concave_range, true);
  EXPECT_EQ(back.g0_exponent, std::nullopt);

  const auto t = build_triple(fixture::circle_with_inert_block(4, 2), LiftConfig{});
  const auto path = fixture::scratch("triple.json");
  write_json(path, triple_to_json(t));
  const auto r = triple_from_json(read_json(path));
  EXPECT_LE(max_abs(r.D.matrix() - t.D.matrix()), 1e-12);
  EXPECT_LE(max_abs(r.abs_d.matrix() - t.abs_d.matrix()), 1e-12);
  EXPECT_LE(max_abs(r.P0 - t.P0), 1e-12);
  EXPECT_LE(max_abs(r.theta.matrix() - t.theta.matrix()), 1e-12);
  EXPECT_EQ(r.provenance.kernel_dim, 2);
  EXPECT_DOUBLE_EQ(r.provenance.sigma, t.provenance.sigma);
}

}  // namespace
}  // namespace spectral_lift

#include "spectral_lift/operator_core.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "oracles.hpp"
#include "spectral_lift/errors.hpp"
#include "spectral_lift/module_factory.hpp"

namespace spectral_lift {
namespace {

Matrix diag(std::initializer_list<double> v) {
  Matrix m = Matrix::Zero(static_cast<Index>(v.size()), static_cast<Index>(v.size()));
  Index i = 0;
  for (double x : v) m(i, i) = x, ++i;
  return m;
}

Matrix random_unitary(Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Matrix a(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) a(i, j) = Complex(g(rng), g(rng));
  Eigen::HouseholderQR<Matrix> qr(a);
  return qr.householderQ() * Matrix::Identity(n, n);
}

HermitianOperator random_hermitian_in(Index n, double lo, double hi, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(lo, hi);
  Matrix d = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) d(i, i) = u(rng);
  const Matrix v = random_unitary(n, rng);
  return HermitianOperator::symmetrized(v * d * v.adjoint());
}

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

TEST(Hermitian, RejectsAsymmetricInput) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 1) = 1.0;
  EXPECT_THROW(HermitianOperator{m}, DomainError);
  const auto s = HermitianOperator::symmetrized(m);
  EXPECT_DOUBLE_EQ(s.asymmetry(), 1.0);
  EXPECT_EQ(s.matrix()(1, 0), Complex(0.5, 0));
}

TEST(Commutator, Examples) {
  std::mt19937_64 rng(1);
  const Matrix b = random_unitary(4, rng);
  EXPECT_EQ(max_abs(commutator(Matrix::Identity(4, 4), b)), 0.0);
  EXPECT_EQ(max_abs(commutator(b, b)), 0.0);

  const Matrix a = diag({1, -1});
  Matrix off = Matrix::Zero(2, 2);
  off(0, 1) = off(1, 0) = 1;
  Matrix expect(2, 2);
  expect << 0, 2, -2, 0;
  EXPECT_EQ(commutator(a, off), expect);
  EXPECT_THROW(commutator(a, Matrix::Identity(3, 3)), DimensionMismatch);
}

TEST(Multiply, SparsePathMatchesDense) {
  std::mt19937_64 rng(2);
  const Matrix u = random_unitary(12, rng);
  Matrix s = Matrix::Zero(12, 12);
  s(3, 4) = Complex(1, 2);
  s(7, 0) = -0.5;
  EXPECT_LE(max_abs(multiply(s, u) - s * u), 1e-14);
  EXPECT_LE(max_abs(multiply(u, s) - u * s), 1e-14);
  EXPECT_LE(max_abs(multiply(u, u.adjoint()) - u * u.adjoint()), 1e-12);
}

TEST(Monomial, DetectComposeConjugate) {
  const auto m = build_circle_module(3);
  const Matrix& u = m.unitaries[0].matrix;
  const auto mono = MonomialMatrix::detect(u);
  ASSERT_TRUE(mono);
  EXPECT_EQ(mono->dense(), u);
  EXPECT_EQ(mono->adjoint().dense(), Matrix(u.adjoint()));
  EXPECT_EQ(mono->compose(*mono).dense(), Matrix(u * u));
  std::mt19937_64 rng(3);
  const Matrix t = random_unitary(7, rng);
  EXPECT_LE(max_abs(mono->conjugate(t) - u * t * u.adjoint()), 1e-15);
  EXPECT_FALSE(MonomialMatrix::detect(t));
  EXPECT_FALSE(MonomialMatrix::detect(Matrix::Zero(3, 3)));
}

TEST(Components, SplitsBlockDiagonal) {
  Matrix m = Matrix::Zero(5, 5);
  m(0, 3) = 1;
  m(1, 1) = 2;
  m(4, 2) = 1;
  const auto c = coupled_components(m);
  ASSERT_EQ(c.size(), 3u);
  EXPECT_EQ(c[0], (std::vector<Index>{0, 3}));
  EXPECT_EQ(c[1], (std::vector<Index>{1}));
  EXPECT_EQ(c[2], (std::vector<Index>{2, 4}));
}

TEST(Decompose, ReconstructsAndIsUnitary) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 5; ++trial) {
    const auto a = random_hermitian_in(10, -3, 3, rng);
    const auto d = decompose(a);
    EXPECT_TRUE(std::is_sorted(d.eigenvalues.begin(), d.eigenvalues.end()));
    Eigen::VectorXd lam = Eigen::Map<const Eigen::VectorXd>(d.eigenvalues.data(), 10);
    const Matrix rec = d.eigenvectors * lam.cast<Complex>().asDiagonal() * d.eigenvectors.adjoint();
    EXPECT_LE(max_abs(rec - a.matrix()), 1e-12 * spectral_norm(a));
    EXPECT_LE(max_abs(d.eigenvectors.adjoint() * d.eigenvectors - Matrix::Identity(10, 10)), 1e-12);
  }
}

TEST(SingularValues, Examples) {
  for (double s : singular_values(Matrix::Zero(6, 6))) EXPECT_EQ(s, 0.0);
  std::mt19937_64 rng(5);
  for (double s : singular_values(random_unitary(6, rng))) EXPECT_NEAR(s, 1.0, 1e-13);

  const auto m = build_circle_module(8);
  const Matrix c = interior_commutator(m, 0);
  // explicit oracle: only e_{-1} -> 2 e_0 survives the mask
  Matrix expect = Matrix::Zero(m.dim, m.dim);
  expect(8, 7) = 2.0;
  EXPECT_EQ(c, expect);
  const auto sv = singular_values(c);
  ASSERT_EQ(sv.size(), static_cast<std::size_t>(m.dim));
  EXPECT_NEAR(sv[0], 2.0, 1e-14);
  for (std::size_t i = 1; i < sv.size(); ++i) EXPECT_LE(sv[i], 1e-14);
}

TEST(Schatten, Examples) {
  EXPECT_DOUBLE_EQ(schatten_sum(diag({1, 0.5, 0.25}), 1.0, 3), 1.75);
  EXPECT_NEAR(schatten_sum(Matrix::Identity(5, 5), 2.0, 5), 5.0, 1e-12);
  const auto m = build_circle_module(6);
  const Matrix c = interior_commutator(m, 0);
  for (double p : {0.5, 1.0, 2.5}) EXPECT_NEAR(schatten_sum(c, p, m.dim), std::pow(2.0, p), 1e-12);
  EXPECT_THROW(schatten_sum(c, 0.0, 3), DomainError);
  EXPECT_THROW(schatten_sum(c, -1.0, 3), DomainError);
}

TEST(WeakSchatten, Examples) {
  std::vector<double> s(100);
  for (std::size_t m = 0; m < s.size(); ++m) s[m] = 1.0 / std::sqrt(m + 1.0);
  EXPECT_NEAR(weak_schatten_stat(s, 2.0), 1.0, 1e-14);
  EXPECT_EQ(weak_schatten_stat(Matrix::Zero(4, 4), 1.0), 0.0);
  Matrix h = Matrix::Zero(50, 50);
  double scan = 0.0;
  for (Index m = 0; m < 50; ++m) {
    h(m, m) = 1.0 / (m + 1.0);
    scan = std::max(scan, (m + 1.0) * (1.0 / (m + 1.0)));
  }
  EXPECT_NEAR(weak_schatten_stat(h, 1.0), scan, 1e-12);
  EXPECT_THROW(weak_schatten_stat(s, 0.0), DomainError);
}

TEST(FitDecay, Examples) {
  std::vector<double> a(200), b(200), c(200, 0.7);
  for (std::size_t m = 0; m < 200; ++m) {
    a[m] = 1.0 / (m + 1.0);
    b[m] = 1.0 / std::sqrt(m + 1.0);
  }
  const auto fa = fit_decay(a, 1e-12);
  EXPECT_GE(fa.fitted_alpha, 0.95);
  EXPECT_LE(fa.fitted_alpha, 1.05);
  const auto fb = fit_decay(b, 1e-12);
  EXPECT_GE(fb.implied_order, 1.9);
  EXPECT_LE(fb.implied_order, 2.1);
  const auto fc = fit_decay(c, 1e-12);
  EXPECT_GE(fc.fitted_alpha, -0.05);
  EXPECT_LE(fc.fitted_alpha, 0.05);
}

TEST(FitDecay, WindowAndZeroThreshold) {
  std::vector<double> v(100, 0.0);
  for (std::size_t m = 0; m < 60; ++m) v[m] = std::pow(m + 1.0, -1.5);
  const auto fit = fit_decay(v, 1e-10);
  EXPECT_EQ(fit.effective_count, 60u);
  EXPECT_EQ(fit.window_lo, 6u);
  EXPECT_EQ(fit.window_hi, 48u);
  EXPECT_NEAR(fit.fitted_alpha, 1.5, 1e-10);
  EXPECT_NEAR(fit.r_squared, 1.0, 1e-12);
  EXPECT_THROW(fit_decay(std::vector<double>{1, 0.5, 0.2, 0, 0}, 1e-10), DomainError);
}

TEST(ScalarFunction, Examples) {
  std::mt19937_64 rng(6);
  const auto a = random_hermitian_in(8, -1, 1, rng);
  const auto id = apply_scalar_function(a, [](double x) { return x; }, {-2, 2});
  EXPECT_LE(max_abs(id.matrix() - a.matrix()), 1e-12);

  const auto q = HermitianOperator::diagonal(std::vector<double>{0.25, 0.25, 0.25});
  const auto r = apply_scalar_function(q, [](double x) { return std::sqrt(x); }, {0, 1});
  EXPECT_LE(max_abs(r.matrix() - 0.5 * Matrix::Identity(3, 3)), 1e-14);

  Eigen::VectorXcd v(4);
  v << 1, Complex(0, 1), -1, 2;
  v.normalize();
  const Matrix proj = v * v.adjoint();
  const auto pf = apply_scalar_function(HermitianOperator::symmetrized(0.5 * proj),
                                        [](double s) { return oracle::f(s); }, {0, 1});
  EXPECT_NEAR(oracle::f(0.5), 0.4590954, 5e-6);
  EXPECT_LE(max_abs(pf.matrix() - oracle::f(0.5) * proj), 1e-12);
}

TEST(ScalarFunction, GuardReportsEigenvalue) {
  const auto a = HermitianOperator::diagonal(std::vector<double>{0.1, -0.4});
  try {
    apply_scalar_function(a, [](double x) { return std::sqrt(x); }, {0, 1});
    FAIL();
  } catch (const DomainError& e) {
    EXPECT_DOUBLE_EQ(e.value(), -0.4);
  }
}

TEST(InverseSqrt, Examples) {
  const auto i = inverse_sqrt_by_integral(HermitianOperator::identity(5), 200);
  EXPECT_LE(max_abs(i.matrix() - Matrix::Identity(5, 5)), 1e-6);
  const auto four = inverse_sqrt_by_integral(HermitianOperator::diagonal(std::vector<double>{4, 4}), 200);
  EXPECT_LE(max_abs(four.matrix() - 0.5 * Matrix::Identity(2, 2)), 1e-6);
  std::mt19937_64 rng(7);
  const auto t = random_hermitian_in(8, 0.5, 4, rng);
  const auto spec = apply_scalar_function(t, [](double x) { return 1.0 / std::sqrt(x); }, {1e-300, 1e300});
  EXPECT_LE(max_abs(inverse_sqrt_by_integral(t, 200).matrix() - spec.matrix()), 1e-6);
  EXPECT_THROW(inverse_sqrt_by_integral(HermitianOperator::diagonal(std::vector<double>{1, -1}), 50), DomainError);
}

TEST(PsdOrder, Examples) {
  const auto z = HermitianOperator::zero(3), one = HermitianOperator::identity(3);
  EXPECT_TRUE(psd_order_leq(z, one, 1e-12).holds);
  const auto w = psd_order_leq(one, z, 1e-12);
  EXPECT_FALSE(w.holds);
  EXPECT_NEAR(w.min_eigenvalue, -1.0, 1e-14);

  // circle metric against its lift, lambda = 0.3, closed-form diagonals
  const int n = 8;
  const auto theta = oracle::circle_theta(n, std::max(12, n));
  std::vector<double> g(theta.size(), 0.0);
  g[static_cast<std::size_t>(n - 1)] = g[static_cast<std::size_t>(2 * n)] = 0.5;
  std::vector<double> scaled(theta);
  for (double& x : scaled) x /= 0.3;
  EXPECT_TRUE(psd_order_leq(HermitianOperator::diagonal(g), HermitianOperator::diagonal(scaled), 1e-12).holds);
}

TEST(Sign, ZeroMapsToPlusOne) {
  const auto s = spectral_sign(HermitianOperator::diagonal(std::vector<double>{-2, 0, 3}));
  EXPECT_EQ(s.matrix(), diag({-1, 1, 1}));
}

// ---------------------------------------------------------------------------
// Properties

TEST(OperatorProperties, SingularValuesUnitarilyInvariant) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 10; ++trial) {
    Matrix t(9, 9);
    for (Index i = 0; i < 9; ++i)
      for (Index j = 0; j < 9; ++j) t(i, j) = Complex(g(rng), g(rng));
    const auto a = singular_values(t);
    const auto b = singular_values(random_unitary(9, rng) * t * random_unitary(9, rng));
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], b[i], 1e-10);
  }
}

TEST(OperatorProperties, FunctionalCalculusComposes) {
  std::mt19937_64 rng(12);
  const auto phi = [](double x) { return std::exp(-x); };
  const auto psi = [](double x) { return x * x + 0.5; };
  for (int trial = 0; trial < 10; ++trial) {
    const auto a = random_hermitian_in(8, -1, 1, rng);
    const auto once = apply_scalar_function(a, [&](double x) { return phi(psi(x)); }, {-2, 2});
    const auto twice = apply_scalar_function(apply_scalar_function(a, psi, {-2, 2}), phi, {0, 3});
    EXPECT_LE(max_abs(once.matrix() - twice.matrix()), 1e-8);
  }
}

TEST(OperatorProperties, QuadratureConvergesMonotonically) {
  std::mt19937_64 rng(13);
  std::vector<double> spread(8);
  for (std::size_t i = 0; i < 8; ++i) spread[i] = std::pow(10.0, -4.0 + i);
  const Matrix v = random_unitary(8, rng);
  const auto t = HermitianOperator::symmetrized(
      v * HermitianOperator::diagonal(spread).matrix() * v.adjoint());
  const auto spec = apply_scalar_function(t, [](double x) { return 1.0 / std::sqrt(x); }, {1e-300, 1e300});
  double prev = std::numeric_limits<double>::infinity();
  for (int pts : {50, 100, 200, 400}) {
    const double err = max_abs(inverse_sqrt_by_integral(t, pts).matrix() - spec.matrix());
    EXPECT_LT(err, prev) << pts;
    EXPECT_GT(err, 1e-12) << "spectrum too easy to show convergence";
    prev = err;
  }
}

TEST(OperatorProperties, OrderReflexiveAndAntisymmetric) {
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = random_hermitian_in(6, -1, 1, rng);
    const auto b = random_hermitian_in(6, -1, 1, rng);
    EXPECT_TRUE(psd_order_leq(a, a, 1e-12).holds);
    if (psd_order_leq(a, b, 1e-12).holds && psd_order_leq(b, a, 1e-12).holds) {
      EXPECT_LE(max_abs(a.matrix() - b.matrix()), 1e-10);
    }
    const auto shifted = HermitianOperator::symmetrized(a.matrix() + 0.1 * Matrix::Identity(6, 6));
    EXPECT_TRUE(psd_order_leq(a, shifted, 1e-12).holds);
    EXPECT_FALSE(psd_order_leq(shifted, a, 1e-12).holds);
  }
}

TEST(OperatorProperties, TraceNormFromSingularValues) {
  std::mt19937_64 rng(15);
  for (int trial = 0; trial < 10; ++trial) {
    const auto a = random_hermitian_in(7, -2, 2, rng);
    const auto ev = eigenvalues(a);
    const double trace_abs = std::accumulate(ev.begin(), ev.end(), 0.0,
                                             [](double s, double x) { return s + std::abs(x); });
    EXPECT_NEAR(schatten_sum(a.matrix(), 1.0, 7), trace_abs, 1e-8);
  }
}

}  // namespace
}  // namespace spectral_lift

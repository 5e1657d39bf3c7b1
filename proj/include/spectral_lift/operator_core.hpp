#pragma once
// Dense complex operator engine.
//
// Operators are dense Eigen matrices. Spectral routines first split the index
// set into exactly decoupled components (entries that are exactly zero never
// couple two indices), then decompose each component separately. The result
// is the same decomposition, but block-diagonal operators such as the lifted
// torus metric cost O(n) small solves instead of one O(n^3) solve.

#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace spectral_lift {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Index = Eigen::Index;

/// Relative asymmetry accepted by HermitianOperator's checked constructor.
inline constexpr double kHermiticityTol = 1e-9;
/// Eigenvalues / singular values at or below this fraction of the norm are zero.
inline constexpr double kZeroThreshold = 1e-10;

/// Hermitian matrix, stored symmetrized. `asymmetry()` is max|A - A*| of the
/// input before symmetrization.
class HermitianOperator {
 public:
  HermitianOperator() = default;
  /// Throws DomainError when max|A - A*| > tol * (1 + max|A|).
  explicit HermitianOperator(Matrix m, double tol = kHermiticityTol);

  static HermitianOperator symmetrized(const Matrix& m);
  static HermitianOperator identity(Index n);
  static HermitianOperator zero(Index n);
  static HermitianOperator diagonal(std::span<const double> values);

  const Matrix& matrix() const noexcept { return m_; }
  Index dim() const noexcept { return m_.rows(); }
  double asymmetry() const noexcept { return asymmetry_; }

 private:
  Matrix m_;
  double asymmetry_ = 0.0;
};

struct SpectrumDecomposition {
  std::vector<double> eigenvalues;  // ascending
  Matrix eigenvectors;              // columns, matching eigenvalues
};

struct DecayFit {
  std::size_t window_lo = 0;  // inclusive index range used in the regression
  std::size_t window_hi = 0;
  std::size_t effective_count = 0;
  double fitted_alpha = 0.0;  // mu_m ~ C (m+1)^-alpha
  double implied_order = std::numeric_limits<double>::infinity();  // 1 / alpha
  double log_constant = 0.0;
  double r_squared = 0.0;
};

struct Interval {
  double lo;
  double hi;
  bool contains(double x) const noexcept { return x >= lo && x <= hi; }
};

struct OrderWitness {
  bool holds = false;
  double min_eigenvalue = 0.0;  // of B - A
  double threshold = 0.0;       // -tol * (1 + |A| + |B|)
};

// ---------------------------------------------------------------------------
// Entry-wise helpers (SIMD dispatched)

double max_entry(const Matrix& a);
double max_entry_diff(const Matrix& a, const Matrix& b);
double hermiticity_residual(const Matrix& a);
/// Copy of `a` with every row and column outside `keep` set to zero.
Matrix masked(const Matrix& a, std::span<const Index> keep);

// ---------------------------------------------------------------------------
// Products

/// a * b. Uses the sparser operand's nonzeros when that is cheaper than a
/// dense product; otherwise a dense GEMM. Deterministic for fixed inputs.
Matrix multiply(const Matrix& a, const Matrix& b);
/// ab - ba
Matrix commutator(const Matrix& a, const Matrix& b);

/// Generalized permutation matrix: U e_j = phase_j e_{target_j}. Shifts and
/// their words are monomial, which makes U T U* an O(n^2) gather.
class MonomialMatrix {
 public:
  static MonomialMatrix identity(Index n);
  /// Returns nullopt unless every column has exactly one nonzero entry in a
  /// distinct row.
  static std::optional<MonomialMatrix> detect(const Matrix& u);

  Index dim() const noexcept { return static_cast<Index>(target_.size()); }
  Index target(Index j) const { return target_[j]; }
  Complex phase(Index j) const { return phase_[j]; }

  /// this * other
  MonomialMatrix compose(const MonomialMatrix& other) const;
  MonomialMatrix adjoint() const;
  Matrix dense() const;
  /// U T U*
  Matrix conjugate(const Matrix& t) const;

 private:
  std::vector<Index> target_;
  std::vector<Complex> phase_;
};

// ---------------------------------------------------------------------------
// Spectral routines

/// Index sets that are coupled through nonzero entries of `a` (or `a`'s
/// transpose). Components are sorted by their smallest index, indices ascend.
std::vector<std::vector<Index>> coupled_components(const Matrix& a);

SpectrumDecomposition decompose(const HermitianOperator& a);
std::vector<double> eigenvalues(const HermitianOperator& a);
/// max |eigenvalue|
double spectral_norm(const HermitianOperator& a);

/// Descending singular values, length = dim.
std::vector<double> singular_values(const Matrix& t);
double operator_norm(const Matrix& t);

/// sum_{m < n} mu_m^p. Throws DomainError for p <= 0.
double schatten_sum(std::span<const double> singular, double p, std::size_t n);
double schatten_sum(const Matrix& t, double p, std::size_t n);
/// (sum_m mu_m^p)^(1/p)
double schatten_norm(std::span<const double> singular, double p);
/// max_m (m+1)^(1/p) mu_m, the finite proxy for the weak-l^p quasinorm.
double weak_schatten_stat(std::span<const double> singular, double p);
double weak_schatten_stat(const Matrix& t, double p);

/// Log-log least squares of mu_m against m+1 over the [10%, 80%] window of the
/// values above `zero_tol`. Throws DomainError with fewer than 4 such values.
DecayFit fit_decay(std::span<const double> descending, double zero_tol);

/// V phi(Lambda) V*. Throws DomainError naming the first eigenvalue outside
/// `guard`.
HermitianOperator apply_scalar_function(const HermitianOperator& a,
                                        const std::function<double(double)>& phi,
                                        Interval guard);

/// T^{-1/2} from (1/pi) int_0^inf lambda^{-1/2} (lambda + T)^{-1} d lambda,
/// substituted to a bounded angle and summed with the midpoint rule. Each
/// node is a Cholesky solve; no eigendecomposition is used.
HermitianOperator inverse_sqrt_by_integral(const HermitianOperator& t, int quadrature_points);

/// A <= B iff min eig(B - A) >= -tol (1 + |A| + |B|).
OrderWitness psd_order_leq(const HermitianOperator& a, const HermitianOperator& b, double tol);
/// Same, with the operator norms of A and B supplied by the caller.
OrderWitness psd_order_leq(const HermitianOperator& a, const HermitianOperator& b, double tol,
                           double norm_a, double norm_b);

/// sign(A) with sign(0) = +1.
HermitianOperator spectral_sign(const HermitianOperator& a);

}  // namespace spectral_lift

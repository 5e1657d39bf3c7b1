#include "spectral_lift/operator_core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>
#include <string>

#include "spectral_lift/errors.hpp"
#include "spectral_lift/simd/kernels.hpp"

namespace spectral_lift {

namespace {

std::span<const Complex> entries(const Matrix& a) {
  return {a.data(), static_cast<std::size_t>(a.size())};
}

void require_square(const Matrix& a, const char* what) {
  if (a.rows() != a.cols()) {
    throw DimensionMismatch(std::string(what) + ": matrix is " + std::to_string(a.rows()) + "x" +
                            std::to_string(a.cols()));
  }
}

void require_same_dim(const Matrix& a, const Matrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionMismatch(std::string(what) + ": " + std::to_string(a.rows()) + "x" +
                            std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" +
                            std::to_string(b.cols()));
  }
}

class DisjointSets {
 public:
  explicit DisjointSets(Index n) : parent_(static_cast<std::size_t>(n)) {
    std::iota(parent_.begin(), parent_.end(), Index{0});
  }
  Index find(Index i) {
    while (parent_[i] != i) {
      parent_[i] = parent_[parent_[i]];
      i = parent_[i];
    }
    return i;
  }
  void unite(Index a, Index b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    // Smaller root wins so component representatives are deterministic.
    if (a < b) parent_[b] = a; else parent_[a] = b;
  }

 private:
  std::vector<Index> parent_;
};

std::vector<std::vector<Index>> group_by_root(DisjointSets& sets, Index n) {
  std::vector<std::vector<Index>> out;
  std::vector<Index> slot(static_cast<std::size_t>(n), -1);
  for (Index i = 0; i < n; ++i) {
    const Index root = sets.find(i);
    if (slot[root] < 0) {
      slot[root] = static_cast<Index>(out.size());
      out.emplace_back();
    }
    out[slot[root]].push_back(i);
  }
  return out;
}

Matrix gather(const Matrix& a, const std::vector<Index>& rows, const std::vector<Index>& cols) {
  Matrix sub(static_cast<Index>(rows.size()), static_cast<Index>(cols.size()));
  for (Index j = 0; j < sub.cols(); ++j) {
    for (Index i = 0; i < sub.rows(); ++i) sub(i, j) = a(rows[i], cols[j]);
  }
  return sub;
}

struct ComponentEigen {
  std::vector<Index> indices;
  Eigen::VectorXd values;
  Matrix vectors;
};

std::vector<ComponentEigen> component_eigen(const Matrix& a, bool want_vectors = true) {
  std::vector<ComponentEigen> out;
  for (auto& idx : coupled_components(a)) {
    ComponentEigen ce;
    if (idx.size() == 1) {
      ce.values = Eigen::VectorXd::Constant(1, a(idx[0], idx[0]).real());
      ce.vectors = Matrix::Identity(1, 1);
    } else {
      const Matrix sub = gather(a, idx, idx);
      Eigen::SelfAdjointEigenSolver<Matrix> solver(
          sub, want_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
      if (solver.info() != Eigen::Success) {
        throw Error("Hermitian eigendecomposition failed on a component of size " +
                    std::to_string(idx.size()));
      }
      ce.values = solver.eigenvalues();
      if (want_vectors) ce.vectors = solver.eigenvectors();
    }
    ce.indices = std::move(idx);
    out.push_back(std::move(ce));
  }
  return out;
}

std::string format_double(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

}  // namespace

// ---------------------------------------------------------------------------

HermitianOperator::HermitianOperator(Matrix m, double tol) {
  require_square(m, "HermitianOperator");
  const double asym = hermiticity_residual(m);
  if (!(asym <= tol * (1.0 + max_entry(m)))) {
    throw DomainError("matrix is not Hermitian: max|A - A*| = " + format_double(asym), asym);
  }
  asymmetry_ = asym;
  m_ = (m + m.adjoint()) * 0.5;
}

HermitianOperator HermitianOperator::symmetrized(const Matrix& m) {
  require_square(m, "HermitianOperator::symmetrized");
  HermitianOperator h;
  h.asymmetry_ = hermiticity_residual(m);
  h.m_ = (m + m.adjoint()) * 0.5;
  return h;
}

HermitianOperator HermitianOperator::identity(Index n) {
  HermitianOperator h;
  h.m_ = Matrix::Identity(n, n);
  return h;
}

HermitianOperator HermitianOperator::zero(Index n) {
  HermitianOperator h;
  h.m_ = Matrix::Zero(n, n);
  return h;
}

HermitianOperator HermitianOperator::diagonal(std::span<const double> values) {
  HermitianOperator h;
  const auto n = static_cast<Index>(values.size());
  h.m_ = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) h.m_(i, i) = values[i];
  return h;
}

// ---------------------------------------------------------------------------

double max_entry(const Matrix& a) { return simd::max_abs(entries(a)); }

double max_entry_diff(const Matrix& a, const Matrix& b) {
  require_same_dim(a, b, "max_entry_diff");
  return simd::max_abs_diff(entries(a), entries(b));
}

double hermiticity_residual(const Matrix& a) {
  require_square(a, "hermiticity_residual");
  const Matrix adj = a.adjoint();
  return max_entry_diff(a, adj);
}

Matrix masked(const Matrix& a, std::span<const Index> keep) {
  require_square(a, "masked");
  std::vector<char> kept(static_cast<std::size_t>(a.rows()), 0);
  for (Index i : keep) {
    if (i < 0 || i >= a.rows()) throw DimensionMismatch("mask index out of range");
    kept[i] = 1;
  }
  Matrix out = a;
  for (Index j = 0; j < a.cols(); ++j) {
    for (Index i = 0; i < a.rows(); ++i) {
      if (!kept[i] || !kept[j]) out(i, j) = 0.0;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

Matrix multiply(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) {
    throw DimensionMismatch("multiply: inner dimensions " + std::to_string(a.cols()) + " and " +
                            std::to_string(b.rows()));
  }
  const Index n = a.rows();
  const Index inner = a.cols();
  const Index p = b.cols();
  const auto nnz = [](const Matrix& m) {
    Index count = 0;
    for (Index k = 0; k < m.size(); ++k) count += m.data()[k] != Complex(0.0, 0.0);
    return count;
  };
  const double dense_cost = static_cast<double>(n) * inner * p;
  const double cost_b = static_cast<double>(nnz(b)) * n;
  const double cost_a = static_cast<double>(nnz(a)) * p;
  // Unblocked axpy loops lose to GEMM unless the operand is clearly sparse.
  constexpr double kSparseAdvantage = 8.0;

  if (cost_b <= cost_a && cost_b * kSparseAdvantage < dense_cost) {
    Matrix c = Matrix::Zero(n, p);
    for (Index j = 0; j < p; ++j) {
      std::span<Complex> out(c.col(j).data(), static_cast<std::size_t>(n));
      for (Index k = 0; k < inner; ++k) {
        const Complex w = b(k, j);
        if (w == Complex(0.0, 0.0)) continue;
        simd::caxpy(out, w, std::span<const Complex>(a.col(k).data(), static_cast<std::size_t>(n)));
      }
    }
    return c;
  }
  if (cost_a * kSparseAdvantage < dense_cost) {
    // (ab)^T = b^T a^T: column i of the transpose accumulates rows of b.
    const Matrix bt = b.transpose();
    Matrix ct = Matrix::Zero(p, n);
    for (Index k = 0; k < inner; ++k) {
      for (Index i = 0; i < n; ++i) {
        const Complex w = a(i, k);
        if (w == Complex(0.0, 0.0)) continue;
        simd::caxpy(std::span<Complex>(ct.col(i).data(), static_cast<std::size_t>(p)), w,
                    std::span<const Complex>(bt.col(k).data(), static_cast<std::size_t>(p)));
      }
    }
    return ct.transpose();
  }
  Matrix c(n, p);
  c.noalias() = a * b;
  return c;
}

Matrix commutator(const Matrix& a, const Matrix& b) {
  require_square(a, "commutator");
  require_same_dim(a, b, "commutator");
  return multiply(a, b) - multiply(b, a);
}

// ---------------------------------------------------------------------------

MonomialMatrix MonomialMatrix::identity(Index n) {
  MonomialMatrix m;
  m.target_.resize(static_cast<std::size_t>(n));
  std::iota(m.target_.begin(), m.target_.end(), Index{0});
  m.phase_.assign(static_cast<std::size_t>(n), Complex(1.0, 0.0));
  return m;
}

std::optional<MonomialMatrix> MonomialMatrix::detect(const Matrix& u) {
  if (u.rows() != u.cols()) return std::nullopt;
  const Index n = u.rows();
  MonomialMatrix m;
  m.target_.assign(static_cast<std::size_t>(n), -1);
  m.phase_.assign(static_cast<std::size_t>(n), Complex(0.0, 0.0));
  std::vector<char> row_used(static_cast<std::size_t>(n), 0);
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) {
      if (u(i, j) == Complex(0.0, 0.0)) continue;
      if (m.target_[j] >= 0 || row_used[i]) return std::nullopt;
      m.target_[j] = i;
      m.phase_[j] = u(i, j);
      row_used[i] = 1;
    }
    if (m.target_[j] < 0) return std::nullopt;
  }
  return m;
}

MonomialMatrix MonomialMatrix::compose(const MonomialMatrix& other) const {
  if (dim() != other.dim()) throw DimensionMismatch("MonomialMatrix::compose");
  MonomialMatrix out;
  out.target_.resize(target_.size());
  out.phase_.resize(phase_.size());
  for (std::size_t j = 0; j < target_.size(); ++j) {
    const Index mid = other.target_[j];
    out.target_[j] = target_[mid];
    out.phase_[j] = phase_[mid] * other.phase_[j];
  }
  return out;
}

MonomialMatrix MonomialMatrix::adjoint() const {
  MonomialMatrix out;
  out.target_.resize(target_.size());
  out.phase_.resize(phase_.size());
  for (std::size_t j = 0; j < target_.size(); ++j) {
    out.target_[target_[j]] = static_cast<Index>(j);
    out.phase_[target_[j]] = std::conj(phase_[j]);
  }
  return out;
}

Matrix MonomialMatrix::dense() const {
  const Index n = dim();
  Matrix u = Matrix::Zero(n, n);
  for (Index j = 0; j < n; ++j) u(target_[j], j) = phase_[j];
  return u;
}

Matrix MonomialMatrix::conjugate(const Matrix& t) const {
  if (t.rows() != dim() || t.cols() != dim()) throw DimensionMismatch("MonomialMatrix::conjugate");
  const Index n = dim();
  Matrix out(n, n);
  for (Index j = 0; j < n; ++j) {
    const Index tj = target_[j];
    const Complex pj = std::conj(phase_[j]);
    for (Index i = 0; i < n; ++i) out(target_[i], tj) = phase_[i] * t(i, j) * pj;
  }
  return out;
}

// ---------------------------------------------------------------------------

std::vector<std::vector<Index>> coupled_components(const Matrix& a) {
  require_square(a, "coupled_components");
  const Index n = a.rows();
  DisjointSets sets(n);
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) {
      if (i != j && a(i, j) != Complex(0.0, 0.0)) sets.unite(i, j);
    }
  }
  return group_by_root(sets, n);
}

SpectrumDecomposition decompose(const HermitianOperator& a) {
  const Index n = a.dim();
  auto parts = component_eigen(a.matrix());
  struct Slot {
    double value;
    std::size_t part;
    Index local;
  };
  std::vector<Slot> slots;
  slots.reserve(static_cast<std::size_t>(n));
  for (std::size_t c = 0; c < parts.size(); ++c) {
    for (Index k = 0; k < parts[c].values.size(); ++k) slots.push_back({parts[c].values[k], c, k});
  }
  std::stable_sort(slots.begin(), slots.end(),
                   [](const Slot& x, const Slot& y) { return x.value < y.value; });
  SpectrumDecomposition out;
  out.eigenvalues.reserve(slots.size());
  out.eigenvectors = Matrix::Zero(n, n);
  for (Index col = 0; col < static_cast<Index>(slots.size()); ++col) {
    const Slot& s = slots[col];
    out.eigenvalues.push_back(s.value);
    const auto& idx = parts[s.part].indices;
    for (std::size_t r = 0; r < idx.size(); ++r) {
      out.eigenvectors(idx[r], col) = parts[s.part].vectors(static_cast<Index>(r), s.local);
    }
  }
  return out;
}

std::vector<double> eigenvalues(const HermitianOperator& a) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(a.dim()));
  for (const auto& part : component_eigen(a.matrix(), false)) {
    for (Index k = 0; k < part.values.size(); ++k) out.push_back(part.values[k]);
  }
  std::sort(out.begin(), out.end());
  return out;
}

double spectral_norm(const HermitianOperator& a) {
  if (a.dim() == 0) return 0.0;
  const auto ev = eigenvalues(a);
  return std::max(std::abs(ev.front()), std::abs(ev.back()));
}

std::vector<double> singular_values(const Matrix& t) {
  require_square(t, "singular_values");
  const Index n = t.rows();
  // Bipartite coupling: row i is node i, column j is node n + j.
  DisjointSets sets(2 * n);
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) {
      if (t(i, j) != Complex(0.0, 0.0)) sets.unite(i, n + j);
    }
  }
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n));
  for (const auto& comp : group_by_root(sets, 2 * n)) {
    std::vector<Index> rows, cols;
    for (Index v : comp) {
      if (v < n) rows.push_back(v); else cols.push_back(v - n);
    }
    if (rows.empty() || cols.empty()) continue;
    if (rows.size() == 1 && cols.size() == 1) {
      out.push_back(std::abs(t(rows[0], cols[0])));
      continue;
    }
    const Matrix sub = gather(t, rows, cols);
    Eigen::BDCSVD<Matrix> svd(sub);
    const auto& sv = svd.singularValues();
    for (Index k = 0; k < sv.size(); ++k) out.push_back(sv[k]);
  }
  out.resize(static_cast<std::size_t>(n), 0.0);
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

double operator_norm(const Matrix& t) {
  if (t.size() == 0) return 0.0;
  return singular_values(t).front();
}

// ---------------------------------------------------------------------------

double schatten_sum(std::span<const double> singular, double p, std::size_t n) {
  if (!(p > 0.0)) throw DomainError("Schatten exponent must be > 0", p);
  if (n > singular.size()) {
    throw DimensionMismatch("schatten_sum: N = " + std::to_string(n) + " exceeds dim " +
                            std::to_string(singular.size()));
  }
  double total = 0.0;
  for (std::size_t m = 0; m < n; ++m) total += std::pow(singular[m], p);
  return total;
}

double schatten_sum(const Matrix& t, double p, std::size_t n) {
  if (!(p > 0.0)) throw DomainError("Schatten exponent must be > 0", p);
  return schatten_sum(singular_values(t), p, n);
}

double schatten_norm(std::span<const double> singular, double p) {
  return std::pow(schatten_sum(singular, p, singular.size()), 1.0 / p);
}

double weak_schatten_stat(std::span<const double> singular, double p) {
  if (!(p > 0.0)) throw DomainError("weak Schatten exponent must be > 0", p);
  double best = 0.0;
  for (std::size_t m = 0; m < singular.size(); ++m) {
    best = std::max(best, std::pow(static_cast<double>(m + 1), 1.0 / p) * singular[m]);
  }
  return best;
}

double weak_schatten_stat(const Matrix& t, double p) {
  if (!(p > 0.0)) throw DomainError("weak Schatten exponent must be > 0", p);
  return weak_schatten_stat(singular_values(t), p);
}

DecayFit fit_decay(std::span<const double> descending, double zero_tol) {
  std::size_t n_eff = 0;
  while (n_eff < descending.size() && descending[n_eff] > zero_tol) ++n_eff;
  if (n_eff < 4) {
    throw DomainError("fit_decay needs at least 4 values above the zero threshold, got " +
                          std::to_string(n_eff),
                      static_cast<double>(n_eff));
  }
  DecayFit fit;
  fit.effective_count = n_eff;
  fit.window_lo = static_cast<std::size_t>(std::ceil(0.1 * static_cast<double>(n_eff)));
  fit.window_hi = static_cast<std::size_t>(std::floor(0.8 * static_cast<double>(n_eff)));
  fit.window_hi = std::min(fit.window_hi, n_eff - 1);

  std::vector<double> xs, ys;
  for (std::size_t m = fit.window_lo; m <= fit.window_hi; ++m) {
    xs.push_back(std::log(static_cast<double>(m + 1)));
    ys.push_back(std::log(descending[m]));
  }
  const double k = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / k;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / k;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  const double slope = sxy / sxx;
  fit.fitted_alpha = -slope;
  fit.log_constant = my - slope * mx;
  fit.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  fit.implied_order =
      fit.fitted_alpha > 0.0 ? 1.0 / fit.fitted_alpha : std::numeric_limits<double>::infinity();
  return fit;
}

// ---------------------------------------------------------------------------

HermitianOperator apply_scalar_function(const HermitianOperator& a,
                                        const std::function<double(double)>& phi,
                                        Interval guard) {
  const Index n = a.dim();
  Matrix out = Matrix::Zero(n, n);
  const auto parts = component_eigen(a.matrix());
  // eigenvalues within rounding of a guard endpoint are snapped onto it
  double top = 0.0;
  for (const auto& part : parts) top = std::max(top, part.values.cwiseAbs().maxCoeff());
  const double slack = kZeroThreshold * top;
  for (const auto& part : parts) {
    Eigen::VectorXd mapped(part.values.size());
    for (Index k = 0; k < part.values.size(); ++k) {
      double lambda = part.values[k];
      if (lambda < guard.lo && lambda >= guard.lo - slack) lambda = guard.lo;
      if (lambda > guard.hi && lambda <= guard.hi + slack) lambda = guard.hi;
      if (!guard.contains(lambda)) {
        throw DomainError("eigenvalue " + format_double(lambda) + " outside [" +
                              format_double(guard.lo) + ", " + format_double(guard.hi) + "]",
                          lambda);
      }
      mapped[k] = phi(lambda);
    }
    const auto& idx = part.indices;
    if (idx.size() == 1) {
      out(idx[0], idx[0]) = mapped[0];
      continue;
    }
    const Matrix sub = part.vectors * mapped.asDiagonal() * part.vectors.adjoint();
    for (std::size_t j = 0; j < idx.size(); ++j) {
      for (std::size_t i = 0; i < idx.size(); ++i) {
        out(idx[i], idx[j]) = sub(static_cast<Index>(i), static_cast<Index>(j));
      }
    }
  }
  return HermitianOperator::symmetrized(out);
}

HermitianOperator inverse_sqrt_by_integral(const HermitianOperator& t, int quadrature_points) {
  if (quadrature_points < 1) throw DomainError("quadrature needs >= 1 point", quadrature_points);
  const Index n = t.dim();
  const Matrix& a = t.matrix();
  Matrix out = Matrix::Zero(n, n);
  for (const auto& idx : coupled_components(a)) {
    const auto m = static_cast<Index>(idx.size());
    const Matrix block = gather(a, idx, idx);
    Eigen::LLT<Matrix> check(block);
    if (check.info() != Eigen::Success) {
      const double lowest = Eigen::SelfAdjointEigenSolver<Matrix>(block, Eigen::EigenvaluesOnly)
                                .eigenvalues()
                                .minCoeff();
      throw DomainError("inverse_sqrt_by_integral: non-positive eigenvalue " + format_double(lowest),
                        lowest);
    }
    // Scale c^2 ~ geometric mean of the diagonal range centres the substitution
    // lambda = (c tan theta)^2 on the spectrum.
    double dmin = block(0, 0).real(), dmax = dmin;
    for (Index i = 1; i < m; ++i) {
      dmin = std::min(dmin, block(i, i).real());
      dmax = std::max(dmax, block(i, i).real());
    }
    const double c = std::pow(dmin * dmax, 0.25);
    const double h = 0.5 * std::numbers::pi / quadrature_points;
    Matrix acc = Matrix::Zero(m, m);
    const Matrix eye = Matrix::Identity(m, m);
    for (int k = 0; k < quadrature_points; ++k) {
      const double theta = (k + 0.5) * h;
      const double tn = std::tan(theta);
      const double sec2 = 1.0 + tn * tn;
      const double shift = c * c * tn * tn;
      Matrix shifted = block;
      shifted.diagonal().array() += shift;
      const Matrix inv = Eigen::LLT<Matrix>(shifted).solve(eye);
      acc += (c * sec2) * inv;
    }
    acc /= static_cast<double>(quadrature_points);
    for (Index j = 0; j < m; ++j) {
      for (Index i = 0; i < m; ++i) out(idx[i], idx[j]) = acc(i, j);
    }
  }
  return HermitianOperator::symmetrized(out);
}

OrderWitness psd_order_leq(const HermitianOperator& a, const HermitianOperator& b, double tol) {
  return psd_order_leq(a, b, tol, spectral_norm(a), spectral_norm(b));
}

OrderWitness psd_order_leq(const HermitianOperator& a, const HermitianOperator& b, double tol,
                           double norm_a, double norm_b) {
  if (a.dim() != b.dim()) throw DimensionMismatch("psd_order_leq: dimensions differ");
  OrderWitness w;
  w.threshold = -tol * (1.0 + norm_a + norm_b);
  if (a.dim() == 0) {
    w.holds = true;
    return w;
  }
  const auto ev = eigenvalues(HermitianOperator::symmetrized(b.matrix() - a.matrix()));
  w.min_eigenvalue = ev.front();
  w.holds = w.min_eigenvalue >= w.threshold;
  return w;
}

HermitianOperator spectral_sign(const HermitianOperator& a) {
  const double inf = std::numeric_limits<double>::infinity();
  return apply_scalar_function(
      a, [](double x) { return x >= 0.0 ? 1.0 : -1.0; }, Interval{-inf, inf});
}

}  // namespace spectral_lift

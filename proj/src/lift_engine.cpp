#include "spectral_lift/lift_engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "spectral_lift/errors.hpp"
#include "spectral_lift/group_model.hpp"
#include "spectral_lift/simd/kernels.hpp"

namespace spectral_lift {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Unitary representing each element of B_K, built from the generator matrices.
class WordRepresentation {
 public:
  WordRepresentation(const FredholmModule& m) : m_(m) {
    for (const auto& g : m.unitaries) {
      auto mono = MonomialMatrix::detect(g.matrix);
      if (!mono) {
        monomial_ = false;
        break;
      }
      generators_.push_back(std::move(*mono));
    }
    if (!monomial_) generators_.clear();
  }

  bool monomial() const noexcept { return monomial_; }

  MonomialMatrix monomial_word(const GroupElement& g) const {
    MonomialMatrix word = MonomialMatrix::identity(m_.dim);
    for (std::size_t j = 0; j < g.exponents.size(); ++j) {
      const std::int64_t e = g.exponents[j];
      const MonomialMatrix step = e >= 0 ? generators_[j] : generators_[j].adjoint();
      for (std::int64_t i = 0; i < (e >= 0 ? e : -e); ++i) word = step.compose(word);
    }
    return word;
  }

  Matrix dense_word(const GroupElement& g) const {
    Matrix word = Matrix::Identity(m_.dim, m_.dim);
    for (std::size_t j = 0; j < g.exponents.size(); ++j) {
      const std::int64_t e = g.exponents[j];
      const Matrix step = e >= 0 ? Matrix(m_.unitaries[j].matrix)
                                 : Matrix(m_.unitaries[j].matrix.adjoint());
      for (std::int64_t i = 0; i < (e >= 0 ? e : -e); ++i) word = multiply(step, word);
    }
    return word;
  }

 private:
  const FredholmModule& m_;
  bool monomial_ = true;
  std::vector<MonomialMatrix> generators_;
};

void accumulate(Matrix& acc, double w, const Matrix& term) {
  simd::axpy(std::span<double>(reinterpret_cast<double*>(acc.data()), 2 * acc.size()), w,
             std::span<const double>(reinterpret_cast<const double*>(term.data()), 2 * term.size()));
}

struct Entry {
  Index row;
  Index col;
  Complex value;
};

std::vector<Entry> nonzeros(const Matrix& t) {
  std::vector<Entry> out;
  for (Index j = 0; j < t.cols(); ++j) {
    for (Index i = 0; i < t.rows(); ++i) {
      if (t(i, j) != Complex(0.0, 0.0)) out.push_back({i, j, t(i, j)});
    }
  }
  return out;
}

HermitianOperator apply_f(const HermitianOperator& g) {
  // Clamp round-off negatives of a PSD input onto the domain of f.
  return apply_scalar_function(
      g, [](double x) { return f(std::max(x, 0.0)); }, Interval{-kInf, kInf});
}

// f^{-1} of an averaged operator. Eigenvalues at or below `zero` map to 0.
HermitianOperator apply_f_inv(const HermitianOperator& avg, double zero, const LiftConfig& cfg) {
  const double norm = spectral_norm(avg);
  const double ceiling = 1.0 - 0.5 * cfg.scale_margin;
  if (norm >= ceiling) {
    throw DomainError("averaged metric eigenvalue " + std::to_string(norm) +
                          " breaches the f^-1 domain bound " + std::to_string(ceiling) +
                          "; use a smaller scale (larger scale margin)",
                      norm);
  }
  const double negative = -kZeroThreshold * std::max(norm, 1e-300);
  return apply_scalar_function(
      avg, [zero](double x) { return x <= zero ? 0.0 : f_inv(x); }, Interval{negative, ceiling});
}

Matrix orthonormal_basis_of_projector(const Matrix& p0, Index dim0) {
  const Index n = p0.rows();
  Matrix q(n, dim0);
  Index found = 0;
  for (Index i = 0; i < n && found < dim0; ++i) {
    Eigen::VectorXcd v = p0.col(i);
    for (int pass = 0; pass < 2; ++pass) {
      for (Index j = 0; j < found; ++j) v -= q.col(j) * q.col(j).dot(v);
    }
    const double norm = v.norm();
    if (norm > 1e-6) q.col(found++) = v / norm;
  }
  if (found != dim0) {
    throw Error("could not extract an orthonormal basis of H0 (rank " + std::to_string(found) +
                " of " + std::to_string(dim0) + ")");
  }
  return q;
}

}  // namespace

std::string to_string(SummabilityMode mode) {
  return mode == SummabilityMode::weak ? "weak" : "schatten";
}

SummabilityMode summability_mode_from_string(const std::string& s) {
  if (s == "schatten") return SummabilityMode::schatten;
  if (s == "weak") return SummabilityMode::weak;
  throw SchemaError("unknown summability mode '" + s + "' (expected schatten|weak)");
}

void LiftConfig::validate() const {
  if (p && !(*p > 0.0)) throw DomainError("p must be > 0", *p);
  if (ball_radius && *ball_radius < 1) throw DomainError("ball radius must be >= 1", *ball_radius);
  if (!(scale_margin > 0.0 && scale_margin < 1.0)) {
    throw DomainError("scale margin must lie in (0, 1)", scale_margin);
  }
  if (!(epsilon_guard > 0.0 && epsilon_guard < 1.0)) {
    throw DomainError("epsilon guard must lie in (0, 1)", epsilon_guard);
  }
  if (!(kernel_tol >= 0.0)) throw DomainError("kernel tolerance must be >= 0", kernel_tol);
  if (g0_exponent && !(*g0_exponent > 0.0)) throw DomainError("G0 exponent must be > 0", *g0_exponent);
}

double f_inv(double t) {
  if (!(t >= 0.0 && t < 1.0)) throw DomainError("f_inv is defined on [0, 1)", t);
  if (t == 0.0) return 0.0;
  // arcosh(1/t) = log((1 + sqrt(1 - t^2)) / t)
  const double a = std::log1p(std::sqrt((1.0 - t) * (1.0 + t))) - std::log(t);
  return 1.0 / (a * a);
}

double f(double s) {
  if (!(s >= 0.0)) throw DomainError("f is defined on [0, inf)", s);
  if (s == 0.0) return 0.0;
  // 1 / cosh(x) = 2 e^-x / (1 + e^-2x)
  const double e = std::exp(-1.0 / std::sqrt(s));
  return 2.0 * e / (1.0 + e * e);
}

ResolvedLift resolve(const FredholmModule& m, const LiftConfig& cfg) {
  cfg.validate();
  ResolvedLift r;
  if (cfg.p) {
    r.p = *cfg.p;
  } else {
    try {
      r.p = summability_report(m).declared_p;
    } catch (const DegenerateModule&) {
      r.p = 1.0;
    }
  }
  r.ball_radius = cfg.ball_radius.value_or(
      std::max(kDefaultBallRadius, m.truncation_radius().value_or(0)));
  r.g0_exponent = cfg.g0_exponent.value_or(6.0 / r.p);
  const GroupModel model(m.group);
  r.weight_sum = model.ball_weight(r.ball_radius);
  r.tail_bound =
      model.weight_tail_bound(r.ball_radius, std::max(r.ball_radius, cfg.tail_exact_radius));
  return r;
}

double admissible_scale(double norm, double weight_mass, const LiftConfig& cfg,
                        double average_ceiling) {
  if (!(norm > 0.0)) return 1.0;
  const double by_guard = cfg.epsilon_guard * (1.0 - cfg.scale_margin) / norm;
  double by_average = kInf;
  const double target = std::min(1.0 - cfg.scale_margin, average_ceiling) / weight_mass;
  if (target < 1.0) by_average = f_inv(target) * (1.0 - 1e-12) / norm;
  const double sigma = std::min({1.0, by_guard, by_average});
  if (!(sigma > 0.0)) throw DomainError("no admissible metric scale", sigma);
  return sigma;
}

double chain_exponent(double p, int growth_order) { return p + growth_order + 1.0 + 0.5; }

double concavity_bound(double q) {
  if (!(q > 0.0)) throw DomainError("concavity_bound needs q > 0", q);
  // (f^{-1})^q = a^{-2q}, a = arcosh(1/t), is concave exactly where
  // a (1 - 2t^2) > (2q + 1) sqrt(1 - t^2). Bisect on log t.
  auto concave = [q](double t) {
    const double a = std::log1p(std::sqrt((1.0 - t) * (1.0 + t))) - std::log(t);
    return a * (1.0 - 2.0 * t * t) > (2.0 * q + 1.0) * std::sqrt((1.0 - t) * (1.0 + t));
  };
  double lo = -700.0, hi = std::log(0.5);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (concave(std::exp(mid)) ? lo : hi) = mid;
  }
  return std::exp(lo);
}

namespace {

double average_ceiling(const FredholmModule& m, const LiftConfig& cfg, const ResolvedLift& res) {
  return cfg.concave_range ? concavity_bound(chain_exponent(res.p, m.group.growth_order())) : 1.0;
}

QuantumMetric quantum_metric_impl(const FredholmModule& m, const LiftConfig& cfg,
                                  const ResolvedLift& res) {
  QuantumMetric q;
  q.p_used = res.p;
  q.mode = cfg.mode;
  Matrix acc = Matrix::Zero(m.dim, m.dim);
  bool any = false;
  for (int k = 0; k < static_cast<int>(m.unitaries.size()); ++k) {
    const auto sv = singular_values(interior_commutator(m, k));
    const double norm = cfg.mode == SummabilityMode::schatten ? schatten_norm(sv, res.p)
                                                              : weak_schatten_stat(sv, res.p);
    q.commutator_norms.push_back(norm);
    if (!(norm > kZeroThreshold)) {
      q.coefficients.push_back(0.0);
      continue;
    }
    const double c = std::ldexp(1.0, -(k + 1)) / (norm * norm);
    q.coefficients.push_back(c);
    const Matrix comm = generator_commutator(m, k);
    acc += c * multiply(comm.adjoint(), comm);
    any = true;
  }
  if (!any) throw DegenerateModule("every generator commutes with F; no quantum metric");
  HermitianOperator g = HermitianOperator::symmetrized(acc);
  q.unscaled_norm = spectral_norm(g);
  q.scale = admissible_scale(q.unscaled_norm, res.weight_sum + res.tail_bound, cfg,
                             average_ceiling(m, cfg, res));
  q.G = HermitianOperator::symmetrized(g.matrix() * q.scale);
  return q;
}

QuantumMetric zero_metric(const FredholmModule& m, const LiftConfig& cfg, const ResolvedLift& res) {
  QuantumMetric q;
  q.G = HermitianOperator::zero(m.dim);
  q.coefficients.assign(m.unitaries.size(), 0.0);
  q.commutator_norms.assign(m.unitaries.size(), 0.0);
  q.p_used = res.p;
  q.mode = cfg.mode;
  return q;
}

QuantumMetric lift_metric_impl(const FredholmModule& m, const LiftConfig& cfg,
                               const ResolvedLift& res) {
  try {
    return quantum_metric_impl(m, cfg, res);
  } catch (const DegenerateModule&) {
    return zero_metric(m, cfg, res);
  }
}

}  // namespace

QuantumMetric quantum_metric(const FredholmModule& m, const LiftConfig& cfg) {
  return quantum_metric_impl(m, cfg, resolve(m, cfg));
}

QuantumMetric lift_metric(const FredholmModule& m, const LiftConfig& cfg) {
  return lift_metric_impl(m, cfg, resolve(m, cfg));
}

AveragedOperator average(const HermitianOperator& t, const FredholmModule& m, int ball_radius) {
  if (t.dim() != m.dim) throw DimensionMismatch("average: operator does not match module");
  const GroupModel model(m.group);
  const auto ball = model.ball(ball_radius);
  const WordRepresentation words(m);
  const Matrix& tm = t.matrix();
  Matrix acc = Matrix::Zero(m.dim, m.dim);

  const auto entries = nonzeros(tm);
  const bool sparse = words.monomial() && static_cast<double>(entries.size()) <
                                              0.25 * static_cast<double>(tm.size());
  for (const auto& g : ball) {
    const double w = model.weight(g);
    if (sparse) {
      const MonomialMatrix u = words.monomial_word(g);
      for (const auto& e : entries) {
        const Complex c = u.phase(e.row) * e.value * std::conj(u.phase(e.col));
        Complex& slot = acc(u.target(e.row), u.target(e.col));
        slot = Complex(slot.real() + w * c.real(), slot.imag() + w * c.imag());
      }
    } else if (words.monomial()) {
      accumulate(acc, w, words.monomial_word(g).conjugate(tm));
    } else {
      const Matrix u = words.dense_word(g);
      accumulate(acc, w, multiply(multiply(u, tm), u.adjoint()));
    }
  }
  AveragedOperator out;
  out.value = HermitianOperator::symmetrized(acc);
  out.asymmetry = out.value.asymmetry();
  const double tail = model.weight_tail_bound(ball_radius, std::max(ball_radius, 200));
  out.tail_bound = tail * spectral_norm(t);
  return out;
}

KernelSplit kernel_split(const FredholmModule& m, const QuantumMetric& g, const LiftConfig& cfg) {
  const ResolvedLift res = resolve(m, cfg);
  const AveragedOperator avg = average(apply_f(g.G), m, res.ball_radius);
  const SpectrumDecomposition dec = decompose(avg.value);
  const double norm = dec.eigenvalues.empty()
                          ? 0.0
                          : std::max(std::abs(dec.eigenvalues.front()), std::abs(dec.eigenvalues.back()));
  const double zero = cfg.kernel_tol * norm;
  KernelSplit split;
  Index dim0 = 0;
  while (dim0 < static_cast<Index>(dec.eigenvalues.size()) && dec.eigenvalues[dim0] <= zero) ++dim0;
  split.dim0 = dim0;
  const Matrix v0 = dec.eigenvectors.leftCols(dim0);
  split.P0 = dim0 > 0 ? Matrix(v0 * v0.adjoint()) : Matrix::Zero(m.dim, m.dim);
  split.P1 = Matrix::Identity(m.dim, m.dim) - split.P0;
  for (int k = 0; k < static_cast<int>(m.unitaries.size()); ++k) {
    split.annihilation_residual = std::max(
        split.annihilation_residual, max_entry(multiply(generator_commutator(m, k), split.P0)));
  }
  split.consistent = split.annihilation_residual <= 1e-8;
  return split;
}

HermitianOperator theta(const QuantumMetric& g, const FredholmModule& m, const LiftConfig& cfg) {
  const ResolvedLift res = resolve(m, cfg);
  const AveragedOperator avg = average(apply_f(g.G), m, res.ball_radius);
  return apply_f_inv(avg.value, cfg.kernel_tol * spectral_norm(avg.value), cfg);
}

HermitianOperator g0_default(Index dim0, const LiftConfig& cfg) {
  if (dim0 < 1) throw DomainError("G0 needs dim0 >= 1", static_cast<double>(dim0));
  const double exponent = cfg.g0_exponent.value_or(6.0 / cfg.p.value_or(1.0));
  std::vector<double> diag(static_cast<std::size_t>(dim0));
  for (Index n = 0; n < dim0; ++n) diag[n] = std::pow(static_cast<double>(n + 1), -exponent);
  return HermitianOperator::diagonal(diag);
}

SpectralTriple build_triple(const FredholmModule& m, const LiftConfig& cfg) {
  const ResolvedLift res = resolve(m, cfg);
  LiftConfig resolved_cfg = cfg;
  resolved_cfg.p = res.p;
  resolved_cfg.g0_exponent = res.g0_exponent;

  SpectralTriple triple;
  LiftProvenance& prov = triple.provenance;
  prov.config = cfg;
  prov.resolved = res;

  const QuantumMetric metric = lift_metric_impl(m, cfg, res);
  prov.sigma = metric.scale;
  prov.coefficients = metric.coefficients;
  prov.commutator_norms = metric.commutator_norms;

  const AveragedOperator avg = average(apply_f(metric.G), m, res.ball_radius);
  prov.averaging_tail = avg.tail_bound;
  const SpectrumDecomposition dec = decompose(avg.value);
  const double avg_norm =
      dec.eigenvalues.empty()
          ? 0.0
          : std::max(std::abs(dec.eigenvalues.front()), std::abs(dec.eigenvalues.back()));
  const double zero = cfg.kernel_tol * avg_norm;
  const HermitianOperator theta_g = apply_f_inv(avg.value, zero, cfg);

  Index dim0 = 0;
  while (dim0 < static_cast<Index>(dec.eigenvalues.size()) && dec.eigenvalues[dim0] <= zero) ++dim0;
  prov.kernel_dim = dim0;
  const Matrix v0 = dec.eigenvectors.leftCols(dim0);
  triple.P0 = dim0 > 0 ? Matrix(v0 * v0.adjoint()) : Matrix::Zero(m.dim, m.dim);
  triple.P1 = Matrix::Identity(m.dim, m.dim) - triple.P0;
  for (int k = 0; k < static_cast<int>(m.unitaries.size()); ++k) {
    prov.kernel_annihilation_residual =
        std::max(prov.kernel_annihilation_residual,
                 max_entry(multiply(generator_commutator(m, k), triple.P0)));
  }
  prov.kernel_consistent = prov.kernel_annihilation_residual <= 1e-8;
  if (!prov.kernel_consistent) {
    prov.warnings.push_back("H0 does not annihilate every [F,u_k]: residual " +
                            std::to_string(prov.kernel_annihilation_residual));
  }

  Matrix theta_total;
  if (dim0 == 0) {
    theta_total = theta_g.matrix();
  } else {
    const Matrix q0 = orthonormal_basis_of_projector(triple.P0, dim0);
    const HermitianOperator g0 = g0_default(dim0, resolved_cfg);
    prov.sigma0 = admissible_scale(spectral_norm(g0), res.weight_sum + res.tail_bound, cfg,
                                   average_ceiling(m, cfg, res));
    const HermitianOperator g0_embedded =
        HermitianOperator::symmetrized(prov.sigma0 * (q0 * g0.matrix() * q0.adjoint()));
    const AveragedOperator avg0 = average(apply_f(g0_embedded), m, res.ball_radius);
    const HermitianOperator theta0_full =
        apply_f_inv(avg0.value, cfg.kernel_tol * spectral_norm(avg0.value), cfg);
    const HermitianOperator theta0 =
        HermitianOperator::symmetrized(q0.adjoint() * theta0_full.matrix() * q0);
    const auto ev0 = eigenvalues(theta0);
    if (!(ev0.front() > 0.0)) {
      throw Error("Theta is not invertible on H0: eigenvalue " + std::to_string(ev0.front()));
    }
    prov.block_leakage = std::max(
        max_entry(multiply(multiply(triple.P1, theta0_full.matrix()), triple.P0)),
        max_entry(multiply(multiply(triple.P0, theta_g.matrix()), triple.P1)));
    theta_total = multiply(multiply(triple.P1, theta_g.matrix()), triple.P1) +
                  q0 * theta0.matrix() * q0.adjoint();
  }
  triple.theta = HermitianOperator::symmetrized(theta_total);

  const auto theta_ev = eigenvalues(triple.theta);
  if (!theta_ev.empty() && !(theta_ev.front() > 0.0)) {
    throw Error("Theta is not invertible on H1: eigenvalue " + std::to_string(theta_ev.front()));
  }
  const HermitianOperator inv_sqrt = apply_scalar_function(
      triple.theta, [](double x) { return 1.0 / std::sqrt(x); },
      Interval{std::numeric_limits<double>::min(), kInf});
  const Matrix& fm = m.F.matrix();
  triple.F = m.F;
  triple.abs_d = HermitianOperator::symmetrized(
      inv_sqrt.matrix() + multiply(multiply(fm, inv_sqrt.matrix()), fm));
  const Matrix d = multiply(fm, triple.abs_d.matrix());
  triple.D = HermitianOperator::symmetrized(d);
  prov.hermiticity_drift = std::max({triple.D.asymmetry(), triple.abs_d.asymmetry(),
                                     triple.theta.asymmetry(), avg.asymmetry});
  return triple;
}

// ---------------------------------------------------------------------------

nlohmann::json to_json(const LiftConfig& cfg) {
  nlohmann::json j;
  j["p"] = cfg.p ? nlohmann::json(*cfg.p) : nlohmann::json(nullptr);
  j["mode"] = to_string(cfg.mode);
  j["ball_radius"] = cfg.ball_radius ? nlohmann::json(*cfg.ball_radius) : nlohmann::json(nullptr);
  j["scale_margin"] = cfg.scale_margin;
  j["epsilon_guard"] = cfg.epsilon_guard;
  j["kernel_tol"] = cfg.kernel_tol;
  j["g0_exponent"] = cfg.g0_exponent ? nlohmann::json(*cfg.g0_exponent) : nlohmann::json(nullptr);
  j["tail_exact_radius"] = cfg.tail_exact_radius;
  j["concave_range"] = cfg.concave_range;
  return j;
}

LiftConfig lift_config_from_json(const nlohmann::json& j) {
  try {
    LiftConfig cfg;
    if (j.contains("p") && !j["p"].is_null()) cfg.p = j["p"].get<double>();
    if (j.contains("mode")) cfg.mode = summability_mode_from_string(j["mode"].get<std::string>());
    if (j.contains("ball_radius") && !j["ball_radius"].is_null()) {
      cfg.ball_radius = j["ball_radius"].get<int>();
    }
    if (j.contains("scale_margin")) cfg.scale_margin = j["scale_margin"].get<double>();
    if (j.contains("epsilon_guard")) cfg.epsilon_guard = j["epsilon_guard"].get<double>();
    if (j.contains("kernel_tol")) cfg.kernel_tol = j["kernel_tol"].get<double>();
    if (j.contains("g0_exponent") && !j["g0_exponent"].is_null()) {
      cfg.g0_exponent = j["g0_exponent"].get<double>();
    }
    if (j.contains("tail_exact_radius")) cfg.tail_exact_radius = j["tail_exact_radius"].get<int>();
    if (j.contains("concave_range")) cfg.concave_range = j["concave_range"].get<bool>();
    return cfg;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("lift config: ") + e.what());
  }
}

nlohmann::json to_json(const LiftProvenance& p) {
  return {
      {"config", to_json(p.config)},
      {"resolved",
       {{"p", p.resolved.p},
        {"ball_radius", p.resolved.ball_radius},
        {"g0_exponent", p.resolved.g0_exponent},
        {"weight_sum", p.resolved.weight_sum},
        {"tail_bound", p.resolved.tail_bound}}},
      {"sigma", p.sigma},
      {"sigma0", p.sigma0},
      {"kernel_dim", p.kernel_dim},
      {"kernel_annihilation_residual", p.kernel_annihilation_residual},
      {"kernel_consistent", p.kernel_consistent},
      {"averaging_tail", p.averaging_tail},
      {"block_leakage", p.block_leakage},
      {"hermiticity_drift", p.hermiticity_drift},
      {"coefficients", p.coefficients},
      {"commutator_norms", p.commutator_norms},
      {"warnings", p.warnings},
  };
}

LiftProvenance provenance_from_json(const nlohmann::json& j) {
  try {
    LiftProvenance p;
    p.config = lift_config_from_json(j.at("config"));
    const auto& r = j.at("resolved");
    p.resolved.p = r.at("p").get<double>();
    p.resolved.ball_radius = r.at("ball_radius").get<int>();
    p.resolved.g0_exponent = r.at("g0_exponent").get<double>();
    p.resolved.weight_sum = r.at("weight_sum").get<double>();
    p.resolved.tail_bound = r.at("tail_bound").get<double>();
    p.sigma = j.at("sigma").get<double>();
    p.sigma0 = j.at("sigma0").get<double>();
    p.kernel_dim = j.at("kernel_dim").get<Index>();
    p.kernel_annihilation_residual = j.at("kernel_annihilation_residual").get<double>();
    p.kernel_consistent = j.at("kernel_consistent").get<bool>();
    p.averaging_tail = j.at("averaging_tail").get<double>();
    p.block_leakage = j.at("block_leakage").get<double>();
    p.hermiticity_drift = j.at("hermiticity_drift").get<double>();
    p.coefficients = j.at("coefficients").get<std::vector<double>>();
    p.commutator_norms = j.at("commutator_norms").get<std::vector<double>>();
    p.warnings = j.at("warnings").get<std::vector<std::string>>();
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("provenance: ") + e.what());
  }
}

}  // namespace spectral_lift

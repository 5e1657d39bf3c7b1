#pragma once
// Lifting a bounded Fredholm module to a spectral triple.
//
//   G      = sigma * sum_k c_k [F,u_k]* [F,u_k]       quantum metric
//   M_K(T) = sum_{u in B_K} rho(u) u T u*            truncated averaging
//   Theta  = f^{-1}( M_K( f(G) ) )
//   |D|    = Theta^{-1/2} + F Theta^{-1/2} F,   D = F |D|
//
// with f^{-1}(t) = arcosh(1/t)^{-2}. On ker M_K(f(G)) the metric is replaced by
// a fixed strictly positive G0 and the same transform is applied there.

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "spectral_lift/module_factory.hpp"
#include "spectral_lift/operator_core.hpp"

namespace spectral_lift {

enum class SummabilityMode { schatten, weak };

std::string to_string(SummabilityMode mode);
SummabilityMode summability_mode_from_string(const std::string& s);

struct LiftConfig {
  /// Summability exponent used for the c_k normalisation. Unset: the module's
  /// declared p from summability_report (1.0 for degenerate modules).
  std::optional<double> p;
  SummabilityMode mode = SummabilityMode::schatten;
  /// Ball radius K of the averaging. Unset: max(12, truncation radius).
  std::optional<int> ball_radius;
  double scale_margin = 0.1;
  double epsilon_guard = 0.9;
  /// Relative eigenvalue threshold of M_K(f(G)) below which modes form H0.
  double kernel_tol = 1e-15;
  /// Exponent of the default G0 = diag((n+1)^-e). Unset: 6 / p.
  std::optional<double> g0_exponent;
  /// Radius up to which the averaging tail is summed exactly.
  int tail_exact_radius = 200;
  /// Also keep the spectrum of M_K f(sigma G) inside [0, t_q], the range on which
  /// (f^{-1})^q is concave, q = p + r + 1.5. The Rotfel'd chain needs this.
  bool concave_range = false;

  /// Throws DomainError on an out-of-range field.
  void validate() const;
};

inline constexpr int kDefaultBallRadius = 12;

/// f^{-1}(t) = (log((1 + sqrt(1 - t^2)) / t))^{-2}, f^{-1}(0) = 0, for t in [0, 1).
double f_inv(double t);
/// f(s) = 1 / cosh(s^{-1/2}), f(0) = 0, for s >= 0.
double f(double s);

struct QuantumMetric {
  HermitianOperator G;                // scaled: sigma * sum_k c_k [F,u_k]*[F,u_k]
  std::vector<double> coefficients;   // c_k
  std::vector<double> commutator_norms;  // the ||[F,u_k]||_p (or weak proxy) used for c_k
  double scale = 1.0;                 // sigma
  double unscaled_norm = 0.0;         // ||G|| before sigma
  double p_used = 1.0;
  SummabilityMode mode = SummabilityMode::schatten;
};

/// Resolved numeric parameters for one module.
struct ResolvedLift {
  double p = 1.0;
  int ball_radius = kDefaultBallRadius;
  double g0_exponent = 6.0;
  double weight_sum = 0.0;   // sum of rho over B_K
  double tail_bound = 0.0;   // bound on the rho mass outside B_K
};

ResolvedLift resolve(const FredholmModule& m, const LiftConfig& cfg);

/// Throws DegenerateModule when every commutator vanishes.
QuantumMetric quantum_metric(const FredholmModule& m, const LiftConfig& cfg);

/// Largest sigma <= 1 with sigma |G| <= eps (1 - margin) and
/// (sum rho + tail) f(sigma |G|) <= min(1 - margin, average_ceiling).
double admissible_scale(double norm, double weight_mass, const LiftConfig& cfg,
                        double average_ceiling = 1.0);

/// Inflection point t_q of (f^{-1})^q: concave on [0, t_q], convex beyond.
/// t_1 ~ 0.0953; t_q ~ 2 e^{-(2q+1)} for large q.
double concavity_bound(double q);
/// q = p + r + 1.5, the exponent used by the summability checks.
double chain_exponent(double p, int growth_order);

struct AveragedOperator {
  HermitianOperator value;
  double tail_bound = 0.0;  // weight_tail_bound(K) * |T|
  double asymmetry = 0.0;
};

/// M_K(T) summed in canonical ball order, then symmetrized.
AveragedOperator average(const HermitianOperator& t, const FredholmModule& m, int ball_radius);

struct KernelSplit {
  Matrix P0;
  Matrix P1;
  Index dim0 = 0;
  /// max_k |[F,u_k] P0|; should vanish when H0 is a genuine common kernel.
  double annihilation_residual = 0.0;
  bool consistent = true;
};

KernelSplit kernel_split(const FredholmModule& m, const QuantumMetric& g, const LiftConfig& cfg);

/// f^{-1}(M_K(f(G))) on the whole space; eigenvalues of M_K(f(G)) at or below
/// the kernel threshold map to 0. Throws DomainError when an averaged
/// eigenvalue reaches 1 - margin/2.
HermitianOperator theta(const QuantumMetric& g, const FredholmModule& m, const LiftConfig& cfg);

/// diag((n+1)^-exponent), n = 0..dim0-1.
HermitianOperator g0_default(Index dim0, const LiftConfig& cfg);

struct LiftProvenance {
  LiftConfig config;
  ResolvedLift resolved;
  double sigma = 1.0;
  double sigma0 = 1.0;
  Index kernel_dim = 0;
  double kernel_annihilation_residual = 0.0;
  bool kernel_consistent = true;
  double averaging_tail = 0.0;
  double block_leakage = 0.0;
  double hermiticity_drift = 0.0;
  std::vector<double> coefficients;
  std::vector<double> commutator_norms;
  std::vector<std::string> warnings;
};

struct SpectralTriple {
  HermitianOperator D;
  HermitianOperator abs_d;
  HermitianOperator F;
  Matrix P0;
  Matrix P1;
  HermitianOperator theta;
  LiftProvenance provenance;
};

SpectralTriple build_triple(const FredholmModule& m, const LiftConfig& cfg);

/// Metric used by build_triple: quantum_metric, or G = 0 for degenerate modules.
QuantumMetric lift_metric(const FredholmModule& m, const LiftConfig& cfg);

nlohmann::json to_json(const LiftConfig& cfg);
LiftConfig lift_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const LiftProvenance& p);
LiftProvenance provenance_from_json(const nlohmann::json& j);

}  // namespace spectral_lift

#pragma once
// Finite truncations of Fredholm modules (H, F, {u_k}) over a group.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "spectral_lift/group_model.hpp"
#include "spectral_lift/operator_core.hpp"

namespace spectral_lift {

struct Generator {
  std::string label;
  Matrix matrix;
};

struct FredholmModule {
  Index dim = 0;
  HermitianOperator F;
  /// One unitary per group generator, in generator order.
  std::vector<Generator> unitaries;
  GroupSpec group;
  /// Indices away from the cyclic wrap. Empty means every index is interior.
  std::vector<Index> interior_mask;
  nlohmann::json metadata = nlohmann::json::object();

  std::vector<Index> interior_indices() const;
  /// Truncation radius N recorded by the builders, if any.
  std::optional<int> truncation_radius() const;
};

struct AxiomResiduals {
  double f_hermiticity = 0.0;  // max|F - F*|
  double f_involution = 0.0;   // max|F^2 - I|
  std::vector<double> unitarity;     // per generator, max of |u*u - I| and |uu* - I|
  std::vector<double> commutation;   // per unordered generator pair (free abelian)
  double relation = 0.0;             // max|u^n - I| for cyclic groups
  double max_residual() const;
};

struct GeneratorSummability {
  std::string label;
  std::vector<double> singular_values;  // of the interior commutator [F, u]
  std::optional<DecayFit> fit;          // absent when too few nonzero values
  double weak_stat = 0.0;               // at declared_p
  double operator_norm = 0.0;
};

struct SummabilityReport {
  std::vector<GeneratorSummability> generators;
  double declared_p = 1.0;
};

/// Fourier modes e_n, -N <= n <= N; F = sign(n) with sign(0) = +1; u the
/// cyclic shift e_n -> e_{n+1} (e_N -> e_{-N}). Group Z.
FredholmModule build_circle_module(int n);

/// Momentum lattice [-N, N]^r. r = 1 is the circle module. r = 2 carries a
/// two-component spinor with F(n) = (n1 s1 + n2 s2)/|n|, F(0) = s1, and u_j
/// the cyclic shift by e_j on both components. Group Z^r.
FredholmModule build_torus_module(int r, int n);

AxiomResiduals validate_axioms(const FredholmModule& m);

/// [F, u_k] on the full space.
Matrix generator_commutator(const FredholmModule& m, int k);
/// [F, u_k] with rows and columns outside the interior mask zeroed.
Matrix interior_commutator(const FredholmModule& m, int k);

/// Throws DegenerateModule when every interior commutator is numerically zero.
SummabilityReport summability_report(const FredholmModule& m);

/// Axiom tolerance enforced by load_module.
inline constexpr double kModuleAxiomTol = 1e-9;

FredholmModule load_module(const std::filesystem::path& path);
void save_module(const FredholmModule& m, const std::filesystem::path& path);

}  // namespace spectral_lift

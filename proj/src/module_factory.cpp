#include "spectral_lift/module_factory.hpp"

#include <algorithm>
#include <cmath>

#include "spectral_lift/errors.hpp"
#include "spectral_lift/interchange.hpp"

namespace spectral_lift {

namespace {

// Cyclic shift on a lattice [-N, N]^r (row-major sites) tensored with the
// identity on `spinor` components: site n -> n + e_axis, wrapping N -> -N.
Matrix lattice_shift(int r, int n, int axis, int spinor) {
  const Index side = 2 * n + 1;
  Index sites = 1;
  for (int i = 0; i < r; ++i) sites *= side;
  const Index dim = sites * spinor;
  Index stride = 1;
  for (int i = r - 1; i > axis; --i) stride *= side;
  Matrix u = Matrix::Zero(dim, dim);
  for (Index site = 0; site < sites; ++site) {
    const Index coord = (site / stride) % side;
    const Index next = coord + 1 == side ? site - coord * stride : site + stride;
    for (int s = 0; s < spinor; ++s) u(next * spinor + s, site * spinor + s) = 1.0;
  }
  return u;
}

std::vector<Index> lattice_interior(int r, int n, int spinor) {
  const Index side = 2 * n + 1;
  Index sites = 1;
  for (int i = 0; i < r; ++i) sites *= side;
  std::vector<Index> out;
  for (Index site = 0; site < sites; ++site) {
    bool interior = true;
    Index rest = site;
    for (int i = 0; i < r; ++i) {
      const Index coord = rest % side - n;
      rest /= side;
      if (coord == -n || coord == n) interior = false;
    }
    if (!interior) continue;
    for (int s = 0; s < spinor; ++s) out.push_back(site * spinor + s);
  }
  return out;
}

double unitarity_residual(const Matrix& u) {
  const Index n = u.rows();
  const Matrix eye = Matrix::Identity(n, n);
  const Matrix adj = u.adjoint();
  return std::max(max_entry_diff(multiply(adj, u), eye), max_entry_diff(multiply(u, adj), eye));
}

}  // namespace

std::vector<Index> FredholmModule::interior_indices() const {
  if (!interior_mask.empty()) return interior_mask;
  std::vector<Index> all(static_cast<std::size_t>(dim));
  for (Index i = 0; i < dim; ++i) all[i] = i;
  return all;
}

std::optional<int> FredholmModule::truncation_radius() const {
  if (metadata.is_object() && metadata.contains("truncation_radius") &&
      metadata["truncation_radius"].is_number_integer()) {
    return metadata["truncation_radius"].get<int>();
  }
  return std::nullopt;
}

double AxiomResiduals::max_residual() const {
  double worst = std::max({f_hermiticity, f_involution, relation});
  for (double r : unitarity) worst = std::max(worst, r);
  for (double r : commutation) worst = std::max(worst, r);
  return worst;
}

FredholmModule build_circle_module(int n) {
  if (n < 2) throw DomainError("circle module needs N >= 2", n);
  FredholmModule m;
  m.dim = 2 * n + 1;
  std::vector<double> signs(static_cast<std::size_t>(m.dim));
  for (Index i = 0; i < m.dim; ++i) signs[i] = (i - n) >= 0 ? 1.0 : -1.0;
  m.F = HermitianOperator::diagonal(signs);
  m.group = GroupSpec::free_abelian(1);
  m.unitaries.push_back({"u1", lattice_shift(1, n, 0, 1)});
  m.interior_mask = lattice_interior(1, n, 1);
  m.metadata = {{"example", "circle"}, {"truncation_radius", n}, {"index_offset", -n}};
  return m;
}

FredholmModule build_torus_module(int r, int n) {
  if (r == 1) return build_circle_module(n);
  if (r != 2) throw DomainError("torus module supports r in {1, 2}", r);
  if (n < 2) throw DomainError("torus module needs N >= 2", n);
  const Index side = 2 * n + 1;
  FredholmModule m;
  m.dim = 2 * side * side;
  Matrix f = Matrix::Zero(m.dim, m.dim);
  for (Index site = 0; site < side * side; ++site) {
    const double n1 = static_cast<double>(site / side - n);
    const double n2 = static_cast<double>(site % side - n);
    // n1 s1 + n2 s2 = [[0, n1 - i n2], [n1 + i n2, 0]]
    Complex upper(1.0, 0.0);
    if (n1 != 0.0 || n2 != 0.0) {
      const double norm = std::hypot(n1, n2);
      upper = Complex(n1 / norm, -n2 / norm);
    }
    f(2 * site, 2 * site + 1) = upper;
    f(2 * site + 1, 2 * site) = std::conj(upper);
  }
  m.F = HermitianOperator(std::move(f));
  m.group = GroupSpec::free_abelian(2);
  m.unitaries.push_back({"u1", lattice_shift(2, n, 0, 2)});
  m.unitaries.push_back({"u2", lattice_shift(2, n, 1, 2)});
  m.interior_mask = lattice_interior(2, n, 2);
  m.metadata = {{"example", "torus2"}, {"truncation_radius", n}, {"spinor_dim", 2}};
  return m;
}

AxiomResiduals validate_axioms(const FredholmModule& m) {
  AxiomResiduals res;
  const Matrix& f = m.F.matrix();
  if (f.rows() != m.dim) throw DimensionMismatch("F does not match module dimension");
  const Matrix eye = Matrix::Identity(m.dim, m.dim);
  res.f_hermiticity = std::max(m.F.asymmetry(), hermiticity_residual(f));
  res.f_involution = max_entry_diff(multiply(f, f), eye);
  for (const auto& g : m.unitaries) {
    if (g.matrix.rows() != m.dim || g.matrix.cols() != m.dim) {
      throw DimensionMismatch("generator " + g.label + " does not match module dimension");
    }
    res.unitarity.push_back(unitarity_residual(g.matrix));
  }
  if (m.group.kind() == GroupKind::free_abelian) {
    for (std::size_t a = 0; a < m.unitaries.size(); ++a) {
      for (std::size_t b = a + 1; b < m.unitaries.size(); ++b) {
        res.commutation.push_back(
            max_entry(commutator(m.unitaries[a].matrix, m.unitaries[b].matrix)));
      }
    }
  } else if (!m.unitaries.empty()) {
    Matrix power = eye;
    for (std::int64_t i = 0; i < m.group.order(); ++i) power = multiply(m.unitaries[0].matrix, power);
    res.relation = max_entry_diff(power, eye);
  }
  return res;
}

Matrix generator_commutator(const FredholmModule& m, int k) {
  return commutator(m.F.matrix(), m.unitaries.at(static_cast<std::size_t>(k)).matrix);
}

Matrix interior_commutator(const FredholmModule& m, int k) {
  const Matrix c = generator_commutator(m, k);
  if (m.interior_mask.empty()) return c;
  return masked(c, m.interior_mask);
}

SummabilityReport summability_report(const FredholmModule& m) {
  SummabilityReport report;
  double largest = 0.0;
  for (int k = 0; k < static_cast<int>(m.unitaries.size()); ++k) {
    GeneratorSummability g;
    g.label = m.unitaries[k].label;
    g.singular_values = singular_values(interior_commutator(m, k));
    g.operator_norm = g.singular_values.empty() ? 0.0 : g.singular_values.front();
    largest = std::max(largest, g.operator_norm);
    report.generators.push_back(std::move(g));
  }
  if (!(largest > kZeroThreshold)) {
    throw DegenerateModule("every generator commutes with F; the module is degenerate");
  }
  double p = 1.0;
  for (auto& g : report.generators) {
    try {
      g.fit = fit_decay(g.singular_values, kZeroThreshold * largest);
      if (std::isfinite(g.fit->implied_order)) p = std::max(p, g.fit->implied_order);
    } catch (const DomainError&) {
      g.fit.reset();  // finite rank: no asymptotic regime to fit
    }
  }
  report.declared_p = p;
  for (auto& g : report.generators) g.weak_stat = weak_schatten_stat(g.singular_values, p);
  return report;
}

FredholmModule load_module(const std::filesystem::path& path) {
  FredholmModule m = module_from_json(read_json(path));
  const AxiomResiduals res = validate_axioms(m);
  auto fail = [&](const std::string& what, double value) {
    throw AxiomViolation(path.string() + ": " + what + " = " + std::to_string(value) +
                             " exceeds tolerance",
                         value);
  };
  if (res.f_hermiticity > kModuleAxiomTol) fail("|F - F*|", res.f_hermiticity);
  if (res.f_involution > kModuleAxiomTol) fail("|F^2 - I|", res.f_involution);
  for (std::size_t k = 0; k < res.unitarity.size(); ++k) {
    if (res.unitarity[k] > kModuleAxiomTol) {
      fail("|u*u - I| for " + m.unitaries[k].label, res.unitarity[k]);
    }
  }
  for (double c : res.commutation) {
    if (c > kModuleAxiomTol) fail("generator commutation residual", c);
  }
  if (res.relation > kModuleAxiomTol) fail("|u^n - I|", res.relation);
  m.metadata["axiom_residuals"] = {
      {"f_hermiticity", res.f_hermiticity},
      {"f_involution", res.f_involution},
      {"unitarity", res.unitarity},
      {"commutation", res.commutation},
      {"relation", res.relation},
  };
  return m;
}

void save_module(const FredholmModule& m, const std::filesystem::path& path) {
  write_json(path, module_to_json(m));
}

}  // namespace spectral_lift

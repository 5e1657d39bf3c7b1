#pragma once
// Small hand-built modules shared by several suites.

#include <filesystem>
#include <random>
#include <string>

#include "spectral_lift/module_factory.hpp"

namespace fixture {

using namespace spectral_lift;

// Circle module of radius n plus a block of size `extra` on which F = I and u
// acts as the identity. The block is a common kernel of every commutator.
inline FredholmModule circle_with_inert_block(int n, Index extra = 2) {
  const FredholmModule c = build_circle_module(n);
  FredholmModule m;
  m.dim = c.dim + extra;
  Matrix f = Matrix::Identity(m.dim, m.dim);
  f.topLeftCorner(c.dim, c.dim) = c.F.matrix();
  m.F = HermitianOperator(f);
  Matrix u = Matrix::Identity(m.dim, m.dim);
  u.topLeftCorner(c.dim, c.dim) = c.unitaries[0].matrix;
  m.unitaries.push_back({"u1", u});
  m.group = c.group;
  m.interior_mask = c.interior_mask;
  for (Index i = c.dim; i < m.dim; ++i) m.interior_mask.push_back(i);
  m.metadata = {{"example", "circle+block"}, {"truncation_radius", n}};
  return m;
}

// Diagonal F and the cyclic shift on Z/n: a finite-group module.
inline FredholmModule cyclic_module(int n) {
  FredholmModule m;
  m.dim = n;
  std::vector<double> s(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) s[static_cast<std::size_t>(i)] = i < n / 2 ? -1.0 : 1.0;
  m.F = HermitianOperator::diagonal(s);
  Matrix u = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) u((i + 1) % n, i) = 1.0;
  m.unitaries.push_back({"u1", u});
  m.group = GroupSpec::cyclic(n);
  return m;
}

inline std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "spectral_lift_tests";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace fixture

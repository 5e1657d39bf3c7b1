#include "spectral_lift/interchange.hpp"

#include <fstream>
#include <sstream>

#include "spectral_lift/errors.hpp"

namespace spectral_lift {

using nlohmann::json;

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const json& j) {
  if (!j.is_array()) throw SchemaError("matrix must be an array of rows");
  const Index rows = static_cast<Index>(j.size());
  if (rows == 0) return Matrix(0, 0);
  if (!j[0].is_array()) throw SchemaError("matrix row 0 is not an array");
  const Index cols = static_cast<Index>(j[0].size());
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    const json& row = j[i];
    if (!row.is_array() || static_cast<Index>(row.size()) != cols) {
      throw SchemaError("matrix row " + std::to_string(i) + " has the wrong length");
    }
    for (Index c = 0; c < cols; ++c) {
      const json& e = row[c];
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
        throw SchemaError("matrix entry (" + std::to_string(i) + ", " + std::to_string(c) +
                          ") must be [re, im]");
      }
      m(i, c) = Complex(e[0].get<double>(), e[1].get<double>());
    }
  }
  return m;
}

namespace {

json group_to_json(const GroupSpec& g) {
  json out;
  if (g.kind() == GroupKind::cyclic) {
    out["kind"] = "cyclic";
    out["order"] = g.order();
  } else {
    out["kind"] = "free-abelian";
    out["rank"] = g.rank();
  }
  out["labels"] = g.generator_labels();
  return out;
}

Matrix square(const json& j, Index dim, const std::string& what) {
  Matrix m = matrix_from_json(j);
  if (m.rows() != dim || m.cols() != dim) {
    throw SchemaError(what + " is " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                      ", expected " + std::to_string(dim) + "x" + std::to_string(dim));
  }
  return m;
}

HermitianOperator hermitian(const json& j, Index dim, const std::string& what) {
  try {
    return HermitianOperator(square(j, dim, what));
  } catch (const DomainError& e) {
    throw SchemaError(what + ": " + e.what());
  }
}

}  // namespace

json module_to_json(const FredholmModule& m) {
  json unitaries = json::object();
  json order = json::array();
  for (const auto& g : m.unitaries) {
    unitaries[g.label] = matrix_to_json(g.matrix);
    order.push_back(g.label);
  }
  return {
      {"dim", m.dim},
      {"F", matrix_to_json(m.F.matrix())},
      {"unitaries", unitaries},
      {"generator_order", order},
      {"group", group_to_json(m.group)},
      {"interior_mask", m.interior_mask},
      {"metadata", m.metadata},
  };
}

FredholmModule module_from_json(const json& j) {
  try {
    if (!j.is_object()) throw SchemaError("module must be a JSON object");
    FredholmModule m;
    m.dim = j.at("dim").get<Index>();
    if (m.dim < 1) throw SchemaError("dim must be >= 1");
    // Asymmetry is kept on the operator and judged with the other axioms.
    m.F = HermitianOperator::symmetrized(square(j.at("F"), m.dim, "F"));

    const json& u = j.at("unitaries");
    if (!u.is_object() || u.empty()) throw SchemaError("unitaries must be a non-empty object");
    std::vector<std::string> labels;
    if (j.contains("generator_order")) {
      labels = j["generator_order"].get<std::vector<std::string>>();
    } else {
      for (auto it = u.begin(); it != u.end(); ++it) labels.push_back(it.key());
    }
    for (const auto& label : labels) {
      if (!u.contains(label)) throw SchemaError("unitary '" + label + "' is missing");
      m.unitaries.push_back({label, square(u.at(label), m.dim, "unitary " + label)});
    }

    const json& g = j.at("group");
    const std::string kind = g.at("kind").get<std::string>();
    if (kind == "free-abelian") {
      const int rank = g.at("rank").get<int>();
      if (rank != static_cast<int>(labels.size())) {
        throw SchemaError("group rank " + std::to_string(rank) + " does not match " +
                          std::to_string(labels.size()) + " unitaries");
      }
      m.group = GroupSpec::free_abelian(rank, labels);
    } else if (kind == "cyclic") {
      if (labels.size() != 1) throw SchemaError("a cyclic group takes exactly one unitary");
      m.group = GroupSpec::cyclic(g.at("order").get<std::int64_t>(), labels.front());
    } else {
      throw SchemaError("unknown group kind '" + kind + "'");
    }

    if (j.contains("interior_mask") && !j["interior_mask"].is_null()) {
      m.interior_mask = j["interior_mask"].get<std::vector<Index>>();
      for (Index i : m.interior_mask) {
        if (i < 0 || i >= m.dim) throw SchemaError("interior_mask index out of range");
      }
    }
    if (j.contains("metadata") && j["metadata"].is_object()) m.metadata.update(j["metadata"]);
    return m;
  } catch (const json::exception& e) {
    throw SchemaError(std::string("module: ") + e.what());
  } catch (const DomainError& e) {
    throw SchemaError(std::string("module: ") + e.what());
  }
}

json triple_to_json(const SpectralTriple& t) {
  return {
      {"dim", t.D.dim()},
      {"D", matrix_to_json(t.D.matrix())},
      {"absD", matrix_to_json(t.abs_d.matrix())},
      {"F", matrix_to_json(t.F.matrix())},
      {"P0", matrix_to_json(t.P0)},
      {"P1", matrix_to_json(t.P1)},
      {"theta", matrix_to_json(t.theta.matrix())},
      {"provenance", to_json(t.provenance)},
  };
}

SpectralTriple triple_from_json(const json& j) {
  try {
    SpectralTriple t;
    const Index dim = j.at("dim").get<Index>();
    t.D = hermitian(j.at("D"), dim, "D");
    t.abs_d = hermitian(j.at("absD"), dim, "absD");
    t.F = hermitian(j.at("F"), dim, "F");
    t.P0 = square(j.at("P0"), dim, "P0");
    t.P1 = square(j.at("P1"), dim, "P1");
    t.theta = hermitian(j.at("theta"), dim, "theta");
    t.provenance = provenance_from_json(j.at("provenance"));
    return t;
  } catch (const json::exception& e) {
    throw SchemaError(std::string("triple: ") + e.what());
  }
}

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw SchemaError(path.string() + ": " + e.what());
  }
}

void write_json(const std::filesystem::path& path, const json& j) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << j.dump(1) << '\n';
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace spectral_lift

#pragma once
// JSON interchange for modules and lifted triples.
//
// A complex matrix is a row-major array of rows, each entry [re, im].

#include <filesystem>

#include <json.hpp>

#include "spectral_lift/lift_engine.hpp"
#include "spectral_lift/module_factory.hpp"

namespace spectral_lift {

nlohmann::json matrix_to_json(const Matrix& m);
/// Throws SchemaError on ragged rows or non-numeric entries.
Matrix matrix_from_json(const nlohmann::json& j);

nlohmann::json module_to_json(const FredholmModule& m);
/// Parses without validating the axioms (load_module does that).
FredholmModule module_from_json(const nlohmann::json& j);

nlohmann::json triple_to_json(const SpectralTriple& t);
SpectralTriple triple_from_json(const nlohmann::json& j);

/// Throw IoError when the file cannot be read / written, SchemaError on bad JSON.
nlohmann::json read_json(const std::filesystem::path& path);
void write_json(const std::filesystem::path& path, const nlohmann::json& j);

}  // namespace spectral_lift

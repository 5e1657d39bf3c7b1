#pragma once
// Flat CSV / JSON renderings of verification and sweep results. Numbers are
// written with 17 significant digits so that files round-trip exactly.

#include <string>
#include <vector>

#include <json.hpp>

#include "spectral_lift/verifier.hpp"

namespace spectral_lift {

std::string format_number(double x);

struct CheckRow {
  std::string name;
  double value = 0.0;
  std::string threshold;   // empty for informational rows
  bool pass = true;
};

std::vector<CheckRow> check_rows(const VerificationReport& r);
std::string rows_to_csv(const std::vector<CheckRow>& rows);

nlohmann::json to_json(const VerificationReport& r);
nlohmann::json to_json(const SweepResult& s);

/// One row per size; runtimes are left out so that reruns are bit-identical.
std::string sweep_to_csv(const SweepResult& s);
std::string sweep_timing_csv(const SweepResult& s);
/// Columns m, mu_theta, mu_G.
std::string decay_csv(const SweepRow& row);

}  // namespace spectral_lift

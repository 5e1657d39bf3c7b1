#include "spectral_lift/cli_driver.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include "spectral_lift/errors.hpp"
#include "spectral_lift/interchange.hpp"
#include "spectral_lift/lift_engine.hpp"
#include "spectral_lift/module_factory.hpp"
#include "spectral_lift/report.hpp"
#include "spectral_lift/verifier.hpp"

namespace spectral_lift {

namespace {

namespace fs = std::filesystem;

struct RunConfig {
  std::string example = "circle";
  std::vector<int> sizes;
  std::optional<double> p;
  std::string mode = "schatten";
  std::optional<int> ball_radius;
  double scale_margin = 0.1;
  double kernel_tol = 1e-15;
  bool concave_range = false;
  std::uint64_t seed = kDefaultSeed;
  std::string out;
  std::string report;
  std::string module;
  std::string triple;
};

// Bad user input, reported with exit code 2.
struct UsageError : Error {
  using Error::Error;
};

LiftConfig lift_config(const RunConfig& rc) {
  LiftConfig cfg;
  cfg.p = rc.p;
  cfg.mode = summability_mode_from_string(rc.mode);
  cfg.ball_radius = rc.ball_radius;
  cfg.scale_margin = rc.scale_margin;
  cfg.kernel_tol = rc.kernel_tol;
  cfg.concave_range = rc.concave_range;
  try {
    cfg.validate();
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
  return cfg;
}

void check_example(const std::string& name, int n) {
  if (n < 2) throw UsageError("--size must be >= 2, got " + std::to_string(n));
  if (name != "circle" && name != "torus2") {
    throw UsageError("unknown example '" + name + "' (expected circle|torus2)");
  }
}

FredholmModule build_example(const std::string& name, int n) {
  check_example(name, n);
  return name == "circle" ? build_circle_module(n) : build_torus_module(2, n);
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("write failed for " + path.string());
}

fs::path sibling(const fs::path& path, const std::string& suffix) {
  fs::path out = path;
  out.replace_extension();
  out += suffix;
  return out;
}

void require(const std::string& value, const char* flag) {
  if (value.empty()) throw UsageError(std::string(flag) + " is required");
}

int cmd_build(const RunConfig& rc, std::ostream& out) {
  require(rc.out, "--out");
  if (rc.sizes.size() != 1) throw UsageError("build takes exactly one --size");
  const FredholmModule m = build_example(rc.example, rc.sizes.front());
  const AxiomResiduals res = validate_axioms(m);
  save_module(m, rc.out);
  out << "module " << rc.example << " N=" << rc.sizes.front() << " dim=" << m.dim << '\n';
  out << "residual |F-F*| " << format_number(res.f_hermiticity) << '\n';
  out << "residual |F^2-I| " << format_number(res.f_involution) << '\n';
  for (std::size_t k = 0; k < res.unitarity.size(); ++k) {
    out << "residual |u*u-I| " << m.unitaries[k].label << ' ' << format_number(res.unitarity[k]) << '\n';
  }
  for (double c : res.commutation) out << "residual commutation " << format_number(c) << '\n';
  if (m.group.kind() == GroupKind::cyclic) out << "residual |u^n-I| " << format_number(res.relation) << '\n';
  out << "wrote " << rc.out << '\n';
  return kExitOk;
}

int cmd_lift(const RunConfig& rc, std::ostream& out) {
  require(rc.module, "--module");
  require(rc.out, "--out");
  const LiftConfig cfg = lift_config(rc);
  const FredholmModule m = load_module(rc.module);
  const SpectralTriple t = build_triple(m, cfg);
  write_json(rc.out, triple_to_json(t));
  const auto& p = t.provenance;
  out << "sigma " << format_number(p.sigma) << '\n';
  out << "ball_radius " << p.resolved.ball_radius << '\n';
  out << "tail_bound " << format_number(p.resolved.tail_bound) << '\n';
  out << "kernel_dim " << p.kernel_dim << '\n';
  out << "p " << format_number(p.resolved.p) << '\n';
  for (const auto& w : p.warnings) out << "warning: " << w << '\n';
  out << "wrote " << rc.out << '\n';
  return kExitOk;
}

int cmd_verify(const RunConfig& rc, std::ostream& out) {
  require(rc.triple, "--triple");
  require(rc.module, "--module");
  require(rc.report, "--report");
  const FredholmModule m = load_module(rc.module);
  const SpectralTriple t = triple_from_json(read_json(rc.triple));
  if (t.D.dim() != m.dim) {
    throw DimensionMismatch("triple has dimension " + std::to_string(t.D.dim()) +
                            ", module has " + std::to_string(m.dim));
  }
  VerifyOptions opts;
  opts.seed = rc.seed;
  const VerificationReport r = verify(t, m, opts);
  const auto rows = check_rows(r);
  write_text(rc.report, rows_to_csv(rows));
  write_json(sibling(rc.report, ".json"), to_json(r));
  for (const auto& row : rows) {
    out << (row.pass ? "PASS " : "FAIL ") << row.name << ' ' << format_number(row.value);
    if (!row.threshold.empty()) out << " (" << row.threshold << ')';
    out << '\n';
  }
  out << (r.passed() ? "all hard checks pass" : "verification FAILED") << '\n';
  return r.passed() ? kExitOk : kExitFailure;
}

int cmd_sweep(const RunConfig& rc, std::ostream& out) {
  require(rc.report, "--report");
  if (rc.sizes.size() < 2) throw UsageError("sweep needs at least two sizes");
  for (std::size_t i = 1; i < rc.sizes.size(); ++i) {
    if (rc.sizes[i] <= rc.sizes[i - 1]) throw UsageError("sweep sizes must ascend");
  }
  for (int n : rc.sizes) check_example(rc.example, n);
  const LiftConfig cfg = lift_config(rc);
  const std::string example = rc.example;
  const SweepResult s = commutator_norm_sweep(
      [&](int n) { return build_example(example, n); }, rc.sizes, cfg);
  const fs::path report(rc.report);
  write_text(report, sweep_to_csv(s));
  write_json(sibling(report, ".json"), to_json(s));
  write_text(sibling(report, ".timing.csv"), sweep_timing_csv(s));
  for (const auto& row : s.rows) {
    write_text(sibling(report, ".decay." + std::to_string(row.size) + ".csv"), decay_csv(row));
    out << "N=" << row.size << " dim=" << row.dim;
    for (std::size_t k = 0; k < s.labels.size(); ++k) {
      out << " |[D," << s.labels[k] << "]|=" << format_number(row.commutator_norms[k]);
    }
    out << " lambda=" << format_number(row.lambda) << " seconds=" << format_number(row.seconds) << '\n';
  }
  out << "max consecutive ratio " << format_number(s.max_ratio) << (s.bounded ? " (bounded)" : " (NOT bounded)")
      << '\n';
  return s.bounded ? kExitOk : kExitFailure;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Lift Fredholm modules over polynomial-growth groups to spectral triples"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key = value file; flags override it");

  RunConfig rc;
  app.add_option("--example", rc.example, "circle | torus2")->check(CLI::IsMember({"circle", "torus2"}));
  app.add_option("--size", rc.sizes, "truncation radius N (several for sweep)")->delimiter(',');
  app.add_option("--p", rc.p, "summability exponent (default: the module's declared p)");
  app.add_option("--mode", rc.mode, "schatten | weak")->check(CLI::IsMember({"schatten", "weak"}));
  app.add_option("--ball-radius", rc.ball_radius, "averaging radius K (default max(12, N))");
  app.add_option("--scale-margin", rc.scale_margin, "margin in (0, 1)");
  app.add_option("--kernel-tol", rc.kernel_tol, "relative kernel threshold");
  app.add_flag("--concave-range", rc.concave_range,
               "scale G so the averaged metric stays where (f^-1)^q is concave");
  app.add_option("--seed", rc.seed, "master seed for randomized checks")->envname("SPECTRAL_LIFT_SEED");
  app.add_option("--out", rc.out, "output file");
  app.add_option("--report", rc.report, "report CSV (JSON written alongside)");
  app.add_option("--module", rc.module, "module interchange file");
  app.add_option("--triple", rc.triple, "triple interchange file");

  auto* build = app.add_subcommand("build", "write an example module");
  auto* lift = app.add_subcommand("lift", "lift a module to a spectral triple");
  auto* verify_cmd = app.add_subcommand("verify", "verify a lifted triple");
  auto* sweep = app.add_subcommand("sweep", "commutator norms across truncation sizes");
  for (auto* sub : {build, lift, verify_cmd, sweep}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (build->parsed()) return cmd_build(rc, out);
    if (lift->parsed()) return cmd_lift(rc, out);
    if (verify_cmd->parsed()) return cmd_verify(rc, out);
    return cmd_sweep(rc, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const IoError& e) {
    err << "io error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const SchemaError& e) {
    err << "bad input: " << e.what() << '\n';
    return kExitUsage;
  } catch (const AxiomViolation& e) {
    err << "bad module: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DimensionMismatch& e) {
    err << "dimension mismatch: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace spectral_lift

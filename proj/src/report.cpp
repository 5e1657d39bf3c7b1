#include "spectral_lift/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace spectral_lift {

using nlohmann::json;

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

// thresholds and sample points are short decimal literals; print them as such
std::string short_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

std::string le(double t) { return "<= " + short_number(t); }
std::string ge(double t) { return ">= " + short_number(t); }

json number(double x) {
  // JSON has no inf/nan; they become null.
  return std::isfinite(x) ? json(x) : json(nullptr);
}

json numbers(const std::vector<double>& xs) {
  json out = json::array();
  for (double x : xs) out.push_back(number(x));
  return out;
}

json fit_json(const DecayFit& f) {
  return {{"window_lo", f.window_lo},       {"window_hi", f.window_hi},
          {"effective_count", f.effective_count}, {"fitted_alpha", number(f.fitted_alpha)},
          {"implied_order", number(f.implied_order)}, {"log_constant", number(f.log_constant)},
          {"r_squared", number(f.r_squared)}};
}

json t2_json(const T2Result& c) {
  return {{"label", c.label}, {"c", number(c.c)}, {"finite", c.finite},
          {"violation", number(c.violation)}, {"recheck", c.recheck}};
}

json trials_json(const TrialCounts& c) {
  return {{"trials", c.trials}, {"passed", c.passed}, {"failed", c.failed},
          {"worst_margin", number(c.worst_margin)}, {"failing_seeds", c.failing_seeds}};
}

}  // namespace

std::vector<CheckRow> check_rows(const VerificationReport& r) {
  std::vector<CheckRow> rows;
  rows.push_back({"sign_residual", r.sign_residual, le(kSignTol), r.sign_residual <= kSignTol});
  rows.push_back({"f_abs_d_commutator", r.f_abs_d_residual, le(kSignTol), r.f_abs_d_residual <= kSignTol});
  rows.push_back({"d_asymmetry", r.d_asymmetry, le(kSignTol), r.d_asymmetry <= kSignTol});
  for (std::size_t k = 0; k < r.labels.size(); ++k) {
    rows.push_back({"d_commutator_norm." + r.labels[k], r.commutator_norms[k], "", true});
  }
  rows.push_back({"t1_lambda", r.t1.lambda, "> 0", r.t1.pass && r.t1.lambda > 0.0});
  for (const auto& c : r.t2) {
    rows.push_back({"t2_c_u." + c.label, c.c, "< " + short_number(kBisectionCeiling), c.finite && c.recheck});
  }
  rows.push_back({"t3_implied_order", r.t3.fit.implied_order, le(r.t3.target), r.t3.pass});
  rows.push_back({"t3_partial_schatten_sum", r.t3.partial_sum, "", true});
  rows.push_back({"chain_concave_range", r.chain.hypothesis ? 1.0 : 0.0, "", true});
  rows.push_back({"chain_margin", r.chain.margin, ge(0.0), r.chain.holds || !r.chain.hypothesis});
  rows.push_back({"chain_constant", r.chain.constant, "", true});
  rows.push_back({"sandwich_margin", r.sandwich.sandwich_margin, ge(-kSandwichTol),
                  r.sandwich.sandwich_margin >= -kSandwichTol});
  rows.push_back({"integral_residual", r.sandwich.integral_residual, le(kQuadratureTol),
                  r.sandwich.integral_residual <= kQuadratureTol});
  for (const auto& p : r.sandwich.parts) {
    rows.push_back({"decay_margin." + p.label, p.decay_margin, ge(0.0), p.decay_holds});
  }
  rows.push_back({"equivalence_lambda", r.equivalence.lambda, "> 0", r.equivalence.lambda > 0.0});
  for (const auto& c : r.equivalence.c_u) {
    rows.push_back({"equivalence_c_u." + c.label, c.c, "< " + short_number(kBisectionCeiling), c.finite});
  }
  rows.push_back({"rotfeld_failures", static_cast<double>(r.rotfeld.failed), "== 0", r.rotfeld.failed == 0});
  rows.push_back({"loewner_failures", static_cast<double>(r.loewner.monotone.failed), "== 0",
                  r.loewner.monotone.failed == 0});
  rows.push_back({"pick_min_imag", r.loewner.min_pick_imag, ge(-kPickTol), r.loewner.pick_pass});
  for (const auto& s : r.log_ratio.samples) {
    rows.push_back({"log_ratio@" + short_number(s.t), s.ratio, "< 1", s.ratio < 1.0});
  }
  rows.push_back({"log_ratio_increasing", r.log_ratio.increasing ? 1.0 : 0.0, "== 1", r.log_ratio.increasing});
  return rows;
}

std::string rows_to_csv(const std::vector<CheckRow>& rows) {
  std::ostringstream os;
  os << "name,value,threshold,pass\n";
  for (const auto& r : rows) {
    os << r.name << ',' << format_number(r.value) << ',' << r.threshold << ','
       << (r.pass ? "true" : "false") << '\n';
  }
  return os.str();
}

json to_json(const VerificationReport& r) {
  json t2 = json::array();
  for (const auto& c : r.t2) t2.push_back(t2_json(c));
  json parts = json::array();
  for (const auto& p : r.sandwich.parts) {
    parts.push_back({{"label", p.label}, {"commutator_norm", number(p.commutator_norm)},
                     {"sandwich_margin", number(p.sandwich_margin)},
                     {"decay_margin", number(p.decay_margin)}, {"decay_holds", p.decay_holds}});
  }
  json p3c = json::array();
  for (const auto& c : r.equivalence.c_u) p3c.push_back(t2_json(c));
  json log_ratio = json::array();
  for (const auto& s : r.log_ratio.samples) log_ratio.push_back({{"t", s.t}, {"ratio", s.ratio}});
  return {
      {"passed", r.passed()},
      {"generators", r.labels},
      {"p_hat", r.p_hat},
      {"growth_order", r.growth_order},
      {"seed", r.seed},
      {"sign_residual", number(r.sign_residual)},
      {"f_abs_d_residual", number(r.f_abs_d_residual)},
      {"d_asymmetry", number(r.d_asymmetry)},
      {"commutator_norms", numbers(r.commutator_norms)},
      {"T1", {{"lambda", number(r.t1.lambda)}, {"capped", r.t1.capped},
              {"recheck_min_eigenvalue", number(r.t1.recheck.min_eigenvalue)}, {"pass", r.t1.pass}}},
      {"T2", t2},
      {"T3", {{"fit", fit_json(r.t3.fit)}, {"q", r.t3.q}, {"target", r.t3.target},
              {"partial_sum", number(r.t3.partial_sum)}, {"pass", r.t3.pass}}},
      {"chain", {{"q", r.chain.q}, {"terms", r.chain.terms}, {"lhs", number(r.chain.lhs)},
                 {"rhs", number(r.chain.rhs)}, {"allowance", number(r.chain.allowance)},
                 {"margin", number(r.chain.margin)}, {"holds", r.chain.holds},
                 {"constant", number(r.chain.constant)},
                 {"averaged_top", number(r.chain.averaged_top)},
                 {"concavity_bound", number(r.chain.concavity_bound)},
                 {"hypothesis", r.chain.hypothesis}}},
      {"sandwich", {{"parts", parts}, {"sandwich_margin", number(r.sandwich.sandwich_margin)},
                 {"integral_residual", number(r.sandwich.integral_residual)}, {"pass", r.sandwich.pass}}},
      {"equivalence", {{"c_u", p3c}, {"lambda", number(r.equivalence.lambda)},
                 {"t_commutator_norms", numbers(r.equivalence.t_commutator_norms)},
                 {"ft_norms", numbers(r.equivalence.ft_norms)}, {"holds", r.equivalence.holds}}},
      {"rotfeld", trials_json(r.rotfeld)},
      {"loewner", {{"monotone", trials_json(r.loewner.monotone)},
                   {"pick_samples", r.loewner.pick_samples},
                   {"min_pick_imag", number(r.loewner.min_pick_imag)},
                   {"pick_pass", r.loewner.pick_pass}}},
      {"log_ratio", {{"samples", log_ratio}, {"increasing", r.log_ratio.increasing}, {"below_one", r.log_ratio.below_one}}},
  };
}

json to_json(const SweepResult& s) {
  json rows = json::array();
  for (const auto& r : s.rows) {
    rows.push_back({{"size", r.size}, {"dim", r.dim}, {"kernel_dim", r.kernel_dim},
                    {"commutator_norms", numbers(r.commutator_norms)},
                    {"theta_implied_order", number(r.theta_implied_order)},
                    {"lambda", number(r.lambda)}, {"c_u", numbers(r.c_u)},
                    {"sign_residual", number(r.sign_residual)}});
  }
  return {{"generators", s.labels}, {"rows", rows}, {"max_ratio", number(s.max_ratio)},
          {"bounded", s.bounded}};
}

std::string sweep_to_csv(const SweepResult& s) {
  std::ostringstream os;
  os << "size,dim,kernel_dim";
  for (const auto& l : s.labels) os << ",d_commutator_norm_" << l;
  os << ",theta_implied_order,lambda";
  for (const auto& l : s.labels) os << ",c_u_" << l;
  os << ",sign_residual\n";
  for (const auto& r : s.rows) {
    os << r.size << ',' << r.dim << ',' << r.kernel_dim;
    for (double x : r.commutator_norms) os << ',' << format_number(x);
    os << ',' << format_number(r.theta_implied_order) << ',' << format_number(r.lambda);
    for (double x : r.c_u) os << ',' << format_number(x);
    os << ',' << format_number(r.sign_residual) << '\n';
  }
  return os.str();
}

std::string sweep_timing_csv(const SweepResult& s) {
  std::ostringstream os;
  os << "size,seconds\n";
  for (const auto& r : s.rows) os << r.size << ',' << format_number(r.seconds) << '\n';
  return os.str();
}

std::string decay_csv(const SweepRow& row) {
  std::ostringstream os;
  os << "m,mu_theta,mu_G\n";
  for (std::size_t m = 0; m < row.mu_theta.size(); ++m) {
    os << m << ',' << format_number(row.mu_theta[m]) << ','
       << format_number(m < row.mu_g.size() ? row.mu_g[m] : 0.0) << '\n';
  }
  return os.str();
}

}  // namespace spectral_lift

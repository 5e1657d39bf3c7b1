#include "spectral_lift/group_model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>

#include "spectral_lift/errors.hpp"

namespace spectral_lift {

namespace {

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double result = 1.0;
  for (int i = 1; i <= k; ++i) result = result * (n - k + i) / i;
  return result;
}

double free_abelian_ball_size(int rank, int k) {
  if (k < 0) return 0.0;
  double total = 0.0;
  for (int i = 0; i <= std::min(rank, k); ++i) {
    total += std::ldexp(binomial(rank, i), i) * binomial(k, i);
  }
  return total;
}

void enumerate_l1(int coordinate, int budget, std::vector<std::int64_t>& current,
                  std::vector<GroupElement>& out) {
  if (coordinate == static_cast<int>(current.size())) {
    out.push_back(GroupElement{current});
    return;
  }
  for (int a = -budget; a <= budget; ++a) {
    current[coordinate] = a;
    enumerate_l1(coordinate + 1, budget - std::abs(a), current, out);
  }
  current[coordinate] = 0;
}

}  // namespace

GroupSpec::GroupSpec(GroupKind kind, std::int64_t order, std::vector<std::string> labels)
    : kind_(kind), order_(order), labels_(std::move(labels)) {}

GroupSpec GroupSpec::free_abelian(int rank, std::vector<std::string> labels) {
  if (rank < 1) throw DomainError("free abelian rank must be >= 1", rank);
  if (labels.empty()) {
    for (int i = 1; i <= rank; ++i) labels.push_back("u" + std::to_string(i));
  }
  if (static_cast<int>(labels.size()) != rank) {
    throw DimensionMismatch("generator label count " + std::to_string(labels.size()) +
                            " differs from rank " + std::to_string(rank));
  }
  return GroupSpec(GroupKind::free_abelian, 0, std::move(labels));
}

GroupSpec GroupSpec::cyclic(std::int64_t order, std::string label) {
  if (order < 2) throw DomainError("cyclic order must be >= 2", static_cast<double>(order));
  return GroupSpec(GroupKind::cyclic, order, {std::move(label)});
}

double GroupSpec::growth_constant() const noexcept {
  return kind_ == GroupKind::cyclic ? static_cast<double>(order_) : std::ldexp(1.0, rank());
}

GroupModel::GroupModel(GroupSpec spec, std::size_t enumeration_cap)
    : spec_(std::move(spec)), cap_(enumeration_cap) {}

GroupElement GroupModel::identity() const {
  return GroupElement{std::vector<std::int64_t>(spec_.generator_count(), 0)};
}

GroupElement GroupModel::generator(int index) const {
  if (index < 0 || index >= spec_.generator_count()) {
    throw DimensionMismatch("generator index " + std::to_string(index) + " out of range");
  }
  GroupElement g = identity();
  g.exponents[index] = 1;
  return canonical(g);
}

GroupElement GroupModel::canonical(const GroupElement& g) const {
  if (static_cast<int>(g.exponents.size()) != spec_.generator_count()) {
    throw DimensionMismatch("element has " + std::to_string(g.exponents.size()) +
                            " exponents, group has " + std::to_string(spec_.generator_count()) +
                            " generators");
  }
  if (spec_.kind() == GroupKind::free_abelian) return g;
  const std::int64_t n = spec_.order();
  std::int64_t r = g.exponents[0] % n;
  if (r < 0) r += n;
  if (2 * r > n) r -= n;
  return GroupElement{{r}};
}

GroupElement GroupModel::multiply(const GroupElement& a, const GroupElement& b) const {
  GroupElement ca = canonical(a);
  const GroupElement cb = canonical(b);
  for (std::size_t i = 0; i < ca.exponents.size(); ++i) ca.exponents[i] += cb.exponents[i];
  return canonical(ca);
}

GroupElement GroupModel::inverse(const GroupElement& g) const {
  GroupElement c = canonical(g);
  for (auto& e : c.exponents) e = -e;
  return canonical(c);
}

double GroupModel::length(const GroupElement& g) const {
  const GroupElement c = canonical(g);
  std::int64_t total = 0;
  for (auto e : c.exponents) total += e < 0 ? -e : e;
  return static_cast<double>(total);
}

int GroupModel::diameter() const noexcept {
  if (spec_.kind() == GroupKind::free_abelian) return -1;
  return static_cast<int>(spec_.order() / 2);
}

std::size_t GroupModel::ball_size(int k) const {
  if (k < 0) throw DomainError("ball radius must be >= 0", k);
  if (spec_.kind() == GroupKind::cyclic) {
    return static_cast<std::size_t>(std::min<std::int64_t>(spec_.order(), 2 * std::int64_t{k} + 1));
  }
  return static_cast<std::size_t>(free_abelian_ball_size(spec_.rank(), k));
}

void GroupModel::check_cap(int k) const {
  if (ball_size(k) > cap_) {
    throw EnumerationOverflow("ball of radius " + std::to_string(k) + " exceeds enumeration cap " +
                              std::to_string(cap_));
  }
}

std::vector<GroupElement> GroupModel::ball(int k) const {
  check_cap(k);
  std::vector<GroupElement> out;
  out.reserve(ball_size(k));
  if (spec_.kind() == GroupKind::cyclic) {
    const std::int64_t n = spec_.order();
    const std::int64_t lo = -((n - 1) / 2);
    const std::int64_t hi = n / 2;
    for (std::int64_t r = std::max<std::int64_t>(lo, -k); r <= std::min<std::int64_t>(hi, k); ++r) {
      out.push_back(GroupElement{{r}});
    }
    return out;
  }
  std::vector<std::int64_t> current(spec_.rank(), 0);
  enumerate_l1(0, k, current, out);
  return out;
}

GrowthFit GroupModel::fit_growth_order(int k_max) const {
  if (k_max < 3) throw DomainError("fit_growth_order needs k_max >= 3", k_max);
  GrowthFit fit;
  const int k_lo = std::max(1, (k_max + 1) / 2);
  for (int k = 1; k <= k_max; ++k) {
    fit.radii.push_back(k);
    fit.ball_sizes.push_back(ball_size(k));
  }
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < fit.radii.size(); ++i) {
    if (fit.radii[i] < k_lo) continue;
    xs.push_back(std::log1p(static_cast<double>(fit.radii[i])));
    ys.push_back(std::log(static_cast<double>(fit.ball_sizes[i])));
  }
  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  const double slope = sxy / sxx;
  double sse = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (my + slope * (xs[i] - mx));
    sse += r * r;
  }
  fit.fitted_order = std::max(0.0, slope);
  fit.residual = std::sqrt(sse / n);
  return fit;
}

double GroupModel::weight(const GroupElement& g) const { return std::exp(-(1.0 + length(g))); }

double GroupModel::ball_weight(int k) const {
  double total = 0.0;
  for (const auto& g : ball(k)) total += weight(g);
  return total;
}

double GroupModel::weight_tail_bound(int k, int k_max_exact) const {
  if (k < 0) throw DomainError("tail radius must be >= 0", k);
  if (k > k_max_exact) {
    throw DomainError("weight_tail_bound needs K <= k_max_exact", k_max_exact);
  }
  const int diam = diameter();
  double exact = 0.0;
  std::size_t previous = ball_size(k);
  for (int j = k + 1; j <= k_max_exact; ++j) {
    if (diam >= 0 && j > diam) break;
    const std::size_t current = ball_size(j);
    exact += static_cast<double>(current - previous) * std::exp(-(1.0 + j));
    previous = current;
  }
  if (diam >= 0 && k_max_exact >= diam) return exact;

  const double c = spec_.growth_constant();
  const int r = spec_.growth_order();
  double tail = 0.0;
  for (int j = k_max_exact + 1; j < k_max_exact + 100000; ++j) {
    const double term = std::pow(1.0 + j, r) * std::exp(-(1.0 + j));
    tail += term;
    if (j > r && term <= 1e-18 * tail) break;
  }
  return exact + c * tail;
}

}  // namespace spectral_lift

#pragma once
// Finitely generated discrete groups with a word-length function.
//
// Two families ship: free abelian Z^r (length = l1 norm of the exponent vector)
// and cyclic Z/n (length = distance to 0 on the cycle). Both use the standard
// symmetric generating set, so the growth order of Z^r is r and a finite group
// has growth order 0.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace spectral_lift {

enum class GroupKind { free_abelian, cyclic };

class GroupSpec {
 public:
  /// Z with one generator labelled "u1".
  GroupSpec() : GroupSpec(GroupKind::free_abelian, 0, {"u1"}) {}
  static GroupSpec free_abelian(int rank, std::vector<std::string> labels = {});
  static GroupSpec cyclic(std::int64_t order, std::string label = "u1");

  GroupKind kind() const noexcept { return kind_; }
  /// Rank for free abelian groups, 1 for cyclic ones.
  int generator_count() const noexcept { return static_cast<int>(labels_.size()); }
  int rank() const noexcept { return kind_ == GroupKind::free_abelian ? generator_count() : 0; }
  std::int64_t order() const noexcept { return order_; }
  const std::vector<std::string>& generator_labels() const noexcept { return labels_; }
  /// Polynomial growth order r with |B_k| <= C (1+k)^r.
  int growth_order() const noexcept { return rank(); }
  /// The constant C above (2^r for Z^r, n for Z/n).
  double growth_constant() const noexcept;

  friend bool operator==(const GroupSpec&, const GroupSpec&) = default;

 private:
  GroupSpec(GroupKind kind, std::int64_t order, std::vector<std::string> labels);

  GroupKind kind_;
  std::int64_t order_;  // 0 for infinite groups
  std::vector<std::string> labels_;
};

/// Word in the generators. For Z^r this is the canonical exponent vector; for
/// Z/n the single exponent is kept in the canonical range (-n/2, n/2].
struct GroupElement {
  std::vector<std::int64_t> exponents;

  friend bool operator==(const GroupElement&, const GroupElement&) = default;
  friend auto operator<=>(const GroupElement&, const GroupElement&) = default;
};

struct GrowthFit {
  std::vector<int> radii;
  std::vector<std::size_t> ball_sizes;
  double fitted_order = 0.0;
  double residual = 0.0;
};

class GroupModel {
 public:
  static constexpr std::size_t kDefaultEnumerationCap = 1'000'000;

  explicit GroupModel(GroupSpec spec, std::size_t enumeration_cap = kDefaultEnumerationCap);

  const GroupSpec& spec() const noexcept { return spec_; }

  GroupElement identity() const;
  GroupElement generator(int index) const;
  GroupElement multiply(const GroupElement& a, const GroupElement& b) const;
  GroupElement inverse(const GroupElement& g) const;
  /// Throws DimensionMismatch when the exponent vector does not fit the group.
  GroupElement canonical(const GroupElement& g) const;

  double length(const GroupElement& g) const;

  /// Elements with length <= k, lexicographic on exponent vectors.
  std::vector<GroupElement> ball(int k) const;
  /// |B_k| without enumerating.
  std::size_t ball_size(int k) const;

  /// Least-squares slope of log|B_k| against log(1+k) over the upper half
  /// k = ceil(k_max/2)..k_max. Sizes are recorded for every k = 1..k_max.
  GrowthFit fit_growth_order(int k_max) const;

  /// rho(g) = exp(-(1 + L(g)))
  double weight(const GroupElement& g) const;
  /// Sum of rho over B_K.
  double ball_weight(int k) const;
  /// Upper bound on the sum of rho(u) over L(u) > K: exact sphere counts up to
  /// k_max_exact, then C * sum_{k > k_max_exact} (1+k)^r e^{-(1+k)}.
  double weight_tail_bound(int k, int k_max_exact) const;

  /// Smallest radius whose ball is the whole group, or -1 for infinite groups.
  int diameter() const noexcept;

 private:
  void check_cap(int k) const;

  GroupSpec spec_;
  std::size_t cap_;
};

}  // namespace spectral_lift

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "coarsekit/coarse_map.hpp"
#include "coarsekit/expansion.hpp"
#include "coarsekit/rational.hpp"

namespace coarsekit {

// "Eventually" and "cofinite" are read on the truncation: a condition holds
// from some index n0 to the last component, with n0 as small as possible
// and the tail never empty. Every report carries the truncation length.

struct InjectiveConditionReport {
  bool pass = false;
  std::optional<std::size_t> n0;
  std::size_t truncation_length = 0;      // codomain components
  std::vector<std::size_t> preimage_sizes;  // |f^{-1}(Y_n)|
  std::vector<std::size_t> component_sizes;  // |Y_n|
  std::vector<std::size_t> overfull;        // n with |f^{-1}(Y_n)| > |Y_n|
};

/// Least n0 with sum_{n<n0} |f^{-1}(Y_n)| <= sum_{n<n0} |Y_n| and
/// |f^{-1}(Y_n)| <= |Y_n| for every n >= n0.
InjectiveConditionReport check_injective_condition(const CoarseMap& f);

struct CardinalityMismatch {
  std::size_t domain_component = 0;
  std::size_t codomain_component = 0;
  std::size_t domain_size = 0;
  std::size_t codomain_size = 0;
};

enum class ObstructionKind { None, Routing, IndexCollision, Cardinality, LeftoverImbalance };
std::string_view to_string(ObstructionKind kind);

struct Condition2Report {
  bool pass = false;
  std::size_t truncation_length = 0;
  std::optional<std::size_t> n0;
  std::vector<std::size_t> domain_tail;    // N
  std::vector<std::size_t> codomain_tail;  // M = i(N), in the order of N
  std::size_t leftover_x = 0;              // sum over n not in N of |X_n|
  std::size_t leftover_y = 0;              // sum over m not in M of |Y_m|
  RoutingReport routing;

  // Failure diagnostics, taken at the routing index when the check fails.
  ObstructionKind obstruction = ObstructionKind::None;
  std::string description;
  std::vector<CardinalityMismatch> cardinality_mismatches;
  std::vector<std::pair<std::size_t, std::size_t>> index_collisions;  // two n with the same i(n)
};

/// Routing plus cardinality matching: passes iff on some nonempty tail
/// N = [n0, end) the index map i is single valued, injective and size
/// preserving, and the leftover cardinalities agree.
Condition2Report check_bijective_condition(const CoarseMap& f);

struct BijectivizationResult {
  CoarseMap bijection;
  Dist closeness_to_f = 0;
  /// Matching radius used on each n in N, aligned with domain_tail.
  std::vector<Dist> per_component_radius;
  std::vector<std::pair<Dist, Dist>> modulus;          // of the bijection
  std::vector<std::pair<Dist, Dist>> inverse_modulus;  // of its inverse
  /// The last tail component needed a larger radius than every earlier
  /// one; a truncation cannot confirm uniform closeness in that case.
  bool radii_growing = false;
};

/// For each n in N scans the realized distances of Y_{i(n)} upwards until
/// a perfect matching inside the balls B(f x, r) exists; leftovers are
/// paired least first. Throws PreconditionViolated unless report.pass.
BijectivizationResult bijectivize_expander(const CoarseMap& f, const Condition2Report& report);

using PartialMap = std::vector<std::optional<std::size_t>>;

struct SchroederBernsteinResult {
  /// b(x) in {g(x), h^{-1}(x)}; nullopt only for unmatched domain points.
  PartialMap bijection;
  /// True where b uses g (chains that start in X \ im(h) or cycle).
  std::vector<bool> uses_g;
  PointSet unmatched_domain;
  PointSet unmatched_codomain;
  bool bijective() const { return unmatched_domain.empty() && unmatched_codomain.empty(); }
};

/// Koenig's chain classification. g: X -> Y and h: Y -> X are injective and
/// may be partial on a truncation (nullopt entries). Throws NotInjective.
SchroederBernsteinResult sb_bijection(const PartialMap& g, const PartialMap& h);

/// Same, for total maps between unions; `map` is set when b is a bijection.
struct SchroederBernsteinMaps {
  SchroederBernsteinResult chains;
  std::optional<CoarseMap> map;
};
SchroederBernsteinMaps sb_bijection(const CoarseMap& g, const CoarseMap& h);

struct DeviationReport {
  std::size_t m = 0;                 // max fibre size
  Rational max_ratio{0};             // max of lhs / rhs where rhs > 0
  PointSet witness;                  // attaining A
  std::size_t subsets_checked = 0;
  std::size_t violations = 0;        // lhs > rhs; never positive for valid input
};

/// Checks ||A| - |f^{-1}(A)|| <= (m - 1) min{|A|, |Y \ A|} for f: X -> Y with
/// |X| = |Y| = image.size(), over all A (exhaustive) or `samples` random A.
DeviationReport preimage_deviation_check(std::span<const std::size_t> image, std::size_t codomain_size,
                                         bool exhaustive, std::size_t samples = 0, std::uint64_t seed = 0,
                                         std::size_t cap = kDefaultExactCap);

/// k (m - 1) / h. Throws NonpositiveH.
Rational whyte_threshold(std::size_t k, const Rational& h, std::size_t m);

}  // namespace coarsekit

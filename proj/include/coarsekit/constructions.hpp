#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "coarsekit/coarse_map.hpp"
#include "coarsekit/expansion.hpp"
#include "coarsekit/metric.hpp"

namespace coarsekit {

// Levels are numbered from 0; level 0 carries the inclusion of the base.
// Point (x, level) of a stacking of an n-point space has index level * n + x.

struct StackedSpace {
  FiniteSpace base;
  std::size_t levels = 1;
  FiniteSpace metric;

  std::size_t index(std::size_t x, std::size_t level) const { return level * base.size() + x; }
};

/// d((x,i),(z,j)) = d(x,z) + [i != j]. Throws InvalidInput for k = 0.
StackedSpace k_stack(const FiniteSpace& base, std::size_t k);

struct BipartiteDouble {
  GraphSpace graph;
  PointSet side1;  // (x, 1) = x
  PointSet side2;  // (x, 2) = n + x
};

/// Joins (x,1) to (x,2) and (x,1) to (z,2) for every base edge {x, z}.
BipartiteDouble bipartite_double(const GraphSpace& base);

struct DistortionRow {
  Dist base_distance = 0;
  Dist min_candidate = 0;
  Dist max_candidate = 0;
};

struct StackingReport {
  bool labeling_bijective = false;
  /// Level-0 distances grouped by base distance.
  std::vector<DistortionRow> distortion_table;
  Dist inclusion_distortion = 0;  // max |d_cand((x,0),(z,0)) - d_base(x,z)|
  Dist fiber_diameter = 0;        // max_x max_{i,j} d((x,i),(x,j))
};

/// labels[p] = (base point, level) for every candidate point p. Throws
/// BadLabeling when the labels are not a bijection onto base x {0..k-1}.
StackingReport verify_stacking(const FiniteSpace& base, const FiniteSpace& candidate, std::size_t k,
                               std::span<const std::pair<std::size_t, std::size_t>> labels);

/// The whole union as one finite metric space, global indices preserved.
FiniteSpace flatten(const CoarseUnion& space);

/// A union of k-stackings, one per component, glued with the base's gap and
/// basepoints (lifted to level 0). Component n of the stacking has size
/// k |X_n|, local index level * |X_n| + x.
struct StackedUnion {
  UnionPtr base;
  std::size_t levels = 1;
  UnionPtr stacked;

  std::size_t lift(std::size_t base_global, std::size_t level) const;
  /// (base global index, level)
  std::pair<std::size_t, std::size_t> label(std::size_t stacked_global) const;
  std::vector<std::pair<std::size_t, std::size_t>> labels() const;
};

StackedUnion stack_union(const UnionPtr& base, std::size_t k);

/// Reads a union as a k-stacking: component sizes must be multiples of k,
/// and the base is the level-0 restriction of each component. Throws
/// BadLabeling otherwise.
StackedUnion recognize_stacking(const UnionPtr& stacked, std::size_t k);

/// (x, i) -> (f x, i).
CoarseMap stack_map(const CoarseMap& f, const StackedUnion& domain, const StackedUnion& codomain);

/// g(x) = base point of fbar((x, 0)). Throws BadLabeling if fbar does not
/// act between the two stackings.
CoarseMap unstack_map(const CoarseMap& fbar, const StackedUnion& domain, const StackedUnion& codomain);

inline constexpr std::size_t kRegularRetries = 1000;

/// Pairing model with rejection of loops, parallel edges and disconnected
/// outcomes. Throws InfeasibleDegree (n k odd, n <= k, k = 0) or
/// RetriesExhausted.
GraphSpace random_regular(std::size_t n, std::size_t k, std::uint64_t seed,
                          std::size_t retries = kRegularRetries);

struct ExpanderSequence {
  std::vector<GraphSpace> graphs;
  UnionPtr space;
  std::vector<ExpanderCertificate> certificates;
  /// Minimum h_star over exactly certified components.
  std::optional<Rational> min_exact_h;
};

/// Component n is random_regular(sizes[n], k, seed derived from n). Exact
/// certificates up to cap, Estimated (search upper bound) above. Throws
/// InvalidInput unless sizes is nonempty and strictly increasing.
ExpanderSequence expander_sequence(std::span<const std::size_t> sizes, std::size_t k, std::uint64_t seed,
                                   Dist base_gap = 1, std::size_t cap = kDefaultExactCap,
                                   std::size_t budget = kDefaultSearchBudget);

/// Seed of component n in expander_sequence.
std::uint64_t component_seed(std::uint64_t seed, std::size_t n);

}  // namespace coarsekit

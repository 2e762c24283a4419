#pragma once

#include <cstddef>
#include <span>
#include <variant>
#include <vector>

#include "coarsekit/coarse_map.hpp"
#include "coarsekit/metric.hpp"

namespace coarsekit {

/// Left points 0..candidates.size()-1, right points 0..right_size-1;
/// candidates[x] is the finite set Phi(x).
struct SelectionProblem {
  std::size_t right_size = 0;
  std::vector<std::vector<std::size_t>> candidates;
};

/// A set S of left points whose candidate sets jointly have fewer than |S|
/// elements, so no injective selection exists.
struct DeficiencyCertificate {
  PointSet left;
  PointSet candidate_union;
  std::size_t union_size() const noexcept { return candidate_union.size(); }
};

using Selection = std::vector<std::size_t>;
using SelectionResult = std::variant<Selection, DeficiencyCertificate>;

/// Maximum bipartite matching with Hopcroft-Karp phases. When the
/// matching leaves a left point uncovered, the left points reachable by
/// alternating paths from uncovered ones form a Hall violator.
SelectionResult injective_selection(const SelectionProblem& problem);

/// Re-validates a selection or a certificate against the problem.
bool is_valid_selection(const SelectionProblem& problem, const Selection& selection);
bool is_valid_certificate(const SelectionProblem& problem, const DeficiencyCertificate& cert);

/// Selection variant: Phi_r(x) = f(B_X(x, r)). A returned map g satisfies
/// closeness(g, f) <= omega_f(r).
std::variant<CoarseMap, DeficiencyCertificate> injectivize_selection(const CoarseMap& f, Dist r);

struct MinimalInjectivization {
  Dist s_star = 0;
  CoarseMap map;
};

/// Ball variant: the least realized codomain distance s for which
/// Phi(x) = B_Y(f x, s) has a system of distinct representatives, found
/// by binary search. No injective map is closer to f than s_star.
/// Throws Impossible when |domain| > |codomain|.
MinimalInjectivization injectivize_minimal(const CoarseMap& f);

/// Bijection b of equal-size spaces with b(x) in B_Y(f x, r), or a
/// certificate. `image` lists f(x) in Y for every x of X. Throws SizeMismatch.
SelectionResult perfect_matching_pair(const FiniteSpace& X, const FiniteSpace& Y,
                                      std::span<const std::size_t> image, Dist r);

}  // namespace coarsekit

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>

#include "coarsekit/metric.hpp"
#include "coarsekit/rational.hpp"

namespace coarsekit {

inline constexpr std::size_t kDefaultExactCap = 22;
inline constexpr std::size_t kDefaultSearchBudget = 20000;

enum class CertificateMethod { Exact, Falsified, Estimated };
std::string_view to_string(CertificateMethod method);

/// Expansion in the sense |dA| >= h (1 - |A|/|X|) |A| for every A.
///
/// With method == Exact, h_star is the true minimum over nonempty proper A
/// and `witness` is its lexicographically least minimiser. `half_ratio` is
/// the auxiliary statistic min |dA|/|A| over 1 <= |A| <= |X|/2.
/// With Estimated, h_star is the best ratio local search found (an upper
/// bound on the true value); Falsified means a search witness proved the
/// graph misses a requested h.
struct ExpanderCertificate {
  std::size_t k = 0;
  Rational h_star{0};
  PointSet witness;
  CertificateMethod method = CertificateMethod::Exact;
  std::optional<Rational> half_ratio;
  PointSet half_witness;
};

/// |dA| / ((1 - |A|/|X|) |A|). Throws EmptySet / FullSet.
Rational expansion_ratio(const GraphSpace& graph, std::span<const std::size_t> set);

/// Exhaustive minimum over all 2^n - 2 nonempty proper subsets, in Gray
/// code order with incremental boundary upkeep. Throws TooLarge above cap.
ExpanderCertificate cheeger_exact(const GraphSpace& graph, std::size_t cap = kDefaultExactCap);

struct ExpanderVerdict {
  bool holds = false;
  CertificateMethod method = CertificateMethod::Exact;
  std::optional<std::size_t> degree_witness;  // vertex whose degree exceeds k
  std::optional<PointSet> witness;            // subset with ratio < h
  std::optional<Rational> witness_ratio;
  std::optional<Rational> h_star;  // exact mode only
};

/// Decides (k, h)-expansion exactly up to `cap` points. Above the cap a
/// seeded local search is tried first: a witness it finds settles the
/// question negatively; otherwise TooLarge is thrown.
ExpanderVerdict verify_expander(const GraphSpace& graph, std::size_t k, const Rational& h,
                                std::size_t cap = kDefaultExactCap,
                                std::size_t budget = kDefaultSearchBudget, std::uint64_t seed = 0);

struct SearchOutcome {
  Rational best_ratio{0};
  PointSet best_set;
  std::size_t steps = 0;
};

/// Hill-climbs on the expansion ratio from random BFS balls using
/// single-point moves; each evaluated move costs one unit of budget.
/// Stops early once a ratio strictly below `stop_below` is reached.
/// Returns nullopt when the budget allowed no evaluation at all.
std::optional<SearchOutcome> search_min_expansion(const GraphSpace& graph, std::size_t budget,
                                                  std::uint64_t seed,
                                                  std::optional<Rational> stop_below = std::nullopt);

/// A subset with ratio < h if search finds one; the ratio is re-checked
/// exactly before returning. No witness is not a proof of expansion.
std::optional<PointSet> falsify_expander(const GraphSpace& graph, const Rational& h, std::size_t budget,
                                         std::uint64_t seed);

struct ExpansionProfile {
  Rational full_min{1};  // over all nonempty S; at most 1 because S = X gives 1
  PointSet full_witness;
  std::optional<Rational> half_min;  // over 1 <= |S| <= |X|/2
  PointSet half_witness;
};

/// min |N_r(S)| / |S|, exhaustively.
ExpansionProfile expansion_profile(const FiniteSpace& space, Dist r, std::size_t cap = kDefaultExactCap);

struct BipartiteExpansion {
  Rational h{0};  // (min |dA|/|A|) - 1, may be <= 0
  PointSet witness;
};

/// Minimum over nonempty A in side1 with |A| <= floor(|side1|/2) of
/// |dA|/|A|, minus one. Throws UnequalSides, NotBipartite, EmptyRange, TooLarge.
BipartiteExpansion bipartite_expansion_exact(const GraphSpace& graph, std::span<const std::size_t> side1,
                                             std::span<const std::size_t> side2,
                                             std::size_t cap = kDefaultExactCap);

}  // namespace coarsekit

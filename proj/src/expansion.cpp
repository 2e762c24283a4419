#include "coarsekit/expansion.hpp"

#include <algorithm>
#include <deque>
#include <numeric>

#include "coarsekit/detail/random.hpp"
#include "coarsekit/detail/subset_scan.hpp"

namespace coarsekit {

using detail::BoundaryState;
using detail::lex_less;

std::string_view to_string(CertificateMethod method) {
  switch (method) {
    case CertificateMethod::Exact: return "exact";
    case CertificateMethod::Falsified: return "falsified";
    case CertificateMethod::Estimated: return "estimated";
  }
  return "unknown";
}

namespace {

BoundaryState graph_state(const GraphSpace& graph) {
  const auto n = graph.size();
  PointSet all(n);
  std::iota(all.begin(), all.end(), std::size_t{0});
  std::vector<std::vector<std::size_t>> reach(n);
  for (std::size_t v = 0; v < n; ++v) reach[v] = graph.graph().neighbors(v);
  return BoundaryState(n, std::move(all), std::move(reach));
}

// ratio = boundary * n / ((n - a) * a), defined for 0 < a < n.
Rational ratio_of(std::size_t boundary, std::size_t a, std::size_t n) {
  return Rational(static_cast<std::int64_t>(boundary * n), static_cast<std::int64_t>((n - a) * a));
}

}  // namespace

Rational expansion_ratio(const GraphSpace& graph, std::span<const std::size_t> set) {
  const auto members = normalize_set(set, graph.size());
  if (members.empty()) throw Error(ErrorKind::EmptySet, "expansion ratio of the empty set");
  if (members.size() == graph.size()) throw Error(ErrorKind::FullSet, "expansion ratio of the whole space");
  const auto b = boundary(graph.metric(), members, 1).size();
  return ratio_of(b, members.size(), graph.size());
}

ExpanderCertificate cheeger_exact(const GraphSpace& graph, std::size_t cap) {
  const auto n = graph.size();
  detail::check_cap(n, cap, "cheeger_exact");
  if (n < 2) throw Error(ErrorKind::EmptyRange, "expansion needs at least two points");
  auto state = graph_state(graph);

  // Compare boundary/denominator pairs by cross multiplication.
  std::uint64_t best_b = 0, best_d = 0, best_mask = 0;
  bool have = false;
  std::uint64_t half_b = 0, half_a = 0, half_mask = 0;
  bool have_half = false;
  const std::size_t half_cap = n / 2;

  detail::gray_scan(state, [&](std::uint64_t mask, const BoundaryState& s) {
    const auto a = s.size();
    if (a == 0 || a == n) return;
    const std::uint64_t b = s.boundary_size();
    const std::uint64_t d = (n - a) * a;
    if (!have || b * best_d < best_b * d || (b * best_d == best_b * d && lex_less(mask, best_mask))) {
      best_b = b, best_d = d, best_mask = mask, have = true;
    }
    if (a <= half_cap) {
      if (!have_half || b * half_a < half_b * a ||
          (b * half_a == half_b * a && lex_less(mask, half_mask))) {
        half_b = b, half_a = a, half_mask = mask, have_half = true;
      }
    }
  });

  PointSet all(n);
  std::iota(all.begin(), all.end(), std::size_t{0});
  ExpanderCertificate cert;
  cert.k = graph.max_degree();
  cert.h_star = Rational(static_cast<std::int64_t>(best_b * n), static_cast<std::int64_t>(best_d));
  cert.witness = detail::mask_to_set(best_mask, all);
  cert.method = CertificateMethod::Exact;
  if (have_half) {
    cert.half_ratio = Rational(static_cast<std::int64_t>(half_b), static_cast<std::int64_t>(half_a));
    cert.half_witness = detail::mask_to_set(half_mask, all);
  }
  return cert;
}

std::optional<SearchOutcome> search_min_expansion(const GraphSpace& graph, std::size_t budget,
                                                  std::uint64_t seed, std::optional<Rational> stop_below) {
  const auto n = graph.size();
  if (budget == 0 || n < 2) return std::nullopt;
  detail::Rng rng(seed);
  auto state = graph_state(graph);
  std::optional<SearchOutcome> best;
  std::size_t spent = 0;

  auto current_ratio = [&] { return ratio_of(state.boundary_size(), state.size(), n); };
  auto record = [&] {
    const auto r = current_ratio();
    if (!best || r < best->best_ratio) {
      best = SearchOutcome{r, state.members_local(), spent};
    }
  };
  auto done = [&] { return spent >= budget || (best && stop_below && best->best_ratio < *stop_below); };

  std::vector<std::size_t> order;
  std::vector<std::size_t> dist(n);
  while (!done()) {
    // Seed: a BFS ball of random size around a random centre.
    state.clear();
    const auto centre = rng.below(n);
    const auto target = 1 + rng.below(n - 1);
    order.assign(1, centre);
    std::fill(dist.begin(), dist.end(), n);
    dist[centre] = 0;
    for (std::size_t head = 0; head < order.size() && order.size() < target; ++head) {
      for (auto w : graph.graph().neighbors(order[head])) {
        if (dist[w] == n && order.size() < target) {
          dist[w] = dist[order[head]] + 1;
          order.push_back(w);
        }
      }
    }
    for (auto v : order) state.toggle(v);
    ++spent;
    record();

    // Steepest descent over single-point moves on the frontier.
    std::vector<std::size_t> moves;
    while (!done()) {
      moves.clear();
      for (std::size_t v = 0; v < n; ++v) {
        if (state.contains(v)) {
          const auto& adj = graph.graph().neighbors(v);
          if (std::any_of(adj.begin(), adj.end(), [&](auto w) { return !state.contains(w); }))
            moves.push_back(v);
        } else if (state.on_boundary(v)) {
          moves.push_back(v);
        }
      }
      rng.shuffle(moves);
      if (moves.size() > 64) moves.resize(64);
      const auto here = current_ratio();
      std::optional<std::size_t> pick;
      Rational pick_ratio = here;
      for (auto v : moves) {
        if (done()) break;
        state.toggle(v);
        ++spent;
        if (state.size() > 0 && state.size() < n) {
          const auto r = current_ratio();
          if (r < pick_ratio) pick = v, pick_ratio = r;
        }
        state.toggle(v);
      }
      if (!pick) break;
      state.toggle(*pick);
      record();
    }
  }
  if (best) best->steps = spent;
  return best;
}

std::optional<PointSet> falsify_expander(const GraphSpace& graph, const Rational& h, std::size_t budget,
                                         std::uint64_t seed) {
  auto found = search_min_expansion(graph, budget, seed, h);
  if (!found || !(found->best_ratio < h)) return std::nullopt;
  // Independent re-check through the metric boundary.
  if (!(expansion_ratio(graph, found->best_set) < h)) return std::nullopt;
  return found->best_set;
}

ExpanderVerdict verify_expander(const GraphSpace& graph, std::size_t k, const Rational& h, std::size_t cap,
                                std::size_t budget, std::uint64_t seed) {
  ExpanderVerdict verdict;
  for (std::size_t v = 0; v < graph.size(); ++v) {
    if (graph.graph().degree(v) > k) {
      verdict.holds = false;
      verdict.degree_witness = v;
      return verdict;
    }
  }
  if (graph.size() > cap) {
    if (auto w = falsify_expander(graph, h, budget, seed)) {
      verdict.holds = false;
      verdict.method = CertificateMethod::Falsified;
      verdict.witness_ratio = expansion_ratio(graph, *w);
      verdict.witness = std::move(*w);
      return verdict;
    }
    throw Error(ErrorKind::TooLarge, std::to_string(graph.size()) +
                                         " points exceed the exact cap and local search found no "
                                         "witness; falsification is not a proof");
  }
  const auto cert = cheeger_exact(graph, cap);
  verdict.h_star = cert.h_star;
  verdict.holds = cert.h_star >= h;
  if (!verdict.holds) {
    verdict.witness = cert.witness;
    verdict.witness_ratio = cert.h_star;
  }
  return verdict;
}

ExpansionProfile expansion_profile(const FiniteSpace& space, Dist r, std::size_t cap) {
  const auto n = space.size();
  detail::check_cap(n, cap, "expansion_profile");
  if (n == 0) throw Error(ErrorKind::EmptySet, "expansion profile of an empty space");
  PointSet all(n);
  std::iota(all.begin(), all.end(), std::size_t{0});
  auto state = detail::make_boundary_state(space, all, r);

  // ratio = (a + b) / a
  std::uint64_t full_num = 0, full_a = 0, full_mask = 0;
  std::uint64_t half_num = 0, half_a = 0, half_mask = 0;
  bool have_full = false, have_half = false;
  detail::gray_scan(state, [&](std::uint64_t mask, const BoundaryState& s) {
    const std::uint64_t a = s.size();
    if (a == 0) return;
    const std::uint64_t num = a + s.boundary_size();
    auto better = [&](std::uint64_t bn, std::uint64_t ba, std::uint64_t bm) {
      return num * ba < bn * a || (num * ba == bn * a && lex_less(mask, bm));
    };
    if (!have_full || better(full_num, full_a, full_mask)) {
      full_num = num, full_a = a, full_mask = mask, have_full = true;
    }
    if (a <= n / 2 && (!have_half || better(half_num, half_a, half_mask))) {
      half_num = num, half_a = a, half_mask = mask, have_half = true;
    }
  });
  ExpansionProfile out;
  out.full_min = Rational(static_cast<std::int64_t>(full_num), static_cast<std::int64_t>(full_a));
  out.full_witness = detail::mask_to_set(full_mask, all);
  if (have_half) {
    out.half_min = Rational(static_cast<std::int64_t>(half_num), static_cast<std::int64_t>(half_a));
    out.half_witness = detail::mask_to_set(half_mask, all);
  }
  return out;
}

BipartiteExpansion bipartite_expansion_exact(const GraphSpace& graph, std::span<const std::size_t> side1,
                                             std::span<const std::size_t> side2, std::size_t cap) {
  const auto n = graph.size();
  const auto v1 = normalize_set(side1, n);
  const auto v2 = normalize_set(side2, n);
  if (v1.size() != side1.size() || v2.size() != side2.size()) {
    throw Error(ErrorKind::NotBipartite, "bipartition sides contain duplicates");
  }
  if (v1.size() != v2.size()) {
    throw Error(ErrorKind::UnequalSides, "sides have " + std::to_string(v1.size()) + " and " +
                                             std::to_string(v2.size()) + " points");
  }
  std::vector<int> side(n, -1);
  for (auto x : v1) side[x] = 0;
  for (auto x : v2) {
    if (side[x] == 0) throw Error(ErrorKind::NotBipartite, "sides overlap at " + std::to_string(x));
    side[x] = 1;
  }
  if (std::find(side.begin(), side.end(), -1) != side.end()) {
    throw Error(ErrorKind::NotBipartite, "sides do not cover the vertex set");
  }
  for (const auto& e : graph.graph().edges()) {
    if (side[e.u] == side[e.v]) {
      throw Error(ErrorKind::NotBipartite, "edge " + std::to_string(e.u) + "-" + std::to_string(e.v) +
                                               " lies inside one side");
    }
  }
  const auto limit = v1.size() / 2;
  if (limit == 0) throw Error(ErrorKind::EmptyRange, "no nonempty A with |A| <= |V1|/2");
  detail::check_cap(v1.size(), cap, "bipartite_expansion_exact");

  std::vector<std::vector<std::size_t>> reach(v1.size());
  for (std::size_t i = 0; i < v1.size(); ++i) reach[i] = graph.graph().neighbors(v1[i]);
  BoundaryState state(n, v1, std::move(reach));
  std::uint64_t best_b = 0, best_a = 0, best_mask = 0;
  bool have = false;
  detail::gray_scan(state, [&](std::uint64_t mask, const BoundaryState& s) {
    const std::uint64_t a = s.size();
    if (a == 0 || a > limit) return;
    const std::uint64_t b = s.boundary_size();
    if (!have || b * best_a < best_b * a || (b * best_a == best_b * a && lex_less(mask, best_mask))) {
      best_b = b, best_a = a, best_mask = mask, have = true;
    }
  });
  return {Rational(static_cast<std::int64_t>(best_b), static_cast<std::int64_t>(best_a)) - 1,
          detail::mask_to_set(best_mask, v1)};
}

}  // namespace coarsekit

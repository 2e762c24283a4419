#include "coarsekit/uf_homology.hpp"

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <limits>
#include <numeric>

#include "coarsekit/detail/random.hpp"
#include "coarsekit/detail/subset_scan.hpp"

namespace coarsekit {

void Chain0::add(PointRef point, Coeff value) {
  if (value == 0) return;
  auto [it, inserted] = coeffs_.try_emplace(point, value);
  if (!inserted) {
    it->second += value;
    if (it->second == 0) coeffs_.erase(it);
  }
}

Coeff Chain0::operator[](PointRef point) const {
  auto it = coeffs_.find(point);
  return it == coeffs_.end() ? 0 : it->second;
}

Coeff Chain0::sup_norm() const {
  Coeff best = 0;
  for (const auto& [p, c] : coeffs_) best = std::max(best, std::abs(c));
  return best;
}

Coeff Chain0::l1_norm() const {
  Coeff total = 0;
  for (const auto& [p, c] : coeffs_) total += std::abs(c);
  return total;
}

Chain0& Chain0::operator+=(const Chain0& other) {
  for (const auto& [p, c] : other.coeffs_) add(p, c);
  return *this;
}

Chain0& Chain0::operator-=(const Chain0& other) {
  for (const auto& [p, c] : other.coeffs_) add(p, -c);
  return *this;
}

void Chain1::add(PointRef x, PointRef z, Coeff value) {
  if (value == 0 || x == z) return;
  if (z < x) {
    std::swap(x, z);
    value = -value;
  }
  auto [it, inserted] = coeffs_.try_emplace({x, z}, value);
  if (!inserted) {
    it->second += value;
    if (it->second == 0) coeffs_.erase(it);
  }
}

Coeff Chain1::sup_norm() const {
  Coeff best = 0;
  for (const auto& [p, c] : coeffs_) best = std::max(best, std::abs(c));
  return best;
}

Dist Chain1::propagation(const CoarseUnion& space) const {
  Dist best = 0;
  for (const auto& [p, c] : coeffs_) best = std::max(best, space.distance(p.first, p.second));
  return best;
}

Chain1& Chain1::operator+=(const Chain1& other) {
  for (const auto& [p, c] : other.coeffs_) add(p.first, p.second, c);
  return *this;
}

Chain0 boundary_chain(const Chain1& b) {
  Chain0 out;
  for (const auto& [pair, c] : b.coefficients()) {
    out.add(pair.first, c);
    out.add(pair.second, -c);
  }
  return out;
}

Chain0 pushforward(const CoarseMap& f, const Chain0& a) {
  Chain0 out;
  for (const auto& [p, c] : a.coefficients()) out.add(f.image_ref(f.domain().global(p)), c);
  return out;
}

Chain1 pushforward(const CoarseMap& f, const Chain1& b) {
  Chain1 out;
  for (const auto& [pair, c] : b.coefficients()) {
    out.add(f.image_ref(f.domain().global(pair.first)), f.image_ref(f.domain().global(pair.second)), c);
  }
  return out;
}

std::vector<Coeff> component_sums(const CoarseUnion& space, const Chain0& a) {
  std::vector<Coeff> out(space.component_count(), 0);
  for (const auto& [p, c] : a.coefficients()) {
    space.global(p);  // range check
    out[p.component] += c;
  }
  return out;
}

Chain0 indicator_chain(const CoarseUnion& space, std::span<const std::size_t> points) {
  Chain0 out;
  for (auto x : normalize_set(points, space.size())) out.add(space.ref(x), 1);
  return out;
}

namespace {

std::vector<Coeff> component_weights(const CoarseUnion& space, const Chain0& a, std::size_t component) {
  std::vector<Coeff> w(space.component_size(component), 0);
  for (const auto& [p, c] : a.coefficients()) {
    space.global(p);
    if (p.component == component) w[p.point] = c;
  }
  return w;
}

}  // namespace

WhyteReport whyte_check_exact(const CoarseUnion& space, const Chain0& a, Dist t, std::size_t component,
                              std::size_t cap) {
  if (component >= space.component_count()) {
    throw Error(ErrorKind::OutOfRange, "component " + std::to_string(component));
  }
  const auto locals = space.component_points(component);
  detail::check_cap(locals.size(), cap, "whyte_check_exact");
  auto state = detail::make_boundary_state(space, locals, t, component_weights(space, a, component));

  WhyteReport report;
  report.component = component;
  report.t = t;
  std::uint64_t best_num = 0, best_den = 1, best_mask = 0;
  bool have = false;
  std::uint64_t obstruction_mask = 0;
  detail::gray_scan(state, [&](std::uint64_t mask, const detail::BoundaryState& s) {
    const auto sum = s.weight_sum();
    const std::uint64_t num = static_cast<std::uint64_t>(std::abs(sum));
    const std::uint64_t den = s.boundary_size();
    if (den == 0) {
      if (sum != 0 && (!report.infinite_obstruction || detail::lex_less(mask, obstruction_mask))) {
        report.infinite_obstruction = true;
        obstruction_mask = mask;
        report.obstruction_sum = sum;
      }
      return;
    }
    if (!have || num * best_den > best_num * den ||
        (num * best_den == best_num * den && detail::lex_less(mask, best_mask))) {
      best_num = num, best_den = den, best_mask = mask, have = true;
    }
  });
  if (have) {
    report.c_star = Rational(static_cast<std::int64_t>(best_num), static_cast<std::int64_t>(best_den));
    report.witness = detail::mask_to_set(best_mask, locals);
  }
  if (report.infinite_obstruction) report.obstruction_witness = detail::mask_to_set(obstruction_mask, locals);
  return report;
}

std::optional<PointSet> whyte_falsify(const CoarseUnion& space, const Chain0& a, Dist t, std::size_t component,
                                      const Rational& C, std::size_t budget, std::uint64_t seed) {
  if (component >= space.component_count()) {
    throw Error(ErrorKind::OutOfRange, "component " + std::to_string(component));
  }
  if (budget == 0) return std::nullopt;
  const auto locals = space.component_points(component);
  const auto n = locals.size();
  auto state = detail::make_boundary_state(space, locals, t, component_weights(space, a, component));
  detail::Rng rng(seed);
  const auto p = C.numerator();
  const auto q = C.denominator();
  // score > 0  <=>  |sum| > C |boundary|
  auto score = [&] {
    return q * std::abs(state.weight_sum()) - p * static_cast<std::int64_t>(state.boundary_size());
  };
  auto verified = [&](const PointSet& local_members) -> std::optional<PointSet> {
    PointSet global;
    Coeff sum = 0;
    for (auto i : local_members) {
      global.push_back(locals[i]);
      sum += a[space.ref(locals[i])];
    }
    const auto b = static_cast<std::int64_t>(boundary(space, global, t).size());
    if (q * std::abs(sum) > p * b) return global;
    return std::nullopt;
  };

  std::size_t spent = 0;
  std::vector<std::size_t> order;
  std::vector<std::size_t> moves(n);
  while (spent < budget) {
    state.clear();
    const auto centre = rng.below(n);
    const auto radius = static_cast<Dist>(rng.below(static_cast<std::size_t>(space.component(component).diameter()) + 1));
    for (std::size_t i = 0; i < n; ++i) {
      if (space.distance(locals[centre], locals[i]) <= radius) state.toggle(i);
    }
    ++spent;
    if (score() > 0) {
      if (auto w = verified(state.members_local())) return w;
    }
    while (spent < budget) {
      std::iota(moves.begin(), moves.end(), std::size_t{0});
      rng.shuffle(moves);
      const auto here = score();
      std::optional<std::size_t> pick;
      auto pick_score = here;
      for (std::size_t k = 0; k < std::min<std::size_t>(n, 64) && spent < budget; ++k) {
        state.toggle(moves[k]);
        ++spent;
        if (score() > pick_score) pick = moves[k], pick_score = score();
        state.toggle(moves[k]);
      }
      if (!pick) break;
      state.toggle(*pick);
      if (score() > 0) {
        if (auto w = verified(state.members_local())) return w;
      }
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------

namespace {

/// Dinic max flow with integer capacities.
class MaxFlow {
 public:
  explicit MaxFlow(std::size_t nodes) : adj_(nodes), level_(nodes), next_(nodes) {}

  /// Returns the index of the forward arc; its partner is index ^ 1.
  std::size_t add_arc(std::size_t from, std::size_t to, Coeff cap, Coeff reverse_cap = 0) {
    const auto id = arcs_.size();
    arcs_.push_back({to, cap});
    arcs_.push_back({from, reverse_cap});
    adj_[from].push_back(id);
    adj_[to].push_back(id + 1);
    return id;
  }

  Coeff residual(std::size_t arc) const { return arcs_[arc].cap; }

  Coeff run(std::size_t source, std::size_t sink) {
    Coeff total = 0;
    while (bfs(source, sink)) {
      std::fill(next_.begin(), next_.end(), 0);
      while (Coeff pushed = dfs(source, sink, std::numeric_limits<Coeff>::max())) total += pushed;
    }
    return total;
  }

 private:
  struct Arc {
    std::size_t to;
    Coeff cap;
  };

  bool bfs(std::size_t source, std::size_t sink) {
    std::fill(level_.begin(), level_.end(), -1);
    std::deque<std::size_t> queue{source};
    level_[source] = 0;
    while (!queue.empty()) {
      const auto v = queue.front();
      queue.pop_front();
      for (auto id : adj_[v]) {
        const auto& arc = arcs_[id];
        if (arc.cap > 0 && level_[arc.to] < 0) {
          level_[arc.to] = level_[v] + 1;
          queue.push_back(arc.to);
        }
      }
    }
    return level_[sink] >= 0;
  }

  Coeff dfs(std::size_t v, std::size_t sink, Coeff limit) {
    if (v == sink) return limit;
    for (auto& i = next_[v]; i < adj_[v].size(); ++i) {
      const auto id = adj_[v][i];
      auto& arc = arcs_[id];
      if (arc.cap > 0 && level_[arc.to] == level_[v] + 1) {
        if (Coeff pushed = dfs(arc.to, sink, std::min(limit, arc.cap))) {
          arc.cap -= pushed;
          arcs_[id ^ 1].cap += pushed;
          return pushed;
        }
      }
    }
    return 0;
  }

  std::vector<std::vector<std::size_t>> adj_;
  std::vector<Arc> arcs_;
  std::vector<int> level_;
  std::vector<std::size_t> next_;
};

struct Transshipment {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;  // x < z, d(x, z) <= t
  std::vector<Coeff> divergence;
};

/// Feasible flow at capacity c, as a 1-chain, or nullopt.
std::optional<Chain1> route(const CoarseUnion& space, const Transshipment& problem, Coeff c) {
  const auto n = space.size();
  const auto source = n, sink = n + 1;
  MaxFlow flow(n + 2);
  std::vector<std::size_t> arc_ids;
  arc_ids.reserve(problem.pairs.size());
  for (const auto& [x, z] : problem.pairs) arc_ids.push_back(flow.add_arc(x, z, c, c));
  Coeff supply = 0;
  for (std::size_t x = 0; x < n; ++x) {
    const auto d = problem.divergence[x];
    if (d > 0) {
      flow.add_arc(source, x, d);
      supply += d;
    } else if (d < 0) {
      flow.add_arc(x, sink, -d);
    }
  }
  if (flow.run(source, sink) != supply) return std::nullopt;
  Chain1 b;
  for (std::size_t i = 0; i < arc_ids.size(); ++i) {
    const auto net = c - flow.residual(arc_ids[i]);  // net flow x -> z
    b.add(space.ref(problem.pairs[i].first), space.ref(problem.pairs[i].second), net);
  }
  return b;
}

}  // namespace

FillResult fill_chain(const CoarseUnion& space, const Chain0& a, Dist t) {
  const auto n = space.size();
  Transshipment problem;
  problem.divergence.assign(n, 0);
  for (const auto& [p, c] : a.coefficients()) problem.divergence[space.global(p)] = c;

  // t-clusters: connected pieces of the graph joining points within t.
  std::vector<std::size_t> cluster(n, n);
  std::vector<std::vector<std::size_t>> near(n);
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t z = x + 1; z < n; ++z) {
      if (space.distance(x, z) <= t) {
        problem.pairs.emplace_back(x, z);
        near[x].push_back(z);
        near[z].push_back(x);
      }
    }
  }
  for (std::size_t s = 0; s < n; ++s) {
    if (cluster[s] != n) continue;
    PointSet members{s};
    cluster[s] = s;
    for (std::size_t head = 0; head < members.size(); ++head) {
      for (auto z : near[members[head]]) {
        if (cluster[z] == n) {
          cluster[z] = s;
          members.push_back(z);
        }
      }
    }
    Coeff total = 0;
    for (auto x : members) total += problem.divergence[x];
    if (total != 0) {
      std::sort(members.begin(), members.end());
      return FillObstruction{std::move(members), total};
    }
  }

  if (a.empty()) return FillingCertificate{Chain1{}, t, 0};
  Coeff lo = 1, hi = a.l1_norm();
  while (lo < hi) {
    const auto mid = lo + (hi - lo) / 2;
    if (route(space, problem, mid)) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  auto b = route(space, problem, lo);
  if (!b || boundary_chain(*b) != a) {
    throw Error(ErrorKind::PreconditionViolated, "internal: flow does not fill the chain");
  }
  return FillingCertificate{std::move(*b), t, lo};
}

std::size_t cut_size(const CoarseUnion& space, std::span<const std::size_t> set, Dist t) {
  const auto members = normalize_set(set, space.size());
  std::vector<bool> in(space.size(), false);
  for (auto x : members) in[x] = true;
  std::size_t count = 0;
  for (auto x : members)
    for (std::size_t z = 0; z < space.size(); ++z)
      if (!in[z] && space.distance(x, z) <= t) ++count;
  return count;
}

FillingCertificate closeness_filling(const CoarseMap& f, const CoarseMap& g, const Chain0& a) {
  const auto s = closeness(f, g);
  Chain1 b;
  for (const auto& [p, c] : a.coefficients()) {
    const auto x = f.domain().global(p);
    b.add(f.image_ref(x), g.image_ref(x), c);
  }
  return FillingCertificate{b, s, b.sup_norm()};
}

Chain0 target_chain(const CoarseMap& f, std::span<const std::size_t> target_set) {
  const auto& Y = f.codomain();
  Chain0 out;
  for (auto y : normalize_set(target_set, Y.size())) out.add(Y.ref(y), 1);
  for (std::size_t x = 0; x < f.domain().size(); ++x) out.add(f.image_ref(x), -1);
  return out;
}

WhyteReport injectivity_obstruction(const CoarseMap& f, std::span<const std::size_t> target_set, Dist t,
                                    std::size_t component, std::size_t cap) {
  return whyte_check_exact(f.codomain(), target_chain(f, target_set), t, component, cap);
}

PointSet build_target_set(const CoarseMap& f, std::size_t n0) {
  const auto& Y = f.codomain();
  const auto fibers = f.fiber_sizes();
  PointSet z;
  for (std::size_t n = n0; n < Y.component_count(); ++n) {
    const auto points = Y.component_points(n);
    std::size_t preimage = 0;
    for (auto y : points) preimage += fibers[y];
    if (preimage > points.size()) {
      throw Error(ErrorKind::PreconditionViolated,
                  "component " + std::to_string(n) + ": |f^-1(Y_n)| = " + std::to_string(preimage) +
                      " exceeds |Y_n| = " + std::to_string(points.size()));
    }
    PointSet chosen;
    for (auto y : points)
      if (fibers[y] > 0) chosen.push_back(y);
    for (auto y : points) {
      if (chosen.size() >= preimage) break;
      if (fibers[y] == 0) chosen.push_back(y);
    }
    z.insert(z.end(), chosen.begin(), chosen.end());
  }
  std::sort(z.begin(), z.end());
  return z;
}

}  // namespace coarsekit

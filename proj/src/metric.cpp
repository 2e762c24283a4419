#include "coarsekit/metric.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <deque>
#include <numeric>

#include "coarsekit/rational.hpp"

namespace coarsekit {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::DisconnectedGraph: return "DisconnectedGraph";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::EmptySet: return "EmptySet";
    case ErrorKind::FullSet: return "FullSet";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::UnequalSides: return "UnequalSides";
    case ErrorKind::NotBipartite: return "NotBipartite";
    case ErrorKind::EmptyRange: return "EmptyRange";
    case ErrorKind::DomainMismatch: return "DomainMismatch";
    case ErrorKind::Impossible: return "Impossible";
    case ErrorKind::SizeMismatch: return "SizeMismatch";
    case ErrorKind::PreconditionViolated: return "PreconditionViolated";
    case ErrorKind::NotInjective: return "NotInjective";
    case ErrorKind::BadLabeling: return "BadLabeling";
    case ErrorKind::InfeasibleDegree: return "InfeasibleDegree";
    case ErrorKind::RetriesExhausted: return "RetriesExhausted";
    case ErrorKind::NonpositiveH: return "NonpositiveH";
    case ErrorKind::MatchingFailed: return "MatchingFailed";
  }
  return "Unknown";
}

std::string to_string(const Rational& value) {
  return std::to_string(value.numerator()) + "/" + std::to_string(value.denominator());
}

Rational parse_rational(std::string_view text) {
  auto parse_int = [&](std::string_view part) {
    std::int64_t out = 0;
    auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), out);
    if (ec != std::errc{} || ptr != part.data() + part.size() || part.empty()) {
      throw Error(ErrorKind::InvalidInput, "malformed rational '" + std::string(text) + "'");
    }
    return out;
  };
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_int(text));
  const auto den = parse_int(text.substr(slash + 1));
  if (den == 0) throw Error(ErrorKind::InvalidInput, "zero denominator in '" + std::string(text) + "'");
  return Rational(parse_int(text.substr(0, slash)), den);
}

// ---------------------------------------------------------------------------

FiniteSpace::FiniteSpace(std::vector<std::vector<Dist>> rows) : n_(rows.size()) {
  d_.reserve(n_ * n_);
  for (const auto& row : rows) {
    if (row.size() != n_) {
      throw Error(ErrorKind::InvalidInput, "distance matrix is not square");
    }
    d_.insert(d_.end(), row.begin(), row.end());
  }
  diameter_ = d_.empty() ? 0 : *std::max_element(d_.begin(), d_.end());
}

std::vector<std::vector<Dist>> FiniteSpace::rows() const {
  std::vector<std::vector<Dist>> out(n_);
  for (std::size_t x = 0; x < n_; ++x) {
    out[x].assign(d_.begin() + x * n_, d_.begin() + (x + 1) * n_);
  }
  return out;
}

std::size_t FiniteSpace::max_ball_size(Dist r) const {
  std::size_t best = 0;
  for (std::size_t x = 0; x < n_; ++x) {
    std::size_t count = 0;
    for (std::size_t y = 0; y < n_; ++y) count += distance(x, y) <= r;
    best = std::max(best, count);
  }
  return best;
}

FiniteSpace FiniteSpace::prefix(std::size_t count) const {
  std::vector<std::vector<Dist>> out(count, std::vector<Dist>(count));
  for (std::size_t x = 0; x < count; ++x)
    for (std::size_t y = 0; y < count; ++y) out[x][y] = distance(x, y);
  return FiniteSpace(std::move(out));
}

// ---------------------------------------------------------------------------

Graph::Graph(std::size_t n, std::span<const Edge> edges) : adjacency_(n) {
  edges_.reserve(edges.size());
  for (const auto& e : edges) {
    if (e.u >= n || e.v >= n) {
      throw Error(ErrorKind::OutOfRange, "edge endpoint out of range");
    }
    if (e.u == e.v) {
      throw Error(ErrorKind::InvalidInput, "loop at vertex " + std::to_string(e.u));
    }
    edges_.push_back({std::min(e.u, e.v), std::max(e.u, e.v)});
  }
  std::sort(edges_.begin(), edges_.end());
  if (auto dup = std::adjacent_find(edges_.begin(), edges_.end()); dup != edges_.end()) {
    throw Error(ErrorKind::InvalidInput, "parallel edge " + std::to_string(dup->u) + "-" +
                                             std::to_string(dup->v));
  }
  for (const auto& e : edges_) {
    adjacency_[e.u].push_back(e.v);
    adjacency_[e.v].push_back(e.u);
  }
  for (auto& adj : adjacency_) std::sort(adj.begin(), adj.end());
}

std::size_t Graph::max_degree() const noexcept {
  std::size_t best = 0;
  for (const auto& adj : adjacency_) best = std::max(best, adj.size());
  return best;
}

bool Graph::connected() const {
  if (adjacency_.empty()) return true;
  std::vector<bool> seen(size(), false);
  std::vector<std::size_t> stack{0};
  seen[0] = true;
  std::size_t count = 1;
  while (!stack.empty()) {
    const auto v = stack.back();
    stack.pop_back();
    for (auto w : adjacency_[v]) {
      if (!seen[w]) {
        seen[w] = true;
        ++count;
        stack.push_back(w);
      }
    }
  }
  return count == size();
}

FiniteSpace shortest_path_metric(const Graph& graph) {
  const auto n = graph.size();
  std::vector<std::vector<Dist>> rows(n, std::vector<Dist>(n, -1));
  std::deque<std::size_t> queue;
  for (std::size_t s = 0; s < n; ++s) {
    auto& row = rows[s];
    row[s] = 0;
    queue.assign(1, s);
    while (!queue.empty()) {
      const auto v = queue.front();
      queue.pop_front();
      for (auto w : graph.neighbors(v)) {
        if (row[w] < 0) {
          row[w] = row[v] + 1;
          queue.push_back(w);
        }
      }
    }
    for (std::size_t y = 0; y < n; ++y) {
      if (row[y] < 0) {
        throw Error(ErrorKind::DisconnectedGraph, "vertices " + std::to_string(s) + " and " +
                                                      std::to_string(y) + " are not connected");
      }
    }
  }
  return FiniteSpace(std::move(rows));
}

GraphSpace::GraphSpace(Graph graph) : graph_(std::move(graph)), metric_(shortest_path_metric(graph_)) {}

// ---------------------------------------------------------------------------

CoarseUnion assemble_union(std::vector<FiniteSpace> components, Dist base_gap,
                           std::vector<std::size_t> basepoints) {
  if (components.empty()) {
    throw Error(ErrorKind::InvalidInput, "coarse union needs at least one component");
  }
  if (base_gap < 1) {
    throw Error(ErrorKind::InvalidInput, "base_gap must be positive");
  }
  if (basepoints.empty()) basepoints.assign(components.size(), 0);
  if (basepoints.size() != components.size()) {
    throw Error(ErrorKind::InvalidInput, "one basepoint per component is required");
  }
  CoarseUnion u;
  u.base_gap_ = base_gap;
  Dist anchor = 0;
  std::size_t offset = 0;
  for (std::size_t n = 0; n < components.size(); ++n) {
    if (components[n].size() == 0) {
      throw Error(ErrorKind::InvalidInput, "component " + std::to_string(n) + " is empty");
    }
    if (basepoints[n] >= components[n].size()) {
      throw Error(ErrorKind::OutOfRange, "basepoint of component " + std::to_string(n));
    }
    u.anchors_.push_back(anchor);
    u.offsets_.push_back(offset);
    u.owner_.insert(u.owner_.end(), components[n].size(), n);
    anchor += components[n].diameter() + base_gap + static_cast<Dist>(n);
    offset += components[n].size();
  }
  u.total_ = offset;
  u.components_ = std::move(components);
  u.basepoints_ = std::move(basepoints);
  return u;
}

CoarseUnion single_component(FiniteSpace space) {
  std::vector<FiniteSpace> parts;
  parts.push_back(std::move(space));
  return assemble_union(std::move(parts), 1);
}

std::size_t CoarseUnion::component_of(std::size_t global) const {
  if (global >= total_) throw Error(ErrorKind::OutOfRange, "point index " + std::to_string(global));
  return owner_[global];
}

PointRef CoarseUnion::ref(std::size_t global) const {
  const auto n = component_of(global);
  return {n, global - offsets_[n]};
}

std::size_t CoarseUnion::global(PointRef ref) const {
  if (ref.component >= components_.size() || ref.point >= components_[ref.component].size()) {
    throw Error(ErrorKind::OutOfRange, "point [" + std::to_string(ref.component) + "," +
                                           std::to_string(ref.point) + "]");
  }
  return offsets_[ref.component] + ref.point;
}

Dist CoarseUnion::distance(std::size_t a, std::size_t b) const {
  const auto n = owner_[a];
  const auto m = owner_[b];
  const auto x = a - offsets_[n];
  const auto y = b - offsets_[m];
  if (n == m) return components_[n].distance(x, y);
  return components_[n].distance(x, basepoints_[n]) + std::abs(anchors_[m] - anchors_[n]) +
         components_[m].distance(y, basepoints_[m]);
}

PointSet CoarseUnion::component_points(std::size_t n) const {
  PointSet out(component_size(n));
  std::iota(out.begin(), out.end(), offsets_[n]);
  return out;
}

// ---------------------------------------------------------------------------

PointSet normalize_set(std::span<const std::size_t> set, std::size_t n) {
  PointSet out(set.begin(), set.end());
  for (auto x : out) {
    if (x >= n) throw Error(ErrorKind::OutOfRange, "point index " + std::to_string(x));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace {

template <class Space>
PointSet boundary_impl(const Space& space, std::span<const std::size_t> set, Dist t) {
  const auto members = normalize_set(set, space.size());
  std::vector<bool> in(space.size(), false);
  for (auto x : members) in[x] = true;
  PointSet out;
  for (std::size_t x = 0; x < space.size(); ++x) {
    if (in[x]) continue;
    for (auto a : members) {
      if (space.distance(x, a) <= t) {
        out.push_back(x);
        break;
      }
    }
  }
  return out;
}

template <class Space>
PointSet neighborhood_impl(const Space& space, std::span<const std::size_t> set, Dist r) {
  auto out = boundary_impl(space, set, r);
  const auto members = normalize_set(set, space.size());
  out.insert(out.end(), members.begin(), members.end());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

PointSet boundary(const FiniteSpace& space, std::span<const std::size_t> set, Dist t) {
  return boundary_impl(space, set, t);
}
PointSet boundary(const CoarseUnion& space, std::span<const std::size_t> set, Dist t) {
  return boundary_impl(space, set, t);
}
PointSet neighborhood(const FiniteSpace& space, std::span<const std::size_t> set, Dist r) {
  return neighborhood_impl(space, set, r);
}
PointSet neighborhood(const CoarseUnion& space, std::span<const std::size_t> set, Dist r) {
  return neighborhood_impl(space, set, r);
}

bool t_connected(const FiniteSpace& space, Dist t) {
  const auto n = space.size();
  if (n == 0) return true;
  std::vector<bool> seen(n, false);
  std::vector<std::size_t> stack{0};
  seen[0] = true;
  std::size_t count = 1;
  while (!stack.empty()) {
    const auto x = stack.back();
    stack.pop_back();
    for (std::size_t z = 0; z < n; ++z) {
      if (!seen[z] && space.distance(x, z) <= t) {
        seen[z] = true;
        ++count;
        stack.push_back(z);
      }
    }
  }
  return count == n;
}

std::string_view to_string(MetricViolation::Kind kind) {
  switch (kind) {
    case MetricViolation::Kind::Diagonal: return "diagonal";
    case MetricViolation::Kind::Symmetry: return "symmetry";
    case MetricViolation::Kind::Triangle: return "triangle";
    case MetricViolation::Kind::Discreteness: return "discreteness";
  }
  return "unknown";
}

std::vector<MetricViolation> verify_metric(const FiniteSpace& space) {
  using K = MetricViolation::Kind;
  const auto n = space.size();
  std::vector<MetricViolation> out;
  for (std::size_t x = 0; x < n; ++x) {
    if (space.distance(x, x) != 0) out.push_back({K::Diagonal, {x}});
  }
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = x + 1; y < n; ++y) {
      if (space.distance(x, y) != space.distance(y, x)) out.push_back({K::Symmetry, {x, y}});
      if (space.distance(x, y) < 1 || space.distance(y, x) < 1) out.push_back({K::Discreteness, {x, y}});
    }
  }
  // (x, z, y) flags d(x, z) > d(x, y) + d(y, z): the pair first, then the detour point.
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      for (std::size_t z = 0; z < n; ++z) {
        if (x == z || y == x || y == z) continue;
        const bool mirrored = x > z && space.distance(x, z) == space.distance(z, x) &&
                              space.distance(x, y) == space.distance(y, x) &&
                              space.distance(y, z) == space.distance(z, y);
        if (mirrored) continue;  // already reported as (z, x, y)
        if (space.distance(x, z) > space.distance(x, y) + space.distance(y, z)) {
          out.push_back({K::Triangle, {x, z, y}});
        }
      }
  return out;
}

}  // namespace coarsekit

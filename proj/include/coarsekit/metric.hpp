#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "coarsekit/error.hpp"

namespace coarsekit {

using Dist = std::int64_t;
using PointSet = std::vector<std::size_t>;  // sorted, duplicate free

/// Dense integer distance matrix. Construction only checks the shape;
/// axioms are checked by verify_metric so that bad input can be reported
/// rather than rejected.
class FiniteSpace {
 public:
  FiniteSpace() = default;
  explicit FiniteSpace(std::vector<std::vector<Dist>> rows);

  std::size_t size() const noexcept { return n_; }
  Dist distance(std::size_t x, std::size_t y) const { return d_[x * n_ + y]; }
  Dist diameter() const noexcept { return diameter_; }

  std::vector<std::vector<Dist>> rows() const;

  /// Largest ball |B(x, r)| over all centres.
  std::size_t max_ball_size(Dist r) const;

  /// Restriction to the first `count` points.
  FiniteSpace prefix(std::size_t count) const;

  friend bool operator==(const FiniteSpace&, const FiniteSpace&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<Dist> d_;
  Dist diameter_ = 0;
};

struct Edge {
  std::size_t u = 0;
  std::size_t v = 0;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Simple undirected graph. Loops, parallel edges and out-of-range
/// endpoints are rejected at construction.
class Graph {
 public:
  Graph() = default;
  Graph(std::size_t n, std::span<const Edge> edges);

  std::size_t size() const noexcept { return adjacency_.size(); }
  const std::vector<std::size_t>& neighbors(std::size_t v) const { return adjacency_[v]; }
  /// Normalised (u < v), sorted edge list.
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  std::size_t degree(std::size_t v) const { return adjacency_[v].size(); }
  std::size_t max_degree() const noexcept;
  bool connected() const;

  friend bool operator==(const Graph& a, const Graph& b) { return a.edges_ == b.edges_ && a.size() == b.size(); }

 private:
  std::vector<std::vector<std::size_t>> adjacency_;
  std::vector<Edge> edges_;
};

/// Graph shortest-path metric. Throws Error(DisconnectedGraph).
FiniteSpace shortest_path_metric(const Graph& graph);

/// A connected graph together with its path metric.
class GraphSpace {
 public:
  explicit GraphSpace(Graph graph);

  std::size_t size() const noexcept { return graph_.size(); }
  const Graph& graph() const noexcept { return graph_; }
  const FiniteSpace& metric() const noexcept { return metric_; }
  std::size_t max_degree() const noexcept { return graph_.max_degree(); }
  Dist distance(std::size_t x, std::size_t y) const { return metric_.distance(x, y); }

 private:
  Graph graph_;
  FiniteSpace metric_;
};

struct PointRef {
  std::size_t component = 0;
  std::size_t point = 0;
  friend auto operator<=>(const PointRef&, const PointRef&) = default;
};

/// Coarse disjoint union glued along a line: component n sits at anchor
/// s_n, attached at its basepoint p_n, and
///   d(x, y) = d_n(x, p_n) + |s_m - s_n| + d_m(y, p_m)   (x in X_n, y in X_m, n != m).
/// Points are also addressed by a global index in component-major order,
/// so "least PointRef" and "least global index" coincide.
class CoarseUnion {
 public:
  CoarseUnion() = default;

  std::size_t size() const noexcept { return total_; }
  std::size_t component_count() const noexcept { return components_.size(); }
  const FiniteSpace& component(std::size_t n) const { return components_.at(n); }
  const std::vector<FiniteSpace>& components() const noexcept { return components_; }
  std::size_t component_size(std::size_t n) const { return components_.at(n).size(); }
  std::size_t offset(std::size_t n) const { return offsets_.at(n); }
  const std::vector<Dist>& anchors() const noexcept { return anchors_; }
  const std::vector<std::size_t>& basepoints() const noexcept { return basepoints_; }
  Dist base_gap() const noexcept { return base_gap_; }

  std::size_t component_of(std::size_t global) const;
  PointRef ref(std::size_t global) const;
  std::size_t global(PointRef ref) const;

  Dist distance(std::size_t a, std::size_t b) const;
  Dist distance(PointRef a, PointRef b) const { return distance(global(a), global(b)); }

  /// Global indices of component n, in order.
  PointSet component_points(std::size_t n) const;

  friend bool operator==(const CoarseUnion&, const CoarseUnion&) = default;

 private:
  friend CoarseUnion assemble_union(std::vector<FiniteSpace>, Dist, std::vector<std::size_t>);

  std::vector<FiniteSpace> components_;
  std::vector<std::size_t> basepoints_;
  std::vector<Dist> anchors_;
  std::vector<std::size_t> offsets_;
  std::vector<std::size_t> owner_;  // global index -> component
  Dist base_gap_ = 1;
  std::size_t total_ = 0;
};

/// Anchors follow s_0 = 0, s_{n+1} = s_n + diam(X_n) + base_gap + n.
/// An empty basepoint list means basepoint 0 everywhere.
CoarseUnion assemble_union(std::vector<FiniteSpace> components, Dist base_gap,
                           std::vector<std::size_t> basepoints = {});

/// Single-component union, handy for maps between plain spaces.
CoarseUnion single_component(FiniteSpace space);

bool t_connected(const FiniteSpace& space, Dist t);

/// Outer t-boundary {x not in A : d(x, A) <= t}.
PointSet boundary(const FiniteSpace& space, std::span<const std::size_t> set, Dist t);
PointSet boundary(const CoarseUnion& space, std::span<const std::size_t> set, Dist t);

/// N_r(S) = S together with its outer r-boundary.
PointSet neighborhood(const FiniteSpace& space, std::span<const std::size_t> set, Dist r);
PointSet neighborhood(const CoarseUnion& space, std::span<const std::size_t> set, Dist r);

struct MetricViolation {
  enum class Kind { Diagonal, Symmetry, Triangle, Discreteness };
  Kind kind;
  std::vector<std::size_t> points;  // 1, 2 or 3 indices depending on kind
  friend bool operator==(const MetricViolation&, const MetricViolation&) = default;
};

std::string_view to_string(MetricViolation::Kind kind);

/// Every axiom violation; empty means the matrix is a metric.
std::vector<MetricViolation> verify_metric(const FiniteSpace& space);

/// Sorted, duplicate-free copy; throws Error(OutOfRange) for indices >= n.
PointSet normalize_set(std::span<const std::size_t> set, std::size_t n);

}  // namespace coarsekit

#include "coarsekit/constructions.hpp"

#include <algorithm>
#include <map>

#include "coarsekit/detail/random.hpp"

namespace coarsekit {

StackedSpace k_stack(const FiniteSpace& base, std::size_t k) {
  if (k == 0) throw Error(ErrorKind::InvalidInput, "a stacking needs at least one level");
  const auto n = base.size();
  std::vector<std::vector<Dist>> rows(n * k, std::vector<Dist>(n * k));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t j = 0; j < k; ++j)
        for (std::size_t z = 0; z < n; ++z) rows[i * n + x][j * n + z] = base.distance(x, z) + (i != j ? 1 : 0);
  return {base, k, FiniteSpace(std::move(rows))};
}

BipartiteDouble bipartite_double(const GraphSpace& base) {
  const auto n = base.size();
  std::vector<Edge> edges;
  for (std::size_t x = 0; x < n; ++x) edges.push_back({x, n + x});
  for (const auto& e : base.graph().edges()) {
    edges.push_back({e.u, n + e.v});
    edges.push_back({e.v, n + e.u});
  }
  BipartiteDouble out{GraphSpace(Graph(2 * n, edges)), {}, {}};
  for (std::size_t x = 0; x < n; ++x) {
    out.side1.push_back(x);
    out.side2.push_back(n + x);
  }
  return out;
}

StackingReport verify_stacking(const FiniteSpace& base, const FiniteSpace& candidate, std::size_t k,
                               std::span<const std::pair<std::size_t, std::size_t>> labels) {
  const auto n = base.size();
  if (k == 0) throw Error(ErrorKind::BadLabeling, "a stacking needs at least one level");
  if (labels.size() != candidate.size() || candidate.size() != n * k) {
    throw Error(ErrorKind::BadLabeling, "expected " + std::to_string(n * k) + " labels and points, got " +
                                            std::to_string(labels.size()) + " labels for " +
                                            std::to_string(candidate.size()) + " points");
  }
  std::vector<std::size_t> point_of(n * k, candidate.size());
  for (std::size_t p = 0; p < labels.size(); ++p) {
    const auto [x, level] = labels[p];
    if (x >= n || level >= k) {
      throw Error(ErrorKind::BadLabeling, "label (" + std::to_string(x) + ", " + std::to_string(level) +
                                              ") of point " + std::to_string(p) + " is out of range");
    }
    auto& slot = point_of[level * n + x];
    if (slot != candidate.size()) {
      throw Error(ErrorKind::BadLabeling, "points " + std::to_string(slot) + " and " + std::to_string(p) +
                                              " share a label");
    }
    slot = p;
  }

  StackingReport report;
  report.labeling_bijective = true;
  std::map<Dist, DistortionRow> table;
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t z = 0; z < n; ++z) {
      const auto db = base.distance(x, z);
      const auto dc = candidate.distance(point_of[x], point_of[z]);
      auto [it, fresh] = table.try_emplace(db, DistortionRow{db, dc, dc});
      if (!fresh) {
        it->second.min_candidate = std::min(it->second.min_candidate, dc);
        it->second.max_candidate = std::max(it->second.max_candidate, dc);
      }
      report.inclusion_distortion = std::max(report.inclusion_distortion, dc > db ? dc - db : db - dc);
    }
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j)
        report.fiber_diameter =
            std::max(report.fiber_diameter, candidate.distance(point_of[i * n + x], point_of[j * n + x]));
  }
  for (auto& [_, row] : table) report.distortion_table.push_back(row);
  return report;
}

FiniteSpace flatten(const CoarseUnion& space) {
  std::vector<std::vector<Dist>> rows(space.size(), std::vector<Dist>(space.size()));
  for (std::size_t a = 0; a < space.size(); ++a)
    for (std::size_t b = 0; b < space.size(); ++b) rows[a][b] = space.distance(a, b);
  return FiniteSpace(std::move(rows));
}

std::size_t StackedUnion::lift(std::size_t base_global, std::size_t level) const {
  const auto ref = base->ref(base_global);
  const auto size = base->component_size(ref.component);
  return stacked->offset(ref.component) + level * size + ref.point;
}

std::pair<std::size_t, std::size_t> StackedUnion::label(std::size_t stacked_global) const {
  const auto ref = stacked->ref(stacked_global);
  const auto size = base->component_size(ref.component);
  return {base->offset(ref.component) + ref.point % size, ref.point / size};
}

std::vector<std::pair<std::size_t, std::size_t>> StackedUnion::labels() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t p = 0; p < stacked->size(); ++p) out.push_back(label(p));
  return out;
}

StackedUnion stack_union(const UnionPtr& base, std::size_t k) {
  std::vector<FiniteSpace> parts;
  for (const auto& c : base->components()) parts.push_back(k_stack(c, k).metric);
  return {base, k, share(assemble_union(std::move(parts), base->base_gap(), base->basepoints()))};
}

StackedUnion recognize_stacking(const UnionPtr& stacked, std::size_t k) {
  if (k == 0) throw Error(ErrorKind::BadLabeling, "a stacking needs at least one level");
  std::vector<FiniteSpace> parts;
  std::vector<std::size_t> basepoints;
  for (std::size_t n = 0; n < stacked->component_count(); ++n) {
    const auto size = stacked->component_size(n);
    if (size % k != 0) {
      throw Error(ErrorKind::BadLabeling, "component " + std::to_string(n) + " has " + std::to_string(size) +
                                              " points, not a multiple of " + std::to_string(k));
    }
    const auto basepoint = stacked->basepoints()[n];
    if (basepoint >= size / k) {
      throw Error(ErrorKind::BadLabeling, "basepoint of component " + std::to_string(n) + " is not on level 0");
    }
    parts.push_back(stacked->component(n).prefix(size / k));
    basepoints.push_back(basepoint);
  }
  return {share(assemble_union(std::move(parts), stacked->base_gap(), std::move(basepoints))), k, stacked};
}

CoarseMap stack_map(const CoarseMap& f, const StackedUnion& domain, const StackedUnion& codomain) {
  if (!same_space(f.domain_ptr(), domain.base) || !same_space(f.codomain_ptr(), codomain.base) ||
      domain.levels != codomain.levels) {
    throw Error(ErrorKind::BadLabeling, "map does not act between the bases of the stackings");
  }
  std::vector<std::size_t> image(domain.stacked->size());
  for (std::size_t p = 0; p < image.size(); ++p) {
    const auto [x, level] = domain.label(p);
    image[p] = codomain.lift(f(x), level);
  }
  return CoarseMap(domain.stacked, codomain.stacked, std::move(image));
}

CoarseMap unstack_map(const CoarseMap& fbar, const StackedUnion& domain, const StackedUnion& codomain) {
  if (!same_space(fbar.domain_ptr(), domain.stacked) || !same_space(fbar.codomain_ptr(), codomain.stacked)) {
    throw Error(ErrorKind::BadLabeling, "map does not act between the stackings");
  }
  std::vector<std::size_t> image(domain.base->size());
  for (std::size_t x = 0; x < image.size(); ++x) image[x] = codomain.label(fbar(domain.lift(x, 0))).first;
  return CoarseMap(domain.base, codomain.base, std::move(image));
}

GraphSpace random_regular(std::size_t n, std::size_t k, std::uint64_t seed, std::size_t retries) {
  if (k == 0 || n <= k || (n * k) % 2 != 0) {
    throw Error(ErrorKind::InfeasibleDegree, "no connected simple " + std::to_string(k) + "-regular graph on " +
                                                 std::to_string(n) + " vertices is generated");
  }
  detail::Rng rng(seed);
  std::vector<std::size_t> stubs;
  for (std::size_t v = 0; v < n; ++v)
    for (std::size_t i = 0; i < k; ++i) stubs.push_back(v);
  for (std::size_t attempt = 0; attempt < retries; ++attempt) {
    auto points = stubs;
    rng.shuffle(points);
    std::vector<Edge> edges;
    bool simple = true;
    for (std::size_t i = 0; i + 1 < points.size() && simple; i += 2) {
      auto u = points[i], v = points[i + 1];
      if (u == v) simple = false;
      if (u > v) std::swap(u, v);
      edges.push_back({u, v});
    }
    if (!simple) continue;
    std::sort(edges.begin(), edges.end());
    if (std::adjacent_find(edges.begin(), edges.end()) != edges.end()) continue;
    Graph graph(n, edges);
    if (!graph.connected()) continue;
    return GraphSpace(std::move(graph));
  }
  throw Error(ErrorKind::RetriesExhausted, "no simple connected pairing after " + std::to_string(retries) +
                                               " attempts");
}

std::uint64_t component_seed(std::uint64_t seed, std::size_t n) {
  // splitmix64 finaliser over (seed, n)
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(n) + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

ExpanderSequence expander_sequence(std::span<const std::size_t> sizes, std::size_t k, std::uint64_t seed,
                                   Dist base_gap, std::size_t cap, std::size_t budget) {
  if (sizes.empty()) throw Error(ErrorKind::InvalidInput, "at least one size is required");
  for (std::size_t i = 1; i < sizes.size(); ++i) {
    if (sizes[i] <= sizes[i - 1]) {
      throw Error(ErrorKind::InvalidInput, "sizes must be strictly increasing, got " + std::to_string(sizes[i - 1]) +
                                               " then " + std::to_string(sizes[i]));
    }
  }
  ExpanderSequence out;
  std::vector<FiniteSpace> parts;
  for (std::size_t n = 0; n < sizes.size(); ++n) {
    auto graph = random_regular(sizes[n], k, component_seed(seed, n));
    ExpanderCertificate cert;
    if (graph.size() <= cap) {
      cert = cheeger_exact(graph, cap);
      out.min_exact_h = out.min_exact_h ? std::min(*out.min_exact_h, cert.h_star) : cert.h_star;
    } else {
      auto found = search_min_expansion(graph, budget, component_seed(seed, n));
      cert.k = graph.max_degree();
      cert.method = CertificateMethod::Estimated;
      if (found) {
        cert.h_star = found->best_ratio;
        cert.witness = found->best_set;
      }
    }
    parts.push_back(graph.metric());
    out.certificates.push_back(std::move(cert));
    out.graphs.push_back(std::move(graph));
  }
  out.space = share(assemble_union(std::move(parts), base_gap));
  return out;
}

}  // namespace coarsekit

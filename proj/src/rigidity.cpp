#include "coarsekit/rigidity.hpp"

#include <algorithm>
#include <numeric>

#include "coarsekit/detail/random.hpp"
#include "coarsekit/matching.hpp"

namespace coarsekit {

std::string_view to_string(ObstructionKind kind) {
  switch (kind) {
    case ObstructionKind::None: return "none";
    case ObstructionKind::Routing: return "routing";
    case ObstructionKind::IndexCollision: return "index_collision";
    case ObstructionKind::Cardinality: return "cardinality";
    case ObstructionKind::LeftoverImbalance: return "leftover_imbalance";
  }
  return "unknown";
}

InjectiveConditionReport check_injective_condition(const CoarseMap& f) {
  const auto& Y = f.codomain();
  const auto count = Y.component_count();
  InjectiveConditionReport report;
  report.truncation_length = count;
  report.preimage_sizes.assign(count, 0);
  for (std::size_t x = 0; x < f.domain().size(); ++x) ++report.preimage_sizes[Y.component_of(f(x))];
  for (std::size_t n = 0; n < count; ++n) {
    report.component_sizes.push_back(Y.component_size(n));
    if (report.preimage_sizes[n] > report.component_sizes[n]) report.overfull.push_back(n);
  }
  // Smallest n0 whose tail [n0, count) has no overfull component ...
  std::size_t n0 = count;
  while (n0 > 0 && report.preimage_sizes[n0 - 1] <= report.component_sizes[n0 - 1]) --n0;
  // ... extended until the head balances, keeping the tail nonempty.
  std::size_t head_pre = 0, head_size = 0;
  for (std::size_t n = 0; n < n0; ++n) head_pre += report.preimage_sizes[n], head_size += report.component_sizes[n];
  for (; n0 < count; ++n0) {
    if (head_pre <= head_size) {
      report.pass = true;
      report.n0 = n0;
      break;
    }
    head_pre += report.preimage_sizes[n0];
    head_size += report.component_sizes[n0];
  }
  return report;
}

Condition2Report check_bijective_condition(const CoarseMap& f) {
  const auto& X = f.domain();
  const auto& Y = f.codomain();
  Condition2Report report;
  report.truncation_length = X.component_count();
  report.routing = component_routing(f);
  if (!report.routing.n0) {
    report.obstruction = ObstructionKind::Routing;
    report.description = "the last component of the truncation is split across codomain components";
    return report;
  }
  const auto K = X.component_count();
  const auto total_y = Y.size();

  struct Trial {
    std::vector<CardinalityMismatch> mismatches;
    std::vector<std::pair<std::size_t, std::size_t>> collisions;
    std::size_t leftover_x = 0, leftover_y = 0;
    std::vector<std::size_t> tail, image;
    bool ok() const { return mismatches.empty() && collisions.empty() && leftover_x == leftover_y; }
  };
  auto trial = [&](std::size_t n0) {
    Trial t;
    std::vector<std::optional<std::size_t>> owner(Y.component_count());
    std::size_t matched_y = 0;
    for (std::size_t n = n0; n < K; ++n) {
      const auto m = *report.routing.index_map[n];
      t.tail.push_back(n);
      t.image.push_back(m);
      if (owner[m]) {
        t.collisions.emplace_back(*owner[m], n);
        continue;
      }
      owner[m] = n;
      matched_y += Y.component_size(m);
      if (X.component_size(n) != Y.component_size(m)) {
        t.mismatches.push_back({n, m, X.component_size(n), Y.component_size(m)});
      }
    }
    for (std::size_t n = 0; n < n0; ++n) t.leftover_x += X.component_size(n);
    t.leftover_y = total_y - matched_y;
    return t;
  };

  for (auto n0 = *report.routing.n0; n0 < K; ++n0) {
    auto t = trial(n0);
    if (t.ok()) {
      report.pass = true;
      report.n0 = n0;
      report.domain_tail = std::move(t.tail);
      report.codomain_tail = std::move(t.image);
      report.leftover_x = t.leftover_x;
      report.leftover_y = t.leftover_y;
      return report;
    }
  }

  auto t = trial(*report.routing.n0);
  report.leftover_x = t.leftover_x;
  report.leftover_y = t.leftover_y;
  report.cardinality_mismatches = t.mismatches;
  report.index_collisions = t.collisions;
  if (!t.collisions.empty()) {
    report.obstruction = ObstructionKind::IndexCollision;
    report.description = "components " + std::to_string(t.collisions.front().first) + " and " +
                         std::to_string(t.collisions.front().second) + " are routed into the same component";
  } else if (!t.mismatches.empty()) {
    const auto& m = t.mismatches.front();
    report.obstruction = ObstructionKind::Cardinality;
    report.description = "|X_" + std::to_string(m.domain_component) + "| = " + std::to_string(m.domain_size) +
                         " but |Y_" + std::to_string(m.codomain_component) + "| = " + std::to_string(m.codomain_size);
  } else {
    report.obstruction = ObstructionKind::LeftoverImbalance;
    report.description = "leftover sizes differ: " + std::to_string(t.leftover_x) + " vs " +
                         std::to_string(t.leftover_y);
  }
  return report;
}

BijectivizationResult bijectivize_expander(const CoarseMap& f, const Condition2Report& report) {
  if (!report.pass) throw Error(ErrorKind::PreconditionViolated, "condition report did not pass");
  const auto& X = f.domain();
  const auto& Y = f.codomain();
  std::vector<std::size_t> image(X.size(), 0);
  std::vector<bool> y_used(Y.size(), false), x_done(X.size(), false);
  std::vector<Dist> radii;

  for (std::size_t k = 0; k < report.domain_tail.size(); ++k) {
    const auto n = report.domain_tail[k];
    const auto m = report.codomain_tail[k];
    const auto& Xn = X.component(n);
    const auto& Ym = Y.component(m);
    std::vector<std::size_t> local(Xn.size());
    for (std::size_t x = 0; x < Xn.size(); ++x) {
      const auto y = f(X.offset(n) + x);
      if (Y.component_of(y) != m) {
        throw Error(ErrorKind::PreconditionViolated, "f(X_" + std::to_string(n) + ") leaves Y_" + std::to_string(m));
      }
      local[x] = y - Y.offset(m);
    }
    std::vector<Dist> scan;
    for (std::size_t a = 0; a < Ym.size(); ++a)
      for (std::size_t b = 0; b < Ym.size(); ++b) scan.push_back(Ym.distance(a, b));
    std::sort(scan.begin(), scan.end());
    scan.erase(std::unique(scan.begin(), scan.end()), scan.end());

    std::optional<Selection> found;
    Dist used = 0;
    DeficiencyCertificate last;
    for (auto r : scan) {
      auto result = perfect_matching_pair(Xn, Ym, local, r);
      if (auto* sel = std::get_if<Selection>(&result)) {
        found = std::move(*sel);
        used = r;
        break;
      }
      last = std::get<DeficiencyCertificate>(result);
    }
    if (!found) {
      throw Error(ErrorKind::MatchingFailed, "component " + std::to_string(n) + ": deficient set of size " +
                                                 std::to_string(last.left.size()));
    }
    radii.push_back(used);
    for (std::size_t x = 0; x < Xn.size(); ++x) {
      image[X.offset(n) + x] = Y.offset(m) + (*found)[x];
      x_done[X.offset(n) + x] = true;
      y_used[Y.offset(m) + (*found)[x]] = true;
    }
  }

  // Leftover heads: least first.
  std::size_t next_y = 0;
  for (std::size_t x = 0; x < X.size(); ++x) {
    if (x_done[x]) continue;
    while (next_y < Y.size() && y_used[next_y]) ++next_y;
    if (next_y == Y.size()) throw Error(ErrorKind::PreconditionViolated, "leftover codomain exhausted");
    image[x] = next_y;
    y_used[next_y] = true;
  }
  if (std::find(y_used.begin(), y_used.end(), false) != y_used.end()) {
    throw Error(ErrorKind::PreconditionViolated, "leftover domain exhausted before codomain");
  }

  BijectivizationResult out{CoarseMap(f.domain_ptr(), f.codomain_ptr(), image), 0, radii, {}, {}, false};
  out.closeness_to_f = closeness(out.bijection, f);
  out.modulus = out.bijection.modulus_table();
  std::vector<std::size_t> inverse(Y.size());
  for (std::size_t x = 0; x < X.size(); ++x) inverse[image[x]] = x;
  out.inverse_modulus = CoarseMap(f.codomain_ptr(), f.domain_ptr(), std::move(inverse)).modulus_table();
  if (radii.size() >= 2) {
    out.radii_growing = radii.back() > *std::max_element(radii.begin(), radii.end() - 1);
  }
  return out;
}

namespace {

std::vector<std::optional<std::size_t>> invert(const PartialMap& map, std::size_t target_size, const char* name) {
  std::vector<std::optional<std::size_t>> inverse(target_size);
  for (std::size_t a = 0; a < map.size(); ++a) {
    if (!map[a]) continue;
    const auto b = *map[a];
    if (b >= target_size) throw Error(ErrorKind::OutOfRange, std::string(name) + " maps outside its codomain");
    if (inverse[b]) {
      throw Error(ErrorKind::NotInjective, std::string(name) + "(" + std::to_string(*inverse[b]) + ") = " + name +
                                               "(" + std::to_string(a) + ") = " + std::to_string(b));
    }
    inverse[b] = a;
  }
  return inverse;
}

}  // namespace

SchroederBernsteinResult sb_bijection(const PartialMap& g, const PartialMap& h) {
  const auto nx = g.size();
  const auto ny = h.size();
  const auto g_inv = invert(g, ny, "g");
  const auto h_inv = invert(h, nx, "h");

  enum class Side : unsigned char { Unknown, G, H };
  std::vector<Side> side(nx, Side::Unknown);
  std::vector<std::size_t> path;
  for (std::size_t start = 0; start < nx; ++start) {
    if (side[start] != Side::Unknown) continue;
    path.assign(1, start);
    Side verdict = Side::G;
    auto cur = start;
    // Backward: x <- h(y) <- g(x') ...
    while (true) {
      if (!h_inv[cur]) { verdict = Side::G; break; }       // stops in X \ im(h)
      const auto y = *h_inv[cur];
      if (!g_inv[y]) { verdict = Side::H; break; }         // stops in Y \ im(g)
      const auto prev = *g_inv[y];
      if (prev == start) { verdict = Side::G; break; }     // cycle
      if (side[prev] != Side::Unknown) { verdict = side[prev]; break; }
      path.push_back(prev);
      cur = prev;
    }
    for (auto x : path) side[x] = verdict;
  }

  SchroederBernsteinResult out;
  out.bijection.assign(nx, std::nullopt);
  out.uses_g.assign(nx, false);
  std::vector<bool> hit(ny, false);
  for (std::size_t x = 0; x < nx; ++x) {
    if (side[x] == Side::G) {
      out.uses_g[x] = true;
      out.bijection[x] = g[x];
    } else {
      out.bijection[x] = h_inv[x];
    }
    if (out.bijection[x]) {
      if (hit[*out.bijection[x]]) throw Error(ErrorKind::NotInjective, "internal: chain assembly collided");
      hit[*out.bijection[x]] = true;
    } else {
      out.unmatched_domain.push_back(x);
    }
  }
  for (std::size_t y = 0; y < ny; ++y)
    if (!hit[y]) out.unmatched_codomain.push_back(y);
  return out;
}

SchroederBernsteinMaps sb_bijection(const CoarseMap& g, const CoarseMap& h) {
  if (!same_space(g.domain_ptr(), h.codomain_ptr()) || !same_space(g.codomain_ptr(), h.domain_ptr())) {
    throw Error(ErrorKind::DomainMismatch, "h must map the codomain of g back to its domain");
  }
  PartialMap gp(g.image().begin(), g.image().end());
  PartialMap hp(h.image().begin(), h.image().end());
  SchroederBernsteinMaps out{sb_bijection(gp, hp), std::nullopt};
  if (out.chains.bijective()) {
    std::vector<std::size_t> image;
    for (const auto& y : out.chains.bijection) image.push_back(*y);
    out.map = CoarseMap(g.domain_ptr(), g.codomain_ptr(), std::move(image));
  }
  return out;
}

DeviationReport preimage_deviation_check(std::span<const std::size_t> image, std::size_t codomain_size,
                                         bool exhaustive, std::size_t samples, std::uint64_t seed,
                                         std::size_t cap) {
  const auto n = image.size();
  if (codomain_size != n) {
    throw Error(ErrorKind::SizeMismatch, "need |X| = |Y|, got " + std::to_string(n) + " and " +
                                             std::to_string(codomain_size));
  }
  std::vector<std::size_t> fiber(n, 0);
  for (auto y : image) {
    if (y >= n) throw Error(ErrorKind::OutOfRange, "image point " + std::to_string(y));
    ++fiber[y];
  }
  DeviationReport report;
  report.m = n == 0 ? 0 : *std::max_element(fiber.begin(), fiber.end());
  const auto slack = static_cast<std::int64_t>(report.m) - 1;

  std::vector<bool> in(n);
  bool have = false;
  auto check = [&] {
    std::int64_t a = 0, pre = 0;
    for (std::size_t y = 0; y < n; ++y) {
      if (in[y]) a += 1, pre += static_cast<std::int64_t>(fiber[y]);
    }
    const auto lhs = std::abs(a - pre);
    const auto rhs = std::max<std::int64_t>(slack, 0) * std::min<std::int64_t>(a, static_cast<std::int64_t>(n) - a);
    ++report.subsets_checked;
    if (lhs > rhs) ++report.violations;
    if (rhs > 0) {
      Rational ratio(lhs, rhs);
      if (!have || ratio > report.max_ratio) {
        report.max_ratio = ratio;
        report.witness.clear();
        for (std::size_t y = 0; y < n; ++y)
          if (in[y]) report.witness.push_back(y);
        have = true;
      }
    }
  };

  if (exhaustive) {
    if (n > cap || n > 62) {
      throw Error(ErrorKind::TooLarge, "exhaustive deviation check over " + std::to_string(n) + " points");
    }
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
      for (std::size_t y = 0; y < n; ++y) in[y] = (mask >> y) & 1U;
      check();
    }
  } else {
    detail::Rng rng(seed);
    for (std::size_t s = 0; s < samples; ++s) {
      for (std::size_t y = 0; y < n; ++y) in[y] = rng.next() & 1U;
      check();
    }
  }
  return report;
}

Rational whyte_threshold(std::size_t k, const Rational& h, std::size_t m) {
  if (h <= 0) throw Error(ErrorKind::NonpositiveH, "threshold needs h > 0");
  return Rational(static_cast<std::int64_t>(k) * (static_cast<std::int64_t>(m) - 1)) / h;
}

}  // namespace coarsekit

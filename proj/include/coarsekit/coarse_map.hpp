#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "coarsekit/metric.hpp"

namespace coarsekit {

using UnionPtr = std::shared_ptr<const CoarseUnion>;

inline UnionPtr share(CoarseUnion u) { return std::make_shared<const CoarseUnion>(std::move(u)); }

/// A total map between two coarse unions, stored as one global codomain
/// index per global domain index. The expansion modulus and the
/// finite-to-one bound are computed once, at construction.
class CoarseMap {
 public:
  CoarseMap(UnionPtr domain, UnionPtr codomain, std::vector<std::size_t> image);
  static CoarseMap from_refs(UnionPtr domain, UnionPtr codomain, const std::vector<PointRef>& image);

  const CoarseUnion& domain() const noexcept { return *domain_; }
  const CoarseUnion& codomain() const noexcept { return *codomain_; }
  const UnionPtr& domain_ptr() const noexcept { return domain_; }
  const UnionPtr& codomain_ptr() const noexcept { return codomain_; }

  std::size_t operator()(std::size_t x) const { return image_[x]; }
  PointRef image_ref(std::size_t x) const { return codomain_->ref(image_[x]); }
  const std::vector<std::size_t>& image() const noexcept { return image_; }
  std::vector<PointRef> image_refs() const;

  /// omega(r) = max{ d(f x, f z) : d(x, z) <= r }.
  Dist modulus(Dist r) const;
  /// (r, omega(r)) for every realized domain distance r, ascending.
  const std::vector<std::pair<Dist, Dist>>& modulus_table() const noexcept { return modulus_; }

  /// max_y |f^{-1}(y)|
  std::size_t finite_to_one() const noexcept { return finite_to_one_; }
  /// |f^{-1}(y)| for every codomain point.
  std::vector<std::size_t> fiber_sizes() const;
  bool injective() const noexcept { return finite_to_one_ <= 1; }

 private:
  UnionPtr domain_;
  UnionPtr codomain_;
  std::vector<std::size_t> image_;
  std::vector<std::pair<Dist, Dist>> modulus_;
  std::size_t finite_to_one_ = 0;
};

bool same_space(const UnionPtr& a, const UnionPtr& b);

CoarseMap identity_map(const UnionPtr& space);
/// outer after inner. Throws DomainMismatch.
CoarseMap compose(const CoarseMap& outer, const CoarseMap& inner);

Dist expansion_modulus(const CoarseMap& f, Dist r);
std::size_t finite_to_one_bound(const CoarseMap& f);

/// max_x d(f x, g x). Throws DomainMismatch unless domains and codomains agree.
Dist closeness(const CoarseMap& f, const CoarseMap& g);

struct CoarseEquivalenceReport {
  std::size_t truncation_length = 0;  // domain components
  Dist radius = 0;
  std::vector<Dist> modulus_f;  // omega_f(r), r = 0..radius
  std::vector<Dist> modulus_g;
  Dist g_after_f_to_identity = 0;
  Dist f_after_g_to_identity = 0;
  bool consistent = false;
};

/// Throws DomainMismatch unless g: codomain(f) -> domain(f).
CoarseEquivalenceReport verify_coarse_equivalence(const CoarseMap& f, const CoarseMap& g, Dist radius);

struct RoutingReport {
  std::size_t truncation_length = 0;
  /// R(n): codomain components met by f(X_n), ascending.
  std::vector<std::vector<std::size_t>> targets;
  /// Least n0 with |R(n)| = 1 for all n >= n0; empty when the last
  /// component of the truncation is split.
  std::optional<std::size_t> n0;
  /// i(n) for n >= n0, nullopt below.
  std::vector<std::optional<std::size_t>> index_map;
};

RoutingReport component_routing(const CoarseMap& f);

/// g(y) = the domain point x minimising d(f x, y), least index on ties.
CoarseMap pseudo_inverse(const CoarseMap& f);

}  // namespace coarsekit

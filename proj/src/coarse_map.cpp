#include "coarsekit/coarse_map.hpp"

#include <algorithm>
#include <map>

namespace coarsekit {

CoarseMap::CoarseMap(UnionPtr domain, UnionPtr codomain, std::vector<std::size_t> image)
    : domain_(std::move(domain)), codomain_(std::move(codomain)), image_(std::move(image)) {
  if (!domain_ || !codomain_) throw Error(ErrorKind::InvalidInput, "map without domain or codomain");
  if (image_.size() != domain_->size()) {
    throw Error(ErrorKind::InvalidInput, "map lists " + std::to_string(image_.size()) + " images for " +
                                             std::to_string(domain_->size()) + " domain points");
  }
  for (auto y : image_) {
    if (y >= codomain_->size()) throw Error(ErrorKind::OutOfRange, "image point " + std::to_string(y));
  }

  std::map<Dist, Dist> worst;  // realized domain distance -> max image distance at exactly that distance
  const auto n = image_.size();
  for (std::size_t x = 0; x < n; ++x) {
    worst.try_emplace(0, 0);
    for (std::size_t z = x + 1; z < n; ++z) {
      auto& slot = worst[domain_->distance(x, z)];
      slot = std::max(slot, codomain_->distance(image_[x], image_[z]));
    }
  }
  Dist running = 0;
  for (const auto& [r, w] : worst) {
    running = std::max(running, w);
    modulus_.emplace_back(r, running);
  }
  const auto fibers = fiber_sizes();
  finite_to_one_ = fibers.empty() ? 0 : *std::max_element(fibers.begin(), fibers.end());
}

CoarseMap CoarseMap::from_refs(UnionPtr domain, UnionPtr codomain, const std::vector<PointRef>& image) {
  std::vector<std::size_t> flat;
  flat.reserve(image.size());
  for (const auto& ref : image) flat.push_back(codomain->global(ref));
  return CoarseMap(std::move(domain), std::move(codomain), std::move(flat));
}

std::vector<PointRef> CoarseMap::image_refs() const {
  std::vector<PointRef> out;
  out.reserve(image_.size());
  for (auto y : image_) out.push_back(codomain_->ref(y));
  return out;
}

Dist CoarseMap::modulus(Dist r) const {
  if (r <= 0) return 0;
  auto it = std::upper_bound(modulus_.begin(), modulus_.end(), r,
                             [](Dist value, const auto& entry) { return value < entry.first; });
  if (it == modulus_.begin()) return 0;
  return std::prev(it)->second;
}

std::vector<std::size_t> CoarseMap::fiber_sizes() const {
  std::vector<std::size_t> out(codomain_->size(), 0);
  for (auto y : image_) ++out[y];
  return out;
}

bool same_space(const UnionPtr& a, const UnionPtr& b) { return a == b || *a == *b; }

CoarseMap identity_map(const UnionPtr& space) {
  std::vector<std::size_t> image(space->size());
  for (std::size_t x = 0; x < image.size(); ++x) image[x] = x;
  return CoarseMap(space, space, std::move(image));
}

CoarseMap compose(const CoarseMap& outer, const CoarseMap& inner) {
  if (!same_space(inner.codomain_ptr(), outer.domain_ptr())) {
    throw Error(ErrorKind::DomainMismatch, "composition: inner codomain differs from outer domain");
  }
  std::vector<std::size_t> image(inner.domain().size());
  for (std::size_t x = 0; x < image.size(); ++x) image[x] = outer(inner(x));
  return CoarseMap(inner.domain_ptr(), outer.codomain_ptr(), std::move(image));
}

Dist expansion_modulus(const CoarseMap& f, Dist r) { return f.modulus(r); }

std::size_t finite_to_one_bound(const CoarseMap& f) { return f.finite_to_one(); }

Dist closeness(const CoarseMap& f, const CoarseMap& g) {
  if (!same_space(f.domain_ptr(), g.domain_ptr()) || !same_space(f.codomain_ptr(), g.codomain_ptr())) {
    throw Error(ErrorKind::DomainMismatch, "closeness of maps with different domain or codomain");
  }
  Dist worst = 0;
  for (std::size_t x = 0; x < f.domain().size(); ++x) {
    worst = std::max(worst, f.codomain().distance(f(x), g(x)));
  }
  return worst;
}

CoarseEquivalenceReport verify_coarse_equivalence(const CoarseMap& f, const CoarseMap& g, Dist radius) {
  if (!same_space(g.domain_ptr(), f.codomain_ptr()) || !same_space(g.codomain_ptr(), f.domain_ptr())) {
    throw Error(ErrorKind::DomainMismatch, "g must map the codomain of f back to its domain");
  }
  CoarseEquivalenceReport report;
  report.truncation_length = f.domain().component_count();
  report.radius = radius;
  for (Dist r = 0; r <= radius; ++r) {
    report.modulus_f.push_back(f.modulus(r));
    report.modulus_g.push_back(g.modulus(r));
  }
  const auto gf = compose(g, f);
  const auto fg = compose(f, g);
  report.g_after_f_to_identity = closeness(gf, identity_map(f.domain_ptr()));
  report.f_after_g_to_identity = closeness(fg, identity_map(f.codomain_ptr()));
  // On a truncation every quantity above is a finite maximum and both
  // modulus tables cover every realized distance.
  report.consistent = !f.modulus_table().empty() && !g.modulus_table().empty();
  return report;
}

RoutingReport component_routing(const CoarseMap& f) {
  const auto& X = f.domain();
  const auto& Y = f.codomain();
  RoutingReport report;
  report.truncation_length = X.component_count();
  report.targets.resize(X.component_count());
  for (std::size_t n = 0; n < X.component_count(); ++n) {
    auto& r = report.targets[n];
    for (auto x : X.component_points(n)) r.push_back(Y.component_of(f(x)));
    std::sort(r.begin(), r.end());
    r.erase(std::unique(r.begin(), r.end()), r.end());
  }
  std::size_t n0 = X.component_count();
  while (n0 > 0 && report.targets[n0 - 1].size() == 1) --n0;
  report.index_map.assign(X.component_count(), std::nullopt);
  if (n0 < X.component_count()) {
    report.n0 = n0;
    for (std::size_t n = n0; n < X.component_count(); ++n) report.index_map[n] = report.targets[n].front();
  }
  return report;
}

CoarseMap pseudo_inverse(const CoarseMap& f) {
  const auto& X = f.domain();
  const auto& Y = f.codomain();
  std::vector<std::size_t> image(Y.size(), 0);
  for (std::size_t y = 0; y < Y.size(); ++y) {
    Dist best = -1;
    for (std::size_t x = 0; x < X.size(); ++x) {
      const auto d = Y.distance(f(x), y);
      if (best < 0 || d < best) best = d, image[y] = x;
    }
  }
  return CoarseMap(f.codomain_ptr(), f.domain_ptr(), std::move(image));
}

}  // namespace coarsekit

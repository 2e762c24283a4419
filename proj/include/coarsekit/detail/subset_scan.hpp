#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "coarsekit/error.hpp"
#include "coarsekit/metric.hpp"

namespace coarsekit::detail {

/// Incrementally maintained subset A of a list of "local" points, each of
/// which knows the global points within distance t of it. Keeps |A|, the
/// outer boundary size |d_t(A)| over the global space, and a weight sum.
class BoundaryState {
 public:
  /// `reach[i]` lists global points within distance t of local point i,
  /// excluding the point itself. `global_of[i]` is local point i's global index.
  BoundaryState(std::size_t global_size, std::vector<std::size_t> global_of,
                std::vector<std::vector<std::size_t>> reach, std::vector<std::int64_t> weight = {})
      : global_of_(std::move(global_of)),
        reach_(std::move(reach)),
        weight_(std::move(weight)),
        member_(global_size, false),
        covered_(global_size, 0),
        local_in_(global_of_.size(), false) {
    if (weight_.empty()) weight_.assign(global_of_.size(), 0);
  }

  void toggle(std::size_t local) {
    const auto g = global_of_[local];
    if (!local_in_[local]) {
      if (covered_[g] > 0) --boundary_;
      member_[g] = true;
      local_in_[local] = true;
      ++size_;
      sum_ += weight_[local];
      for (auto z : reach_[local]) {
        if (covered_[z]++ == 0 && !member_[z]) ++boundary_;
      }
    } else {
      for (auto z : reach_[local]) {
        if (--covered_[z] == 0 && !member_[z]) --boundary_;
      }
      member_[g] = false;
      local_in_[local] = false;
      --size_;
      sum_ -= weight_[local];
      if (covered_[g] > 0) ++boundary_;
    }
  }

  bool contains(std::size_t local) const { return local_in_[local]; }
  /// Whether global point g is currently an outer boundary point.
  bool on_boundary(std::size_t global) const { return !member_[global] && covered_[global] > 0; }
  std::size_t size() const noexcept { return size_; }
  std::size_t boundary_size() const noexcept { return boundary_; }
  std::int64_t weight_sum() const noexcept { return sum_; }
  std::size_t local_count() const noexcept { return global_of_.size(); }
  std::size_t global_of(std::size_t local) const { return global_of_[local]; }
  const std::vector<std::size_t>& reach(std::size_t local) const { return reach_[local]; }

  PointSet members_local() const {
    PointSet out;
    for (std::size_t i = 0; i < local_in_.size(); ++i)
      if (local_in_[i]) out.push_back(i);
    return out;
  }

  void clear() {
    for (std::size_t i = 0; i < local_in_.size(); ++i)
      if (local_in_[i]) toggle(i);
  }

 private:
  std::vector<std::size_t> global_of_;
  std::vector<std::vector<std::size_t>> reach_;
  std::vector<std::int64_t> weight_;
  std::vector<bool> member_;
  std::vector<std::uint32_t> covered_;
  std::vector<bool> local_in_;
  std::size_t size_ = 0;
  std::size_t boundary_ = 0;
  std::int64_t sum_ = 0;
};

/// Builds a BoundaryState over the listed global points of any space with
/// size() and distance(a, b).
template <class Space>
BoundaryState make_boundary_state(const Space& space, const PointSet& locals, Dist t,
                                  std::vector<std::int64_t> weight = {}) {
  std::vector<std::vector<std::size_t>> reach(locals.size());
  for (std::size_t i = 0; i < locals.size(); ++i) {
    for (std::size_t z = 0; z < space.size(); ++z) {
      if (z != locals[i] && space.distance(locals[i], z) <= t) reach[i].push_back(z);
    }
  }
  return BoundaryState(space.size(), locals, std::move(reach), std::move(weight));
}

/// Subsets as bitmasks over local indices; this is the lexicographic order
/// on their sorted element lists.
inline bool lex_less(std::uint64_t a, std::uint64_t b) {
  if (a == b) return false;
  const auto diff = a ^ b;
  const auto low = std::countr_zero(diff);
  const auto above = ~((std::uint64_t{2} << low) - 1);  // bits strictly above `low`
  // The set holding the lowest differing element comes first unless the
  // other one ends there (it is then a proper prefix).
  if (a & (std::uint64_t{1} << low)) return (b & above) != 0;
  return (a & above) == 0;
}

inline PointSet mask_to_set(std::uint64_t mask, const PointSet& locals) {
  PointSet out;
  for (std::size_t i = 0; i < locals.size(); ++i)
    if (mask & (std::uint64_t{1} << i)) out.push_back(locals[i]);
  return out;
}

inline void check_cap(std::size_t n, std::size_t cap, const char* what) {
  if (n > cap || n > 62) {
    throw Error(ErrorKind::TooLarge, std::string(what) + ": " + std::to_string(n) +
                                         " points exceed the exact-enumeration cap " +
                                         std::to_string(cap));
  }
}

/// Visits every subset of the local points exactly once in Gray-code order
/// (the empty set included), calling visit(mask, state).
template <class Visit>
void gray_scan(BoundaryState& state, Visit&& visit) {
  state.clear();
  const auto n = state.local_count();
  std::uint64_t mask = 0;
  visit(mask, static_cast<const BoundaryState&>(state));
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t i = 1; i < total; ++i) {
    const auto bit = static_cast<std::size_t>(std::countr_zero(i));
    state.toggle(bit);
    mask ^= std::uint64_t{1} << bit;
    visit(mask, static_cast<const BoundaryState&>(state));
  }
}

}  // namespace coarsekit::detail

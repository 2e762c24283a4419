#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "coarsekit/coarse_map.hpp"
#include "coarsekit/expansion.hpp"
#include "coarsekit/metric.hpp"
#include "coarsekit/rational.hpp"

namespace coarsekit {

using Coeff = std::int64_t;

/// Finitely supported integer 0-chain. Zero coefficients are never stored.
class Chain0 {
 public:
  Chain0() = default;

  void add(PointRef point, Coeff value);
  Coeff operator[](PointRef point) const;
  const std::map<PointRef, Coeff>& coefficients() const noexcept { return coeffs_; }
  bool empty() const noexcept { return coeffs_.empty(); }

  Coeff sup_norm() const;
  Coeff l1_norm() const;

  Chain0& operator+=(const Chain0& other);
  Chain0& operator-=(const Chain0& other);
  friend Chain0 operator+(Chain0 a, const Chain0& b) { return a += b; }
  friend Chain0 operator-(Chain0 a, const Chain0& b) { return a -= b; }
  friend bool operator==(const Chain0&, const Chain0&) = default;

 private:
  std::map<PointRef, Coeff> coeffs_;
};

/// Finitely supported integer 1-chain on ordered pairs. Stored normalised:
/// only pairs (x, z) with x < z carry a coefficient, since the boundary of
/// (z, x) is minus that of (x, z); diagonal pairs have zero boundary and
/// are dropped.
class Chain1 {
 public:
  using Pair = std::pair<PointRef, PointRef>;

  void add(PointRef x, PointRef z, Coeff value);
  const std::map<Pair, Coeff>& coefficients() const noexcept { return coeffs_; }
  bool empty() const noexcept { return coeffs_.empty(); }

  Coeff sup_norm() const;
  /// max d(x, z) over the support, 0 for the empty chain.
  Dist propagation(const CoarseUnion& space) const;

  Chain1& operator+=(const Chain1& other);
  friend Chain1 operator+(Chain1 a, const Chain1& b) { return a += b; }
  friend bool operator==(const Chain1&, const Chain1&) = default;

 private:
  std::map<Pair, Coeff> coeffs_;
};

/// Linear extension of (x, z) -> x - z.
Chain0 boundary_chain(const Chain1& b);

Chain0 pushforward(const CoarseMap& f, const Chain0& a);
Chain1 pushforward(const CoarseMap& f, const Chain1& b);

/// Sum of coefficients over each component.
std::vector<Coeff> component_sums(const CoarseUnion& space, const Chain0& a);

/// 1 at each listed global point.
Chain0 indicator_chain(const CoarseUnion& space, std::span<const std::size_t> points);

struct WhyteReport {
  std::size_t component = 0;
  Dist t = 1;
  /// max |sum_A a| / |d_t(A)| over A in X_n with nonempty boundary.
  Rational c_star{0};
  PointSet witness;  // global indices, lexicographically least maximiser
  /// Some A with empty t-boundary has a nonzero sum: no finite constant works.
  bool infinite_obstruction = false;
  PointSet obstruction_witness;
  Coeff obstruction_sum = 0;
};

/// Exhaustive over subsets of component n; boundaries are taken in the
/// whole union. Throws TooLarge above cap, OutOfRange for a bad component.
WhyteReport whyte_check_exact(const CoarseUnion& space, const Chain0& a, Dist t, std::size_t component,
                              std::size_t cap = kDefaultExactCap);

/// Local search for A in component n with |sum_A a| > C |d_t(A)|; a found
/// witness is re-checked exactly. Absence of a witness proves nothing.
std::optional<PointSet> whyte_falsify(const CoarseUnion& space, const Chain0& a, Dist t, std::size_t component,
                                      const Rational& C, std::size_t budget, std::uint64_t seed);

struct FillingCertificate {
  Chain1 chain;  // boundary_chain(chain) equals the target exactly
  Dist t = 1;    // propagation bound
  Coeff c = 0;   // coefficient bound, minimal for fill_chain
};

/// The points of one t-cluster (connected piece of the graph d <= t) whose
/// coefficients do not cancel.
struct FillObstruction {
  PointSet cut;
  Coeff total = 0;
};

using FillResult = std::variant<FillingCertificate, FillObstruction>;

/// Least c such that a = boundary(b) with propagation(b) <= t and
/// sup|b| <= c, with such a b. Feasibility at a given c is a transshipment
/// problem (divergence a_x, capacity c on every pair within distance t)
/// solved by max flow; c is found by binary search on [0, sum |a_x|].
FillResult fill_chain(const CoarseUnion& space, const Chain0& a, Dist t);

/// #{ {x, z} : x in A, z not in A, d(x, z) <= t }
std::size_t cut_size(const CoarseUnion& space, std::span<const std::size_t> set, Dist t);

/// Explicit filling of f_*a - g_*a by the pairs (f x, g x); its
/// propagation is at most closeness(f, g).
FillingCertificate closeness_filling(const CoarseMap& f, const CoarseMap& g, const Chain0& a);

/// a^Z_y = [y in Z] - |f^{-1}(y)| on the whole codomain.
Chain0 target_chain(const CoarseMap& f, std::span<const std::size_t> target_set);

/// Whyte check of a^Z on codomain component n:
/// max ||A cap Z| - |f^{-1}(A)|| / |d_t(A)|.
WhyteReport injectivity_obstruction(const CoarseMap& f, std::span<const std::size_t> target_set, Dist t,
                                    std::size_t component, std::size_t cap = kDefaultExactCap);

/// Z = union over n >= n0 of Z_n, where Z_n holds f(f^{-1}(Y_n)) padded by
/// the least remaining points of Y_n up to |f^{-1}(Y_n)| points. Throws
/// PreconditionViolated naming n when |f^{-1}(Y_n)| > |Y_n|.
PointSet build_target_set(const CoarseMap& f, std::size_t n0);

}  // namespace coarsekit

#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include "coarsekit/rigidity.hpp"
#include "oracles.hpp"

namespace ck = coarsekit;
using ck::ErrorKind;
using ck::Rational;

namespace {

template <class F>
void expect_error(ErrorKind kind, F&& fn) {
  try {
    fn();
    FAIL() << "expected " << ck::to_string(kind);
  } catch (const ck::Error& e) {
    EXPECT_EQ(e.kind(), kind) << e.what();
  }
}

ck::UnionPtr cycles(const std::vector<std::size_t>& sizes, ck::Dist gap = 1) {
  std::vector<ck::FiniteSpace> parts;
  for (auto n : sizes) parts.push_back(n == 1 ? ck::FiniteSpace(std::vector<std::vector<ck::Dist>>{{0}}) : n == 2 ? oracle::path(2).metric() : oracle::cycle(n).metric());
  return ck::share(ck::assemble_union(parts, gap));
}

/// Point p of X_n goes to point min(p, |Y_m| - 1) of Y_route[n].
ck::CoarseMap routed(const ck::UnionPtr& X, const ck::UnionPtr& Y, const std::vector<std::size_t>& route) {
  std::vector<std::size_t> image(X->size());
  for (std::size_t x = 0; x < X->size(); ++x) {
    const auto ref = X->ref(x);
    const auto m = route[ref.component];
    image[x] = Y->global({m, std::min(ref.point, Y->component_size(m) - 1)});
  }
  return ck::CoarseMap(X, Y, image);
}

std::vector<std::size_t> iota(std::size_t n) {
  std::vector<std::size_t> v(n);
  std::iota(v.begin(), v.end(), 0);
  return v;
}

}  // namespace

TEST(CheckInjective, Bijective) {
  const auto u = cycles({3, 4, 5});
  const auto r = ck::check_injective_condition(ck::identity_map(u));
  EXPECT_TRUE(r.pass);
  EXPECT_EQ(r.n0, std::optional<std::size_t>(0));
  EXPECT_EQ(r.truncation_length, 3u);
}

TEST(CheckInjective, UncompensatedOverflowFails) {
  const auto Y = cycles({3, 4, 5, 6, 7});
  const auto X = cycles({3, 4, 5, 7, 7});
  const auto r = ck::check_injective_condition(routed(X, Y, iota(5)));
  EXPECT_FALSE(r.pass);
  EXPECT_EQ(r.overfull, (std::vector<std::size_t>{3}));
}

TEST(CheckInjective, HeavyHeadBalancedByTwo) {
  const auto u = cycles({4, 5, 6, 7});
  auto image = ck::identity_map(u).image();
  image[u->global({1, 0})] = u->global({0, 0});
  image[u->global({1, 1})] = u->global({0, 1});
  const auto r = ck::check_injective_condition(ck::CoarseMap(u, u, image));
  EXPECT_TRUE(r.pass);
  EXPECT_EQ(r.n0, std::optional<std::size_t>(2));
  EXPECT_EQ(r.preimage_sizes[0], 6u);
}

TEST(CheckBijective, Identity) {
  const auto u = cycles({3, 4, 5});
  const auto r = ck::check_bijective_condition(ck::identity_map(u));
  EXPECT_TRUE(r.pass);
  EXPECT_EQ(r.n0, std::optional<std::size_t>(0));
  EXPECT_EQ(r.domain_tail, r.codomain_tail);
  EXPECT_EQ(r.leftover_x, 0u);
  EXPECT_EQ(r.leftover_y, 0u);
}

TEST(CheckBijective, CardinalityObstructionNamesComponent) {
  const auto Y = cycles({3, 4, 5, 6, 7, 8});
  const auto X = cycles({3, 4, 5, 6, 7, 10});
  const auto r = ck::check_bijective_condition(routed(X, Y, iota(6)));
  EXPECT_FALSE(r.pass);
  EXPECT_EQ(r.obstruction, ck::ObstructionKind::Cardinality);
  ASSERT_EQ(r.cardinality_mismatches.size(), 1u);
  EXPECT_EQ(r.cardinality_mismatches[0].domain_component, 5u);
  EXPECT_EQ(r.cardinality_mismatches[0].domain_size, 10u);
  EXPECT_EQ(r.cardinality_mismatches[0].codomain_size, 8u);
}

TEST(CheckBijective, SwapOfEqualComponents) {
  const auto u = cycles({3, 4, 5, 5, 6});
  const auto r = ck::check_bijective_condition(routed(u, u, {0, 1, 3, 2, 4}));
  EXPECT_TRUE(r.pass);
  EXPECT_EQ(r.codomain_tail, (std::vector<std::size_t>{0, 1, 3, 2, 4}));
}

TEST(CheckBijective, RoutingAndCollisionObstructions) {
  const auto u = cycles({3, 3, 3});
  auto image = ck::identity_map(u).image();
  image[u->global({2, 0})] = u->global({1, 0});
  EXPECT_EQ(ck::check_bijective_condition(ck::CoarseMap(u, u, image)).obstruction, ck::ObstructionKind::Routing);

  const auto big = cycles({3, 3, 6});
  const auto r = ck::check_bijective_condition(routed(u, big, {0, 2, 2}));
  EXPECT_FALSE(r.pass);
  EXPECT_EQ(r.obstruction, ck::ObstructionKind::IndexCollision);
}

TEST(CheckBijective, LeftoverImbalanceAndLateTail) {
  // Head X_0 (3 points) lands in Y_0 (4 points), nothing else lands in Y_0: imbalance everywhere.
  const auto X = cycles({3, 5, 6});
  const auto Y = cycles({4, 5, 6});
  const auto r = ck::check_bijective_condition(routed(X, Y, {0, 1, 2}));
  EXPECT_FALSE(r.pass);
  EXPECT_EQ(r.obstruction, ck::ObstructionKind::Cardinality);

  // Head X_0, X_1 (3 + 3) both into Y_0 (6): excluded from the tail, leftovers 6 = 6.
  const auto X2 = cycles({3, 3, 5, 7});
  const auto Y2 = cycles({6, 5, 7});
  auto image = routed(X2, Y2, {0, 0, 1, 2}).image();
  for (std::size_t p = 0; p < 3; ++p) image[X2->global({0, p})] = Y2->global({0, p});
  for (std::size_t p = 0; p < 3; ++p) image[X2->global({1, p})] = Y2->global({0, 3 + p});
  const auto r2 = ck::check_bijective_condition(ck::CoarseMap(X2, Y2, image));
  EXPECT_TRUE(r2.pass);
  EXPECT_EQ(r2.n0, std::optional<std::size_t>(2));
  EXPECT_EQ(r2.leftover_x, 6u);
  EXPECT_EQ(r2.leftover_y, 6u);
}

TEST(CheckBijective, InvariantUnderCodomainIsometries) {
  std::mt19937_64 rng(2);
  const auto u = cycles({4, 5, 6, 7});
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<std::size_t> image(u->size());
    for (std::size_t x = 0; x < u->size(); ++x) {
      const auto ref = u->ref(x);
      image[x] = u->global({ref.component, rng() % u->component_size(ref.component)});
    }
    const ck::CoarseMap f(u, u, image);
    // Rotate each codomain cycle by a random amount.
    std::vector<std::size_t> rotated(u->size());
    for (std::size_t c = 0; c < 4; ++c) {
      const auto n = u->component_size(c);
      const auto shift = rng() % n;
      for (std::size_t p = 0; p < n; ++p) rotated[u->global({c, p})] = u->global({c, (p + shift) % n});
    }
    const auto g = ck::compose(ck::CoarseMap(u, u, rotated), f);
    const auto a = ck::check_bijective_condition(f);
    const auto b = ck::check_bijective_condition(g);
    EXPECT_EQ(a.pass, b.pass);
    EXPECT_EQ(a.n0, b.n0);
    EXPECT_EQ(a.codomain_tail, b.codomain_tail);
  }
}

TEST(Bijectivize, IsomorphismIsKept) {
  const auto u = cycles({4, 5, 6});
  const auto f = routed(u, u, iota(3));
  const auto report = ck::check_bijective_condition(f);
  const auto result = ck::bijectivize_expander(f, report);
  EXPECT_EQ(result.bijection.image(), f.image());
  EXPECT_EQ(result.per_component_radius, (std::vector<ck::Dist>{0, 0, 0}));
  EXPECT_EQ(result.closeness_to_f, 0);
  EXPECT_FALSE(result.radii_growing);
}

TEST(Bijectivize, CollisionsAreRepaired) {
  std::mt19937_64 rng(8);
  const auto u = cycles({6, 7, 8, 9, 10});
  for (int trial = 0; trial < 20; ++trial) {
    auto image = ck::identity_map(u).image();
    for (std::size_t c = 0; c < 5; ++c) {
      const auto n = u->component_size(c);
      const auto a = rng() % n, b = rng() % n;
      image[u->global({c, a})] = u->global({c, b});
    }
    const ck::CoarseMap f(u, u, image);
    const auto report = ck::check_bijective_condition(f);
    ASSERT_TRUE(report.pass);
    const auto result = ck::bijectivize_expander(f, report);
    EXPECT_TRUE(result.bijection.injective());
    EXPECT_EQ(result.closeness_to_f, ck::closeness(result.bijection, f));
    for (std::size_t x = 0; x < u->size(); ++x) {
      EXPECT_EQ(u->component_of(result.bijection(x)), u->component_of(f(x)));
    }
    const auto worst = *std::max_element(result.per_component_radius.begin(), result.per_component_radius.end());
    EXPECT_LE(result.closeness_to_f, worst);
  }
}

TEST(Bijectivize, RejectsFailedReport) {
  const auto Y = cycles({3, 4});
  const auto X = cycles({3, 5});
  const auto f = routed(X, Y, {0, 1});
  const auto report = ck::check_bijective_condition(f);
  ASSERT_FALSE(report.pass);
  expect_error(ErrorKind::PreconditionViolated, [&] { ck::bijectivize_expander(f, report); });
}

TEST(Bijectivize, LeftoversPairedLeastFirst) {
  const auto X = cycles({3, 3, 5, 7});
  const auto Y = cycles({6, 5, 7});
  auto image = routed(X, Y, {0, 0, 1, 2}).image();
  const ck::CoarseMap f(X, Y, image);
  const auto report = ck::check_bijective_condition(f);
  ASSERT_TRUE(report.pass);
  const auto result = ck::bijectivize_expander(f, report);
  for (std::size_t x = 0; x < 6; ++x) EXPECT_EQ(result.bijection(x), x);
}

TEST(Bijectivize, TheoremRoundTripOnTinyInstances) {
  std::mt19937_64 rng(44);
  for (int trial = 0; trial < 150; ++trial) {
    const std::vector<std::size_t> xs{1 + rng() % 3, 1 + rng() % 3, 2 + rng() % 3};
    std::vector<std::size_t> ys = xs;
    if (rng() % 3 == 0) ys[rng() % 3] += 1;
    if (rng() % 3 == 0) ys[rng() % 3] = std::max<std::size_t>(1, ys[rng() % 3] - 1);
    const auto X = cycles(xs, 2), Y = cycles(ys, 2);
    std::vector<std::size_t> perm{0, 1, 2};
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<std::size_t> image(X->size());
    for (std::size_t x = 0; x < X->size(); ++x) {
      const auto m = perm[X->ref(x).component];
      image[x] = Y->global({m, rng() % Y->component_size(m)});
    }
    const ck::CoarseMap f(X, Y, image);
    const auto report = ck::check_bijective_condition(f);
    if (report.pass) {
      const auto result = ck::bijectivize_expander(f, report);
      EXPECT_TRUE(result.bijection.injective());
      for (std::size_t k = 0; k < report.domain_tail.size(); ++k) {
        EXPECT_LE(result.per_component_radius[k], Y->component(report.codomain_tail[k]).diameter());
      }
    }
    if (X->size() != Y->size()) continue;
    oracle::Matrix d(Y->size(), std::vector<ck::Dist>(Y->size()));
    for (std::size_t a = 0; a < Y->size(); ++a)
      for (std::size_t b = 0; b < Y->size(); ++b) d[a][b] = Y->distance(a, b);
    const auto best = *oracle::min_injective_closeness(image, d);
    ck::Dist gap = oracle::kInf;
    for (std::size_t a = 0; a < Y->size(); ++a)
      for (std::size_t b = 0; b < Y->size(); ++b)
        if (Y->component_of(a) != Y->component_of(b)) gap = std::min(gap, d[a][b]);
    if (best < gap) EXPECT_TRUE(report.pass) << trial;
  }
}

TEST(SchroederBernstein, MutualInverses) {
  ck::PartialMap g{2, 0, 1}, h{1, 2, 0};
  const auto r = ck::sb_bijection(g, h);
  EXPECT_TRUE(r.bijective());
  EXPECT_EQ(r.bijection, g);
}

TEST(SchroederBernstein, RandomInjectionsGiveBijections) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 30;
    auto gy = iota(n), hx = iota(n);
    std::shuffle(gy.begin(), gy.end(), rng);
    std::shuffle(hx.begin(), hx.end(), rng);
    // Partial injections: drop a few values so the chains have ends.
    ck::PartialMap g(n), h(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (rng() % 5) g[i] = gy[i];
      if (rng() % 5) h[i] = hx[i];
    }
    const auto r = ck::sb_bijection(g, h);
    for (std::size_t x = 0; x < n; ++x) {
      if (!r.bijection[x]) continue;
      const auto y = *r.bijection[x];
      const bool via_g = g[x] == y;
      const bool via_h = h[y] == x;
      EXPECT_TRUE(via_g || via_h);
      EXPECT_EQ(r.uses_g[x], via_g);
    }
    std::vector<bool> hit(n, false);
    for (const auto& y : r.bijection)
      if (y) {
        EXPECT_FALSE(hit[*y]);
        hit[*y] = true;
      }
  }
}

TEST(SchroederBernstein, TotalInjectionsOnEqualSets) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 20; ++trial) {
    auto gy = iota(30), hx = iota(30);
    std::shuffle(gy.begin(), gy.end(), rng);
    std::shuffle(hx.begin(), hx.end(), rng);
    const auto r = ck::sb_bijection(ck::PartialMap(gy.begin(), gy.end()), ck::PartialMap(hx.begin(), hx.end()));
    EXPECT_TRUE(r.bijective());
  }
}

TEST(SchroederBernstein, OneExtraDomainPoint) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t ny = 10;
    auto gy = iota(ny);
    std::shuffle(gy.begin(), gy.end(), rng);
    ck::PartialMap g(ny + 1);
    const auto skip = rng() % (ny + 1);
    for (std::size_t x = 0, k = 0; x < ny + 1; ++x)
      if (x != skip) g[x] = gy[k++];
    auto hx = iota(ny + 1);
    std::shuffle(hx.begin(), hx.end(), rng);
    ck::PartialMap h(hx.begin(), hx.begin() + ny);
    const auto r = ck::sb_bijection(g, h);
    EXPECT_EQ(r.unmatched_domain.size(), 1u);
    EXPECT_TRUE(r.unmatched_codomain.empty());
  }
}

TEST(SchroederBernstein, NotInjective) {
  ck::PartialMap g{0, 0}, h{0, 1};
  try {
    ck::sb_bijection(g, h);
    FAIL();
  } catch (const ck::Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotInjective);
    EXPECT_NE(std::string(e.what()).find("g(0)"), std::string::npos);
  }
}

TEST(SchroederBernstein, CoarseMapsAndPointwiseBound) {
  std::mt19937_64 rng(9);
  const auto X = cycles({5, 6});
  const auto Y = cycles({5, 6});
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<std::size_t> gp(11), hp(11);
    for (std::size_t c = 0; c < 2; ++c) {
      auto perm = iota(X->component_size(c));
      std::shuffle(perm.begin(), perm.end(), rng);
      for (std::size_t p = 0; p < perm.size(); ++p) gp[X->global({c, p})] = Y->global({c, perm[p]});
      std::shuffle(perm.begin(), perm.end(), rng);
      for (std::size_t p = 0; p < perm.size(); ++p) hp[Y->global({c, p})] = X->global({c, perm[p]});
    }
    const ck::CoarseMap g(X, Y, gp), h(Y, X, hp);
    const auto result = ck::sb_bijection(g, h);
    ASSERT_TRUE(result.map);
    // f = g: closeness(b, g) <= max over im(h) of d(h^{-1}(x), g(x)).
    ck::Dist bound = 0;
    for (std::size_t y = 0; y < Y->size(); ++y) bound = std::max(bound, Y->distance(y, g(h(y))));
    EXPECT_LE(ck::closeness(*result.map, g), bound);
  }
}

TEST(PreimageDeviation, Bijection) {
  const std::vector<std::size_t> f{2, 0, 3, 1};
  const auto r = ck::preimage_deviation_check(f, 4, true);
  EXPECT_EQ(r.m, 1u);
  EXPECT_EQ(r.violations, 0u);
  EXPECT_EQ(r.subsets_checked, 16u);
}

TEST(PreimageDeviation, OneDoubleFibre) {
  const std::vector<std::size_t> f{0, 0, 1, 2};
  const auto r = ck::preimage_deviation_check(f, 4, true);
  EXPECT_EQ(r.m, 2u);
  EXPECT_EQ(r.violations, 0u);
  EXPECT_LE(r.max_ratio, Rational(1));
}

TEST(PreimageDeviation, AllMapsOnFourPoints) {
  std::size_t maps = 0;
  for (std::size_t code = 0; code < 256; ++code) {
    std::vector<std::size_t> f{code & 3, code >> 2 & 3, code >> 4 & 3, code >> 6 & 3};
    const auto r = ck::preimage_deviation_check(f, 4, true);
    EXPECT_EQ(r.violations, 0u);
    EXPECT_LE(r.max_ratio, Rational(1));
    ++maps;
  }
  EXPECT_EQ(maps, 256u);
}

TEST(PreimageDeviation, Sampled) {
  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + rng() % 10;
    std::vector<std::size_t> f(n);
    for (auto& y : f) y = rng() % n;
    const auto r = ck::preimage_deviation_check(f, n, false, 200, trial);
    EXPECT_EQ(r.subsets_checked, 200u);
    EXPECT_EQ(r.violations, 0u);
  }
}

TEST(PreimageDeviation, Errors) {
  const std::vector<std::size_t> f{0, 1};
  expect_error(ErrorKind::SizeMismatch, [&] { ck::preimage_deviation_check(f, 3, true); });
  const std::vector<std::size_t> big(30, 0);
  expect_error(ErrorKind::TooLarge, [&] { ck::preimage_deviation_check(big, 30, true); });
}

TEST(WhyteThreshold, Formula) {
  EXPECT_EQ(ck::whyte_threshold(3, Rational(1), 1), Rational(0));
  EXPECT_EQ(ck::whyte_threshold(3, Rational(1), 2), Rational(3));
  EXPECT_EQ(ck::whyte_threshold(4, Rational(6, 5), 3), Rational(20, 3));
  expect_error(ErrorKind::NonpositiveH, [] { ck::whyte_threshold(3, Rational(0), 2); });
}

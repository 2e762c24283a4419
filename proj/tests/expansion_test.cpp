#include <gtest/gtest.h>

#include <random>

#include "coarsekit/constructions.hpp"
#include "coarsekit/expansion.hpp"
#include "oracles.hpp"

namespace ck = coarsekit;
using ck::ErrorKind;
using ck::PointSet;
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

}  // namespace

TEST(ExpansionRatio, Examples) {
  EXPECT_EQ(ck::expansion_ratio(oracle::complete(4), PointSet{0}), Rational(4));
  EXPECT_EQ(ck::expansion_ratio(oracle::cycle(8), PointSet{0, 1, 2, 3}), Rational(1));
  EXPECT_EQ(ck::expansion_ratio(oracle::complete(6), PointSet{0, 1, 2, 4, 5}), Rational(6, 5));
  expect_error(ErrorKind::EmptySet, [] { ck::expansion_ratio(oracle::cycle(4), PointSet{}); });
  expect_error(ErrorKind::FullSet, [] { ck::expansion_ratio(oracle::cycle(3), PointSet{0, 1, 2}); });
}

TEST(CheegerExact, KnownGraphs) {
  const auto k6 = ck::cheeger_exact(oracle::complete(6));
  EXPECT_EQ(k6.h_star, Rational(6, 5));
  EXPECT_EQ(k6.method, ck::CertificateMethod::Exact);
  EXPECT_EQ(k6.k, 5u);
  const auto c8 = ck::cheeger_exact(oracle::cycle(8));
  EXPECT_EQ(c8.h_star, Rational(1));
  EXPECT_EQ(c8.witness, (PointSet{0, 1, 2, 3}));
}

TEST(CheegerExact, CompleteGraphs) {
  for (std::int64_t n = 3; n <= 10; ++n) {
    EXPECT_EQ(ck::cheeger_exact(oracle::complete(n)).h_star, Rational(n, n - 1)) << n;
  }
}

TEST(CheegerExact, PetersenAgreesWithOracle) {
  const auto cert = ck::cheeger_exact(oracle::petersen());
  const auto expect = oracle::cheeger(oracle::floyd(10, oracle::petersen_edges()));
  EXPECT_EQ(cert.h_star, expect.h);
  EXPECT_EQ(cert.witness, expect.witness);
}

TEST(CheegerExact, RandomGraphsAgreeWithOracleAndWitnessAttains) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 2 + trial % 10;
    const auto edges = oracle::random_connected_edges(n, 0.4, rng);
    const auto g = oracle::graph(n, edges);
    const auto cert = ck::cheeger_exact(g);
    const auto expect = oracle::cheeger(oracle::floyd(n, edges));
    EXPECT_EQ(cert.h_star, expect.h);
    EXPECT_EQ(cert.witness, expect.witness);
    EXPECT_EQ(ck::expansion_ratio(g, cert.witness), cert.h_star);
    EXPECT_GT(cert.h_star, Rational(0));
  }
}

TEST(CheegerExact, AddingEdgesNeverLowersTheConstant) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 4 + trial % 6;
    auto edges = oracle::random_connected_edges(n, 0.3, rng);
    const auto before = ck::cheeger_exact(oracle::graph(n, edges)).h_star;
    std::vector<ck::Edge> missing;
    for (const auto& e : oracle::complete_edges(n))
      if (std::find(edges.begin(), edges.end(), e) == edges.end()) missing.push_back(e);
    if (missing.empty()) continue;
    edges.push_back(missing[rng() % missing.size()]);
    EXPECT_GE(ck::cheeger_exact(oracle::graph(n, edges)).h_star, before);
  }
}

TEST(CheegerExact, Limits) {
  expect_error(ErrorKind::TooLarge, [] { ck::cheeger_exact(oracle::cycle(12), 10); });
  expect_error(ErrorKind::EmptyRange, [] { ck::cheeger_exact(oracle::graph(1, {})); });
}

TEST(CheegerExact, HalfStatistic) {
  const auto c8 = ck::cheeger_exact(oracle::cycle(8));
  ASSERT_TRUE(c8.half_ratio);
  EXPECT_EQ(*c8.half_ratio, Rational(1, 2));
}

TEST(VerifyExpander, Examples) {
  const auto yes = ck::verify_expander(oracle::complete(6), 5, Rational(1));
  EXPECT_TRUE(yes.holds);
  EXPECT_EQ(*yes.h_star, Rational(6, 5));

  const auto low = ck::verify_expander(oracle::cycle(6), 1, Rational(1, 10));
  EXPECT_FALSE(low.holds);
  ASSERT_TRUE(low.degree_witness);
  EXPECT_EQ(*low.degree_witness, 0u);

  const auto c100 = ck::verify_expander(oracle::cycle(100), 2, Rational(1, 2));
  EXPECT_FALSE(c100.holds);
  EXPECT_EQ(c100.method, ck::CertificateMethod::Falsified);
  ASSERT_TRUE(c100.witness);
  EXPECT_LT(ck::expansion_ratio(oracle::cycle(100), *c100.witness), Rational(1, 2));
}

TEST(VerifyExpander, AboveCapWithoutWitnessIsTooLarge) {
  expect_error(ErrorKind::TooLarge, [] { ck::verify_expander(oracle::complete(24), 23, Rational(1), 22, 500, 1); });
}

TEST(VerifyExpander, AgreesWithOracle) {
  std::mt19937_64 rng(9);
  const Rational hs[] = {Rational(1, 2), Rational(1), Rational(4, 3), Rational(2)};
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 3 + trial % 8;
    const auto edges = oracle::random_connected_edges(n, 0.45, rng);
    const auto g = oracle::graph(n, edges);
    const auto d = oracle::floyd(n, edges);
    for (std::size_t k = 2; k <= 4; ++k)
      for (const auto& h : hs) {
        const auto verdict = ck::verify_expander(g, k, h);
        EXPECT_EQ(verdict.holds, oracle::expander_holds(d, g.max_degree(), k, h));
        if (verdict.witness) EXPECT_LT(ck::expansion_ratio(g, *verdict.witness), h);
      }
  }
}

TEST(FalsifyExpander, LongCycleHasArcWitness) {
  const auto g = oracle::cycle(1000);
  const auto w = ck::falsify_expander(g, Rational(1, 2), 20000, 3);
  ASSERT_TRUE(w);
  EXPECT_LT(ck::expansion_ratio(g, *w), Rational(1, 2));
}

TEST(FalsifyExpander, CompleteGraphHasNone) {
  EXPECT_FALSE(ck::falsify_expander(oracle::complete(20), Rational(1), 5000, 3));
  EXPECT_EQ(ck::cheeger_exact(oracle::complete(20)).h_star, Rational(20, 19));
}

TEST(FalsifyExpander, ZeroBudget) { EXPECT_FALSE(ck::falsify_expander(oracle::cycle(50), Rational(1), 0, 1)); }

TEST(FalsifyExpander, Deterministic) {
  const auto g = oracle::cycle(300);
  EXPECT_EQ(ck::falsify_expander(g, Rational(1, 3), 4000, 77), ck::falsify_expander(g, Rational(1, 3), 4000, 77));
}

TEST(ExpansionProfile, Examples) {
  const auto k5 = ck::expansion_profile(oracle::complete(5).metric(), 1);
  EXPECT_EQ(k5.full_min, Rational(1));
  EXPECT_EQ(*k5.half_min, Rational(5, 2));
  const auto c8 = ck::expansion_profile(oracle::cycle(8).metric(), 1);
  EXPECT_EQ(*c8.half_min, Rational(6, 4));
  EXPECT_EQ(c8.half_witness.size(), 4u);
}

TEST(ExpansionProfile, AgreesWithOracle) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = 3 + trial % 7;
    const auto edges = oracle::random_connected_edges(n, 0.35, rng);
    const auto d = oracle::floyd(n, edges);
    for (ck::Dist r = 1; r <= 2; ++r) {
      const auto profile = ck::expansion_profile(oracle::graph(n, edges).metric(), r);
      std::optional<Rational> half;
      for (oracle::Mask m = 1; m < (oracle::Mask{1} << n); ++m) {
        const auto s = oracle::popcount(m);
        if (2 * static_cast<std::size_t>(s) > n) continue;
        const Rational q(oracle::popcount(oracle::neighborhood_mask(d, m, r)), s);
        if (!half || q < *half) half = q;
      }
      EXPECT_EQ(profile.half_min, half);
    }
  }
}

TEST(BipartiteExpansion, DoubleOfK4) {
  const auto dbl = ck::bipartite_double(oracle::complete(4));
  const auto bip = ck::bipartite_expansion_exact(dbl.graph, dbl.side1, dbl.side2);
  // A single vertex has 4 neighbours; two vertices of level 1 reach all of level 2.
  EXPECT_EQ(ck::boundary(dbl.graph.metric(), PointSet{0}, 1).size(), 4u);
  EXPECT_EQ(bip.h, Rational(1));
}

TEST(BipartiteExpansion, AgreesWithOracle) {
  for (std::size_t n : {4, 6, 8, 10}) {
    const auto dbl = ck::bipartite_double(oracle::cycle(n));
    const auto bip = ck::bipartite_expansion_exact(dbl.graph, dbl.side1, dbl.side2);
    const auto d = dbl.graph.metric().rows();
    std::optional<Rational> best;
    for (oracle::Mask m = 1; m < (oracle::Mask{1} << n); ++m) {
      if (2 * static_cast<std::size_t>(oracle::popcount(m)) > n) continue;
      const Rational q(oracle::popcount(oracle::boundary_mask(d, m, 1)), oracle::popcount(m));
      if (!best || q < *best) best = q;
    }
    EXPECT_EQ(bip.h, *best - 1) << n;
  }
}

TEST(BipartiteExpansion, Errors) {
  const auto k2 = oracle::complete(2);
  expect_error(ErrorKind::EmptyRange, [&] { ck::bipartite_expansion_exact(k2, PointSet{0}, PointSet{1}); });
  const auto p3 = oracle::path(3);
  expect_error(ErrorKind::UnequalSides, [&] { ck::bipartite_expansion_exact(p3, PointSet{1}, PointSet{0, 2}); });
  const auto c4 = oracle::cycle(4);
  expect_error(ErrorKind::NotBipartite, [&] { ck::bipartite_expansion_exact(c4, PointSet{0, 1}, PointSet{2, 3}); });
}

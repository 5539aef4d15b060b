#include <gtest/gtest.h>

#include "oracles.hpp"
#include "rig/subgraph.hpp"

using namespace rig;

namespace {

Graph complete(std::size_t n) {
  std::vector<edge_t> e;
  for (vertex_t i = 0; i < n; ++i)
    for (vertex_t j = i + 1; j < n; ++j) e.emplace_back(i, j);
  return Graph::from_edges(n, e);
}
const Graph K3 = complete(3), K4 = complete(4);
const Graph P3 = Pattern::path(3).graph();

bigint big(std::uint64_t x) { return bigint(x); }

}  // namespace

TEST(Pattern, ParseAndValidate) {
  EXPECT_EQ(Pattern::parse("K3").graph().edge_count(), 3u);
  EXPECT_EQ(Pattern::parse("P4").graph().edge_count(), 3u);
  EXPECT_EQ(Pattern::parse("C5").graph().edge_count(), 5u);
  EXPECT_EQ(Pattern::parse("S3").size(), 4u);
  EXPECT_EQ(*Pattern::parse("P3@1").root(), 1u);
  for (const char* bad : {"", "K", "X3", "K3x", "K3@9", "K1", "K9", "P3@a"})
    EXPECT_THROW(Pattern::parse(bad), validation_error) << bad;
  EXPECT_THROW(Pattern(Graph::from_edges(4, {{0, 1}, {2, 3}})), validation_error);
}

TEST(Pattern, ConnectedPatternCounts) {
  const std::size_t expected[] = {0, 0, 1, 2, 6, 21, 112};
  for (std::size_t h = 2; h <= 6; ++h) EXPECT_EQ(connected_patterns(h).size(), expected[h]) << h;
}

TEST(Pattern, Rootings) {
  EXPECT_EQ(Pattern::complete(4).rootings().size(), 1u);
  EXPECT_EQ(Pattern::path(3).rootings().size(), 2u);
  EXPECT_EQ(Pattern::path(4).rootings().size(), 2u);
  EXPECT_EQ(Pattern::star(3).rootings().size(), 2u);
}

TEST(Counts, Examples) {
  Rng rng(1);
  auto g = oracle::erdos_renyi(12, 0.4, rng);
  auto K2 = Pattern::complete(2);
  EXPECT_EQ(hom_count(K2, g), big(2 * g.edge_count()));
  EXPECT_EQ(emb_count(K2, g), big(2 * g.edge_count()));
  EXPECT_EQ(hom_count(Pattern::complete(3), K3), 6);
  EXPECT_EQ(hom_count(Pattern::path(3), P3), 6);
  EXPECT_EQ(emb_count(Pattern::complete(3), K4), 24);
  bigint s = 0;
  for (vertex_t v = 0; v < g.vertex_count(); ++v) s += big(g.degree(v) * (g.degree(v) - (g.degree(v) > 0)));
  EXPECT_EQ(emb_count(Pattern::star(2), g), s);
}

TEST(Counts, BruteForceEquivalence) {
  Rng rng(2);
  for (int t = 0; t < 60; ++t) {
    auto g = oracle::erdos_renyi(1 + rng.below(8), 0.2 + 0.6 * rng.uniform01(), rng);
    for (std::size_t h = 2; h <= 4; ++h)
      for (const auto& H : connected_patterns(h)) {
        ASSERT_EQ(hom_count(H, g), big(oracle::count_maps(H.graph(), g, false)));
        ASSERT_EQ(emb_count(H, g), big(oracle::count_maps(H.graph(), g, true)));
      }
  }
}

TEST(Counts, RootedBruteForceAndPartition) {
  Rng rng(3);
  for (int t = 0; t < 30; ++t) {
    auto g = oracle::erdos_renyi(7, 0.5, rng);
    for (std::size_t h = 2; h <= 4; ++h)
      for (const auto& H : connected_patterns(h))
        for (const auto& R : H.rootings()) {
          bigint total = 0;
          for (vertex_t v = 0; v < g.vertex_count(); ++v) {
            const auto e = rooted_emb_count(R, g, v);
            const auto hm = rooted_emb_count(R, g, v, true);
            ASSERT_EQ(e, big(oracle::count_maps(R.graph(), g, true, static_cast<int>(*R.root()), static_cast<int>(v))));
            ASSERT_EQ(hm, big(oracle::count_maps(R.graph(), g, false, static_cast<int>(*R.root()), static_cast<int>(v))));
            total += e;
          }
          ASSERT_EQ(total, emb_count(H, g));
        }
  }
}

TEST(Counts, RootedExamples) {
  Rng rng(4);
  auto g = oracle::erdos_renyi(10, 0.5, rng);
  auto K2r = Pattern::complete(2).rooted(0);
  for (vertex_t v = 0; v < g.vertex_count(); ++v) EXPECT_EQ(rooted_emb_count(K2r, g, v), big(g.degree(v)));
  for (vertex_t v = 0; v < 4; ++v) EXPECT_EQ(rooted_emb_count(Pattern::complete(3).rooted(0), K4, v), 6);
  EXPECT_THROW(rooted_emb_count(Pattern::complete(3), K4, 0), validation_error);
  EXPECT_THROW(rooted_emb_count(K2r, K4, 4), validation_error);
}

TEST(Counts, StirlingIdentity) {
  Rng rng(5);
  for (int t = 0; t < 40; ++t) {
    auto g = oracle::erdos_renyi(5 + rng.below(20), rng.uniform01(), rng);
    for (int s = 1; s <= 5; ++s) {
      bigint rhs = 0;
      for (int j = 1; j <= s; ++j) rhs += bigint(oracle::kStirling2[s][j]) * emb_count(Pattern::star(j), g);
      ASSERT_EQ(hom_count(Pattern::star(s), g), rhs);
    }
  }
}

TEST(Counts, PathOfFourDecomposition) {
  // hom(P4) splits by which of the three identifications a walk v1 v2 v3 v4
  // makes: none (emb P4), v1 = v4 only (emb K3), v1 = v3 or v2 = v4 but not
  // both (emb P3 each), v1 = v3 and v2 = v4 (emb K2).
  Rng rng(6);
  const auto P4 = Pattern::path(4), K3p = Pattern::complete(3), P3p = Pattern::path(3), K2 = Pattern::complete(2);
  EXPECT_EQ(hom_count(P4, P3), 8);
  EXPECT_EQ(emb_count(P4, P3) + emb_count(K3p, P3) + 2 * emb_count(P3p, P3) + emb_count(K2, P3), 8);
  for (int t = 0; t < 50; ++t) {
    auto g = oracle::erdos_renyi(3 + rng.below(25), rng.uniform01(), rng);
    ASSERT_EQ(hom_count(P4, g), emb_count(P4, g) + emb_count(K3p, g) + 2 * emb_count(P3p, g) + emb_count(K2, g));
  }
}

TEST(Counts, ThreadInvariance) {
  Rng rng(7);
  auto g = oracle::erdos_renyi(60, 0.3, rng);
  for (const auto& H : connected_patterns(4)) {
    EXPECT_EQ(hom_count(H, g, 1), hom_count(H, g, 4));
    EXPECT_EQ(emb_count(H, g, 1), emb_count(H, g, 3));
  }
}

TEST(Counts, LargeValuesAreExact) {
  // sum_v d^7 on K_500 exceeds 2^64
  const std::size_t n = 500;
  const Graph g = complete(n);
  const bigint expect = bigint(n) * boost::multiprecision::pow(bigint(n - 1), 7);
  EXPECT_EQ(hom_count(Pattern::star(7), g), expect);
  bigint falling = n;
  for (std::size_t i = 1; i < 8; ++i) falling *= bigint(n - i);
  EXPECT_EQ(emb_count(Pattern::star(7), g), falling);
  EXPECT_EQ(emb_count(Pattern::complete(4), complete(60)), bigint(60 * 59 * 58 * 57));
}

TEST(Sidorenko, Examples) {
  Rng rng(8);
  auto g = oracle::erdos_renyi(15, 0.4, rng);
  auto k2 = sidorenko_bound(Pattern::complete(2), g);
  EXPECT_EQ(k2.hom, k2.bound);
  auto k3 = sidorenko_bound(Pattern::complete(3), K3);
  EXPECT_EQ(k3.hom, 6);
  EXPECT_EQ(k3.bound, 12);
  EXPECT_TRUE(k3.holds);
}

TEST(Sidorenko, PropertyOverRandomHosts) {
  Rng rng(9);
  for (int t = 0; t < 100; ++t) {
    auto g = oracle::erdos_renyi(2 + rng.below(15), 0.1 * static_cast<double>(1 + rng.below(9)), rng);
    for (std::size_t h = 2; h <= 5; ++h)
      for (const auto& H : connected_patterns(h)) {
        auto s = sidorenko_bound(H, g);
        ASSERT_TRUE(s.holds);
        ASSERT_EQ(s.hom <= s.bound, s.holds);
      }
  }
}

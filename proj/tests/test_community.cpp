#include <gtest/gtest.h>

#include <cmath>

#include "graphmine/community.hpp"
#include "graphmine/eval.hpp"
#include "oracles.hpp"

using namespace graphmine;

namespace {

Graph two_triangles() { return build_graph(6, {{0, 1}, {1, 2}, {0, 2}, {2, 3}, {3, 4}, {4, 5}, {3, 5}}); }

std::vector<std::int64_t> labels(const MembershipMap& mm) { return oracle::labels_of(mm); }

bool same_partition(const std::vector<std::int64_t>& a, const std::vector<std::int64_t>& b) {
  return MembershipMap::from_labels(a) == MembershipMap::from_labels(b);
}

}  // namespace

TEST(Membership, CanonicalFirstAppearance) {
  const auto mm = MembershipMap::from_labels(std::vector<std::int64_t>{7, 7, -2, 9, -2});
  EXPECT_EQ(labels(mm), (std::vector<std::int64_t>{0, 0, 1, 2, 1}));
  EXPECT_EQ(mm.cluster_count(), 3u);
  EXPECT_EQ(mm, MembershipMap::from_labels(std::vector<std::int64_t>{1, 1, 0, 5, 0}));
}

TEST(Modularity, Examples) {
  EXPECT_NEAR(modularity(oracle::complete(5), MembershipMap::from_labels(std::vector<std::int64_t>(5, 0))), 0.0,
              1e-15);
  EXPECT_NEAR(modularity(two_triangles(), MembershipMap::from_labels(std::vector<std::int64_t>{0, 0, 0, 1, 1, 1})),
              5.0 / 14.0, 1e-12);
  EXPECT_NEAR(modularity(oracle::complete(2), MembershipMap::from_labels(std::vector<std::int64_t>{0, 1})), -0.5,
              1e-15);
  EXPECT_THROW(modularity(oracle::complete(3), MembershipMap::from_labels(std::vector<std::int64_t>{0, 1})), Error);
}

TEST(Modularity, MatchesBruteForceAndSingletonFormula) {
  RandomSource rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    const Graph g = oracle::random_connected(rng, 2, 12);
    const std::size_t n = g.node_count();
    std::vector<std::int64_t> part(n);
    for (auto& x : part) x = static_cast<std::int64_t>(rng.uniform_index(4));
    const double q = modularity(g, MembershipMap::from_labels(part));
    EXPECT_NEAR(q, oracle::modularity(g, part), 1e-12);
    std::vector<std::int64_t> permuted(n);
    for (std::size_t v = 0; v < n; ++v) permuted[v] = 3 - part[v];
    EXPECT_NEAR(modularity(g, MembershipMap::from_labels(permuted)), q, 1e-12);

    std::vector<std::int64_t> singletons(n);
    std::iota(singletons.begin(), singletons.end(), 0);
    double expected = 0.0;
    const double two_m = 2.0 * static_cast<double>(g.edge_count());
    for (NodeId v = 0; v < n; ++v) expected -= std::pow(static_cast<double>(g.degree(v)) / two_m, 2);
    EXPECT_NEAR(modularity(g, MembershipMap::from_labels(singletons)), expected, 1e-12);
  }
}

TEST(LabelPropagation, SmallGraphs) {
  LabelPropagation k3;
  k3.fit(oracle::complete(3));
  EXPECT_EQ(labels(k3.get_memberships()), (std::vector<std::int64_t>{0, 0, 0}));
  LabelPropagation k2;
  k2.fit(oracle::complete(2));
  EXPECT_EQ(k2.get_memberships().cluster_count(), 1u);
}

TEST(LabelPropagation, TwoCliquesRecoveredInMostSeeds) {
  const Graph g = oracle::clique_pair(4);
  const auto truth = oracle::clique_pair_labels(4);
  int recovered = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    LabelPropagation lp({.seed = seed});
    lp.fit(g);
    if (same_partition(labels(lp.get_memberships()), truth)) ++recovered;
  }
  EXPECT_GE(recovered, 90);
}

TEST(LabelPropagation, DeterministicAndRequiresConnected) {
  const Graph g = connected_erdos_renyi_gnm(60, 150, 5);
  LabelPropagation a({.seed = 3});
  LabelPropagation b({.seed = 3});
  a.fit(g);
  b.fit(g);
  EXPECT_EQ(a.get_memberships(), b.get_memberships());
  LabelPropagation c;
  EXPECT_THROW(c.get_memberships(), Error);
  try {
    c.fit(build_graph(4, {{0, 1}, {2, 3}}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DisconnectedGraph);
  }
}

TEST(Scd, WccMatchesDefinition) {
  RandomSource rng(32);
  for (int trial = 0; trial < 100; ++trial) {
    const Graph g = oracle::random_connected(rng, 3, 10);
    std::vector<std::int64_t> part(g.node_count());
    for (auto& x : part) x = static_cast<std::int64_t>(rng.uniform_index(3));
    EXPECT_NEAR(wcc_objective(g, MembershipMap::from_labels(part)), oracle::wcc_objective(g, part), 1e-12);
  }
}

TEST(Scd, TwoTrianglesIsTheWccOptimum) {
  const Graph g = two_triangles();
  const std::vector<std::int64_t> triangles{0, 0, 0, 1, 1, 1};
  double best = -1.0;
  std::vector<std::int64_t> argbest;
  oracle::for_each_partition(6, [&](const std::vector<std::int64_t>& p) {
    const double w = oracle::wcc_objective(g, p);
    if (w > best + 1e-12) {
      best = w;
      argbest = p;
    }
  });
  EXPECT_TRUE(same_partition(argbest, triangles));
  Scd scd;
  scd.fit(g);
  EXPECT_TRUE(same_partition(labels(scd.get_memberships()), triangles));
}

TEST(Scd, K4IsOneCommunity) {
  const Graph g = oracle::complete(4);
  double best = -1.0;
  std::vector<std::int64_t> argbest;
  oracle::for_each_partition(4, [&](const std::vector<std::int64_t>& p) {
    const double w = oracle::wcc_objective(g, p);
    if (w > best + 1e-12) {
      best = w;
      argbest = p;
    }
  });
  EXPECT_EQ(argbest, (std::vector<std::int64_t>{0, 0, 0, 0}));
  Scd scd;
  scd.fit(g);
  EXPECT_EQ(labels(scd.get_memberships()), (std::vector<std::int64_t>{0, 0, 0, 0}));
}

TEST(Scd, TriangleFreeGivesSingletons) {
  Scd scd;
  scd.fit(oracle::path(4));
  EXPECT_EQ(labels(scd.get_memberships()), (std::vector<std::int64_t>{0, 1, 2, 3}));
}

TEST(Scd, NeverWorseThanSeedingAndDeterministic) {
  RandomSource rng(33);
  for (int trial = 0; trial < 30; ++trial) {
    const Graph g = oracle::random_connected(rng, 5, 40);
    Scd none({.refinement_rounds = 0});
    Scd full;
    none.fit(g);
    full.fit(g);
    EXPECT_GE(wcc_objective(g, full.get_memberships()), wcc_objective(g, none.get_memberships()) - 1e-12);
    Scd again;
    again.fit(g);
    EXPECT_EQ(again.get_memberships(), full.get_memberships());
  }
}

TEST(SymNmf, LossNonIncreasingAndNonnegative) {
  const Graph g = connected_erdos_renyi_gnm(40, 120, 8);
  SymNmf model({.dimensions = 5, .tolerance = 0.0});
  model.fit(g);
  const auto& loss = model.loss_history();
  EXPECT_EQ(loss.size(), 201u);
  for (std::size_t t = 1; t < loss.size(); ++t) EXPECT_LE(loss[t], loss[t - 1] + 1e-9);
  for (double x : model.get_embedding().values()) EXPECT_GE(x, 0.0);
  EXPECT_EQ(model.get_embedding().rows(), 40u);
  EXPECT_EQ(model.get_embedding().cols(), 5u);
}

TEST(SymNmf, LossMatchesDenseDefinition) {
  const Graph g = connected_erdos_renyi_gnm(12, 25, 2);
  const auto result = symnmf_fit(g, {.dimensions = 3, .iterations = 10, .tolerance = 0.0});
  const DenseMatrix a = oracle::dense_adjacency(g);
  const DenseMatrix hht = oracle::dense_product(result.factor, result.factor.transpose());
  double loss = 0.0;
  for (std::size_t i = 0; i < a.values().size(); ++i) loss += std::pow(a.values()[i] - hht.values()[i], 2);
  EXPECT_NEAR(result.loss_history.back(), loss, 1e-9 * std::max(1.0, loss));
}

TEST(SymNmf, TwoCliquesMedianNmi) {
  const Graph g = oracle::clique_pair(4);
  const auto truth = oracle::clique_pair_labels(4);
  std::vector<double> scores;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    SymNmf model({.dimensions = 2, .seed = seed});
    model.fit(g);
    scores.push_back(nmi(labels(model.get_memberships()), truth));
  }
  std::sort(scores.begin(), scores.end());
  EXPECT_GE(0.5 * (scores[9] + scores[10]), 0.9);
}

TEST(SymNmf, Errors) {
  SymNmf model({.dimensions = 5});
  EXPECT_THROW(model.get_memberships(), Error);
  try {
    model.fit(oracle::complete(4));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::RankTooLarge);
  }
}

TEST(ArgmaxMemberships, TiesAreSeededRandom) {
  DenseMatrix tied(200, 2, 1.0);
  const auto a = argmax_memberships(tied, RandomSource(1));
  const auto b = argmax_memberships(tied, RandomSource(1));
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.cluster_count(), 2u);
  const DenseMatrix clear(2, 2, {0.1, 0.9, 0.8, 0.2});
  EXPECT_EQ(labels(argmax_memberships(clear, RandomSource(5))), (std::vector<std::int64_t>{0, 1}));
}

#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "graphmine/graph_matrices.hpp"
#include "graphmine/node_embedding.hpp"
#include "oracles.hpp"

using namespace graphmine;

namespace {

double cosine(std::span<const double> a, std::span<const double> b) {
  return dot(a, b) / std::sqrt(dot(a, a) * dot(b, b));
}

Graph kite() { return build_graph(5, {{0, 1}, {0, 2}, {1, 2}, {1, 3}, {2, 3}, {3, 4}}); }

}  // namespace

TEST(Walks, ShapeAndValidity) {
  const Graph g = kite();
  const WalkCorpus corpus = generate_walks(g, 10, 80, RandomSource(1));
  EXPECT_EQ(corpus.walk_count(), 50u);
  for (std::size_t w = 0; w < corpus.walk_count(); ++w) {
    const auto walk = corpus.walk(w);
    ASSERT_EQ(walk.size(), 80u);
    EXPECT_EQ(walk[0], w % 5);
    for (std::size_t i = 1; i < walk.size(); ++i) EXPECT_TRUE(g.has_edge(walk[i - 1], walk[i]));
  }
}

TEST(Walks, K2Alternates) {
  const WalkCorpus corpus = generate_walks(oracle::complete(2), 1, 9, RandomSource(2));
  const auto walk = corpus.walk(0);
  for (std::size_t i = 0; i < walk.size(); ++i) EXPECT_EQ(walk[i], i % 2);
}

TEST(Walks, TransitionFrequenciesMatchP) {
  const Graph g = kite();
  const DenseMatrix p = transition_matrix(g).to_dense();
  const WalkCorpus corpus = generate_walks(g, 250, 81, RandomSource(3));  // 250*5*80 = 10^5 steps
  DenseMatrix counts(5, 5);
  std::vector<double> out(5, 0.0);
  for (std::size_t w = 0; w < corpus.walk_count(); ++w) {
    const auto walk = corpus.walk(w);
    for (std::size_t i = 1; i < walk.size(); ++i) {
      counts(walk[i - 1], walk[i]) += 1.0;
      out[walk[i - 1]] += 1.0;
    }
  }
  for (std::size_t u = 0; u < 5; ++u) {
    for (std::size_t v = 0; v < 5; ++v) {
      const double expected = p(u, v);
      const double observed = counts(u, v) / out[u];
      const double se = std::sqrt(std::max(expected * (1.0 - expected), 1e-12) / out[u]);
      EXPECT_LE(std::abs(observed - expected), 3.0 * se + 1e-12) << u << "->" << v;
    }
  }
}

TEST(Walks, IndependentOfThreadCount) {
  const Graph g = connected_erdos_renyi_gnm(50, 150, 4);
  const auto one = generate_walks(g, 3, 20, RandomSource(7), 1);
  const auto four = generate_walks(g, 3, 20, RandomSource(7), 4);
  EXPECT_EQ(one.nodes, four.nodes);
}

TEST(Walks, RequiresConnected) {
  EXPECT_THROW(generate_walks(build_graph(4, {{0, 1}, {2, 3}}), 1, 5, RandomSource(1)), Error);
}

TEST(Sgns, GradientMatchesFiniteDifferences) {
  RandomSource rng(5);
  const double h = 1e-6;
  for (int point = 0; point < 50; ++point) {
    std::vector<std::vector<double>> vecs(4, std::vector<double>(6));
    for (auto& v : vecs) {
      for (double& x : v) x = rng.normal();
    }
    auto negatives = [&] {
      return std::vector<std::span<const double>>{vecs[2], vecs[3]};
    };
    const auto grad = sgns_pair_gradient(vecs[0], vecs[1], negatives());
    for (std::size_t which = 0; which < 4; ++which) {
      const auto& analytic = which == 0 ? grad.center : which == 1 ? grad.context : grad.negatives[which - 2];
      for (std::size_t i = 0; i < 6; ++i) {
        const double saved = vecs[which][i];
        vecs[which][i] = saved + h;
        const double up = sgns_pair_loss(vecs[0], vecs[1], negatives());
        vecs[which][i] = saved - h;
        const double down = sgns_pair_loss(vecs[0], vecs[1], negatives());
        vecs[which][i] = saved;
        const double numeric = (up - down) / (2 * h);
        EXPECT_LE(std::abs(numeric - analytic[i]), 1e-4 * std::max({std::abs(numeric), std::abs(analytic[i]), 1e-6}));
      }
    }
  }
}

TEST(Sgns, LossDropsOverTheEpoch) {
  const Graph g = oracle::clique_pair(8);
  const WalkCorpus corpus = generate_walks(g, 10, 40, RandomSource(6));
  std::vector<double> losses;
  const EmbeddingMatrix e = sgns_train(corpus, {.dimensions = 16}, &losses);
  EXPECT_EQ(e.rows(), 16u);
  EXPECT_EQ(e.cols(), 16u);
  ASSERT_EQ(losses.size(), window_pair_count(corpus, 5));
  const std::size_t half = losses.size() / 2;
  double first = 0.0;
  double second = 0.0;
  for (std::size_t i = 0; i < half; ++i) first += losses[i];
  for (std::size_t i = half; i < 2 * half; ++i) second += losses[i];
  EXPECT_LT(second, first);
}

TEST(Sgns, AliasTableMatchesWeights) {
  const std::vector<double> weights{1.0, 3.0, 0.0, 6.0};
  const AliasTable table(weights);
  RandomSource rng(8);
  std::vector<double> counts(4, 0.0);
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) counts[table.sample(rng)] += 1.0;
  EXPECT_NEAR(counts[0] / draws, 0.1, 0.005);
  EXPECT_NEAR(counts[1] / draws, 0.3, 0.005);
  EXPECT_EQ(counts[2], 0.0);
  EXPECT_NEAR(counts[3] / draws, 0.6, 0.005);
}

TEST(DeepWalk, HyperparametersAndShape) {
  DeepWalk defaults;
  EXPECT_EQ(defaults.dimensions, 128u);
  EXPECT_EQ(defaults.walk_number, 10u);
  EXPECT_EQ(defaults.walk_length, 80u);
  EXPECT_THROW(defaults.get_embedding(), Error);
  DeepWalk model({.dimensions = 64});
  model.fit(connected_erdos_renyi_gnm(30, 60, 1));
  EXPECT_EQ(model.dimensions, 64u);
  EXPECT_EQ(model.get_embedding().rows(), 30u);
  EXPECT_EQ(model.get_embedding().cols(), 64u);
  EXPECT_TRUE(model.get_embedding().all_finite());
}

TEST(DeepWalk, SeparatesTwoCliques) {
  const Graph g = oracle::clique_pair(8);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    DeepWalk model({.dimensions = 32, .seed = seed});
    model.fit(g);
    const auto& e = model.get_embedding();
    double intra = 0.0, inter = 0.0;
    int n_intra = 0, n_inter = 0;
    for (std::size_t a = 0; a < 16; ++a) {
      for (std::size_t b = a + 1; b < 16; ++b) {
        const double c = cosine(e.row(a), e.row(b));
        if ((a < 8) == (b < 8)) {
          intra += c;
          ++n_intra;
        } else {
          inter += c;
          ++n_inter;
        }
      }
    }
    EXPECT_GT(intra / n_intra, inter / n_inter) << "seed " << seed;
  }
}

TEST(DeepWalk, DeterministicAcrossThreadCounts) {
  const Graph g = connected_erdos_renyi_gnm(40, 100, 2);
  DeepWalk a({.dimensions = 8, .threads = 1});
  DeepWalk b({.dimensions = 8, .threads = 3});
  a.fit(g);
  b.fit(g);
  EXPECT_EQ(a.get_embedding(), b.get_embedding());
}

TEST(Walklets, WidthContract) {
  Walklets model;
  EXPECT_EQ(model.window_size, 4u);
  EXPECT_EQ(model.dimensions, 32u);
  model.fit(connected_erdos_renyi_gnm(20, 40, 3));
  EXPECT_EQ(model.get_embedding().cols(), 128u);
  EXPECT_EQ(model.get_embedding().rows(), 20u);
}

TEST(Walklets, ScaleOnePairsAreEdgesAndScalesAreDisjoint) {
  const Graph g = connected_erdos_renyi_gnm(15, 30, 4);
  const WalkCorpus corpus = generate_walks(g, 2, 12, RandomSource(9));
  for (const auto& [a, b] : offset_pairs(corpus, 1)) EXPECT_TRUE(g.has_edge(a, b));
  // Pair (walk, position, offset) triples never coincide across scales.
  std::set<std::tuple<std::size_t, std::size_t, std::size_t>> seen;
  for (std::size_t scale = 1; scale <= 4; ++scale) {
    for (std::size_t w = 0; w < corpus.walk_count(); ++w) {
      for (std::size_t i = 0; i + scale < corpus.walk_length; ++i) {
        EXPECT_TRUE(seen.insert({w, i, i + scale}).second);
      }
    }
    EXPECT_EQ(offset_pairs(corpus, scale).size(), corpus.walk_count() * (corpus.walk_length - scale));
  }
}

TEST(NetMf, MatrixMatchesDenseOracle) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Graph g = connected_erdos_renyi_gnm(10, 20, seed);
    for (std::size_t order : {1u, 2u, 3u}) {
      const DenseMatrix got = netmf_matrix(g, order, 1.0).to_dense();
      const DenseMatrix want = oracle::netmf_target(g, order, 1.0);
      EXPECT_LT(max_abs_difference(got, want), 1e-12);
      EXPECT_LT(max_abs_difference(got, got.transpose()), 1e-10);
      for (double x : got.values()) EXPECT_GE(x, 0.0);
    }
  }
}

TEST(NetMf, SingularValuesMatchOracle) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Graph g = connected_erdos_renyi_gnm(10, 20, 100 + seed);
    const auto want = oracle::singular_values(oracle::netmf_target(g, 2, 1.0));
    const EmbeddingMatrix e = netmf_fit(g, {.dimensions = 6});
    for (std::size_t j = 0; j < 6; ++j) {
      double s = 0.0;
      for (std::size_t v = 0; v < 10; ++v) s += e(v, j) * e(v, j);
      if (want[j] > 1e-9 * want[0]) {
        EXPECT_LT(std::abs(s - want[j]) / want[j], 1e-6);
      }
    }
  }
}

TEST(NetMf, ErrorsAndDefaults) {
  NetMf model;
  EXPECT_EQ(model.dimensions, 32u);
  EXPECT_EQ(model.order, 2u);
  EXPECT_EQ(model.negatives, 1.0);
  try {
    NetMf big({.dimensions = 11});
    big.fit(connected_erdos_renyi_gnm(10, 20, 1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::RankTooLarge);
    EXPECT_NE(std::string(e.what()).find("rank too large"), std::string::npos);
  }
  try {
    model.fit(build_graph(4, {{0, 1}, {2, 3}}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DisconnectedGraph);
  }
}

TEST(NetMf, FiniteAtTheSizeCap) {
  const std::int64_t n = 1 << 13;
  const Graph g = connected_erdos_renyi_gnm(n, 5 * n, 42);
  NetMf model;
  model.fit(g);
  EXPECT_TRUE(model.get_embedding().all_finite());
  EXPECT_EQ(model.get_embedding().rows(), static_cast<std::size_t>(n));
}

template <NodeEmbedder Model>
EmbeddingMatrix fit_generic(Model model, const Graph& g) {
  model.fit(g);
  return model.get_embedding();
}

TEST(Estimators, InterchangeableThroughOneDriver) {
  const Graph g = oracle::clique_pair(6);
  const auto dw = fit_generic(DeepWalk({.dimensions = 8}), g);
  const auto wl = fit_generic(Walklets({.dimensions = 2}), g);
  const auto mf = fit_generic(NetMf({.dimensions = 8}), g);
  EXPECT_EQ(dw.rows(), 12u);
  EXPECT_EQ(wl.rows(), 12u);
  EXPECT_EQ(mf.rows(), 12u);
  EXPECT_EQ(fit_generic(DeepWalk({.dimensions = 8}), g), dw);
  EXPECT_EQ(fit_generic(Walklets({.dimensions = 2}), g), wl);
  EXPECT_EQ(fit_generic(NetMf({.dimensions = 8}), g), mf);
}

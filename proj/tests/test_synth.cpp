#include <cmath>
#include <sstream>
#include <vector>

#include <gtest/gtest.h>

#include <cpdetect/io.hpp>
#include <cpdetect/kmer.hpp>
#include <cpdetect/metrics.hpp>
#include <cpdetect/synth.hpp>

using namespace cpdetect;

TEST(PlantCpNetwork, IdealizedShape) {
  const std::vector<PlantedPair> spec{{3, 7, 1.0, 1.0, 0.0}};
  const auto planted = plant_cp_network(spec, 0.0, 0);
  EXPECT_EQ(planted.network.node_count(), 10u);
  EXPECT_EQ(planted.network.edge_count(), 3u + 21u);
  EXPECT_EQ(planted.truth.pair_count, 1u);
  EXPECT_EQ(planted.truth.core_count(1), 3u);
  EXPECT_EQ(planted.network.id(0), "v0");
  EXPECT_TRUE(planted.dropped.empty());
}

TEST(PlantCpNetwork, IdsSortInGenerationOrder) {
  const std::vector<PlantedPair> spec{{5, 20, 1.0, 1.0, 0.0}};
  const auto planted = plant_cp_network(spec, 0.0, 0);
  EXPECT_EQ(planted.network.id(0), "v00");
  EXPECT_EQ(planted.network.id(24), "v24");
  for (NodeIndex i = 0; i < 5; ++i) EXPECT_TRUE(planted.truth.core[i]);
}

TEST(PlantCpNetwork, BlockCountsWithinThreeSigma) {
  const std::vector<PlantedPair> spec{{5, 20, 0.9, 0.6, 0.1}};
  auto check = [](std::uint64_t count, double dyads, double p) {
    const double mean = dyads * p;
    const double sd = std::sqrt(dyads * p * (1 - p));
    EXPECT_NEAR(static_cast<double>(count), mean, 3 * sd + 1e-9);
  };
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto planted = plant_cp_network(spec, 0.0, seed);
    if (!planted.dropped.empty()) continue;
    const auto counts = block_edge_counts(planted.truth, planted.network, 1);
    check(counts.cc, 10, 0.9);
    check(counts.cp, 100, 0.6);
    check(counts.pp, 190, 0.1);
  }
}

TEST(PlantCpNetwork, DropsIsolatedNodes) {
  const std::vector<PlantedPair> spec{{2, 4, 1.0, 0.0, 0.0}};
  const auto planted = plant_cp_network(spec, 0.0, 0);
  EXPECT_EQ(planted.network.node_count(), 2u);
  EXPECT_EQ(planted.dropped.size(), 4u);
  EXPECT_EQ(planted.truth.node_count(), 2u);
}

TEST(PlantCpNetwork, RejectsBadSpecs) {
  const std::vector<PlantedPair> bad_p{{2, 2, 1.2, 1.0, 0.0}};
  EXPECT_THROW(plant_cp_network(bad_p, 0.0, 0), DomainError);
  const std::vector<PlantedPair> empty_block{{0, 2, 1.0, 1.0, 0.0}};
  EXPECT_THROW(plant_cp_network(empty_block, 0.0, 0), DomainError);
  EXPECT_THROW(plant_cp_network(std::vector<PlantedPair>{}, 0.0, 0), DomainError);
}

TEST(PlantCpNetwork, DeterministicGivenSeed) {
  const std::vector<PlantedPair> spec{{4, 10, 0.8, 0.4, 0.1}};
  const auto a = plant_cp_network(spec, 0.0, 3);
  const auto b = plant_cp_network(spec, 0.0, 3);
  EXPECT_TRUE(a.network == b.network);
  EXPECT_EQ(a.truth.pair, b.truth.pair);
}

TEST(BruteForce, CompleteGraphScoresZero) {
  const auto best = brute_force_qcp(sample_er(4, 6, 0));
  EXPECT_NEAR(best.q_star, 0.0, 1e-12);
}

TEST(BruteForce, TwoTrianglesFormTwoPairs) {
  std::vector<IndexEdge> edges{{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}};
  const auto net = Network::from_indexed({"a", "b", "c", "d", "e", "f"}, edges);
  const auto best = brute_force_qcp(net);
  EXPECT_EQ(best.labeling.pair_count, 2u);
  // rho = 6/15: each all-core triangle scores 3 * (1 - 0.4).
  EXPECT_NEAR(best.q_star, 3.6, 1e-12);
  EXPECT_NEAR(qcp(best.labeling, net), best.q_star, 1e-12);
}

TEST(BruteForce, SizeLimits) {
  EXPECT_THROW(brute_force_qcp(sample_er(10, 12, 0)), DomainError);
  EXPECT_NO_THROW(brute_force_qcp(sample_er(9, 12, 0)));
}

TEST(SynthTransactions, WindowsAggregateBackToPlantedNetworks) {
  TransactionConfig config;
  config.windows = 2;
  config.regimes = {Regime{0, {{3, 6, 1.0, 0.8, 0.1}}, 0.0}};
  const auto synthetic = synth_transactions(config, 4);
  ASSERT_EQ(synthetic.windows.size(), 2u);
  EXPECT_EQ(synthetic.windows[0].label, "2000-01");
  EXPECT_EQ(synthetic.windows[1].label, "2000-02");

  std::ostringstream csv;
  write_transactions(csv, synthetic.log);
  std::istringstream in(csv.str());
  const auto parsed = parse_transactions(in, ParseMode::strict);
  EXPECT_EQ(parsed.log.size(), synthetic.log.size());
  const auto series = aggregate(parsed.log, Scale::month);
  ASSERT_EQ(series.windows.size(), 2u);
  for (std::size_t w = 0; w < 2; ++w) {
    EXPECT_EQ(series.windows[w].label, synthetic.windows[w].label);
    EXPECT_TRUE(series.windows[w].network == synthetic.windows[w].planted.network);
  }
}

TEST(SynthTransactions, RegimeSwitchChangesPlantedBlocks) {
  TransactionConfig config;
  config.windows = 4;
  config.scale = Scale::quarter;
  config.regimes = {Regime{0, {{6, 18, 0.95, 0.4, 0.05}}, 0.0}, Regime{2, {{6, 18, 0.1, 0.7, 0.05}}, 0.0}};
  const auto synthetic = synth_transactions(config, 11);
  ASSERT_EQ(synthetic.windows.size(), 4u);
  EXPECT_EQ(synthetic.windows[3].label, "2000-Q4");
  for (std::size_t w = 0; w < 4; ++w) {
    const auto& p = synthetic.windows[w].planted;
    const auto d = block_densities(p.truth, p.network, 1);
    EXPECT_EQ(classify_structure(d), w < 2 ? StructureClass::standard : StructureClass::bipartite_like) << w;
  }
}

TEST(SynthTransactions, RejectsBadConfigs) {
  TransactionConfig config;
  EXPECT_THROW(synth_transactions(config, 0), DomainError);
  config.regimes = {Regime{1, {{2, 2, 1.0, 1.0, 0.0}}, 0.0}};
  EXPECT_THROW(synth_transactions(config, 0), DomainError);
  config.regimes = {Regime{0, {{2, 2, 1.0, 1.0, 0.0}}, 0.0}};
  config.scale = Scale::full;
  EXPECT_THROW(synth_transactions(config, 0), DomainError);
}

TEST(SynthTransactions, DeterministicGivenSeed) {
  TransactionConfig config;
  config.windows = 3;
  config.scale = Scale::week;
  config.regimes = {Regime{0, {{3, 5, 0.9, 0.5, 0.1}}, 0.0}};
  std::ostringstream a, b;
  write_transactions(a, synth_transactions(config, 8).log);
  write_transactions(b, synth_transactions(config, 8).log);
  EXPECT_EQ(a.str(), b.str());
}

#include <map>
#include <set>
#include <vector>

#include <gtest/gtest.h>

#include <cpdetect/graph.hpp>

using namespace cpdetect;

namespace {

Network star4() {
  std::vector<IdEdge> edges{{"c", "a"}, {"c", "b"}, {"c", "d"}};
  return build_network(edges);
}

Network complete(std::size_t n) { return sample_er(n, n * (n - 1) / 2, 1); }

}  // namespace

TEST(BuildNetwork, CollapsesReversedDuplicates) {
  std::vector<IdEdge> edges{{"a", "b"}, {"b", "a"}, {"b", "c"}};
  const auto net = build_network(edges);
  EXPECT_EQ(net.node_count(), 3u);
  EXPECT_EQ(net.edge_count(), 2u);
}

TEST(BuildNetwork, DropsSelfLoops) {
  std::vector<IdEdge> edges{{"a", "a"}, {"a", "b"}};
  const auto net = build_network(edges);
  EXPECT_EQ(net.node_count(), 2u);
  EXPECT_EQ(net.edge_count(), 1u);
}

TEST(BuildNetwork, TriangleIsRegular) {
  std::vector<IdEdge> edges{{"a", "b"}, {"b", "c"}, {"c", "a"}};
  const auto net = build_network(edges);
  for (NodeIndex i = 0; i < 3; ++i) EXPECT_EQ(net.degree(i), 2u);
  EXPECT_TRUE(net.has_edge(0, 2));
  EXPECT_TRUE(net.has_edge(2, 0));
}

TEST(BuildNetwork, EmptyEdgeSequenceIsDegenerate) {
  std::vector<IdEdge> edges;
  EXPECT_THROW(build_network(edges), DomainError);
}

TEST(BuildNetwork, RebuildFromOwnEdgesIsIdentity) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto net = sample_er(12, 20, seed);
    const auto once = build_network(net.id_edges());
    const auto twice = build_network(once.id_edges());
    EXPECT_EQ(once, twice);
  }
}

TEST(Density, CompleteGraphIsOne) { EXPECT_DOUBLE_EQ(density(complete(5)), 1.0); }

TEST(Density, PathOnFourNodes) {
  std::vector<IdEdge> edges{{"a", "b"}, {"b", "c"}, {"c", "d"}};
  EXPECT_DOUBLE_EQ(density(build_network(edges)), 0.5);
}

TEST(Density, NeedsTwoNodes) {
  const auto single = Network::from_indexed({"x"}, {});
  EXPECT_THROW(density(single), DomainError);
}

TEST(InducedSubgraph, Examples) {
  std::vector<IdEdge> tri{{"a", "b"}, {"b", "c"}, {"c", "a"}};
  const auto triangle = build_network(tri);
  std::vector<std::string> two{"a", "b"};
  auto sub = induced_subgraph(triangle, std::span<const std::string>(two));
  EXPECT_EQ(sub.node_count(), 2u);
  EXPECT_EQ(sub.edge_count(), 1u);

  std::vector<std::string> one{"c"};
  sub = induced_subgraph(triangle, std::span<const std::string>(one));
  EXPECT_EQ(sub.node_count(), 1u);
  EXPECT_EQ(sub.edge_count(), 0u);

  std::vector<std::string> leaves{"a", "b", "d"};
  sub = induced_subgraph(star4(), std::span<const std::string>(leaves));
  EXPECT_EQ(sub.node_count(), 3u);
  EXPECT_EQ(sub.edge_count(), 0u);
}

TEST(InducedSubgraph, UnknownIdThrows) {
  std::vector<std::string> ids{"a", "zz"};
  EXPECT_THROW(induced_subgraph(star4(), std::span<const std::string>(ids)), DomainError);
}

TEST(SampleEr, OnlyGraphWithAllEdgesIsComplete) {
  const auto net = sample_er(4, 6, 99);
  EXPECT_TRUE(net.is_complete());
  EXPECT_EQ(net.node_count(), 4u);
}

TEST(SampleEr, ZeroEdges) {
  const auto net = sample_er(3, 0, 5);
  EXPECT_EQ(net.node_count(), 3u);
  EXPECT_EQ(net.edge_count(), 0u);
}

TEST(SampleEr, RejectsTooManyEdges) { EXPECT_THROW(sample_er(4, 7, 0), DomainError); }

TEST(SampleEr, EdgeCountAndDensityAreExact) {
  std::set<std::vector<IndexEdge>> distinct;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto net = sample_er(5, 4, seed);
    EXPECT_EQ(net.edge_count(), 4u);
    EXPECT_DOUBLE_EQ(density(net), 4.0 / 10.0);
    distinct.insert(net.edges());
  }
  EXPECT_GT(distinct.size(), 1u);
}

TEST(SampleEr, DenseRegimeUsesComplementCorrectly) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto net = sample_er(30, 400, seed);
    EXPECT_EQ(net.edge_count(), 400u);
  }
}

TEST(SampleEr, DeterministicGivenSeed) {
  EXPECT_EQ(sample_er(20, 50, 7), sample_er(20, 50, 7));
  EXPECT_NE(sample_er(20, 50, 7).edges(), sample_er(20, 50, 8).edges());
}

// All C(6,3) = 20 labeled 3-edge graphs on 4 nodes should be equally likely.
TEST(SampleEr, UniformOverLabeledGraphs) {
  std::map<std::vector<IndexEdge>, int> freq;
  const int draws = 1000;
  for (int s = 0; s < draws; ++s) freq[sample_er(4, 3, static_cast<std::uint64_t>(s)).edges()]++;
  EXPECT_EQ(freq.size(), 20u);
  for (const auto& [edges, count] : freq) {
    EXPECT_NEAR(static_cast<double>(count) / draws, 0.05, 0.02);
  }
}

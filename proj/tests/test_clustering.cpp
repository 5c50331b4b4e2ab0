#include "clonescope/clustering.hpp"
#include "support/testkit.hpp"

#include <gtest/gtest.h>

using namespace clonescope;

TEST(Cluster, SinglePair) {
    std::vector<std::pair<int, int>> e = {{1, 2}};
    for (auto m : {ClusterMode::Components, ClusterMode::Cliques}) {
        EXPECT_EQ(cluster_edges<int>(e, m), (std::vector<std::vector<int>>{{1, 2}}));
    }
}

TEST(Cluster, PathGraphSplitsUnderCliques) {
    std::vector<std::pair<std::string, std::string>> e = {{"A", "B"}, {"B", "C"}};
    EXPECT_EQ(cluster_edges<std::string>(e, ClusterMode::Components),
              (std::vector<std::vector<std::string>>{{"A", "B", "C"}}));
    EXPECT_EQ(cluster_edges<std::string>(e, ClusterMode::Cliques),
              (std::vector<std::vector<std::string>>{{"A", "B"}, {"B", "C"}}));
}

TEST(Cluster, TriangleIsOneClassInBothModes) {
    std::vector<std::pair<int, int>> e = {{3, 1}, {1, 2}, {2, 3}};
    for (auto m : {ClusterMode::Components, ClusterMode::Cliques}) {
        EXPECT_EQ(cluster_edges<int>(e, m), (std::vector<std::vector<int>>{{1, 2, 3}}));
    }
}

TEST(Cluster, EmptyInput) {
    std::vector<std::pair<int, int>> e;
    EXPECT_TRUE(cluster_edges<int>(e, ClusterMode::Cliques).empty());
}

TEST(Cluster, CliqueGuardRefusesLargeGraphs) {
    std::vector<std::pair<int, int>> e;
    for (int i = 0; i <= static_cast<int>(kMaxCliqueEdges); ++i) e.emplace_back(i, i + 1);
    try {
        cluster_edges<int>(e, ClusterMode::Cliques);
        FAIL() << "expected the combinatorial guard";
    } catch (const Error& err) {
        EXPECT_EQ(err.kind(), ErrorKind::Combinatorial);
        EXPECT_NE(std::string(err.what()).find("components"), std::string::npos);
    }
    EXPECT_EQ(cluster_edges<int>(e, ClusterMode::Components).size(), 1u);
}

TEST(Cluster, RandomGraphsMatchOracles) {
    std::mt19937 rng(99);
    for (int g = 0; g < 200; ++g) {
        const int n = std::uniform_int_distribution<int>(2, 12)(rng);
        const double density = std::uniform_real_distribution<double>(0.1, 0.9)(rng);
        auto edges = testkit::random_graph(rng, n, density);
        EXPECT_EQ(cluster_edges<int>(edges, ClusterMode::Cliques), testkit::brute_maximal_cliques(n, edges));
        EXPECT_EQ(cluster_edges<int>(edges, ClusterMode::Components), testkit::union_find_components(n, edges));
    }
}

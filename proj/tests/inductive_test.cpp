#include <cmath>

#include <gtest/gtest.h>

#include "cleora/embed.hpp"
#include "cleora/error.hpp"
#include "cleora/inductive.hpp"
#include "graphs.hpp"

using namespace cleora;

TEST(Reconstruct, TrainingNodesFromPenultimateEqualFinal) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto edges = cleora::testing::random_graph(seed);
    const auto m = build_transition(edges);
    const auto e = embed_pair(m, EmbedConfig{.dim = 8, .iterations = 3, .keep_penultimate = true});
    const EmbeddingTable source{m.index, *e.penultimate};
    for (std::size_t r = 0; r < m.size(); ++r) {
      std::vector<Neighbor> neighbors;
      for (const Edge& edge : edges) {
        if (edge.from == m.index.id(r)) neighbors.push_back({edge.to, edge.weight});
        if (edge.to == m.index.id(r)) neighbors.push_back({edge.from, edge.weight});
      }
      const auto v = reconstruct_node(neighbors, source);
      for (std::size_t j = 0; j < 8; ++j) ASSERT_EQ(v[j], e.final.at(r, j));
    }
  }
}

TEST(Reconstruct, WeightedAverageIsNormalized) {
  NodeIndex idx({EntityId{1}, EntityId{2}});
  EmbeddingMatrix t(2, 2);
  t.at(0, 0) = 1;
  t.at(1, 1) = 1;
  const EmbeddingTable source{idx, t};
  const auto v = reconstruct_node(std::vector<Neighbor>{{EntityId{1}, 3.0}, {EntityId{2}, 1.0}}, source);
  EXPECT_NEAR(v[0], 3.0 / std::sqrt(10.0), 1e-7);
  EXPECT_NEAR(v[1], 1.0 / std::sqrt(10.0), 1e-7);
}

TEST(Reconstruct, MissingOrEmptyNeighborsAreDataErrors) {
  const EmbeddingTable source{NodeIndex({EntityId{1}}), EmbeddingMatrix(1, 2)};
  EXPECT_THROW(reconstruct_node(std::vector<Neighbor>{}, source), Error);
  EXPECT_THROW(reconstruct_node(std::vector<Neighbor>{{EntityId{5}, 1.0}}, source), Error);
}

TEST(ReconstructBatch, HopsAndUnreachable) {
  // Known: 1, 2. New: 10 (touches 1), 11 (touches 10 only), 12 (touches 11 only).
  NodeIndex idx({EntityId{1}, EntityId{2}});
  EmbeddingMatrix t(2, 2);
  t.at(0, 0) = 1;
  t.at(1, 1) = 1;
  const EmbeddingTable source{idx, t};
  const std::vector<Edge> edges{{EntityId{10}, EntityId{1}, 1.0},
                                {EntityId{11}, EntityId{10}, 1.0},
                                {EntityId{12}, EntityId{11}, 1.0}};

  const auto one = reconstruct_batch(edges, source, 1);
  ASSERT_EQ(one.embeddings.index.size(), 1u);
  EXPECT_EQ(one.embeddings.index.id(0), EntityId{10});
  EXPECT_EQ(one.unembedded, (std::vector<EntityId>{EntityId{11}, EntityId{12}}));

  const auto two = reconstruct_batch(edges, source, 2, 4);
  ASSERT_EQ(two.embeddings.index.size(), 2u);
  EXPECT_EQ(two.hop, (std::vector<int>{1, 2}));
  EXPECT_EQ(two.unembedded, std::vector<EntityId>{EntityId{12}});
  const auto row = two.embeddings.find(EntityId{11});
  ASSERT_TRUE(row.has_value());
  EXPECT_FLOAT_EQ((*row)[0], 1.0f);
}

TEST(ReconstructBatch, RejectsBadHopCount) {
  const EmbeddingTable source{NodeIndex({EntityId{1}}), EmbeddingMatrix(1, 2)};
  EXPECT_THROW(reconstruct_batch(std::vector<Edge>{}, source, 3), Error);
}

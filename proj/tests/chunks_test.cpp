#include <algorithm>
#include <numeric>

#include <gtest/gtest.h>

#include "cleora/chunks.hpp"
#include "cleora/embed.hpp"
#include "cleora/error.hpp"
#include "graphs.hpp"

using namespace cleora;

namespace {

bool same_edge(const Edge& a, const Edge& b) {
  return a.from == b.from && a.to == b.to && a.weight == b.weight;
}

}  // namespace

TEST(SplitGraph, PartitionsEdgesPreservingOrder) {
  const auto edges = cleora::testing::random_graph(3, {.max_edges = 200});
  const std::size_t q = std::min<std::size_t>(4, edges.size());
  const auto split = split_graph(edges, q, 17);
  ASSERT_EQ(split.chunks.size(), q);
  ASSERT_EQ(split.plan.assignment.size(), edges.size());
  std::vector<std::size_t> cursor(q, 0);
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const auto c = split.plan.assignment[e];
    ASSERT_LT(c, q);
    ASSERT_TRUE(same_edge(split.chunks[c][cursor[c]++], edges[e]));
  }
  for (std::size_t c = 0; c < q; ++c) {
    EXPECT_EQ(cursor[c], split.chunks[c].size());
    EXPECT_FALSE(split.chunks[c].empty());
  }
  const auto sizes = std::minmax_element(split.chunks.begin(), split.chunks.end(),
                                         [](auto& a, auto& b) { return a.size() < b.size(); });
  EXPECT_LE(sizes.second->size() - sizes.first->size(), 1u);
}

TEST(SplitGraph, DeterministicPerSeed) {
  const auto edges = cleora::testing::random_graph(4);
  if (edges.size() < 3) GTEST_SKIP();
  EXPECT_EQ(split_graph(edges, 3, 1).plan.assignment, split_graph(edges, 3, 1).plan.assignment);
}

TEST(SplitGraph, RejectsBadChunkCounts) {
  const std::vector<Edge> edges{{EntityId{1}, EntityId{2}, 1.0}};
  EXPECT_THROW(split_graph(edges, 0, 0), Error);
  EXPECT_THROW(split_graph(edges, 2, 0), Error);
}

TEST(ChunkWeights, SumToOneAndMatchOccurrenceRatios) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto edges = cleora::testing::random_graph(seed);
    const std::size_t q = std::min<std::size_t>(1 + seed % 5, edges.size());
    const auto split = split_graph(edges, q, seed);
    const auto rebuilt = plan_from_chunks(split.chunks);
    EXPECT_EQ(rebuilt.occurrences, split.plan.occurrences);
    for (EntityId v : split.plan.nodes.ids()) {
      const auto w = chunk_weights(split.plan, v);
      ASSERT_EQ(w.size(), q);
      EXPECT_NEAR(std::accumulate(w.begin(), w.end(), 0.0), 1.0, 1e-9);
      // Brute-force endpoint count.
      std::vector<double> count(q, 0.0);
      for (std::size_t c = 0; c < q; ++c) {
        for (const Edge& e : split.chunks[c]) count[c] += (e.from == v) + (e.to == v);
      }
      const double total = std::accumulate(count.begin(), count.end(), 0.0);
      for (std::size_t c = 0; c < q; ++c) EXPECT_DOUBLE_EQ(w[c], count[c] / total);
    }
  }
}

TEST(ChunkWeights, UnknownNodeIsDataError) {
  const auto split = split_graph(std::vector<Edge>{{EntityId{1}, EntityId{2}, 1.0}}, 1, 0);
  EXPECT_THROW(chunk_weights(split.plan, EntityId{99}), Error);
}

TEST(Merge, SingleChunkIsBitIdentical) {
  const auto edges = cleora::testing::random_graph(12);
  const EmbedConfig cfg{.dim = 8, .iterations = 3};
  const auto m = build_transition(edges);
  const auto full = embed_pair(m, cfg);

  const auto split = split_graph(edges, 1, 5);
  const auto mq = build_transition(split.chunks[0]);
  std::vector<EmbeddingTable> tables{{mq.index, embed_pair(mq, cfg).final}};
  const auto merged = merge_embeddings(tables, split.plan);
  EXPECT_EQ(merged.index, m.index);
  EXPECT_EQ(merged.matrix, full.final);
}

TEST(Merge, WeightedSumOfChunkRows) {
  const auto edges = cleora::testing::random_graph(13, {.max_edges = 120});
  const std::size_t q = std::min<std::size_t>(3, edges.size());
  const auto split = split_graph(edges, q, 2);
  std::vector<EmbeddingTable> tables;
  for (const auto& chunk : split.chunks) {
    const auto mq = build_transition(chunk);
    tables.push_back({mq.index, embed_pair(mq, EmbedConfig{.dim = 4, .iterations = 2}).final});
  }
  const auto merged = merge_embeddings(tables, split.plan);
  for (std::size_t r = 0; r < merged.index.size(); ++r) {
    const EntityId v = merged.index.id(r);
    const auto w = chunk_weights(split.plan, v);
    for (std::size_t j = 0; j < 4; ++j) {
      double expect = 0.0;
      for (std::size_t c = 0; c < q; ++c) {
        if (auto row = tables[c].find(v)) expect += w[c] * (*row)[j];
      }
      EXPECT_NEAR(merged.matrix.at(r, j), expect, 1e-6);
    }
  }
}

TEST(Merge, TableCountMismatchThrows) {
  const auto edges = cleora::testing::random_graph(14);
  if (edges.size() < 2) GTEST_SKIP();
  const auto split = split_graph(edges, 2, 0);
  std::vector<EmbeddingTable> one;
  EXPECT_THROW(merge_embeddings(one, split.plan), Error);
}

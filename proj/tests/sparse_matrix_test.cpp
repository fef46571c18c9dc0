#include <cmath>

#include <gtest/gtest.h>

#include "cleora/error.hpp"
#include "cleora/sparse_matrix.hpp"
#include "graphs.hpp"
#include "oracle.hpp"

using namespace cleora;
using cleora::testing::DenseOracle;

TEST(NodeIndex, SortsAndDeduplicates) {
  const NodeIndex idx({EntityId{9}, EntityId{3}, EntityId{9}, EntityId{5}});
  ASSERT_EQ(idx.size(), 3u);
  EXPECT_EQ(idx.id(0), EntityId{3});
  EXPECT_EQ(idx.find(EntityId{9}), 2u);
  EXPECT_FALSE(idx.find(EntityId{4}).has_value());
  EXPECT_THROW(idx.at(EntityId{4}), Error);
}

TEST(Transition, CoalescesDuplicatesAndCountsBothDirections) {
  const std::vector<Edge> edges{{EntityId{1}, EntityId{2}, 1.0},
                                {EntityId{2}, EntityId{1}, 2.0},
                                {EntityId{1}, EntityId{3}, 1.0},
                                {EntityId{3}, EntityId{3}, 1.0}};
  const auto m = build_transition(edges);
  ASSERT_EQ(m.size(), 3u);
  // rows: 1 -> {2: 3, 3: 1}; 2 -> {1: 3}; 3 -> {1: 1, 3: 2}
  ASSERT_EQ(m.entries.size(), 5u);
  EXPECT_DOUBLE_EQ(m.degree[0], 4.0);
  EXPECT_DOUBLE_EQ(m.degree[1], 3.0);
  EXPECT_DOUBLE_EQ(m.degree[2], 3.0);
  EXPECT_DOUBLE_EQ(m.row(0)[0].value, 0.75);
  EXPECT_DOUBLE_EQ(m.row(2)[1].value, 2.0 / 3.0);
}

TEST(Transition, EmptyInputIsDataError) {
  try {
    build_transition(std::vector<Edge>{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kData);
  }
}

TEST(Transition, MatchesDenseOracleAndIsRowStochastic) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto edges = cleora::testing::random_graph(seed);
    const auto m = build_transition(edges);
    const DenseOracle oracle(edges);
    ASSERT_EQ(m.index.ids().size(), oracle.ids.size());
    for (std::size_t r = 0; r < m.size(); ++r) {
      ASSERT_EQ(m.index.id(r), oracle.ids[r]);
      double sum = 0.0;
      std::size_t prev_col = 0;
      for (std::size_t k = 0; k < m.row(r).size(); ++k) {
        const auto& e = m.row(r)[k];
        if (k > 0) EXPECT_LT(prev_col, e.col);
        prev_col = e.col;
        EXPECT_NEAR(e.value, oracle.transition[r][e.col], 1e-12);
        sum += e.value;
      }
      EXPECT_NEAR(sum, 1.0, 1e-9);
      EXPECT_NEAR(m.degree[r], oracle.degree[r], 1e-9);
    }
  }
}

TEST(Multiply, MatchesDenseProduct) {
  const auto edges = cleora::testing::random_graph(11);
  const auto m = build_transition(edges);
  const DenseOracle oracle(edges);
  EmbeddingMatrix t(m.size(), 5);
  for (std::size_t r = 0; r < t.rows(); ++r) {
    for (std::size_t j = 0; j < 5; ++j) t.at(r, j) = static_cast<float>(std::sin(r * 7.0 + j));
  }
  const auto out = multiply(m, t);
  for (std::size_t a = 0; a < m.size(); ++a) {
    for (std::size_t j = 0; j < 5; ++j) {
      double expect = 0.0;
      for (std::size_t b = 0; b < m.size(); ++b) expect += oracle.transition[a][b] * t.at(b, j);
      EXPECT_NEAR(out.at(a, j), expect, 1e-6);
    }
  }
  EXPECT_EQ(multiply(m, t, 4), out);
}

TEST(Multiply, ShapeMismatchIsInternalError) {
  const auto m = build_transition(std::vector<Edge>{{EntityId{1}, EntityId{2}, 1.0}});
  EmbeddingMatrix wrong(3, 2);
  try {
    multiply(m, wrong);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kInternal);
  }
}

TEST(Normalize, UnitRowsAndZeroRows) {
  EmbeddingMatrix t(3, 2);
  t.at(0, 0) = 3;
  t.at(0, 1) = 4;
  t.at(2, 1) = -2;
  const auto stats = l2_normalize_rows(t);
  EXPECT_EQ(stats.zero_rows, 1u);
  EXPECT_FLOAT_EQ(t.at(0, 0), 0.6f);
  EXPECT_FLOAT_EQ(t.at(0, 1), 0.8f);
  EXPECT_FLOAT_EQ(t.at(1, 0), 0.0f);
  EXPECT_FLOAT_EQ(t.at(2, 1), -1.0f);
}

TEST(Memory, EstimateFollowsFormula) {
  const auto m = estimate_memory(10, 25, 8);
  EXPECT_EQ(m.p_objects, 10u);
  EXPECT_EQ(m.m_objects, 50u);
  EXPECT_EQ(m.t_objects, 160u);
  EXPECT_EQ(m.objects(), 10u * (1 + 2 * 8) + 2 * 25);
  EXPECT_EQ(m.bytes(), 40u * 10 + 24 * 50 + 4 * 160);
}

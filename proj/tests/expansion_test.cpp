#include <algorithm>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "cleora/expansion.hpp"

using namespace cleora;

namespace {

EntityId id(std::uint64_t v) { return EntityId{v}; }

Hyperedge make(std::vector<std::vector<std::uint64_t>> groups, double weight = 1.0) {
  Hyperedge h;
  h.weight = weight;
  for (const auto& g : groups) {
    std::vector<EntityId> ids;
    for (auto v : g) ids.push_back(id(v));
    h.groups.push_back(ids);
  }
  return h;
}

}  // namespace

TEST(RelationPairs, CartesianOverActiveColumns) {
  const auto pairs = relation_pairs(parse_schema("a complex::reflexive::b ignore::z c"));
  ASSERT_EQ(pairs.size(), 4u);
  EXPECT_EQ(pairs[0].left_name, "a");
  EXPECT_EQ(pairs[0].right_name, "b");
  EXPECT_EQ(pairs[1].right_name, "c");
  EXPECT_EQ(pairs[2].left_name, "b");
  EXPECT_EQ(pairs[2].right_name, "c");
  EXPECT_TRUE(pairs[3].is_self());
  EXPECT_EQ(pairs[3].left_name, "b");
}

TEST(CliqueExpand, WidthTwoIsIdentity) {
  const auto edges = clique_expand(make({{1}, {2}}, 0.5), RelationPair{0, 1, "a", "b"});
  ASSERT_EQ(edges.size(), 1u);
  EXPECT_EQ(edges[0].from, id(1));
  EXPECT_EQ(edges[0].to, id(2));
  EXPECT_DOUBLE_EQ(edges[0].weight, 0.5);
}

TEST(CliqueExpand, EdgeCountIsProductOfGroupSizes) {
  std::mt19937_64 rng(7);
  std::vector<Hyperedge> hs;
  std::size_t expected = 0;
  for (int i = 0; i < 50; ++i) {
    const std::size_t na = 1 + rng() % 5;
    const std::size_t nb = 1 + rng() % 5;
    std::vector<std::uint64_t> a(na), b(nb), c{rng() % 100};
    for (auto& v : a) v = rng() % 100;
    for (auto& v : b) v = 1000 + rng() % 100;
    hs.push_back(make({a, b, c}));
    expected += na * nb;
  }
  VirtualIdSource ids;
  EXPECT_EQ(expand_all(hs, RelationPair{0, 1, "a", "b"}, Expansion::kClique, ids).size(), expected);
}

TEST(CliqueExpand, ReflexiveGroupPairsDistinctPositions) {
  const auto edges = clique_expand(make({{1, 2, 3}}), RelationPair{0, 0, "t", "t"});
  ASSERT_EQ(edges.size(), 3u);
  for (const auto& e : edges) EXPECT_NE(e.from, e.to);

  const auto dup = clique_expand(make({{4, 4}}), RelationPair{0, 0, "t", "t"});
  ASSERT_EQ(dup.size(), 1u);
  EXPECT_EQ(dup[0].from, dup[0].to);

  EXPECT_TRUE(clique_expand(make({{5}}), RelationPair{0, 0, "t", "t"}).empty());
}

TEST(StarExpand, OneHubPerHyperedge) {
  VirtualIdSource ids;
  const auto star = star_expand(make({{1, 2}, {3}, {4, 5, 6}}, 2.0), ids);
  EXPECT_TRUE(star.hub.is_virtual());
  ASSERT_EQ(star.edges.size(), 6u);
  std::set<EntityId> members;
  for (const auto& e : star.edges) {
    EXPECT_EQ(e.from, star.hub);
    EXPECT_DOUBLE_EQ(e.weight, 2.0);
    members.insert(e.to);
  }
  EXPECT_EQ(members.size(), 6u);
  EXPECT_NE(star_expand(make({{1}, {2}}), ids).hub, star.hub);
}

TEST(StarExpand, ProjectsOntoThePair) {
  VirtualIdSource ids;
  const std::vector<Hyperedge> hs{make({{1, 2}, {3}, {4, 5, 6}})};
  const auto edges = expand_all(hs, RelationPair{0, 2, "a", "c"}, Expansion::kStar, ids);
  EXPECT_EQ(edges.size(), 5u);
  EXPECT_EQ(ids.issued(), 1u);
}

TEST(Expansion, ParsesNames) {
  EXPECT_EQ(parse_expansion("clique"), Expansion::kClique);
  EXPECT_EQ(parse_expansion("star"), Expansion::kStar);
  EXPECT_EQ(to_string(Expansion::kStar), "star");
  EXPECT_ANY_THROW(parse_expansion("chain"));
}

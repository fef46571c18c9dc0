#include <gtest/gtest.h>

#include "cleora/embedding_io.hpp"
#include "cleora/error.hpp"
#include "graphs.hpp"

using namespace cleora;
using cleora::testing::TempDir;

TEST(EmbeddingIo, FileNames) {
  const RelationPair pair{0, 1, "user", "item"};
  EXPECT_EQ(embedding_file_name(pair, "item"), "emb__user__item__item.tsv");
  EXPECT_EQ(penultimate_file_name(pair, "user"), "penultimate__user__item__user.tsv");
}

TEST(EmbeddingIo, OutputColumnsSkipTransient) {
  const auto schema = parse_schema("transient::user item");
  const auto pairs = relation_pairs(schema);
  EXPECT_EQ(output_columns(schema, pairs[0]), std::vector<std::string>{"item"});
  EXPECT_EQ(output_columns(schema, pairs[0], true), (std::vector<std::string>{"user", "item"}));
  const auto shared = parse_schema("node node");
  EXPECT_EQ(output_columns(shared, relation_pairs(shared)[0]), std::vector<std::string>{"node"});
}

TEST(EmbeddingIo, FormatValue) {
  EXPECT_EQ(format_value(0.6f), "0.6");
  EXPECT_EQ(format_value(-1.0f), "-1");
  EXPECT_EQ(format_value(0.0f), "0");
}

TEST(EmbeddingIo, RoundTripFiltersByColumnAndVirtual) {
  TempDir dir;
  EntityDictionary dict;
  const EntityId a = dict.intern("user", "alice");
  const EntityId b = dict.intern("user", "bob");
  const EntityId x = dict.intern("item", "x");
  const EntityId hub{EntityId::kVirtualBit | 1};
  const NodeIndex index({a, b, x, hub});
  EmbeddingMatrix t(4, 3);
  for (std::size_t r = 0; r < 4; ++r) {
    for (std::size_t j = 0; j < 3; ++j) t.at(r, j) = 0.125f * static_cast<float>(r + j) - 0.3f;
  }
  const std::vector<double> degree{1, 2, 3, 4};
  const auto path = dir / "users.tsv";
  EXPECT_EQ(write_embeddings(path, index, t, degree, dict, "user"), 2u);

  const auto loaded = read_embeddings(path, "user");
  ASSERT_EQ(loaded.table.index.size(), 2u);
  for (EntityId id : {a, b}) {
    const auto row = loaded.table.find(id);
    ASSERT_TRUE(row.has_value());
    const std::size_t r = *index.find(id);
    for (std::size_t j = 0; j < 3; ++j) EXPECT_FLOAT_EQ((*row)[j], t.at(r, j));
    EXPECT_DOUBLE_EQ(loaded.degree[*loaded.table.index.find(id)], degree[r]);
  }
  EXPECT_FALSE(loaded.table.find(x).has_value());
}

TEST(EmbeddingIo, MalformedFileIsDataError) {
  TempDir dir;
  cleora::testing::write_file(dir / "bad.tsv", "a\t1\t0.1 0.2\nb\t1\t0.3\n");
  try {
    read_embeddings(dir / "bad.tsv", "n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kData);
  }
}

TEST(EmbeddingIo, ConcatKeepsAllRows) {
  TempDir dir;
  cleora::testing::write_file(dir / "a.tsv", "p\t1\t1 0\n");
  cleora::testing::write_file(dir / "b.tsv", "q\t2\t0 1\n");
  const auto all = concat_embeddings({read_embeddings(dir / "a.tsv", "u"),
                                      read_embeddings(dir / "b.tsv", "i")});
  EXPECT_EQ(all.table.index.size(), 2u);
  EXPECT_TRUE(all.table.find(hash_entity("p", "u")).has_value());
  EXPECT_TRUE(all.table.find(hash_entity("q", "i")).has_value());
}

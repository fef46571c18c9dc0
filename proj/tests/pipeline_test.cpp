#include <filesystem>

#include <gtest/gtest.h>

#include "cleora/embedding_io.hpp"
#include "cleora/error.hpp"
#include "cleora/pipeline.hpp"
#include "graphs.hpp"

using namespace cleora;
using cleora::testing::read_file;
using cleora::testing::TempDir;
using cleora::testing::write_file;
namespace fs = std::filesystem;

namespace {

const char* kBasket =
    "u1\tp1 p2 p3\n"
    "u2\tp2 p4\n"
    "u3\tp1 p4 p5\n"
    "u1\tp5\n"
    "u4\tp3 p6\n"
    "u2\tp6 p1\n";

RunConfig basket_config(const TempDir& dir, const std::string& out) {
  write_file(dir / "basket.tsv", kBasket);
  RunConfig c;
  c.input = dir / "basket.tsv";
  c.schema = "user complex::reflexive::product";
  c.dim = 8;
  c.iterations = 3;
  c.seed = 11;
  c.output_dir = dir / out;
  return c;
}

}  // namespace

TEST(RunEmbed, WritesOneFilePerPairAndColumn) {
  TempDir dir;
  const auto summary = run_embed(basket_config(dir, "out"));
  ASSERT_EQ(summary.pairs.size(), 2u);
  EXPECT_TRUE(fs::exists(dir / "out" / "emb__user__product__user.tsv"));
  EXPECT_TRUE(fs::exists(dir / "out" / "emb__user__product__product.tsv"));
  EXPECT_TRUE(fs::exists(dir / "out" / "emb__product__product__product.tsv"));
  EXPECT_TRUE(fs::exists(dir / "out" / kManifestName));
  EXPECT_EQ(summary.pairs[0].nodes, 10u);
  EXPECT_EQ(summary.pairs[0].edges, 13u);
  EXPECT_EQ(summary.pairs[0].estimate.objects(), 10u * (1 + 2 * 8) + 2 * 13);

  const auto users = read_embeddings(dir / "out" / "emb__user__product__user.tsv", "user");
  EXPECT_EQ(users.table.index.size(), 4u);
  EXPECT_TRUE(users.table.find(hash_entity("u3", "user")).has_value());
}

TEST(RunEmbed, ManifestReplayReproducesOutputs) {
  TempDir dir;
  auto config = basket_config(dir, "a");
  config.keep_penultimate = true;
  run_embed(config);
  RunConfig replay = load_manifest(dir / "a" / kManifestName);
  EXPECT_EQ(replay.schema, config.schema);
  EXPECT_EQ(replay.seed, 11u);
  EXPECT_TRUE(replay.keep_penultimate);
  replay.output_dir = dir / "b";
  replay.workers = 4;
  run_embed(replay);
  for (const auto& entry : fs::directory_iterator(dir / "a")) {
    const auto name = entry.path().filename();
    if (name == kManifestName) continue;
    EXPECT_EQ(read_file(entry.path()), read_file(dir / "b" / name)) << name;
  }
  EXPECT_EQ(manifest_input_digest(dir / "a" / kManifestName), file_digest(config.input));
}

TEST(RunEmbed, SingleChunkMatchesUnchunked) {
  TempDir dir;
  auto plain = basket_config(dir, "plain");
  run_embed(plain);
  auto chunked = basket_config(dir, "chunked");
  chunked.chunks = 1;
  run_embed(chunked);
  EXPECT_EQ(read_file(dir / "plain" / "emb__user__product__product.tsv"),
            read_file(dir / "chunked" / "emb__user__product__product.tsv"));
}

TEST(RunEmbed, ChunkedOutputsCanBeMergedFromDisk) {
  TempDir dir;
  auto config = basket_config(dir, "model");
  config.chunks = 3;
  run_embed(config);
  EXPECT_TRUE(fs::exists(dir / "model" / "chunks" / "chunk_002"));
  const auto written = run_merge_chunks(MergeConfig{dir / "model", dir / "merged", false});
  ASSERT_EQ(written.size(), 3u);
  for (const auto& path : written) {
    EXPECT_EQ(read_file(path), read_file(dir / "model" / path.filename())) << path;
  }
}

TEST(RunReconstruct, EmbedsNewNodesAndListsUnreachable) {
  TempDir dir;
  auto config = basket_config(dir, "model");
  config.keep_penultimate = true;
  run_embed(config);
  write_file(dir / "new.tsv", "u9\tp1 p2\nu8\tp77\n");
  ReconstructConfig rc;
  rc.model_dir = dir / "model";
  rc.input = dir / "new.tsv";
  const auto summary = run_reconstruct(rc);
  // u9 in the user/product pair; p77 cannot be placed; u8 neither.
  const auto rec = read_embeddings(dir / "model" / "reconstructed__user__product__user.tsv", "user");
  EXPECT_TRUE(rec.table.find(hash_entity("u9", "user")).has_value());
  EXPECT_FALSE(rec.table.find(hash_entity("u8", "user")).has_value());
  EXPECT_GE(summary.unembedded, 2u);
}

TEST(RunReconstruct, RequiresPenultimateUnlessUsingFinal) {
  TempDir dir;
  run_embed(basket_config(dir, "model"));
  write_file(dir / "new.tsv", "u9\tp1 p2\n");
  ReconstructConfig rc;
  rc.model_dir = dir / "model";
  rc.input = dir / "new.tsv";
  EXPECT_THROW(run_reconstruct(rc), Error);
  rc.use_final = true;
  EXPECT_NO_THROW(run_reconstruct(rc));
}

TEST(Evaluation, NamespaceFromFileName) {
  EXPECT_EQ(evaluation_namespace("x/emb__user__product__product.tsv", std::nullopt), "product");
  EXPECT_EQ(evaluation_namespace("vectors.tsv", std::nullopt), "node");
  EXPECT_EQ(evaluation_namespace("vectors.tsv", std::string("page")), "page");
}

TEST(Evaluation, LabelsAreNumberedInSortedOrder) {
  TempDir dir;
  write_file(dir / "labels.tsv", "a\tzeta\nb\talpha\nc\tzeta\n");
  const auto labels = read_labels(dir / "labels.tsv", "n");
  EXPECT_EQ(labels.class_names, (std::vector<std::string>{"alpha", "zeta"}));
  EXPECT_EQ(labels.labels[0].second, 1);
  EXPECT_EQ(labels.labels[1].first, hash_entity("b", "n"));
}

TEST(Sweep, SingleIterationEqualsEmbedThenEvaluate) {
  TempDir dir;
  const auto g = cleora::testing::stochastic_block_model(80, 2, 0.2, 0.02, 3);
  cleora::testing::write_edge_tsv(dir / "g.tsv", g.edges);
  cleora::testing::write_label_tsv(dir / "labels.tsv", g);

  RunConfig run;
  run.input = dir / "g.tsv";
  run.schema = "node node";
  run.dim = 16;
  run.iterations = 3;
  run.output_dir = dir / "out";
  run_embed(run);
  EvalClsConfig cls;
  cls.embeddings = dir / "out" / "emb__node__node__node.tsv";
  cls.labels = dir / "labels.tsv";
  cls.seed = 5;
  const auto direct = run_eval_cls(cls);

  SweepConfig sweep;
  sweep.run = run;
  sweep.iteration_list = {3};
  sweep.labels = dir / "labels.tsv";
  sweep.eval_seed = 5;
  const auto rows = run_sweep(sweep);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(*rows[0].micro_f1, direct.micro_f1);
  EXPECT_EQ(*rows[0].macro_f1, direct.macro_f1);
  EXPECT_NE(format_sweep(rows).find("micro_f1"), std::string::npos);
}

TEST(Sweep, NeedsSomethingToEvaluate) {
  SweepConfig sweep;
  sweep.iteration_list = {1};
  EXPECT_THROW(run_sweep(sweep), Error);
}

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "cleora/embed.hpp"
#include "cleora/eval.hpp"
#include "cleora/expansion.hpp"
#include "cleora/ingest.hpp"
#include "cleora/sparse_matrix.hpp"

namespace cleora {

/// Everything that determines the output of an `embed` run.
struct RunConfig {
  std::filesystem::path input;
  InputFormat format = InputFormat::kTsv;
  std::string schema;
  bool weighted = false;
  bool strict = false;
  Expansion expansion = Expansion::kClique;
  std::size_t dim = 1024;
  std::size_t iterations = 4;
  std::uint64_t seed = 0;
  std::size_t chunks = 1;
  bool normalize_merged = false;
  bool keep_penultimate = false;
  std::filesystem::path output_dir = ".";
  std::size_t workers = 1;  // not recorded: output is identical for any value
};

struct PairSummary {
  RelationPair pair;
  std::size_t nodes = 0;
  std::size_t edges = 0;  // expanded undirected edges
  std::size_t transition_entries = 0;
  std::size_t zero_rows = 0;
  MemoryAccount estimate;
  MemoryAccount measured;
  std::vector<std::filesystem::path> files;
};

struct RunSummary {
  std::vector<PairSummary> pairs;
  ReadStats rows;
  std::filesystem::path manifest;
  double wall_seconds = 0.0;
};

inline constexpr const char* kManifestName = "manifest.json";

/// ingest -> expansion -> transition -> embed (-> chunk merge), writing the
/// embedding files and `manifest.json` into config.output_dir.
RunSummary run_embed(const RunConfig& config);

/// Recovers the run configuration recorded in a manifest (output_dir is set
/// to the manifest's directory, workers to 1).
RunConfig load_manifest(const std::filesystem::path& manifest_path);

/// The input digest recorded in a manifest.
std::string manifest_input_digest(const std::filesystem::path& manifest_path);

/// "xxh64:<16 hex digits>" over the file bytes.
std::string file_digest(const std::filesystem::path& path);

struct MergeConfig {
  std::filesystem::path model_dir;
  std::optional<std::filesystem::path> output_dir;  // defaults to model_dir
  bool normalize_merged = false;
};

/// Merges per-chunk embedding files of a chunked run using the occurrence
/// sidecars. Returns the files written.
std::vector<std::filesystem::path> run_merge_chunks(const MergeConfig& config);

struct ReconstructConfig {
  std::filesystem::path model_dir;
  std::filesystem::path input;
  std::optional<InputFormat> format;  // defaults to the manifest's
  int hops = 1;
  bool use_final = false;  // source T_I instead of T_{I-1}
  std::optional<std::filesystem::path> output_dir;  // defaults to model_dir
  std::size_t workers = 1;
};

struct ReconstructSummary {
  std::size_t reconstructed = 0;
  std::size_t unembedded = 0;
  std::vector<std::filesystem::path> files;
};

ReconstructSummary run_reconstruct(const ReconstructConfig& config);

/// Label -> id mapping for evaluation inputs: labels are hashed in the
/// namespace of the embedding file's column (`emb__l__r__<column>.tsv`),
/// or `column` when given.
std::string evaluation_namespace(const std::filesystem::path& embeddings,
                                 const std::optional<std::string>& column);

/// Two-column TSV edge list (extra columns ignored) hashed into `ns`.
std::vector<Edge> read_edge_list(const std::filesystem::path& path, std::string_view ns);

struct LabelSet {
  std::vector<std::pair<EntityId, int>> labels;
  std::vector<std::string> class_names;  // index = class id
};

/// `label<TAB>class` file; class names are numbered in sorted order.
LabelSet read_labels(const std::filesystem::path& path, std::string_view ns);

struct EvalLpConfig {
  std::filesystem::path embeddings;
  std::filesystem::path train_edges;
  std::filesystem::path test_edges;
  std::optional<std::string> column;
  LinkEvalConfig eval;
  LinkTrainConfig train;
};

LinkPredictionReport run_eval_lp(const EvalLpConfig& config);

struct EvalClsConfig {
  std::filesystem::path embeddings;
  std::filesystem::path labels;
  std::optional<std::string> column;
  std::uint64_t seed = 0;
  ClassifyConfig classify;
};

ClassificationReport run_eval_cls(const EvalClsConfig& config);

struct SweepConfig {
  RunConfig run;  // output_dir and chunks are ignored
  std::vector<std::size_t> iteration_list;
  std::optional<std::string> column;  // defaults to the first output column
  std::optional<std::filesystem::path> labels;
  std::optional<std::filesystem::path> train_edges;
  std::optional<std::filesystem::path> test_edges;
  std::uint64_t eval_seed = 0;
  LinkEvalConfig link_eval;
  ClassifyConfig classify;
};

struct SweepRow {
  std::size_t iterations = 0;
  std::optional<double> micro_f1;
  std::optional<double> macro_f1;
  std::optional<double> mrr;
  std::optional<double> hits_at_10;
  std::optional<double> mean_rank;
};

/// One embedding pass up to max(iteration_list); each listed iteration is
/// evaluated on the snapshot T_i.
std::vector<SweepRow> run_sweep(const SweepConfig& config);

/// TSV with a header and one row per iteration count.
std::string format_sweep(const std::vector<SweepRow>& rows);

}  // namespace cleora

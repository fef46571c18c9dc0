#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cleora/expansion.hpp"
#include "cleora/ingest.hpp"
#include "cleora/sparse_matrix.hpp"

namespace cleora {

/// `emb__<left>__<right>__<column>.tsv`
std::string embedding_file_name(const RelationPair& pair, std::string_view column);
/// `penultimate__<left>__<right>__<column>.tsv`
std::string penultimate_file_name(const RelationPair& pair, std::string_view column);

/// Columns of `pair` that get an output file: distinct names, transient
/// columns excluded unless `include_transient`.
std::vector<std::string> output_columns(const ColumnSchema& schema, const RelationPair& pair,
                                        bool include_transient = false);

/// Shortest decimal that reads back to the same float, e.g. "0.6", "-0.12345679".
std::string format_value(float value);

/// Writes `label<TAB>degree<TAB>v1 v2 ... vd` for every node whose dictionary
/// namespace is `column`, in ascending dense index order. Virtual nodes and
/// nodes of other columns are skipped. Returns the number of rows written.
std::size_t write_embeddings(const std::filesystem::path& path, const NodeIndex& index,
                             const EmbeddingMatrix& t, std::span<const double> degree,
                             const EntityDictionary& dictionary, std::string_view column);

/// A re-parsed embedding file. Rows of `table` are ordered by id;
/// labels[r] and degree[r] describe row r.
struct LoadedEmbeddings {
  EmbeddingTable table;
  std::vector<std::string> labels;
  std::vector<double> degree;
};

/// Reads an embedding file, hashing labels into namespace `column`.
LoadedEmbeddings read_embeddings(const std::filesystem::path& path, std::string_view column);

/// Stacks several loaded files (distinct ids) into one table.
LoadedEmbeddings concat_embeddings(std::vector<LoadedEmbeddings> parts);

}  // namespace cleora

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>

#include "cleora/ingest.hpp"
#include "cleora/sparse_matrix.hpp"

namespace cleora {

struct EmbedConfig {
  std::size_t dim = 1024;
  std::size_t iterations = 4;
  std::uint64_t seed = 0;
  /// Keep T_{I-1} next to T_I for inductive reconstruction.
  bool keep_penultimate = false;
  std::size_t workers = 1;
};

/// Initial value of coordinate `j` of node `id`: uniform on [-1, 1), drawn
/// from a counter-based generator keyed by (seed, id, j). Values are
/// multiples of 2^-23.
float initial_value(std::uint64_t seed, EntityId id, std::size_t j) noexcept;

EmbeddingMatrix init_embedding(const NodeIndex& nodes, std::size_t dim, std::uint64_t seed);

struct PairEmbedding {
  EmbeddingMatrix final;
  std::optional<EmbeddingMatrix> penultimate;
  std::size_t zero_rows = 0;  // summed over iterations
  MemoryAccount memory;       // objects actually held at peak
};

/// Called after every normalization with the 1-based iteration number.
using IterationObserver = std::function<void(std::size_t iteration, const EmbeddingMatrix&)>;

/// T_i = normalize(M * T_{i-1}) for i = 1..I starting from init_embedding.
PairEmbedding embed_pair(const SparseTransition& m, const EmbedConfig& config,
                         const IterationObserver& observer = {});

}  // namespace cleora

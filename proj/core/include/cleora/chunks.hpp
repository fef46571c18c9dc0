#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "cleora/expansion.hpp"
#include "cleora/sparse_matrix.hpp"

namespace cleora {

/// Edge-to-chunk assignment plus each node's endpoint count per chunk.
struct ChunkPlan {
  std::size_t chunk_count = 1;
  /// Edge index -> chunk. Empty for plans rebuilt from occurrence files.
  std::vector<std::uint32_t> assignment;
  /// Every node touched by any chunk.
  NodeIndex nodes;
  /// nodes.size() x chunk_count, row-major: incident edge endpoints of the
  /// node inside the chunk (a self-loop counts twice).
  std::vector<std::uint64_t> occurrences;

  std::uint64_t occurrence(std::size_t node_row, std::size_t chunk) const {
    return occurrences[node_row * chunk_count + chunk];
  }
};

struct ChunkSplit {
  ChunkPlan plan;
  /// Per-chunk edge lists, each in input order.
  std::vector<std::vector<Edge>> chunks;
};

/// Hash-orders the edges by (seed, position, endpoints) and deals them
/// round-robin into `chunk_count` chunks, so every chunk is non-empty.
/// Throws Error(kUsage) if chunk_count is 0 or exceeds the edge count.
ChunkSplit split_graph(std::span<const Edge> edges, std::size_t chunk_count, std::uint64_t seed);

/// Recomputes occurrences from per-chunk edge lists.
ChunkPlan plan_from_chunks(std::span<const std::vector<Edge>> chunks);

/// w_qv = occurrences of v in chunk q / occurrences of v in all chunks.
/// Throws Error(kData) for a node not in the plan.
std::vector<double> chunk_weights(const ChunkPlan& plan, EntityId node);

/// Row of node v = sum_q w_qv * T^q[v]. Chunks lacking v contribute nothing.
/// The merged rows are not re-normalized.
EmbeddingTable merge_embeddings(std::span<const EmbeddingTable> chunk_tables,
                                const ChunkPlan& plan);

}  // namespace cleora

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "cleora/expansion.hpp"
#include "cleora/ingest.hpp"
#include "cleora/sparse_matrix.hpp"

namespace cleora {

struct Neighbor {
  EntityId node;
  double weight = 1.0;
};

/// normalize(sum_b (e_vb / sum e_v.) * source[b]): one more transition-row
/// multiply for a node outside the trained graph. Duplicate neighbors are
/// coalesced and accumulated in ascending id order, matching multiply().
/// `source` should normally hold T_{I-1}. Throws Error(kData) for an empty
/// neighbor list or neighbors missing from `source` (labelled through
/// `dictionary` when given).
std::vector<float> reconstruct_node(std::span<const Neighbor> neighbors,
                                    const EmbeddingTable& source,
                                    const EntityDictionary* dictionary = nullptr);

struct Reconstruction {
  /// Reconstructed new nodes, ordered by id.
  EmbeddingTable embeddings;
  /// Hop level (1 or 2) of each row of `embeddings`.
  std::vector<int> hop;
  /// Summed weight of the new edges incident to each row.
  std::vector<double> degree;
  /// New nodes not reachable from known nodes within `hops` steps.
  std::vector<EntityId> unembedded;
};

/// Embeds every endpoint of `new_edges` that is absent from `source`.
/// Level 1 averages over known neighbors; with hops == 2 the remaining nodes
/// then average over known and level-1 neighbors. Levels run strictly in
/// sequence; nodes inside a level are independent.
Reconstruction reconstruct_batch(std::span<const Edge> new_edges, const EmbeddingTable& source,
                                 int hops, std::size_t workers = 1);

}  // namespace cleora

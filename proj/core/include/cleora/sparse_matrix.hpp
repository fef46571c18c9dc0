#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "cleora/expansion.hpp"
#include "cleora/ingest.hpp"

namespace cleora {

/// Bijection between entity ids and dense row indices. Rows are ordered by
/// ascending id, so the index depends only on the node set.
class NodeIndex {
 public:
  NodeIndex() = default;
  /// Takes any list of ids (duplicates allowed) and sorts/uniques it.
  explicit NodeIndex(std::vector<EntityId> ids);

  std::size_t size() const noexcept { return ids_.size(); }
  EntityId id(std::size_t index) const { return ids_[index]; }
  std::span<const EntityId> ids() const noexcept { return ids_; }
  std::optional<std::size_t> find(EntityId id) const;
  /// Like find() but throws Error(kInternal) for unknown ids.
  std::size_t at(EntityId id) const;

  friend bool operator==(const NodeIndex&, const NodeIndex&) = default;

 private:
  std::vector<EntityId> ids_;
};

/// Row-major |V| x d single precision matrix.
class EmbeddingMatrix {
 public:
  EmbeddingMatrix() = default;
  EmbeddingMatrix(std::size_t rows, std::size_t dim) : rows_(rows), dim_(dim), values_(rows * dim) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t dim() const noexcept { return dim_; }

  std::span<float> row(std::size_t r) { return {values_.data() + r * dim_, dim_}; }
  std::span<const float> row(std::size_t r) const { return {values_.data() + r * dim_, dim_}; }
  float& at(std::size_t r, std::size_t c) { return values_[r * dim_ + c]; }
  float at(std::size_t r, std::size_t c) const { return values_[r * dim_ + c]; }

  std::span<float> values() noexcept { return values_; }
  std::span<const float> values() const noexcept { return values_; }

  friend bool operator==(const EmbeddingMatrix&, const EmbeddingMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t dim_ = 0;
  std::vector<float> values_;
};

/// Embedding rows addressed by entity id.
struct EmbeddingTable {
  NodeIndex index;
  EmbeddingMatrix matrix;

  std::optional<std::span<const float>> find(EntityId id) const {
    if (auto r = index.find(id)) return matrix.row(*r);
    return std::nullopt;
  }
};

/// COO random-walk transition matrix M with M_ab = e_ab / deg(a).
struct SparseTransition {
  struct Entry {
    std::uint32_t row;
    std::uint32_t col;
    double value;
  };

  NodeIndex index;
  /// Sorted by (row, col), no duplicates, no zeros.
  std::vector<Entry> entries;
  /// entries[row_begin[r] .. row_begin[r + 1]) belong to row r.
  std::vector<std::size_t> row_begin;
  /// Sum of coalesced incident edge weights, both directions counted.
  std::vector<double> degree;

  std::size_t size() const noexcept { return index.size(); }
  std::span<const Entry> row(std::size_t r) const {
    return {entries.data() + row_begin[r], row_begin[r + 1] - row_begin[r]};
  }
};

/// Materializes every edge in both directions, coalesces duplicates by weight
/// and divides each row by its degree. Throws Error(kData) on an empty edge list.
SparseTransition build_transition(std::span<const Edge> edges);

/// out = M * T, one double accumulator per output cell, entries visited in
/// sorted order so the result does not depend on `workers`.
EmbeddingMatrix multiply(const SparseTransition& m, const EmbeddingMatrix& t,
                         std::size_t workers = 1);

/// multiply() writing into a preallocated |V| x d matrix.
void multiply_into(const SparseTransition& m, const EmbeddingMatrix& t, EmbeddingMatrix& out,
                   std::size_t workers = 1);

struct NormalizeStats {
  std::size_t zero_rows = 0;
};

/// Scales each row to unit L2 norm in place. Rows with norm below 1e-12 are
/// set to zero and counted.
NormalizeStats l2_normalize_rows(EmbeddingMatrix& t, std::size_t workers = 1);

/// Object counts for a |V| entry helper table P, 2|E| transition entries M
/// and two d-wide embedding buffers T.
struct MemoryAccount {
  std::uint64_t p_objects = 0;
  std::uint64_t m_objects = 0;
  std::uint64_t t_objects = 0;

  std::uint64_t objects() const noexcept { return p_objects + m_objects + t_objects; }
  /// 40 bytes per P object, 24 per M object, 4 per T object.
  std::uint64_t bytes() const noexcept { return 40 * p_objects + 24 * m_objects + 4 * t_objects; }
};

/// Formula estimate for |V| nodes, |E| undirected edges, dimension d.
MemoryAccount estimate_memory(std::uint64_t nodes, std::uint64_t edges, std::uint64_t dim);

}  // namespace cleora

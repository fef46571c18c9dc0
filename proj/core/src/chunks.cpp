#include "cleora/chunks.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "cleora/error.hpp"

namespace cleora {
namespace {

constexpr std::string_view kModule = "chunks";

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

ChunkPlan plan_from_chunks(std::span<const std::vector<Edge>> chunks) {
  ChunkPlan plan;
  plan.chunk_count = chunks.size();
  std::vector<EntityId> ids;
  for (const auto& chunk : chunks) {
    for (const Edge& e : chunk) {
      ids.push_back(e.from);
      ids.push_back(e.to);
    }
  }
  plan.nodes = NodeIndex(std::move(ids));
  plan.occurrences.assign(plan.nodes.size() * plan.chunk_count, 0);
  for (std::size_t q = 0; q < chunks.size(); ++q) {
    for (const Edge& e : chunks[q]) {
      ++plan.occurrences[plan.nodes.at(e.from) * plan.chunk_count + q];
      ++plan.occurrences[plan.nodes.at(e.to) * plan.chunk_count + q];
    }
  }
  return plan;
}

ChunkSplit split_graph(std::span<const Edge> edges, std::size_t chunk_count, std::uint64_t seed) {
  if (chunk_count == 0) throw_usage(kModule, "chunk count must be at least 1");
  if (chunk_count > edges.size()) {
    throw_usage(kModule, "chunk count " + std::to_string(chunk_count) + " exceeds edge count " +
                             std::to_string(edges.size()));
  }

  std::vector<std::uint64_t> keys(edges.size());
  for (std::size_t i = 0; i < edges.size(); ++i) {
    keys[i] = mix64(mix64(mix64(seed) ^ i) ^ edges[i].from.value) ^ mix64(edges[i].to.value);
  }
  std::vector<std::size_t> order(edges.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return keys[a] < keys[b]; });

  ChunkSplit split;
  split.plan.assignment.resize(edges.size());
  for (std::size_t rank = 0; rank < order.size(); ++rank) {
    split.plan.assignment[order[rank]] = static_cast<std::uint32_t>(rank % chunk_count);
  }
  split.chunks.resize(chunk_count);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    split.chunks[split.plan.assignment[i]].push_back(edges[i]);
  }

  auto assignment = std::move(split.plan.assignment);
  split.plan = plan_from_chunks(split.chunks);
  split.plan.assignment = std::move(assignment);
  return split;
}

std::vector<double> chunk_weights(const ChunkPlan& plan, EntityId node) {
  const auto row = plan.nodes.find(node);
  if (!row) throw_data(kModule, "node " + std::to_string(node.value) + " is not in any chunk");
  std::uint64_t total = 0;
  for (std::size_t q = 0; q < plan.chunk_count; ++q) total += plan.occurrence(*row, q);
  if (total == 0) throw_data(kModule, "node " + std::to_string(node.value) + " has no occurrences");

  std::vector<double> weights(plan.chunk_count);
  for (std::size_t q = 0; q < plan.chunk_count; ++q) {
    weights[q] = static_cast<double>(plan.occurrence(*row, q)) / static_cast<double>(total);
  }
  return weights;
}

EmbeddingTable merge_embeddings(std::span<const EmbeddingTable> chunk_tables,
                                const ChunkPlan& plan) {
  if (chunk_tables.size() != plan.chunk_count) {
    throw_data(kModule, "expected " + std::to_string(plan.chunk_count) + " chunk embeddings, got " +
                            std::to_string(chunk_tables.size()));
  }
  std::size_t dim = 0;
  for (const auto& t : chunk_tables) {
    if (t.matrix.rows() == 0) continue;
    if (dim == 0) dim = t.matrix.dim();
    if (t.matrix.dim() != dim) throw_data(kModule, "chunk embeddings disagree on dimension");
  }

  EmbeddingTable merged{plan.nodes, EmbeddingMatrix(plan.nodes.size(), dim)};
  std::vector<double> acc(dim);
  for (std::size_t v = 0; v < plan.nodes.size(); ++v) {
    const EntityId id = plan.nodes.id(v);
    const auto weights = chunk_weights(plan, id);
    std::fill(acc.begin(), acc.end(), 0.0);
    for (std::size_t q = 0; q < plan.chunk_count; ++q) {
      if (weights[q] == 0.0) continue;
      const auto row = chunk_tables[q].find(id);
      if (!row) {
        throw_data(kModule, "node " + std::to_string(id.value) + " missing from chunk " +
                                std::to_string(q) + " embedding");
      }
      for (std::size_t j = 0; j < dim; ++j) acc[j] += weights[q] * static_cast<double>((*row)[j]);
    }
    auto out = merged.matrix.row(v);
    for (std::size_t j = 0; j < dim; ++j) out[j] = static_cast<float>(acc[j]);
  }
  return merged;
}

}  // namespace cleora

#include "cleora/embed.hpp"

#include <utility>

#include "cleora/error.hpp"

namespace cleora {
namespace {

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

float initial_value(std::uint64_t seed, EntityId id, std::size_t j) noexcept {
  const std::uint64_t bits = mix64(mix64(mix64(seed) ^ id.value) ^ static_cast<std::uint64_t>(j));
  // 24 high bits -> [0, 2^24), scaled to [-1, 1) exactly.
  const auto u = static_cast<std::int32_t>(bits >> 40);
  return static_cast<float>(u - (1 << 23)) * 0x1p-23f;
}

EmbeddingMatrix init_embedding(const NodeIndex& nodes, std::size_t dim, std::uint64_t seed) {
  EmbeddingMatrix t(nodes.size(), dim);
  for (std::size_t r = 0; r < nodes.size(); ++r) {
    auto row = t.row(r);
    const EntityId id = nodes.id(r);
    for (std::size_t j = 0; j < dim; ++j) row[j] = initial_value(seed, id, j);
  }
  return t;
}

PairEmbedding embed_pair(const SparseTransition& m, const EmbedConfig& config,
                         const IterationObserver& observer) {
  if (config.dim == 0) throw_usage("embed", "dimension must be at least 1");
  if (config.iterations == 0) throw_usage("embed", "iteration count must be at least 1");

  PairEmbedding result;
  EmbeddingMatrix previous = init_embedding(m.index, config.dim, config.seed);
  EmbeddingMatrix current(m.size(), config.dim);
  for (std::size_t i = 1; i <= config.iterations; ++i) {
    multiply_into(m, previous, current, config.workers);
    result.zero_rows += l2_normalize_rows(current, config.workers).zero_rows;
    if (observer) observer(i, current);
    if (i < config.iterations) std::swap(previous, current);
  }

  result.memory.p_objects = m.index.size();
  result.memory.m_objects = m.entries.size();
  result.memory.t_objects = previous.values().size() + current.values().size();

  result.final = std::move(current);
  if (config.keep_penultimate) result.penultimate = std::move(previous);
  return result;
}

}  // namespace cleora

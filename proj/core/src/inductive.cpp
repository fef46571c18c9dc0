#include "cleora/inductive.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "cleora/error.hpp"

namespace cleora {
namespace {

constexpr std::string_view kModule = "inductive";

std::vector<Neighbor> coalesce(std::span<const Neighbor> neighbors) {
  std::vector<Neighbor> sorted(neighbors.begin(), neighbors.end());
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const Neighbor& a, const Neighbor& b) { return a.node < b.node; });
  std::vector<Neighbor> out;
  for (const Neighbor& n : sorted) {
    if (!out.empty() && out.back().node == n.node) {
      out.back().weight += n.weight;
    } else {
      out.push_back(n);
    }
  }
  return out;
}

// Same arithmetic as multiply_into followed by l2_normalize_rows on one row.
template <typename Lookup>
std::vector<float> average_and_normalize(const std::vector<Neighbor>& coalesced, std::size_t dim,
                                         Lookup&& lookup) {
  double total = 0.0;
  for (const Neighbor& n : coalesced) total += n.weight;

  std::vector<double> acc(dim, 0.0);
  for (const Neighbor& n : coalesced) {
    const double w = n.weight / total;
    const std::span<const float> src = lookup(n.node);
    for (std::size_t j = 0; j < dim; ++j) acc[j] += w * static_cast<double>(src[j]);
  }
  std::vector<float> out(dim);
  for (std::size_t j = 0; j < dim; ++j) out[j] = static_cast<float>(acc[j]);

  double sq = 0.0;
  for (float v : out) sq += static_cast<double>(v) * v;
  const double norm = std::sqrt(sq);
  if (norm < 1e-12) {
    std::fill(out.begin(), out.end(), 0.0f);
  } else {
    for (float& v : out) v = static_cast<float>(v / norm);
  }
  return out;
}

}  // namespace

std::vector<float> reconstruct_node(std::span<const Neighbor> neighbors,
                                    const EmbeddingTable& source,
                                    const EntityDictionary* dictionary) {
  if (neighbors.empty()) throw_data(kModule, "cannot reconstruct a node without neighbors");
  const auto coalesced = coalesce(neighbors);

  std::string missing;
  for (const Neighbor& n : coalesced) {
    if (source.index.find(n.node)) continue;
    if (!missing.empty()) missing += ", ";
    const auto* entry = dictionary ? dictionary->find(n.node) : nullptr;
    missing += entry ? entry->label : std::to_string(n.node.value);
  }
  if (!missing.empty()) throw_data(kModule, "neighbors missing from source embedding: " + missing);

  return average_and_normalize(coalesced, source.matrix.dim(),
                               [&](EntityId id) { return *source.find(id); });
}

Reconstruction reconstruct_batch(std::span<const Edge> new_edges, const EmbeddingTable& source,
                                 int hops, std::size_t workers) {
  if (hops != 1 && hops != 2) throw_usage(kModule, "hops must be 1 or 2");
  const std::size_t dim = source.matrix.dim();

  // Adjacency of every new node, in edge order.
  std::map<EntityId, std::vector<Neighbor>> adjacency;
  std::map<EntityId, double> degree;
  for (const Edge& e : new_edges) {
    const bool from_new = !source.index.find(e.from);
    const bool to_new = !source.index.find(e.to);
    if (from_new) {
      adjacency[e.from].push_back({e.to, e.weight});
      degree[e.from] += e.weight;
    }
    if (to_new) {
      adjacency[e.to].push_back({e.from, e.weight});
      degree[e.to] += e.weight;
    }
  }

  std::map<EntityId, std::pair<std::vector<float>, int>> done;
  auto available = [&](EntityId id) {
    return source.index.find(id).has_value() || done.count(id) > 0;
  };

  for (int level = 1; level <= hops; ++level) {
    std::vector<EntityId> frontier;
    std::vector<std::vector<Neighbor>> inputs;
    for (const auto& [node, neighbors] : adjacency) {
      if (done.count(node)) continue;
      std::vector<Neighbor> usable;
      for (const Neighbor& n : neighbors) {
        if (n.node != node && available(n.node)) usable.push_back(n);
      }
      if (usable.empty()) continue;
      frontier.push_back(node);
      inputs.push_back(coalesce(usable));
    }

    std::vector<std::vector<float>> results(frontier.size());
    auto lookup = [&](EntityId id) -> std::span<const float> {
      if (auto row = source.find(id)) return *row;
      return done.at(id).first;
    };
#pragma omp parallel for num_threads(static_cast<int>(std::max<std::size_t>(1, workers))) schedule(dynamic, 16)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(frontier.size()); ++i) {
      results[i] = average_and_normalize(inputs[i], dim, lookup);
    }
    for (std::size_t i = 0; i < frontier.size(); ++i) {
      done.emplace(frontier[i], std::make_pair(std::move(results[i]), level));
    }
  }

  Reconstruction out;
  std::vector<EntityId> ids;
  for (const auto& [node, value] : done) ids.push_back(node);
  out.embeddings.index = NodeIndex(ids);
  out.embeddings.matrix = EmbeddingMatrix(ids.size(), dim);
  std::size_t r = 0;
  for (const auto& [node, value] : done) {
    std::copy(value.first.begin(), value.first.end(), out.embeddings.matrix.row(r).begin());
    out.hop.push_back(value.second);
    out.degree.push_back(degree.at(node));
    ++r;
  }
  for (const auto& [node, neighbors] : adjacency) {
    if (!done.count(node)) out.unembedded.push_back(node);
  }
  return out;
}

}  // namespace cleora

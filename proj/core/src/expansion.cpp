#include "cleora/expansion.hpp"

#include "cleora/error.hpp"

namespace cleora {

Expansion parse_expansion(std::string_view name) {
  if (name == "clique") return Expansion::kClique;
  if (name == "star") return Expansion::kStar;
  throw_usage("expansion", "unknown expansion '" + std::string(name) + "' (expected clique|star)");
}

std::string_view to_string(Expansion expansion) {
  return expansion == Expansion::kClique ? "clique" : "star";
}

std::vector<RelationPair> relation_pairs(const ColumnSchema& schema) {
  std::vector<RelationPair> pairs;
  const std::size_t n = schema.active_count();
  for (std::size_t i = 0; i < n; ++i) {
    const ColumnSpec& left = schema.active_column(i);
    for (std::size_t j = i + 1; j < n; ++j) {
      pairs.push_back({i, j, left.name, schema.active_column(j).name});
    }
    if (left.reflexive) pairs.push_back({i, i, left.name, left.name});
  }
  return pairs;
}

void clique_expand(const Hyperedge& h, const RelationPair& pair, std::vector<Edge>& out) {
  const auto& left = h.groups.at(pair.left);
  if (pair.is_self()) {
    for (std::size_t i = 0; i < left.size(); ++i) {
      for (std::size_t j = i + 1; j < left.size(); ++j) {
        out.push_back({left[i], left[j], h.weight});
      }
    }
    return;
  }
  const auto& right = h.groups.at(pair.right);
  for (EntityId a : left) {
    for (EntityId b : right) out.push_back({a, b, h.weight});
  }
}

std::vector<Edge> clique_expand(const Hyperedge& h, const RelationPair& pair) {
  std::vector<Edge> out;
  clique_expand(h, pair, out);
  return out;
}

StarExpansion star_expand(const Hyperedge& h, VirtualIdSource& ids) {
  StarExpansion result{ids.take(), {}};
  result.edges.reserve(h.width());
  for (const auto& group : h.groups) {
    for (EntityId member : group) result.edges.push_back({result.hub, member, h.weight});
  }
  return result;
}

Hyperedge project(const Hyperedge& h, const RelationPair& pair) {
  Hyperedge out;
  out.weight = h.weight;
  out.groups.push_back(h.groups.at(pair.left));
  if (!pair.is_self()) out.groups.push_back(h.groups.at(pair.right));
  return out;
}

std::vector<Edge> expand_all(std::span<const Hyperedge> hyperedges, const RelationPair& pair,
                             Expansion expansion, VirtualIdSource& ids) {
  std::vector<Edge> edges;
  for (const Hyperedge& h : hyperedges) {
    if (expansion == Expansion::kClique) {
      clique_expand(h, pair, edges);
    } else {
      auto star = star_expand(project(h, pair), ids);
      edges.insert(edges.end(), star.edges.begin(), star.edges.end());
    }
  }
  return edges;
}

}  // namespace cleora

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cleora/ingest.hpp"

namespace cleora {

/// A pair of active columns that gets its own embedding. `left == right`
/// only for reflexive columns.
struct RelationPair {
  std::size_t left = 0;   // active column index
  std::size_t right = 0;  // active column index
  std::string left_name;
  std::string right_name;

  bool is_self() const noexcept { return left == right; }
};

/// Undirected weighted edge; materialized in both directions by build_transition.
struct Edge {
  EntityId from;
  EntityId to;
  double weight = 1.0;
};

enum class Expansion { kClique, kStar };

Expansion parse_expansion(std::string_view name);
std::string_view to_string(Expansion expansion);

/// All distinct active column pairs (i < j) in schema order, with each
/// reflexive column's self pair placed right after the pairs it starts.
std::vector<RelationPair> relation_pairs(const ColumnSchema& schema);

/// Appends the clique edges of `h` restricted to `pair`: the cross product of
/// the two groups, or all unordered pairs inside the group for a self pair.
/// Self-loops only appear when a reflexive group lists the same entity twice.
void clique_expand(const Hyperedge& h, const RelationPair& pair, std::vector<Edge>& out);
std::vector<Edge> clique_expand(const Hyperedge& h, const RelationPair& pair);

/// Hands out virtual node ids: top bit set, low bits a counter.
class VirtualIdSource {
 public:
  explicit VirtualIdSource(std::uint64_t start = 0) : next_(start) {}
  EntityId take() noexcept { return EntityId{EntityId::kVirtualBit | next_++}; }
  std::uint64_t issued() const noexcept { return next_; }

 private:
  std::uint64_t next_;
};

struct StarExpansion {
  EntityId hub;
  std::vector<Edge> edges;
};

/// One fresh virtual hub linked to every member of every group of `h`
/// (width k gives exactly k edges, each carrying the hyperedge weight).
StarExpansion star_expand(const Hyperedge& h, VirtualIdSource& ids);

/// Restricts `h` to the groups of `pair` (one group for a self pair).
Hyperedge project(const Hyperedge& h, const RelationPair& pair);

/// Expands every hyperedge for one relation pair, in input order.
std::vector<Edge> expand_all(std::span<const Hyperedge> hyperedges, const RelationPair& pair,
                             Expansion expansion, VirtualIdSource& ids);

}  // namespace cleora

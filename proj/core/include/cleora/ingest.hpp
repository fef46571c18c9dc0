#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace cleora {

/// Hashed entity identifier. Hashed ids never have the top bit set; that half
/// of the id space is reserved for virtual nodes created by star expansion.
struct EntityId {
  std::uint64_t value = 0;

  static constexpr std::uint64_t kVirtualBit = std::uint64_t{1} << 63;

  constexpr bool is_virtual() const noexcept { return (value & kVirtualBit) != 0; }
  friend constexpr auto operator<=>(EntityId, EntityId) = default;
};

/// One input column and its modifiers (`transient::complex::name`).
struct ColumnSpec {
  std::string name;
  bool transient = false;
  bool complex = false;
  bool reflexive = false;
  bool ignore = false;
};

/// Ordered column list. Columns that are not ignored are "active"; hyperedge
/// groups and relation pairs index into the active list, not the raw one.
class ColumnSchema {
 public:
  ColumnSchema() = default;
  explicit ColumnSchema(std::vector<ColumnSpec> columns);

  const std::vector<ColumnSpec>& columns() const noexcept { return columns_; }
  std::size_t active_count() const noexcept { return active_.size(); }
  const ColumnSpec& active_column(std::size_t i) const { return columns_[active_[i]]; }
  std::size_t raw_index(std::size_t active) const { return active_[active]; }

  /// True when two active columns share a name (and therefore an id space).
  bool has_shared_names() const;

  /// Canonical textual form, parseable by parse_schema.
  std::string to_string() const;

 private:
  std::vector<ColumnSpec> columns_;
  std::vector<std::size_t> active_;
};

/// Parses a whitespace separated list of `modifier::...::name` tokens.
/// Throws Error(kUsage) on unknown modifiers, reflexive without complex, or
/// when no relation pair can be formed.
ColumnSchema parse_schema(std::string_view spec);

/// Stable 64-bit id of `label` within the id space `ns` (the column name).
/// Uses XXH64 seeded by the hash of the namespace.
EntityId hash_entity(std::string_view label, std::string_view ns);

/// id -> (namespace, label) side table. Interning detects hash collisions.
class EntityDictionary {
 public:
  struct Entry {
    std::string ns;
    std::string label;
  };

  /// Hashes and records the label. Throws Error(kData) naming both labels if
  /// a different (namespace, label) already owns the id.
  EntityId intern(std::string_view ns, std::string_view label);

  const Entry* find(EntityId id) const;
  std::size_t size() const noexcept { return entries_.size(); }

 private:
  struct IdHash {
    std::size_t operator()(EntityId id) const noexcept { return static_cast<std::size_t>(id.value); }
  };
  std::unordered_map<EntityId, Entry, IdHash> entries_;
};

/// One input row: a non-empty entity group per active column.
struct Hyperedge {
  std::vector<std::vector<EntityId>> groups;
  double weight = 1.0;

  std::size_t width() const noexcept;
};

enum class InputFormat { kTsv, kJson };

InputFormat parse_input_format(std::string_view name);

struct ReadOptions {
  InputFormat format = InputFormat::kTsv;
  /// Trailing numeric column (TSV) or "weight" key (JSON) carries the row weight.
  bool weighted = false;
  /// Abort on the first malformed row instead of skipping it.
  bool strict = false;
};

struct ReadStats {
  std::size_t rows_read = 0;
  std::size_t rows_rejected = 0;
};

/// Streams hyperedges from TSV or JSON-lines input in file order.
class HyperedgeReader {
 public:
  HyperedgeReader(std::istream& in, const ColumnSchema& schema, ReadOptions options,
                  EntityDictionary& dictionary);

  /// Fills `out` with the next valid row. Returns false at end of input.
  bool next(Hyperedge& out);

  const ReadStats& stats() const noexcept { return stats_; }

 private:
  std::optional<std::string> parse_line(std::string_view line, Hyperedge& out);
  std::optional<std::string> parse_tsv(std::string_view line, Hyperedge& out);
  std::optional<std::string> parse_json(std::string_view line, Hyperedge& out);

  std::istream& in_;
  const ColumnSchema& schema_;
  ReadOptions options_;
  EntityDictionary& dictionary_;
  ReadStats stats_;
  std::size_t line_number_ = 0;
  std::string line_;
};

struct HyperedgeSet {
  std::vector<Hyperedge> hyperedges;
  ReadStats stats;
};

HyperedgeSet read_hyperedges(std::istream& in, const ColumnSchema& schema,
                             const ReadOptions& options, EntityDictionary& dictionary);
HyperedgeSet read_hyperedges(const std::filesystem::path& path, const ColumnSchema& schema,
                             const ReadOptions& options, EntityDictionary& dictionary);

}  // namespace cleora

template <>
struct std::hash<cleora::EntityId> {
  std::size_t operator()(cleora::EntityId id) const noexcept {
    return static_cast<std::size_t>(id.value);
  }
};

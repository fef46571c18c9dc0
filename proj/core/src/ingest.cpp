#include "cleora/ingest.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#define XXH_INLINE_ALL
#include "xxhash.h"

#include "cleora/error.hpp"
#include "cleora/log.hpp"

namespace cleora {
namespace {

constexpr std::string_view kModule = "ingest";
constexpr std::size_t kMaxLoggedRowErrors = 5;

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(sep, start);
    if (pos == std::string_view::npos) {
      parts.push_back(text.substr(start));
      return parts;
    }
    parts.push_back(text.substr(start, pos - start));
    start = pos + 1;
  }
}

bool valid_label(std::string_view label) {
  return !label.empty() && label.find_first_of("\t\n\r") == std::string_view::npos;
}

std::optional<double> parse_weight(std::string_view text) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) return std::nullopt;
  if (!std::isfinite(value) || value <= 0.0) return std::nullopt;
  return value;
}

}  // namespace

// ---------------------------------------------------------------------------
// Schema

ColumnSchema::ColumnSchema(std::vector<ColumnSpec> columns) : columns_(std::move(columns)) {
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (!columns_[i].ignore) active_.push_back(i);
  }
}

bool ColumnSchema::has_shared_names() const {
  std::set<std::string_view> seen;
  for (std::size_t i : active_) {
    if (!seen.insert(columns_[i].name).second) return true;
  }
  return false;
}

std::string ColumnSchema::to_string() const {
  std::string out;
  for (const auto& c : columns_) {
    if (!out.empty()) out += ' ';
    if (c.transient) out += "transient::";
    if (c.complex) out += "complex::";
    if (c.reflexive) out += "reflexive::";
    if (c.ignore) out += "ignore::";
    out += c.name;
  }
  return out;
}

ColumnSchema parse_schema(std::string_view spec) {
  std::vector<ColumnSpec> columns;
  std::istringstream tokens{std::string(spec)};
  std::string token;
  while (tokens >> token) {
    ColumnSpec column;
    std::string_view rest = token;
    while (true) {
      const std::size_t pos = rest.find("::");
      if (pos == std::string_view::npos) break;
      const std::string_view modifier = rest.substr(0, pos);
      if (modifier == "transient") {
        column.transient = true;
      } else if (modifier == "complex") {
        column.complex = true;
      } else if (modifier == "reflexive") {
        column.reflexive = true;
      } else if (modifier == "ignore") {
        column.ignore = true;
      } else {
        throw_usage(kModule, "unknown column modifier '" + std::string(modifier) + "' in '" +
                                 token + "'");
      }
      rest.remove_prefix(pos + 2);
    }
    if (rest.empty()) throw_usage(kModule, "column without a name in '" + token + "'");
    column.name = std::string(rest);
    if (column.reflexive && !column.complex) {
      throw_usage(kModule, "column '" + column.name + "' is reflexive but not complex");
    }
    columns.push_back(std::move(column));
  }

  ColumnSchema schema(std::move(columns));
  bool any_reflexive = false;
  for (std::size_t i = 0; i < schema.active_count(); ++i) {
    any_reflexive = any_reflexive || schema.active_column(i).reflexive;
  }
  if (schema.active_count() < 2 && !any_reflexive) {
    throw_usage(kModule, "schema '" + std::string(spec) +
                             "' needs two non-ignored columns or one reflexive column");
  }
  for (std::size_t i = 0; i < schema.active_count(); ++i) {
    for (std::size_t j = i + 1; j < schema.active_count(); ++j) {
      const auto& a = schema.active_column(i);
      const auto& b = schema.active_column(j);
      if (a.name == b.name && a.transient != b.transient) {
        throw_usage(kModule, "columns named '" + a.name + "' disagree on the transient modifier");
      }
    }
  }
  return schema;
}

// ---------------------------------------------------------------------------
// Hashing

EntityId hash_entity(std::string_view label, std::string_view ns) {
  const XXH64_hash_t ns_seed = XXH64(ns.data(), ns.size(), 0);
  const XXH64_hash_t h = XXH64(label.data(), label.size(), ns_seed);
  return EntityId{h & ~EntityId::kVirtualBit};
}

EntityId EntityDictionary::intern(std::string_view ns, std::string_view label) {
  const EntityId id = hash_entity(label, ns);
  auto [it, inserted] = entries_.try_emplace(id);
  if (inserted) {
    it->second.ns = std::string(ns);
    it->second.label = std::string(label);
  } else if (it->second.label != label || it->second.ns != ns) {
    throw_data(kModule, "hash collision: '" + it->second.ns + ":" + it->second.label + "' and '" +
                            std::string(ns) + ":" + std::string(label) + "' share id " +
                            std::to_string(id.value));
  }
  return id;
}

const EntityDictionary::Entry* EntityDictionary::find(EntityId id) const {
  const auto it = entries_.find(id);
  return it == entries_.end() ? nullptr : &it->second;
}

std::size_t Hyperedge::width() const noexcept {
  std::size_t k = 0;
  for (const auto& g : groups) k += g.size();
  return k;
}

InputFormat parse_input_format(std::string_view name) {
  if (name == "tsv") return InputFormat::kTsv;
  if (name == "json") return InputFormat::kJson;
  throw_usage(kModule, "unknown input format '" + std::string(name) + "' (expected tsv|json)");
}

// ---------------------------------------------------------------------------
// Reader

HyperedgeReader::HyperedgeReader(std::istream& in, const ColumnSchema& schema, ReadOptions options,
                                 EntityDictionary& dictionary)
    : in_(in), schema_(schema), options_(options), dictionary_(dictionary) {
  if (options_.format == InputFormat::kJson && schema_.has_shared_names()) {
    log_info("json input with shared column names: only positional array rows are accepted");
  }
}

bool HyperedgeReader::next(Hyperedge& out) {
  while (std::getline(in_, line_)) {
    ++line_number_;
    std::string_view line = line_;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    ++stats_.rows_read;
    out.groups.clear();
    out.weight = 1.0;
    auto problem = parse_line(line, out);
    if (!problem) return true;

    const std::string message = "line " + std::to_string(line_number_) + ": " + *problem;
    if (options_.strict) throw_data(kModule, message);
    ++stats_.rows_rejected;
    if (stats_.rows_rejected <= kMaxLoggedRowErrors) {
      log_warning("[ingest] skipping " + message);
    }
  }
  return false;
}

std::optional<std::string> HyperedgeReader::parse_line(std::string_view line, Hyperedge& out) {
  return options_.format == InputFormat::kTsv ? parse_tsv(line, out) : parse_json(line, out);
}

std::optional<std::string> HyperedgeReader::parse_tsv(std::string_view line, Hyperedge& out) {
  const auto fields = split(line, '\t');
  const std::size_t expected = schema_.columns().size() + (options_.weighted ? 1 : 0);
  if (fields.size() != expected) {
    return "expected " + std::to_string(expected) + " fields, found " +
           std::to_string(fields.size());
  }
  if (options_.weighted) {
    const auto w = parse_weight(fields.back());
    if (!w) return "invalid weight '" + std::string(fields.back()) + "'";
    out.weight = *w;
  }
  out.groups.resize(schema_.active_count());
  for (std::size_t a = 0; a < schema_.active_count(); ++a) {
    const ColumnSpec& column = schema_.active_column(a);
    const std::string_view field = fields[schema_.raw_index(a)];
    auto& group = out.groups[a];
    if (column.complex) {
      for (std::string_view token : split(field, ' ')) {
        if (!token.empty()) group.push_back(dictionary_.intern(column.name, token));
      }
      if (group.empty()) return "empty complex field '" + column.name + "'";
    } else {
      if (field.empty()) return "empty field '" + column.name + "'";
      group.push_back(dictionary_.intern(column.name, field));
    }
  }
  return std::nullopt;
}

std::optional<std::string> HyperedgeReader::parse_json(std::string_view line, Hyperedge& out) {
  const auto doc = nlohmann::json::parse(line, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded()) return "malformed json";

  auto label_of = [](const nlohmann::json& v) -> std::optional<std::string> {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_integer() || v.is_number_unsigned()) return v.dump();
    return std::nullopt;
  };

  const std::size_t raw_count = schema_.columns().size();
  const nlohmann::json* weight = nullptr;
  std::vector<const nlohmann::json*> values(raw_count, nullptr);

  if (doc.is_object()) {
    if (schema_.has_shared_names()) return "object rows are ambiguous with shared column names";
    for (std::size_t a = 0; a < schema_.active_count(); ++a) {
      const auto& name = schema_.active_column(a).name;
      const auto it = doc.find(name);
      if (it == doc.end()) return "missing key '" + name + "'";
      values[schema_.raw_index(a)] = &*it;
    }
    if (options_.weighted) {
      const auto it = doc.find("weight");
      if (it == doc.end()) return "missing key 'weight'";
      weight = &*it;
    }
  } else if (doc.is_array()) {
    const std::size_t expected = raw_count + (options_.weighted ? 1 : 0);
    if (doc.size() != expected) {
      return "expected " + std::to_string(expected) + " fields, found " +
             std::to_string(doc.size());
    }
    for (std::size_t i = 0; i < raw_count; ++i) values[i] = &doc[i];
    if (options_.weighted) weight = &doc[raw_count];
  } else {
    return "row is neither an object nor an array";
  }

  if (weight != nullptr) {
    if (!weight->is_number() || !std::isfinite(weight->get<double>()) ||
        weight->get<double>() <= 0.0) {
      return "invalid weight";
    }
    out.weight = weight->get<double>();
  }

  out.groups.resize(schema_.active_count());
  for (std::size_t a = 0; a < schema_.active_count(); ++a) {
    const ColumnSpec& column = schema_.active_column(a);
    const nlohmann::json& value = *values[schema_.raw_index(a)];
    auto& group = out.groups[a];
    if (column.complex) {
      if (!value.is_array()) return "complex field '" + column.name + "' is not an array";
      for (const auto& item : value) {
        const auto label = label_of(item);
        if (!label || !valid_label(*label)) return "invalid entity in '" + column.name + "'";
        group.push_back(dictionary_.intern(column.name, *label));
      }
      if (group.empty()) return "empty complex field '" + column.name + "'";
    } else {
      const auto label = label_of(value);
      if (!label || !valid_label(*label)) return "invalid entity in '" + column.name + "'";
      group.push_back(dictionary_.intern(column.name, *label));
    }
  }
  return std::nullopt;
}

HyperedgeSet read_hyperedges(std::istream& in, const ColumnSchema& schema,
                             const ReadOptions& options, EntityDictionary& dictionary) {
  HyperedgeSet result;
  HyperedgeReader reader(in, schema, options, dictionary);
  Hyperedge h;
  while (reader.next(h)) result.hyperedges.push_back(h);
  result.stats = reader.stats();
  if (result.stats.rows_rejected > 0) {
    log_warning("[ingest] rejected " + std::to_string(result.stats.rows_rejected) + " of " +
                std::to_string(result.stats.rows_read) + " rows");
  }
  return result;
}

HyperedgeSet read_hyperedges(const std::filesystem::path& path, const ColumnSchema& schema,
                             const ReadOptions& options, EntityDictionary& dictionary) {
  std::ifstream in(path);
  if (!in) throw_data(kModule, "cannot open input '" + path.string() + "'");
  return read_hyperedges(in, schema, options, dictionary);
}

}  // namespace cleora

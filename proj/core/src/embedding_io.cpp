#include "cleora/embedding_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <numeric>

#include "cleora/error.hpp"

namespace cleora {
namespace {

constexpr std::string_view kModule = "embed";

std::string format_degree(double degree) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), degree);
  return std::string(buf, res.ptr);
}

}  // namespace

std::string embedding_file_name(const RelationPair& pair, std::string_view column) {
  return "emb__" + pair.left_name + "__" + pair.right_name + "__" + std::string(column) + ".tsv";
}

std::string penultimate_file_name(const RelationPair& pair, std::string_view column) {
  return "penultimate__" + pair.left_name + "__" + pair.right_name + "__" + std::string(column) +
         ".tsv";
}

std::vector<std::string> output_columns(const ColumnSchema& schema, const RelationPair& pair,
                                        bool include_transient) {
  std::vector<std::string> names;
  for (std::size_t a : {pair.left, pair.right}) {
    const ColumnSpec& c = schema.active_column(a);
    if (c.transient && !include_transient) continue;
    if (std::find(names.begin(), names.end(), c.name) == names.end()) names.push_back(c.name);
  }
  return names;
}

std::string format_value(float value) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

std::size_t write_embeddings(const std::filesystem::path& path, const NodeIndex& index,
                             const EmbeddingMatrix& t, std::span<const double> degree,
                             const EntityDictionary& dictionary, std::string_view column) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw_data(kModule, "cannot open output '" + path.string() + "'");

  std::size_t written = 0;
  std::string line;
  char buf[32];
  for (std::size_t r = 0; r < index.size(); ++r) {
    const EntityId id = index.id(r);
    if (id.is_virtual()) continue;
    const auto* entry = dictionary.find(id);
    if (entry == nullptr || entry->ns != column) continue;

    line.clear();
    line += entry->label;
    line += '\t';
    line += format_degree(degree[r]);
    line += '\t';
    const auto row = t.row(r);
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j > 0) line += ' ';
      const auto res = std::to_chars(buf, buf + sizeof(buf), row[j]);
      line.append(buf, res.ptr);
    }
    line += '\n';
    out << line;
    ++written;
  }
  out.flush();
  if (!out) throw_data(kModule, "failed writing '" + path.string() + "'");
  return written;
}

LoadedEmbeddings read_embeddings(const std::filesystem::path& path, std::string_view column) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw_data(kModule, "cannot open embedding file '" + path.string() + "'");

  struct Row {
    EntityId id;
    std::string label;
    double degree;
    std::vector<float> values;
  };
  std::vector<Row> rows;
  std::size_t dim = 0;
  std::string line;
  std::size_t line_number = 0;
  auto bad = [&](const std::string& why) {
    throw_data(kModule, path.string() + ":" + std::to_string(line_number) + ": " + why);
  };

  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    const std::size_t t1 = line.find('\t');
    const std::size_t t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
    if (t2 == std::string::npos) bad("expected label<TAB>degree<TAB>vector");

    Row row;
    row.label = line.substr(0, t1);
    const char* first = line.data() + t1 + 1;
    if (std::from_chars(first, line.data() + t2, row.degree).ec != std::errc()) bad("bad degree");

    const char* p = line.data() + t2 + 1;
    const char* end = line.data() + line.size();
    while (p < end) {
      float v = 0.0f;
      const auto res = std::from_chars(p, end, v);
      if (res.ec != std::errc()) bad("bad vector value");
      row.values.push_back(v);
      p = res.ptr;
      while (p < end && *p == ' ') ++p;
    }
    if (rows.empty()) {
      dim = row.values.size();
    } else if (row.values.size() != dim) {
      bad("inconsistent vector length");
    }
    row.id = hash_entity(row.label, column);
    rows.push_back(std::move(row));
  }

  std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.id < b.id; });
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].id == rows[i - 1].id) {
      throw_data(kModule, path.string() + ": duplicate or colliding labels '" + rows[i - 1].label +
                              "' and '" + rows[i].label + "'");
    }
  }

  LoadedEmbeddings loaded;
  std::vector<EntityId> ids;
  ids.reserve(rows.size());
  for (const auto& r : rows) ids.push_back(r.id);
  loaded.table.index = NodeIndex(std::move(ids));
  loaded.table.matrix = EmbeddingMatrix(rows.size(), dim);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    std::copy(rows[r].values.begin(), rows[r].values.end(), loaded.table.matrix.row(r).begin());
    loaded.labels.push_back(std::move(rows[r].label));
    loaded.degree.push_back(rows[r].degree);
  }
  return loaded;
}

LoadedEmbeddings concat_embeddings(std::vector<LoadedEmbeddings> parts) {
  if (parts.size() == 1) return std::move(parts.front());

  struct Ref {
    EntityId id;
    std::size_t part;
    std::size_t row;
  };
  std::vector<Ref> refs;
  std::size_t dim = 0;
  for (std::size_t p = 0; p < parts.size(); ++p) {
    const auto& t = parts[p].table;
    if (t.matrix.rows() == 0) continue;
    if (dim == 0) dim = t.matrix.dim();
    if (t.matrix.dim() != dim) throw_data(kModule, "embedding files disagree on dimension");
    for (std::size_t r = 0; r < t.index.size(); ++r) refs.push_back({t.index.id(r), p, r});
  }
  std::sort(refs.begin(), refs.end(), [](const Ref& a, const Ref& b) { return a.id < b.id; });

  LoadedEmbeddings out;
  std::vector<EntityId> ids;
  for (const auto& ref : refs) {
    if (!ids.empty() && ids.back() == ref.id) continue;
    ids.push_back(ref.id);
  }
  out.table.index = NodeIndex(ids);
  out.table.matrix = EmbeddingMatrix(ids.size(), dim);
  std::size_t r = 0;
  for (std::size_t i = 0; i < refs.size(); ++i) {
    if (i > 0 && refs[i].id == refs[i - 1].id) continue;
    const auto& src = parts[refs[i].part];
    const auto row = src.table.matrix.row(refs[i].row);
    std::copy(row.begin(), row.end(), out.table.matrix.row(r).begin());
    out.labels.push_back(src.labels[refs[i].row]);
    out.degree.push_back(src.degree[refs[i].row]);
    ++r;
  }
  return out;
}

}  // namespace cleora

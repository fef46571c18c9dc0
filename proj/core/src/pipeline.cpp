#include "cleora/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#define XXH_INLINE_ALL
#include "xxhash.h"

#include "cleora/chunks.hpp"
#include "cleora/embedding_io.hpp"
#include "cleora/error.hpp"
#include "cleora/inductive.hpp"
#include "cleora/log.hpp"

namespace cleora {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::string_view kModule = "cli";

std::string chunk_dir_name(std::size_t q) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "chunk_%03zu", q);
  return buf;
}

std::string occurrences_file_name(const RelationPair& pair, std::string_view column) {
  return "occurrences__" + pair.left_name + "__" + pair.right_name + "__" + std::string(column) +
         ".tsv";
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

json memory_json(const MemoryAccount& m) {
  return json{{"p_objects", m.p_objects},
              {"m_objects", m.m_objects},
              {"t_objects", m.t_objects},
              {"objects", m.objects()},
              {"bytes", m.bytes()}};
}

void validate(const RunConfig& config) {
  if (config.dim == 0) throw_usage(kModule, "--dim must be at least 1");
  if (config.iterations == 0) throw_usage(kModule, "--iterations must be at least 1");
  if (config.chunks == 0) throw_usage(kModule, "--chunks must be at least 1");
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw_data(kModule, "cannot create directory '" + dir.string() + "': " + ec.message());
}

struct Ingested {
  ColumnSchema schema;
  EntityDictionary dictionary;
  HyperedgeSet set;
};

Ingested ingest(const RunConfig& config) {
  Ingested in;
  in.schema = parse_schema(config.schema);
  in.set = read_hyperedges(config.input, in.schema,
                           ReadOptions{config.format, config.weighted, config.strict},
                           in.dictionary);
  if (in.set.hyperedges.empty()) {
    throw_data("ingest", "no valid rows in '" + config.input.string() + "'");
  }
  return in;
}

// Rows of `index` whose dictionary namespace is `column`.
EmbeddingTable column_table(const NodeIndex& index, const EmbeddingMatrix& t,
                            const EntityDictionary& dictionary, std::string_view column,
                            std::span<const double> degree, std::vector<NodeDegree>* degrees) {
  std::vector<std::size_t> rows;
  for (std::size_t r = 0; r < index.size(); ++r) {
    const auto* e = dictionary.find(index.id(r));
    if (e != nullptr && e->ns == column) rows.push_back(r);
  }
  std::vector<EntityId> ids;
  for (std::size_t r : rows) ids.push_back(index.id(r));
  EmbeddingTable table{NodeIndex(ids), EmbeddingMatrix(rows.size(), t.dim())};
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto src = t.row(rows[i]);
    std::copy(src.begin(), src.end(), table.matrix.row(i).begin());
    if (degrees) degrees->push_back({index.id(rows[i]), degree[rows[i]]});
  }
  return table;
}

void write_pair_outputs(const RunConfig& config, const ColumnSchema& schema,
                        const RelationPair& pair, const NodeIndex& index,
                        const EmbeddingMatrix& final_t, const EmbeddingMatrix* penultimate,
                        std::span<const double> degree, const EntityDictionary& dictionary,
                        PairSummary& summary) {
  for (const auto& column : output_columns(schema, pair)) {
    const fs::path path = config.output_dir / embedding_file_name(pair, column);
    write_embeddings(path, index, final_t, degree, dictionary, column);
    summary.files.push_back(path);
  }
  if (penultimate != nullptr) {
    for (const auto& column : output_columns(schema, pair, /*include_transient=*/true)) {
      const fs::path path = config.output_dir / penultimate_file_name(pair, column);
      write_embeddings(path, index, *penultimate, degree, dictionary, column);
      summary.files.push_back(path);
    }
  }
}

void embed_chunked(const RunConfig& config, const ColumnSchema& schema, const RelationPair& pair,
                   const std::vector<Edge>& edges, const EntityDictionary& dictionary,
                   const EmbedConfig& cfg, PairSummary& summary) {
  auto split = split_graph(edges, config.chunks, config.seed);
  const ChunkPlan& plan = split.plan;
  const fs::path chunk_root = config.output_dir / "chunks";

  std::vector<EmbeddingTable> finals;
  std::vector<EmbeddingTable> penultimates;
  std::vector<double> degree(plan.nodes.size(), 0.0);
  for (std::size_t q = 0; q < config.chunks; ++q) {
    const SparseTransition m = build_transition(split.chunks[q]);
    auto e = embed_pair(m, cfg);
    summary.zero_rows += e.zero_rows;
    summary.transition_entries += m.entries.size();
    if (e.memory.bytes() > summary.measured.bytes()) summary.measured = e.memory;

    const fs::path dir = chunk_root / chunk_dir_name(q);
    ensure_dir(dir);
    for (const auto& column : output_columns(schema, pair)) {
      write_embeddings(dir / embedding_file_name(pair, column), m.index, e.final, m.degree,
                       dictionary, column);
    }
    for (std::size_t r = 0; r < m.size(); ++r) degree[plan.nodes.at(m.index.id(r))] += m.degree[r];
    finals.push_back({m.index, std::move(e.final)});
    if (e.penultimate) penultimates.push_back({m.index, std::move(*e.penultimate)});
  }

  EmbeddingTable merged = merge_embeddings(finals, plan);
  std::optional<EmbeddingTable> merged_prev;
  if (config.keep_penultimate) merged_prev = merge_embeddings(penultimates, plan);
  if (config.normalize_merged) {
    l2_normalize_rows(merged.matrix, config.workers);
    if (merged_prev) l2_normalize_rows(merged_prev->matrix, config.workers);
  }
  summary.nodes = plan.nodes.size();

  for (const auto& column : output_columns(schema, pair)) {
    const fs::path path = chunk_root / occurrences_file_name(pair, column);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw_data(kModule, "cannot open '" + path.string() + "'");
    for (std::size_t v = 0; v < plan.nodes.size(); ++v) {
      const auto* entry = dictionary.find(plan.nodes.id(v));
      if (entry == nullptr || entry->ns != column) continue;
      for (std::size_t q = 0; q < plan.chunk_count; ++q) {
        if (plan.occurrence(v, q) == 0) continue;
        out << entry->label << '\t' << q << '\t' << plan.occurrence(v, q) << '\n';
      }
    }
  }
  write_pair_outputs(config, schema, pair, merged.index, merged.matrix,
                     merged_prev ? &merged_prev->matrix : nullptr, degree, dictionary, summary);
}

json config_json(const RunConfig& c) {
  return json{{"input", fs::absolute(c.input).lexically_normal().string()},
              {"format", c.format == InputFormat::kTsv ? "tsv" : "json"},
              {"schema", c.schema},
              {"weighted", c.weighted},
              {"strict", c.strict},
              {"expansion", std::string(to_string(c.expansion))},
              {"dim", c.dim},
              {"iterations", c.iterations},
              {"seed", c.seed},
              {"chunks", c.chunks},
              {"normalize_merged", c.normalize_merged},
              {"keep_penultimate", c.keep_penultimate}};
}

json read_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw_data(kModule, "cannot open '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw_data(kModule, "malformed json in '" + path.string() + "': " + e.what());
  }
}

}  // namespace

// ---------------------------------------------------------------------------

std::string file_digest(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw_data(kModule, "cannot open '" + path.string() + "'");
  XXH64_state_t* state = XXH64_createState();
  XXH64_reset(state, 0);
  std::vector<char> buf(1 << 16);
  while (in) {
    in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    XXH64_update(state, buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  const XXH64_hash_t h = XXH64_digest(state);
  XXH64_freeState(state);
  char hex[32];
  std::snprintf(hex, sizeof(hex), "xxh64:%016llx", static_cast<unsigned long long>(h));
  return hex;
}

RunSummary run_embed(const RunConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  validate(config);
  Ingested in = ingest(config);
  ensure_dir(config.output_dir);

  RunSummary summary;
  summary.rows = in.set.stats;
  const EmbedConfig cfg{config.dim, config.iterations, config.seed, config.keep_penultimate,
                        config.workers};
  VirtualIdSource virtual_ids;

  for (const RelationPair& pair : relation_pairs(in.schema)) {
    PairSummary ps;
    ps.pair = pair;
    const auto edges = expand_all(in.set.hyperedges, pair, config.expansion, virtual_ids);
    if (edges.empty()) {
      log_warning("[cli] relation " + pair.left_name + "/" + pair.right_name +
                  " produced no edges; skipped");
      summary.pairs.push_back(std::move(ps));
      continue;
    }
    ps.edges = edges.size();

    if (config.chunks == 1) {
      const SparseTransition m = build_transition(edges);
      ps.nodes = m.size();
      ps.transition_entries = m.entries.size();
      ps.estimate = estimate_memory(m.size(), edges.size(), config.dim);
      log_info("[cli] " + pair.left_name + "/" + pair.right_name + ": " +
               std::to_string(m.size()) + " nodes, " + std::to_string(edges.size()) +
               " edges, estimated memory " + std::to_string(ps.estimate.bytes()) + " bytes");
      auto e = embed_pair(m, cfg);
      ps.zero_rows = e.zero_rows;
      ps.measured = e.memory;
      write_pair_outputs(config, in.schema, pair, m.index, e.final,
                         e.penultimate ? &*e.penultimate : nullptr, m.degree, in.dictionary, ps);
    } else {
      embed_chunked(config, in.schema, pair, edges, in.dictionary, cfg, ps);
      ps.estimate = estimate_memory(ps.nodes, edges.size(), config.dim);
    }
    if (ps.zero_rows > 0) {
      log_warning("[cli] " + std::to_string(ps.zero_rows) + " zero rows during normalization");
    }
    summary.pairs.push_back(std::move(ps));
  }

  summary.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  json manifest;
  manifest["version"] = 1;
  manifest["config"] = config_json(config);
  manifest["input_digest"] = file_digest(config.input);
  manifest["rows"] = {{"read", summary.rows.rows_read}, {"rejected", summary.rows.rows_rejected}};
  json pairs = json::array();
  std::uint64_t peak = 0;
  for (const auto& ps : summary.pairs) {
    json files = json::array();
    for (const auto& f : ps.files) files.push_back(f.filename().string());
    pairs.push_back({{"left", ps.pair.left_name},
                     {"right", ps.pair.right_name},
                     {"nodes", ps.nodes},
                     {"edges", ps.edges},
                     {"transition_entries", ps.transition_entries},
                     {"memory_estimate", memory_json(ps.estimate)},
                     {"memory_measured", memory_json(ps.measured)},
                     {"files", files}});
    peak = std::max(peak, ps.estimate.bytes());
  }
  manifest["pairs"] = pairs;
  manifest["peak_memory_estimate_bytes"] = peak;
  manifest["timing"] = {{"wall_seconds", summary.wall_seconds}};

  summary.manifest = config.output_dir / kManifestName;
  std::ofstream out(summary.manifest, std::ios::binary | std::ios::trunc);
  if (!out) throw_data(kModule, "cannot write '" + summary.manifest.string() + "'");
  out << manifest.dump(2) << '\n';
  return summary;
}

RunConfig load_manifest(const fs::path& manifest_path) {
  const json m = read_json_file(manifest_path);
  RunConfig c;
  try {
    const json& cfg = m.at("config");
    c.input = cfg.at("input").get<std::string>();
    c.format = parse_input_format(cfg.at("format").get<std::string>());
    c.schema = cfg.at("schema").get<std::string>();
    c.weighted = cfg.at("weighted").get<bool>();
    c.strict = cfg.at("strict").get<bool>();
    c.expansion = parse_expansion(cfg.at("expansion").get<std::string>());
    c.dim = cfg.at("dim").get<std::size_t>();
    c.iterations = cfg.at("iterations").get<std::size_t>();
    c.seed = cfg.at("seed").get<std::uint64_t>();
    c.chunks = cfg.at("chunks").get<std::size_t>();
    c.normalize_merged = cfg.at("normalize_merged").get<bool>();
    c.keep_penultimate = cfg.at("keep_penultimate").get<bool>();
  } catch (const json::exception& e) {
    throw_data(kModule, "incomplete manifest '" + manifest_path.string() + "': " + e.what());
  }
  c.output_dir = manifest_path.parent_path();
  return c;
}

std::string manifest_input_digest(const fs::path& manifest_path) {
  const json m = read_json_file(manifest_path);
  if (!m.contains("input_digest") || !m["input_digest"].is_string()) {
    throw_data(kModule, "manifest '" + manifest_path.string() + "' has no input digest");
  }
  return m["input_digest"].get<std::string>();
}

// ---------------------------------------------------------------------------

std::vector<fs::path> run_merge_chunks(const MergeConfig& config) {
  const RunConfig run = load_manifest(config.model_dir / kManifestName);
  const ColumnSchema schema = parse_schema(run.schema);
  const fs::path out_dir = config.output_dir.value_or(config.model_dir);
  ensure_dir(out_dir);
  const fs::path chunk_root = config.model_dir / "chunks";

  std::vector<fs::path> written;
  for (const RelationPair& pair : relation_pairs(schema)) {
    for (const auto& column : output_columns(schema, pair)) {
      const fs::path occ_path = chunk_root / occurrences_file_name(pair, column);
      std::ifstream occ(occ_path);
      if (!occ) throw_data(kModule, "missing occurrence file '" + occ_path.string() + "'");

      EntityDictionary dictionary;
      std::map<EntityId, std::vector<std::uint64_t>> counts;
      std::string line;
      std::size_t line_number = 0;
      while (std::getline(occ, line)) {
        ++line_number;
        if (line.empty()) continue;
        std::istringstream fields(line);
        std::string label;
        std::size_t q = 0;
        std::uint64_t count = 0;
        if (!std::getline(fields, label, '\t') || !(fields >> q >> count) || q >= run.chunks) {
          throw_data(kModule, occ_path.string() + ":" + std::to_string(line_number) +
                                  ": expected label<TAB>chunk<TAB>count");
        }
        const EntityId id = dictionary.intern(column, label);
        auto& row = counts[id];
        row.resize(run.chunks, 0);
        row[q] += count;
      }

      ChunkPlan plan;
      plan.chunk_count = run.chunks;
      std::vector<EntityId> ids;
      for (const auto& [id, row] : counts) ids.push_back(id);
      plan.nodes = NodeIndex(ids);
      for (const auto& [id, row] : counts) {
        plan.occurrences.insert(plan.occurrences.end(), row.begin(), row.end());
      }

      std::vector<EmbeddingTable> tables;
      std::vector<double> degree(plan.nodes.size(), 0.0);
      for (std::size_t q = 0; q < run.chunks; ++q) {
        auto loaded = read_embeddings(chunk_root / chunk_dir_name(q) /
                                          embedding_file_name(pair, column),
                                      column);
        for (std::size_t r = 0; r < loaded.table.index.size(); ++r) {
          if (auto v = plan.nodes.find(loaded.table.index.id(r))) degree[*v] += loaded.degree[r];
        }
        tables.push_back(std::move(loaded.table));
      }
      EmbeddingTable merged = merge_embeddings(tables, plan);
      if (config.normalize_merged) l2_normalize_rows(merged.matrix);
      const fs::path path = out_dir / embedding_file_name(pair, column);
      write_embeddings(path, merged.index, merged.matrix, degree, dictionary, column);
      written.push_back(path);
    }
  }
  return written;
}

ReconstructSummary run_reconstruct(const ReconstructConfig& config) {
  const RunConfig run = load_manifest(config.model_dir / kManifestName);
  const ColumnSchema schema = parse_schema(run.schema);
  const fs::path out_dir = config.output_dir.value_or(config.model_dir);
  ensure_dir(out_dir);

  EntityDictionary dictionary;
  const auto set = read_hyperedges(config.input, schema,
                                   ReadOptions{config.format.value_or(run.format), run.weighted,
                                               run.strict},
                                   dictionary);

  ReconstructSummary summary;
  VirtualIdSource virtual_ids;
  for (const RelationPair& pair : relation_pairs(schema)) {
    std::vector<LoadedEmbeddings> parts;
    for (const auto& column : output_columns(schema, pair, !config.use_final)) {
      const fs::path path = config.model_dir / (config.use_final
                                                    ? embedding_file_name(pair, column)
                                                    : penultimate_file_name(pair, column));
      if (!fs::exists(path)) {
        throw_data(kModule, "missing '" + path.string() + "'" +
                                (config.use_final ? ""
                                                  : " (embed with --keep-penultimate, or "
                                                    "reconstruct with --use-final)"));
      }
      parts.push_back(read_embeddings(path, column));
    }
    const LoadedEmbeddings source = concat_embeddings(std::move(parts));

    const auto edges = expand_all(set.hyperedges, pair, run.expansion, virtual_ids);
    const Reconstruction rec = reconstruct_batch(edges, source.table, config.hops, config.workers);

    for (const auto& column : output_columns(schema, pair)) {
      const fs::path path = out_dir / ("reconstructed__" + pair.left_name + "__" +
                                       pair.right_name + "__" + column + ".tsv");
      summary.reconstructed += write_embeddings(path, rec.embeddings.index, rec.embeddings.matrix,
                                                rec.degree, dictionary, column);
      summary.files.push_back(path);
    }
    const fs::path missing_path =
        out_dir / ("unembedded__" + pair.left_name + "__" + pair.right_name + ".tsv");
    std::ofstream missing(missing_path, std::ios::binary | std::ios::trunc);
    for (EntityId id : rec.unembedded) {
      if (const auto* e = dictionary.find(id)) {
        missing << e->ns << '\t' << e->label << '\n';
        ++summary.unembedded;
      }
    }
    summary.files.push_back(missing_path);
  }
  if (summary.unembedded > 0) {
    log_warning("[inductive] " + std::to_string(summary.unembedded) +
                " new nodes could not be reached within " + std::to_string(config.hops) +
                " hop(s)");
  }
  return summary;
}

// ---------------------------------------------------------------------------

std::string evaluation_namespace(const fs::path& embeddings,
                                 const std::optional<std::string>& column) {
  if (column) return *column;
  const std::string stem = embeddings.stem().string();
  const std::size_t pos = stem.rfind("__");
  if (pos != std::string::npos && stem.find("__") != pos) return stem.substr(pos + 2);
  return "node";
}

std::vector<Edge> read_edge_list(const fs::path& path, std::string_view ns) {
  std::ifstream in(path);
  if (!in) throw_data(kModule, "cannot open edge list '" + path.string() + "'");
  std::vector<Edge> edges;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::size_t t1 = line.find('\t');
    if (t1 == std::string::npos || t1 == 0 || t1 + 1 >= line.size()) {
      throw_data(kModule, path.string() + ":" + std::to_string(line_number) +
                              ": expected two tab separated labels");
    }
    const std::size_t t2 = line.find('\t', t1 + 1);
    const std::string_view a(line.data(), t1);
    const std::string_view b(line.data() + t1 + 1,
                             (t2 == std::string::npos ? line.size() : t2) - t1 - 1);
    edges.push_back({hash_entity(a, ns), hash_entity(b, ns), 1.0});
  }
  return edges;
}

LabelSet read_labels(const fs::path& path, std::string_view ns) {
  std::ifstream in(path);
  if (!in) throw_data(kModule, "cannot open label file '" + path.string() + "'");
  std::vector<std::pair<std::string, std::string>> raw;
  std::set<std::string> names;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::size_t t = line.find('\t');
    if (t == std::string::npos || t == 0 || t + 1 >= line.size()) {
      throw_data(kModule, path.string() + ":" + std::to_string(line_number) +
                              ": expected label<TAB>class");
    }
    raw.emplace_back(line.substr(0, t), line.substr(t + 1));
    names.insert(raw.back().second);
  }
  LabelSet out;
  out.class_names.assign(names.begin(), names.end());
  for (const auto& [label, cls] : raw) {
    const auto it = std::lower_bound(out.class_names.begin(), out.class_names.end(), cls);
    out.labels.emplace_back(hash_entity(label, ns),
                            static_cast<int>(it - out.class_names.begin()));
  }
  return out;
}

LinkPredictionReport run_eval_lp(const EvalLpConfig& config) {
  const std::string ns = evaluation_namespace(config.embeddings, config.column);
  const auto loaded = read_embeddings(config.embeddings, ns);
  const auto train = read_edge_list(config.train_edges, ns);
  const auto test = read_edge_list(config.test_edges, ns);
  const auto model = train_link_predictor(train, loaded.table, config.eval.seed, config.train);
  std::vector<NodeDegree> degrees;
  for (std::size_t r = 0; r < loaded.table.index.size(); ++r) {
    degrees.push_back({loaded.table.index.id(r), loaded.degree[r]});
  }
  return evaluate_link_prediction(model, test, loaded.table, degrees, config.eval);
}

ClassificationReport run_eval_cls(const EvalClsConfig& config) {
  const std::string ns = evaluation_namespace(config.embeddings, config.column);
  const auto loaded = read_embeddings(config.embeddings, ns);
  const auto labels = read_labels(config.labels, ns);
  return classify_nodes(loaded.table, labels.labels, labels.class_names.size(), config.seed,
                        config.classify);
}

std::vector<SweepRow> run_sweep(const SweepConfig& config) {
  if (config.iteration_list.empty()) throw_usage(kModule, "sweep needs at least one iteration count");
  if (!config.labels && !(config.train_edges && config.test_edges)) {
    throw_usage(kModule, "sweep needs --labels or both --train-edges and --test-edges");
  }
  RunConfig run = config.run;
  run.iterations = *std::max_element(config.iteration_list.begin(), config.iteration_list.end());
  validate(run);
  if (std::find(config.iteration_list.begin(), config.iteration_list.end(), 0) !=
      config.iteration_list.end()) {
    throw_usage(kModule, "iteration counts must be at least 1");
  }
  Ingested in = ingest(run);

  std::optional<RelationPair> chosen;
  std::string column;
  for (const RelationPair& pair : relation_pairs(in.schema)) {
    for (const auto& c : output_columns(in.schema, pair)) {
      if (!config.column || *config.column == c) {
        chosen = pair;
        column = c;
        break;
      }
    }
    if (chosen) break;
  }
  if (!chosen) throw_usage(kModule, "no relation pair writes column '" + config.column.value_or("") + "'");

  VirtualIdSource virtual_ids;
  const auto edges = expand_all(in.set.hyperedges, *chosen, run.expansion, virtual_ids);
  const SparseTransition m = build_transition(edges);

  std::optional<LabelSet> labels;
  if (config.labels) labels = read_labels(*config.labels, column);
  std::vector<Edge> train, test;
  if (config.train_edges && config.test_edges) {
    train = read_edge_list(*config.train_edges, column);
    test = read_edge_list(*config.test_edges, column);
  }

  const std::set<std::size_t> wanted(config.iteration_list.begin(), config.iteration_list.end());
  std::vector<SweepRow> rows;
  const EmbedConfig cfg{run.dim, run.iterations, run.seed, false, run.workers};
  embed_pair(m, cfg, [&](std::size_t i, const EmbeddingMatrix& t) {
    if (!wanted.count(i)) return;
    std::vector<NodeDegree> degrees;
    const EmbeddingTable table = column_table(m.index, t, in.dictionary, column, m.degree, &degrees);
    SweepRow row;
    row.iterations = i;
    if (labels) {
      const auto report = classify_nodes(table, labels->labels, labels->class_names.size(),
                                         config.eval_seed, config.classify);
      row.micro_f1 = report.micro_f1;
      row.macro_f1 = report.macro_f1;
    }
    if (!test.empty()) {
      const auto model = train_link_predictor(train, table, config.link_eval.seed);
      const auto report = evaluate_link_prediction(model, test, table, degrees, config.link_eval);
      row.mrr = report.mrr;
      row.hits_at_10 = report.hits_at_10;
      row.mean_rank = report.mean_rank;
    }
    rows.push_back(row);
  });

  // Repeated entries in the list map to the same snapshot.
  std::vector<SweepRow> ordered;
  for (std::size_t i : config.iteration_list) {
    ordered.push_back(*std::find_if(rows.begin(), rows.end(),
                                    [i](const SweepRow& r) { return r.iterations == i; }));
  }
  return ordered;
}

std::string format_sweep(const std::vector<SweepRow>& rows) {
  std::string out = "iterations";
  if (rows.empty()) return out + "\n";
  const SweepRow& first = rows.front();
  if (first.micro_f1) out += "\tmicro_f1\tmacro_f1";
  if (first.mrr) out += "\tmrr\thr10\tmr";
  out += '\n';
  for (const SweepRow& r : rows) {
    out += std::to_string(r.iterations);
    if (r.micro_f1) out += '\t' + format_double(*r.micro_f1) + '\t' + format_double(*r.macro_f1);
    if (r.mrr) {
      out += '\t' + format_double(*r.mrr) + '\t' + format_double(*r.hits_at_10) + '\t' +
             format_double(*r.mean_rank);
    }
    out += '\n';
  }
  return out;
}

}  // namespace cleora

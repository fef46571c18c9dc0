#include "cli.hpp"

#include <charconv>
#include <cstdlib>
#include <exception>
#include <iostream>
#include <optional>
#include <thread>

#include "CLI11.hpp"
#include "cleora/error.hpp"
#include "cleora/log.hpp"
#include "cleora/pipeline.hpp"

namespace cleora {
namespace {

struct CommonFlags {
  std::optional<std::size_t> workers;
  bool quiet = false;
  bool verbose = false;
};

std::size_t resolve_workers(const std::optional<std::size_t>& flag) {
  if (flag) {
    if (*flag == 0) throw_usage("cli", "--workers must be at least 1");
    return *flag;
  }
  if (const char* env = std::getenv("CLEORA_WORKERS"); env != nullptr && *env != '\0') {
    std::size_t n = 0;
    const char* end = env + std::char_traits<char>::length(env);
    const auto res = std::from_chars(env, end, n);
    if (res.ec != std::errc() || res.ptr != end || n == 0) {
      throw_usage("cli", std::string("CLEORA_WORKERS must be a positive integer, got '") + env + "'");
    }
    return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void add_common(CLI::App* cmd, CommonFlags& common) {
  cmd->add_option("--workers", common.workers,
                  "Worker threads (falls back to CLEORA_WORKERS, then the core count)");
  cmd->add_flag("--quiet", common.quiet, "Only report errors");
  cmd->add_flag("--verbose", common.verbose, "Report progress and memory estimates");
}

// Options shared by `embed` and `sweep`.
struct GraphFlags {
  std::string input;
  std::string format = "tsv";
  std::string schema;
  bool weighted = false;
  bool strict = false;
  std::string expansion = "clique";
  std::size_t dim = 1024;
  std::size_t iterations = 4;
  std::uint64_t seed = 0;
};

void add_graph(CLI::App* cmd, GraphFlags& g) {
  cmd->add_option("--input", g.input, "Hyperedge file");
  cmd->add_option("--format", g.format, "tsv or json")->capture_default_str();
  cmd->add_option("--schema", g.schema, "Column schema, e.g. \"complex::user product\"");
  cmd->add_flag("--weighted", g.weighted, "Last field of each row is a positive weight");
  cmd->add_flag("--strict", g.strict, "Fail on the first malformed row");
  cmd->add_option("--expansion", g.expansion, "clique or star")->capture_default_str();
  cmd->add_option("--dim", g.dim, "Embedding dimension")->capture_default_str();
  cmd->add_option("--iterations", g.iterations, "Propagation steps")->capture_default_str();
  cmd->add_option("--seed", g.seed, "Initialization seed")->capture_default_str();
}

RunConfig to_run_config(const GraphFlags& g) {
  if (g.schema.empty()) throw_usage("cli", "--schema is required");
  if (g.input.empty()) throw_usage("cli", "--input is required");
  RunConfig c;
  c.input = g.input;
  c.format = parse_input_format(g.format);
  c.schema = g.schema;
  c.weighted = g.weighted;
  c.strict = g.strict;
  c.expansion = parse_expansion(g.expansion);
  c.dim = g.dim;
  c.iterations = g.iterations;
  c.seed = g.seed;
  return c;
}

std::string fmt(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

// Restores the global log sink when a run finishes.
class LogScope {
 public:
  LogScope(std::ostream& err, const CommonFlags& common) {
    set_log_stream(&err);
    set_log_level(common.quiet ? LogLevel::kQuiet
                               : (common.verbose ? LogLevel::kInfo : LogLevel::kWarning));
  }
  ~LogScope() {
    set_log_stream(&std::cerr);
    set_log_level(LogLevel::kWarning);
  }
};

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hypergraph node embeddings by iterated neighbour averaging", "cleora"};
  app.require_subcommand(1);
  CommonFlags common;

  auto* embed = app.add_subcommand("embed", "Embed a hyperedge file");
  GraphFlags embed_graph;
  std::string output_dir = ".";
  std::size_t chunks = 1;
  bool keep_penultimate = false;
  bool normalize_merged = false;
  std::string manifest;
  add_graph(embed, embed_graph);
  embed->add_option("--output-dir", output_dir, "Directory for embeddings and manifest")
      ->capture_default_str();
  embed->add_option("--chunks", chunks, "Split each relation graph into Q chunks")
      ->capture_default_str();
  embed->add_flag("--keep-penultimate", keep_penultimate,
                  "Also write T_{I-1}, needed by reconstruct");
  embed->add_flag("--normalize-merged", normalize_merged, "L2-normalize merged chunk embeddings");
  embed->add_option("--manifest", manifest,
                    "Replay the configuration recorded in a manifest (other graph flags ignored)");
  add_common(embed, common);

  auto* reconstruct = app.add_subcommand("reconstruct", "Embed unseen nodes from a trained model");
  ReconstructConfig rec;
  std::string rec_model, rec_input, rec_out, rec_format;
  reconstruct->add_option("--model-dir", rec_model, "Output directory of an embed run")->required();
  reconstruct->add_option("--input", rec_input, "Hyperedges touching the new nodes")->required();
  reconstruct->add_option("--format", rec_format, "tsv or json (default: as trained)");
  reconstruct->add_option("--hops", rec.hops, "1 or 2")->check(CLI::IsMember({1, 2}))
      ->capture_default_str();
  reconstruct->add_flag("--use-final", rec.use_final,
                        "Average final embeddings instead of the penultimate ones");
  reconstruct->add_option("--output-dir", rec_out, "Defaults to the model directory");
  add_common(reconstruct, common);

  auto* eval_lp = app.add_subcommand("eval-lp", "Link prediction MRR / HR@10");
  EvalLpConfig lp;
  std::string lp_emb, lp_train, lp_test, lp_column;
  eval_lp->add_option("--embeddings", lp_emb, "Embedding TSV")->required();
  eval_lp->add_option("--train-edges", lp_train, "Edges used to fit the scorer")->required();
  eval_lp->add_option("--test-edges", lp_test, "Held-out edges to rank")->required();
  eval_lp->add_option("--column", lp_column, "Label namespace (default: from file name)");
  eval_lp->add_option("--negatives", lp.eval.negatives, "Most popular nodes ranked against")
      ->capture_default_str();
  eval_lp->add_option("--sample", lp.eval.sample, "Max test edges ranked")->capture_default_str();
  eval_lp->add_option("--seed", lp.eval.seed, "Sampling and training seed")->capture_default_str();
  add_common(eval_lp, common);

  auto* eval_cls = app.add_subcommand("eval-cls", "Node classification micro/macro F1");
  EvalClsConfig cls;
  std::string cls_emb, cls_labels, cls_column;
  eval_cls->add_option("--embeddings", cls_emb, "Embedding TSV")->required();
  eval_cls->add_option("--labels", cls_labels, "label<TAB>class file")->required();
  eval_cls->add_option("--column", cls_column, "Label namespace (default: from file name)");
  eval_cls->add_option("--seed", cls.seed, "Split and training seed")->capture_default_str();
  add_common(eval_cls, common);

  auto* sweep = app.add_subcommand("sweep", "Evaluate several iteration counts in one pass");
  GraphFlags sweep_graph;
  SweepConfig sw;
  std::string sw_labels, sw_train, sw_test, sw_column;
  add_graph(sweep, sweep_graph);
  sweep->add_option("--iteration-list", sw.iteration_list, "Iteration counts, e.g. 1,2,4,8")
      ->delimiter(',')
      ->required();
  sweep->add_option("--column", sw_column, "Column to evaluate (default: first output column)");
  sweep->add_option("--labels", sw_labels, "label<TAB>class file");
  sweep->add_option("--train-edges", sw_train, "Edges used to fit the link scorer");
  sweep->add_option("--test-edges", sw_test, "Held-out edges to rank");
  sweep->add_option("--negatives", sw.link_eval.negatives, "Most popular nodes ranked against")
      ->capture_default_str();
  sweep->add_option("--sample", sw.link_eval.sample, "Max test edges ranked")
      ->capture_default_str();
  sweep->add_option("--eval-seed", sw.eval_seed, "Evaluation seed")->capture_default_str();
  add_common(sweep, common);

  auto* merge = app.add_subcommand("merge-chunks", "Merge per-chunk embeddings of a chunked run");
  MergeConfig mc;
  std::string mc_model, mc_out;
  merge->add_option("--model-dir", mc_model, "Output directory of a chunked embed run")
      ->required();
  merge->add_option("--output-dir", mc_out, "Defaults to the model directory");
  merge->add_flag("--normalize-merged", mc.normalize_merged, "L2-normalize merged embeddings");
  add_common(merge, common);

  std::vector<std::string> argv_storage{"cleora"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_storage) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  LogScope log_scope(err, common);
  try {
    const std::size_t workers = resolve_workers(common.workers);

    if (embed->parsed()) {
      RunConfig run;
      if (!manifest.empty()) {
        run = load_manifest(manifest);
        if (file_digest(run.input) != manifest_input_digest(manifest)) {
          throw_data("cli", "input '" + run.input.string() + "' changed since the manifest was written");
        }
      } else {
        run = to_run_config(embed_graph);
        run.chunks = chunks;
        run.keep_penultimate = keep_penultimate;
        run.normalize_merged = normalize_merged;
      }
      run.output_dir = output_dir;
      run.workers = workers;
      const RunSummary summary = run_embed(run);
      for (const auto& pair : summary.pairs) {
        out << "pair " << pair.pair.left_name << '/' << pair.pair.right_name << ": "
            << pair.nodes << " nodes, " << pair.edges << " edges, estimated "
            << pair.estimate.bytes() << " bytes\n";
        for (const auto& f : pair.files) out << "  " << f.string() << '\n';
      }
      out << "manifest " << summary.manifest.string() << '\n';
    } else if (reconstruct->parsed()) {
      rec.model_dir = rec_model;
      rec.input = rec_input;
      if (!rec_format.empty()) rec.format = parse_input_format(rec_format);
      if (!rec_out.empty()) rec.output_dir = rec_out;
      rec.workers = workers;
      const auto summary = run_reconstruct(rec);
      out << "reconstructed\t" << summary.reconstructed << "\nunembedded\t" << summary.unembedded
          << '\n';
    } else if (eval_lp->parsed()) {
      lp.embeddings = lp_emb;
      lp.train_edges = lp_train;
      lp.test_edges = lp_test;
      if (!lp_column.empty()) lp.column = lp_column;
      lp.eval.workers = workers;
      const auto report = run_eval_lp(lp);
      out << "mrr\t" << fmt(report.mrr) << "\nhr10\t" << fmt(report.hits_at_10) << "\nmr\t"
          << fmt(report.mean_rank) << "\nqueries\t" << report.ranks.size() << "\nskipped\t"
          << report.skipped << "\nnegatives\t" << report.negatives << '\n';
    } else if (eval_cls->parsed()) {
      cls.embeddings = cls_emb;
      cls.labels = cls_labels;
      if (!cls_column.empty()) cls.column = cls_column;
      const auto report = run_eval_cls(cls);
      out << "micro_f1\t" << fmt(report.micro_f1) << "\nmacro_f1\t" << fmt(report.macro_f1)
          << "\ntrain\t" << report.train_size << "\ntest\t" << report.test_size << '\n';
    } else if (sweep->parsed()) {
      sw.run = to_run_config(sweep_graph);
      sw.run.workers = workers;
      sw.link_eval.workers = workers;
      sw.link_eval.seed = sw.eval_seed;
      if (!sw_column.empty()) sw.column = sw_column;
      if (!sw_labels.empty()) sw.labels = sw_labels;
      if (!sw_train.empty()) sw.train_edges = sw_train;
      if (!sw_test.empty()) sw.test_edges = sw_test;
      out << format_sweep(run_sweep(sw));
    } else if (merge->parsed()) {
      mc.model_dir = mc_model;
      if (!mc_out.empty()) mc.output_dir = mc_out;
      for (const auto& f : run_merge_chunks(mc)) out << f.string() << '\n';
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    switch (e.kind()) {
      case ErrorKind::kUsage:
        return kExitUsage;
      case ErrorKind::kData:
        return kExitData;
      case ErrorKind::kInternal:
        return kExitInternal;
    }
  } catch (const std::exception& e) {
    err << "error: [internal] " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitOk;
}

}  // namespace cleora

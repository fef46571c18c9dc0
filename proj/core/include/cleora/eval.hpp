#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "cleora/expansion.hpp"
#include "cleora/ingest.hpp"
#include "cleora/sparse_matrix.hpp"

namespace cleora {

// ---------------------------------------------------------------------------
// Features and the logistic learner

/// Elementwise product. Throws Error(kData) on a length mismatch.
std::vector<float> hadamard_features(std::span<const float> u, std::span<const float> v);

/// Training examples presented one at a time so large feature sets never
/// have to be materialized.
class ExampleSource {
 public:
  virtual ~ExampleSource() = default;
  virtual std::size_t size() const = 0;
  virtual std::size_t dim() const = 0;
  virtual int label(std::size_t i) const = 0;  // 0 or 1
  virtual void features(std::size_t i, std::span<float> out) const = 0;
};

struct LogisticConfig {
  std::size_t epochs = 10;
  double learning_rate = 0.01;
  double l2 = 1e-4;
  std::uint64_t seed = 0;
};

/// Binary logistic regression over standardized features.
struct LogisticModel {
  std::vector<double> weights;  // in standardized feature space
  double bias = 0.0;
  std::vector<double> mean;
  std::vector<double> inv_std;

  double logit(std::span<const float> x) const;
  double probability(std::span<const float> x) const;
};

/// Per-feature standardization, then plain SGD on the log loss with a fixed
/// learning rate and L2 penalty. Example order is reshuffled each epoch from
/// `config.seed`; the result is deterministic for a fixed seed.
LogisticModel train_logistic(const ExampleSource& examples, const LogisticConfig& config);

// ---------------------------------------------------------------------------
// Link prediction

struct NodeDegree {
  EntityId node;
  double degree = 0.0;
};

/// The `n` nodes of highest degree, ties broken by ascending id.
/// Throws Error(kUsage) if n exceeds the node count.
std::vector<EntityId> popular_negatives(std::span<const NodeDegree> nodes, std::size_t n);

/// Score of a node pair under a link model: the model logit of the Hadamard
/// features, computed as (a * u) . v + c with the standardization folded in.
class LinkScorer {
 public:
  explicit LinkScorer(const LogisticModel& model);

  double score(std::span<const float> u, std::span<const float> v) const;
  /// a * u, reusable across many v.
  std::vector<double> query_vector(std::span<const float> u) const;
  double score_with(std::span<const double> query, std::span<const float> v) const;

 private:
  std::vector<double> scale_;
  double offset_ = 0.0;
};

struct NodePair {
  EntityId start;
  EntityId end;
};

struct RankResult {
  NodePair query;
  std::size_t rank = 1;       // 1 + #negatives scoring strictly higher
  std::size_t candidates = 1; // 1 + #negatives
};

/// Rank of `positive` among (positive.start, n) for the given negative end
/// nodes. Returns nullopt if any needed node is not embedded.
std::optional<RankResult> rank_query(const LogisticModel& model, const NodePair& positive,
                                     std::span<const EntityId> negative_ends,
                                     const EmbeddingTable& embeddings);

/// Throw Error(kData) on an empty rank list.
double mrr(std::span<const std::size_t> ranks);
double hitrate_at(std::span<const std::size_t> ranks, std::size_t k = 10);
double mean_rank(std::span<const std::size_t> ranks);

struct LinkTrainConfig {
  LogisticConfig logistic;
};

/// Positives are the train edges with both ends embedded; each gets one
/// negative (start, uniformly random embedded node).
LogisticModel train_link_predictor(std::span<const Edge> train_edges,
                                   const EmbeddingTable& embeddings, std::uint64_t seed,
                                   const LinkTrainConfig& config = {});

struct LinkEvalConfig {
  std::size_t negatives = 10000;  // clamped to |V| - 1
  std::size_t sample = 100000;    // max test edges ranked
  std::uint64_t seed = 0;
  std::size_t workers = 1;
};

struct LinkPredictionReport {
  std::vector<std::size_t> ranks;
  std::size_t skipped = 0;  // test edges with an unembedded end
  std::size_t negatives = 0;
  double mrr = 0.0;
  double hits_at_10 = 0.0;
  double mean_rank = 0.0;
};

/// Ranks up to `sample` test edges (fixed-seed sample, original order kept)
/// against the most popular nodes. `degrees` defines popularity.
LinkPredictionReport evaluate_link_prediction(const LogisticModel& model,
                                              std::span<const Edge> test_edges,
                                              const EmbeddingTable& embeddings,
                                              std::span<const NodeDegree> degrees,
                                              const LinkEvalConfig& config);

// ---------------------------------------------------------------------------
// Node classification

struct ClassCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
};

std::vector<ClassCounts> class_counts(std::span<const int> truth, std::span<const int> predicted,
                                      std::size_t k_classes);

struct F1Scores {
  double micro = 0.0;
  double macro = 0.0;
};

/// Micro-F1 from summed counts, macro-F1 as the unweighted class mean
/// (classes with no support and no predictions score 0).
F1Scores f1_scores(std::span<const ClassCounts> counts);

struct ClassifyConfig {
  double train_fraction = 0.8;
  LogisticConfig logistic{.epochs = 20, .learning_rate = 0.01, .l2 = 1e-4, .seed = 0};
};

struct ClassificationReport {
  double micro_f1 = 0.0;
  double macro_f1 = 0.0;
  std::size_t train_size = 0;
  std::size_t test_size = 0;
  std::size_t unlabeled_skipped = 0;        // labels for nodes without embeddings
  std::vector<int> classes_missing_in_train;
};

/// Shuffles the embedded labeled nodes with `seed`, trains one-vs-rest
/// logistic models on the first `train_fraction`, predicts the rest by argmax.
ClassificationReport classify_nodes(const EmbeddingTable& embeddings,
                                    std::span<const std::pair<EntityId, int>> labels,
                                    std::size_t k_classes, std::uint64_t seed,
                                    const ClassifyConfig& config = {});

}  // namespace cleora

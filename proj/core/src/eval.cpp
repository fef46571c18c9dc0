#include "cleora/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <string>

#include "cleora/error.hpp"
#include "cleora/log.hpp"

namespace cleora {
namespace {

constexpr std::string_view kModule = "eval";

// Unbiased integer in [0, n); std distributions are not portable.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x = rng();
  while (x >= limit) x = rng();
  return x % n;
}

template <typename T>
void shuffle(std::vector<T>& items, std::mt19937_64& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    std::swap(items[i - 1], items[uniform_below(rng, i)]);
  }
}

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

void require_nonempty(std::span<const std::size_t> ranks) {
  if (ranks.empty()) throw_data(kModule, "metric over an empty rank list");
}

class LinkExamples final : public ExampleSource {
 public:
  struct Example {
    std::size_t u;
    std::size_t v;
    int label;
  };

  LinkExamples(const EmbeddingTable& table, std::vector<Example> examples)
      : table_(table), examples_(std::move(examples)) {}

  std::size_t size() const override { return examples_.size(); }
  std::size_t dim() const override { return table_.matrix.dim(); }
  int label(std::size_t i) const override { return examples_[i].label; }
  void features(std::size_t i, std::span<float> out) const override {
    const auto u = table_.matrix.row(examples_[i].u);
    const auto v = table_.matrix.row(examples_[i].v);
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = u[j] * v[j];
  }

 private:
  const EmbeddingTable& table_;
  std::vector<Example> examples_;
};

class OneVsRestExamples final : public ExampleSource {
 public:
  OneVsRestExamples(const EmbeddingMatrix& matrix, std::span<const std::size_t> rows,
                    std::span<const int> classes, int positive)
      : matrix_(matrix), rows_(rows), classes_(classes), positive_(positive) {}

  std::size_t size() const override { return rows_.size(); }
  std::size_t dim() const override { return matrix_.dim(); }
  int label(std::size_t i) const override { return classes_[i] == positive_ ? 1 : 0; }
  void features(std::size_t i, std::span<float> out) const override {
    const auto row = matrix_.row(rows_[i]);
    std::copy(row.begin(), row.end(), out.begin());
  }

 private:
  const EmbeddingMatrix& matrix_;
  std::span<const std::size_t> rows_;
  std::span<const int> classes_;
  int positive_;
};

}  // namespace

// ---------------------------------------------------------------------------

std::vector<float> hadamard_features(std::span<const float> u, std::span<const float> v) {
  if (u.size() != v.size()) {
    throw_data(kModule, "hadamard of vectors with lengths " + std::to_string(u.size()) + " and " +
                            std::to_string(v.size()));
  }
  std::vector<float> out(u.size());
  for (std::size_t j = 0; j < u.size(); ++j) out[j] = u[j] * v[j];
  return out;
}

double LogisticModel::logit(std::span<const float> x) const {
  double z = bias;
  for (std::size_t j = 0; j < weights.size(); ++j) {
    z += weights[j] * (static_cast<double>(x[j]) - mean[j]) * inv_std[j];
  }
  return z;
}

double LogisticModel::probability(std::span<const float> x) const { return sigmoid(logit(x)); }

LogisticModel train_logistic(const ExampleSource& examples, const LogisticConfig& config) {
  const std::size_t n = examples.size();
  const std::size_t d = examples.dim();
  LogisticModel model;
  model.weights.assign(d, 0.0);
  model.mean.assign(d, 0.0);
  model.inv_std.assign(d, 0.0);
  if (n == 0) return model;

  std::vector<float> x(d);
  std::vector<double> sum(d, 0.0), sum_sq(d, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    examples.features(i, x);
    for (std::size_t j = 0; j < d; ++j) {
      sum[j] += x[j];
      sum_sq[j] += static_cast<double>(x[j]) * x[j];
    }
  }
  for (std::size_t j = 0; j < d; ++j) {
    model.mean[j] = sum[j] / static_cast<double>(n);
    const double var = std::max(0.0, sum_sq[j] / static_cast<double>(n) - model.mean[j] * model.mean[j]);
    const double sd = std::sqrt(var);
    model.inv_std[j] = sd > 1e-12 ? 1.0 / sd : 0.0;
  }

  std::mt19937_64 rng(config.seed);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> z(d);
  const double lr = config.learning_rate;
  const double decay = 1.0 - lr * config.l2;
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    shuffle(order, rng);
    for (std::size_t i : order) {
      examples.features(i, x);
      double s = model.bias;
      for (std::size_t j = 0; j < d; ++j) {
        z[j] = (static_cast<double>(x[j]) - model.mean[j]) * model.inv_std[j];
        s += model.weights[j] * z[j];
      }
      const double g = sigmoid(s) - static_cast<double>(examples.label(i));
      for (std::size_t j = 0; j < d; ++j) {
        model.weights[j] = decay * model.weights[j] - lr * g * z[j];
      }
      model.bias -= lr * g;
    }
  }
  return model;
}

// ---------------------------------------------------------------------------

std::vector<EntityId> popular_negatives(std::span<const NodeDegree> nodes, std::size_t n) {
  if (n > nodes.size()) {
    throw_usage(kModule, "requested " + std::to_string(n) + " negatives from " +
                             std::to_string(nodes.size()) + " nodes");
  }
  std::vector<NodeDegree> sorted(nodes.begin(), nodes.end());
  std::sort(sorted.begin(), sorted.end(), [](const NodeDegree& a, const NodeDegree& b) {
    return a.degree != b.degree ? a.degree > b.degree : a.node < b.node;
  });
  std::vector<EntityId> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(sorted[i].node);
  return out;
}

LinkScorer::LinkScorer(const LogisticModel& model) : scale_(model.weights.size()) {
  offset_ = model.bias;
  for (std::size_t j = 0; j < scale_.size(); ++j) {
    scale_[j] = model.weights[j] * model.inv_std[j];
    offset_ -= scale_[j] * model.mean[j];
  }
}

std::vector<double> LinkScorer::query_vector(std::span<const float> u) const {
  std::vector<double> q(scale_.size());
  for (std::size_t j = 0; j < q.size(); ++j) q[j] = scale_[j] * static_cast<double>(u[j]);
  return q;
}

double LinkScorer::score_with(std::span<const double> query, std::span<const float> v) const {
  double s = 0.0;
  for (std::size_t j = 0; j < query.size(); ++j) s += query[j] * static_cast<double>(v[j]);
  return s + offset_;
}

double LinkScorer::score(std::span<const float> u, std::span<const float> v) const {
  return score_with(query_vector(u), v);
}

std::optional<RankResult> rank_query(const LogisticModel& model, const NodePair& positive,
                                     std::span<const EntityId> negative_ends,
                                     const EmbeddingTable& embeddings) {
  const auto u = embeddings.find(positive.start);
  const auto v = embeddings.find(positive.end);
  if (!u || !v) return std::nullopt;
  const LinkScorer scorer(model);
  const auto q = scorer.query_vector(*u);
  const double target = scorer.score_with(q, *v);

  RankResult result{positive, 1, 1};
  for (EntityId n : negative_ends) {
    if (n == positive.end) continue;
    const auto row = embeddings.find(n);
    if (!row) return std::nullopt;
    ++result.candidates;
    if (scorer.score_with(q, *row) > target) ++result.rank;
  }
  return result;
}

double mrr(std::span<const std::size_t> ranks) {
  require_nonempty(ranks);
  double s = 0.0;
  for (std::size_t r : ranks) s += 1.0 / static_cast<double>(r);
  return s / static_cast<double>(ranks.size());
}

double hitrate_at(std::span<const std::size_t> ranks, std::size_t k) {
  require_nonempty(ranks);
  const auto hits = std::count_if(ranks.begin(), ranks.end(), [k](std::size_t r) { return r <= k; });
  return static_cast<double>(hits) / static_cast<double>(ranks.size());
}

double mean_rank(std::span<const std::size_t> ranks) {
  require_nonempty(ranks);
  double s = 0.0;
  for (std::size_t r : ranks) s += static_cast<double>(r);
  return s / static_cast<double>(ranks.size());
}

LogisticModel train_link_predictor(std::span<const Edge> train_edges,
                                   const EmbeddingTable& embeddings, std::uint64_t seed,
                                   const LinkTrainConfig& config) {
  const std::size_t n = embeddings.index.size();
  if (n == 0) throw_data(kModule, "no embeddings to train a link predictor on");

  std::mt19937_64 rng(seed);
  std::vector<LinkExamples::Example> examples;
  examples.reserve(train_edges.size() * 2);
  std::size_t skipped = 0;
  for (const Edge& e : train_edges) {
    const auto u = embeddings.index.find(e.from);
    const auto v = embeddings.index.find(e.to);
    if (!u || !v) {
      ++skipped;
      continue;
    }
    examples.push_back({*u, *v, 1});
    examples.push_back({*u, static_cast<std::size_t>(uniform_below(rng, n)), 0});
  }
  if (skipped > 0) {
    log_warning("[eval] " + std::to_string(skipped) + " train edges have an unembedded end");
  }
  LogisticConfig logistic = config.logistic;
  logistic.seed = seed;
  return train_logistic(LinkExamples(embeddings, std::move(examples)), logistic);
}

LinkPredictionReport evaluate_link_prediction(const LogisticModel& model,
                                              std::span<const Edge> test_edges,
                                              const EmbeddingTable& embeddings,
                                              std::span<const NodeDegree> degrees,
                                              const LinkEvalConfig& config) {
  std::vector<NodeDegree> embedded;
  for (const NodeDegree& nd : degrees) {
    if (embeddings.index.find(nd.node)) embedded.push_back(nd);
  }
  if (embedded.size() < 2) throw_data(kModule, "need at least two embedded nodes to rank");
  const std::size_t pool_size = std::min(config.negatives, embedded.size() - 1);
  const auto pool = popular_negatives(embedded, pool_size);
  std::vector<std::size_t> pool_rows;
  for (EntityId id : pool) pool_rows.push_back(embeddings.index.at(id));

  // Fixed-seed sample of test edge positions, kept in input order.
  std::vector<std::size_t> picked(test_edges.size());
  std::iota(picked.begin(), picked.end(), 0);
  if (picked.size() > config.sample) {
    std::mt19937_64 rng(config.seed);
    for (std::size_t i = 0; i < config.sample; ++i) {
      std::swap(picked[i], picked[i + uniform_below(rng, picked.size() - i)]);
    }
    picked.resize(config.sample);
    std::sort(picked.begin(), picked.end());
  }

  LinkPredictionReport report;
  report.negatives = pool_size;
  struct Query {
    std::size_t u;
    std::size_t v;
  };
  std::vector<Query> queries;
  for (std::size_t i : picked) {
    const auto u = embeddings.index.find(test_edges[i].from);
    const auto v = embeddings.index.find(test_edges[i].to);
    if (!u || !v) {
      ++report.skipped;
      continue;
    }
    queries.push_back({*u, *v});
  }
  if (queries.empty()) throw_data(kModule, "no test edge has both ends embedded");

  // Queries sharing a start node share every negative score.
  std::map<std::size_t, std::vector<std::size_t>> by_start;
  for (std::size_t i = 0; i < queries.size(); ++i) by_start[queries[i].u].push_back(i);
  std::vector<std::pair<std::size_t, std::vector<std::size_t>>> groups(by_start.begin(),
                                                                      by_start.end());

  const LinkScorer scorer(model);
  report.ranks.assign(queries.size(), 0);
#pragma omp parallel for num_threads(static_cast<int>(std::max<std::size_t>(1, config.workers))) schedule(dynamic, 4)
  for (std::ptrdiff_t g = 0; g < static_cast<std::ptrdiff_t>(groups.size()); ++g) {
    const auto& [start, members] = groups[g];
    const auto q = scorer.query_vector(embeddings.matrix.row(start));
    std::vector<double> scores(pool_rows.size());
    for (std::size_t p = 0; p < pool_rows.size(); ++p) {
      scores[p] = scorer.score_with(q, embeddings.matrix.row(pool_rows[p]));
    }
    std::sort(scores.begin(), scores.end());
    for (std::size_t i : members) {
      const double target = scorer.score_with(q, embeddings.matrix.row(queries[i].v));
      // The true end, if pooled, scores exactly `target` and is never counted.
      const auto greater = scores.end() - std::upper_bound(scores.begin(), scores.end(), target);
      report.ranks[i] = 1 + static_cast<std::size_t>(greater);
    }
  }

  report.mrr = mrr(report.ranks);
  report.hits_at_10 = hitrate_at(report.ranks, 10);
  report.mean_rank = mean_rank(report.ranks);
  return report;
}

// ---------------------------------------------------------------------------

std::vector<ClassCounts> class_counts(std::span<const int> truth, std::span<const int> predicted,
                                      std::size_t k_classes) {
  if (truth.size() != predicted.size()) throw_data(kModule, "truth/prediction length mismatch");
  std::vector<ClassCounts> counts(k_classes);
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const auto t = static_cast<std::size_t>(truth[i]);
    const auto p = static_cast<std::size_t>(predicted[i]);
    if (t >= k_classes || p >= k_classes) throw_data(kModule, "class id out of range");
    if (t == p) {
      ++counts[t].tp;
    } else {
      ++counts[p].fp;
      ++counts[t].fn;
    }
  }
  return counts;
}

F1Scores f1_scores(std::span<const ClassCounts> counts) {
  auto f1 = [](std::size_t tp, std::size_t fp, std::size_t fn) {
    const std::size_t denom = 2 * tp + fp + fn;
    return denom == 0 ? 0.0 : 2.0 * static_cast<double>(tp) / static_cast<double>(denom);
  };
  F1Scores scores;
  std::size_t tp = 0, fp = 0, fn = 0;
  double macro = 0.0;
  for (const ClassCounts& c : counts) {
    tp += c.tp;
    fp += c.fp;
    fn += c.fn;
    macro += f1(c.tp, c.fp, c.fn);
  }
  scores.micro = f1(tp, fp, fn);
  scores.macro = counts.empty() ? 0.0 : macro / static_cast<double>(counts.size());
  return scores;
}

ClassificationReport classify_nodes(const EmbeddingTable& embeddings,
                                    std::span<const std::pair<EntityId, int>> labels,
                                    std::size_t k_classes, std::uint64_t seed,
                                    const ClassifyConfig& config) {
  ClassificationReport report;
  struct Labeled {
    EntityId id;
    std::size_t row;
    int cls;
  };
  std::vector<Labeled> items;
  for (const auto& [id, cls] : labels) {
    if (cls < 0 || static_cast<std::size_t>(cls) >= k_classes) {
      throw_data(kModule, "class id " + std::to_string(cls) + " out of range");
    }
    if (auto row = embeddings.index.find(id)) {
      items.push_back({id, *row, cls});
    } else {
      ++report.unlabeled_skipped;
    }
  }
  std::sort(items.begin(), items.end(), [](const Labeled& a, const Labeled& b) { return a.id < b.id; });
  items.erase(std::unique(items.begin(), items.end(),
                          [](const Labeled& a, const Labeled& b) { return a.id == b.id; }),
              items.end());
  if (items.size() < 2) throw_data(kModule, "need at least two labeled embedded nodes");

  std::mt19937_64 rng(seed);
  shuffle(items, rng);
  std::size_t n_train = static_cast<std::size_t>(config.train_fraction * static_cast<double>(items.size()));
  n_train = std::clamp<std::size_t>(n_train, 1, items.size() - 1);

  std::vector<std::size_t> train_rows;
  std::vector<int> train_classes;
  for (std::size_t i = 0; i < n_train; ++i) {
    train_rows.push_back(items[i].row);
    train_classes.push_back(items[i].cls);
  }
  report.train_size = n_train;
  report.test_size = items.size() - n_train;

  std::vector<LogisticModel> models;
  for (std::size_t c = 0; c < k_classes; ++c) {
    const bool present = std::find(train_classes.begin(), train_classes.end(),
                                   static_cast<int>(c)) != train_classes.end();
    if (!present) {
      report.classes_missing_in_train.push_back(static_cast<int>(c));
      log_warning("[eval] class " + std::to_string(c) + " has no training examples");
    }
    LogisticConfig logistic = config.logistic;
    logistic.seed = seed + 0x9e3779b97f4a7c15ULL * (c + 1);
    models.push_back(train_logistic(
        OneVsRestExamples(embeddings.matrix, train_rows, train_classes, static_cast<int>(c)),
        logistic));
  }

  std::vector<int> truth, predicted;
  for (std::size_t i = n_train; i < items.size(); ++i) {
    const auto x = embeddings.matrix.row(items[i].row);
    int best = 0;
    double best_logit = -std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < k_classes; ++c) {
      const double z = models[c].logit(x);
      if (z > best_logit) {
        best_logit = z;
        best = static_cast<int>(c);
      }
    }
    truth.push_back(items[i].cls);
    predicted.push_back(best);
  }
  const auto scores = f1_scores(class_counts(truth, predicted, k_classes));
  report.micro_f1 = scores.micro;
  report.macro_f1 = scores.macro;
  return report;
}

}  // namespace cleora

#include "cleora/sparse_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "cleora/error.hpp"

namespace cleora {
namespace {

constexpr std::string_view kModule = "sparsemat";
constexpr double kZeroNorm = 1e-12;

int thread_count(std::size_t workers) { return static_cast<int>(std::max<std::size_t>(1, workers)); }

}  // namespace

NodeIndex::NodeIndex(std::vector<EntityId> ids) : ids_(std::move(ids)) {
  std::sort(ids_.begin(), ids_.end());
  ids_.erase(std::unique(ids_.begin(), ids_.end()), ids_.end());
}

std::optional<std::size_t> NodeIndex::find(EntityId id) const {
  const auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
  if (it == ids_.end() || *it != id) return std::nullopt;
  return static_cast<std::size_t>(it - ids_.begin());
}

std::size_t NodeIndex::at(EntityId id) const {
  if (auto r = find(id)) return *r;
  throw_internal(kModule, "node " + std::to_string(id.value) + " missing from index");
}

SparseTransition build_transition(std::span<const Edge> edges) {
  if (edges.empty()) throw_data(kModule, "cannot build a transition matrix from zero edges");

  SparseTransition m;
  {
    std::vector<EntityId> ids;
    ids.reserve(edges.size() * 2);
    for (const Edge& e : edges) {
      ids.push_back(e.from);
      ids.push_back(e.to);
    }
    m.index = NodeIndex(std::move(ids));
  }
  if (m.index.size() > std::numeric_limits<std::uint32_t>::max()) {
    throw_data(kModule, "too many nodes for 32-bit row indices");
  }

  std::vector<SparseTransition::Entry> directed;
  directed.reserve(edges.size() * 2);
  for (const Edge& e : edges) {
    const auto a = static_cast<std::uint32_t>(m.index.at(e.from));
    const auto b = static_cast<std::uint32_t>(m.index.at(e.to));
    directed.push_back({a, b, e.weight});
    directed.push_back({b, a, e.weight});
  }
  std::stable_sort(directed.begin(), directed.end(), [](const auto& x, const auto& y) {
    return x.row != y.row ? x.row < y.row : x.col < y.col;
  });

  // Coalesce duplicate (row, col) pairs by summing weights.
  m.entries.reserve(directed.size());
  for (const auto& d : directed) {
    if (!m.entries.empty() && m.entries.back().row == d.row && m.entries.back().col == d.col) {
      m.entries.back().value += d.value;
    } else {
      m.entries.push_back(d);
    }
  }
  m.entries.shrink_to_fit();

  const std::size_t n = m.index.size();
  m.row_begin.assign(n + 1, 0);
  for (const auto& e : m.entries) ++m.row_begin[e.row + 1];
  for (std::size_t r = 0; r < n; ++r) m.row_begin[r + 1] += m.row_begin[r];

  m.degree.assign(n, 0.0);
  for (const auto& e : m.entries) m.degree[e.row] += e.value;
  for (auto& e : m.entries) e.value /= m.degree[e.row];
  return m;
}

EmbeddingMatrix multiply(const SparseTransition& m, const EmbeddingMatrix& t, std::size_t workers) {
  EmbeddingMatrix out(m.size(), t.dim());
  multiply_into(m, t, out, workers);
  return out;
}

void multiply_into(const SparseTransition& m, const EmbeddingMatrix& t, EmbeddingMatrix& out,
                   std::size_t workers) {
  if (t.rows() != m.size()) {
    throw_internal(kModule, "dimension mismatch: transition has " + std::to_string(m.size()) +
                                " columns, embedding has " + std::to_string(t.rows()) + " rows");
  }
  const std::size_t n = m.size();
  const std::size_t d = t.dim();
  if (out.rows() != n || out.dim() != d) {
    throw_internal(kModule, "output matrix has the wrong shape");
  }

#pragma omp parallel num_threads(thread_count(workers))
  {
    std::vector<double> acc(d);
#pragma omp for schedule(static)
    for (std::ptrdiff_t r = 0; r < static_cast<std::ptrdiff_t>(n); ++r) {
      std::fill(acc.begin(), acc.end(), 0.0);
      for (const auto& e : m.row(static_cast<std::size_t>(r))) {
        const auto src = t.row(e.col);
        for (std::size_t j = 0; j < d; ++j) acc[j] += e.value * static_cast<double>(src[j]);
      }
      auto dst = out.row(static_cast<std::size_t>(r));
      for (std::size_t j = 0; j < d; ++j) dst[j] = static_cast<float>(acc[j]);
    }
  }
}

NormalizeStats l2_normalize_rows(EmbeddingMatrix& t, std::size_t workers) {
  const std::size_t n = t.rows();
  std::size_t zero_rows = 0;
#pragma omp parallel for num_threads(thread_count(workers)) schedule(static) reduction(+ : zero_rows)
  for (std::ptrdiff_t r = 0; r < static_cast<std::ptrdiff_t>(n); ++r) {
    auto row = t.row(static_cast<std::size_t>(r));
    double sq = 0.0;
    for (float v : row) sq += static_cast<double>(v) * v;
    const double norm = std::sqrt(sq);
    if (norm < kZeroNorm) {
      std::fill(row.begin(), row.end(), 0.0f);
      ++zero_rows;
      continue;
    }
    for (float& v : row) v = static_cast<float>(v / norm);
  }
  return {zero_rows};
}

MemoryAccount estimate_memory(std::uint64_t nodes, std::uint64_t edges, std::uint64_t dim) {
  return {nodes, 2 * edges, 2 * dim * nodes};
}

}  // namespace cleora

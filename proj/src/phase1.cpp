#include "gsbm/phase1.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <tuple>

namespace gsbm {

namespace {

struct Fraction {
  std::int64_t num = 0;
  std::int64_t den = 1;
};

// Reduced a + b; exact because both carry decimal denominators.
Fraction prob_sum(const EdgeProb& a, const EdgeProb& b) {
  std::int64_t num = a.num * b.den + b.num * a.den;
  std::int64_t den = a.den * b.den;
  std::int64_t g = std::gcd(num, den);
  return {g ? num / g : num, g ? den / g : den};
}

void require_distinct(const EdgeProb& a, const EdgeProb& b) {
  if (a.num * b.den == b.num * a.den)
    throw std::invalid_argument("phase 1 requires a != b");
}

using Wide = __int128;

std::vector<std::int8_t> propagate_impl(const GeometricGraph& g,
                                        std::span<const VertexId> S_ref,
                                        std::span<const std::int8_t> ref_labels,
                                        std::span<const VertexId> S_new,
                                        const EdgeProb& a, const EdgeProb& b,
                                        std::vector<std::uint8_t>& in_ref_m) {
  require_distinct(a, b);
  if (S_ref.size() != ref_labels.size())
    throw std::invalid_argument("propagate: ref label size mismatch");

  std::int64_t plus = 0, minus = 0;
  for (std::int8_t s : ref_labels) {
    if (s == 1)
      ++plus;
    else if (s == -1)
      ++minus;
    else
      throw std::invalid_argument("propagate: reference set has unlabeled "
                                  "vertices");
  }
  const std::int8_t majority = (plus >= minus) ? 1 : -1;
  const std::int64_t ref_count = (majority == 1) ? plus : minus;

  for (std::size_t i = 0; i < S_ref.size(); ++i)
    if (ref_labels[i] == majority) in_ref_m[S_ref[i]] = 1;

  const Fraction sum = prob_sum(a, b);
  const bool a_larger = a.num * b.den > b.num * a.den;
  std::vector<std::int8_t> out(S_new.size());
  for (std::size_t i = 0; i < S_new.size(); ++i) {
    VertexId u = S_new[i];
    std::int64_t hits = 0;
    for (VertexId v : g.neighbors(u)) hits += in_ref_m[v];
    // hits vs (a+b) * ref_count / 2, decided exactly:
    // 2 * hits * den  vs  num * ref_count
    Wide lhs = Wide(2) * hits * sum.den;
    Wide rhs = Wide(sum.num) * ref_count;
    bool take_majority = a_larger ? (lhs >= rhs) : (lhs < rhs);
    out[i] = take_majority ? majority : static_cast<std::int8_t>(-majority);
  }

  for (std::size_t i = 0; i < S_ref.size(); ++i) in_ref_m[S_ref[i]] = 0;
  return out;
}

}  // namespace

std::vector<std::int8_t> pairwise_classify(const GeometricGraph& g,
                                           std::span<const VertexId> S,
                                           const EdgeProb& a,
                                           const EdgeProb& b) {
  require_distinct(a, b);
  if (S.empty()) throw std::invalid_argument("pairwise_classify: empty set");

  VertexId anchor = *std::min_element(S.begin(), S.end());
  const Fraction sum = prob_sum(a, b);
  const auto members = static_cast<std::int64_t>(S.size());

  std::vector<std::int8_t> out(S.size());
  for (std::size_t i = 0; i < S.size(); ++i) {
    VertexId u = S[i];
    if (u == anchor) {
      out[i] = 1;
      continue;
    }
    std::int64_t count = common_neighbor_count(g, anchor, u, S);
    // count > (a+b)^2 (|S|-2) / 4, decided exactly:
    // 4 * count * den^2  vs  num^2 * (|S|-2)
    Wide lhs = Wide(4) * count * sum.den * sum.den;
    Wide rhs = Wide(sum.num) * sum.num * (members - 2);
    out[i] = (lhs > rhs) ? 1 : -1;
  }
  return out;
}

std::vector<std::int8_t> propagate(const GeometricGraph& g,
                                   std::span<const VertexId> S_ref,
                                   std::span<const std::int8_t> ref_labels,
                                   std::span<const VertexId> S_new,
                                   const EdgeProb& a, const EdgeProb& b) {
  std::vector<std::uint8_t> scratch(g.vertex_count(), 0);
  return propagate_impl(g, S_ref, ref_labels, S_new, a, b, scratch);
}

Phase1Result run_phase1(const GeometricGraph& g, const BlockGrid& grid,
                        const VisibilityGraph& vg, const ModelParams& params) {
  Phase1Result r;
  r.labels.assign(g.vertex_count(), 0);
  if (vg.occupied_count() == 0) return r;  // nothing to label

  // Use the attached BFS schedule, or derive one here when the caller has
  // not; a disconnected graph is reported as failure, not an exception.
  std::vector<BlockId> order = vg.order;
  std::unordered_map<BlockId, BlockId> parent = vg.parent;
  if (order.empty()) {
    if (!connected(vg)) {
      r.failed = true;
      return r;
    }
    std::tie(order, parent) = bfs_order(vg, vg.occupied.front());
  } else if (order.size() != vg.occupied_count()) {
    r.failed = true;
    return r;
  }

  {
    auto root_vertices = grid.vertices(order.front());
    auto root_labels = pairwise_classify(g, root_vertices, params.a, params.b);
    for (std::size_t i = 0; i < root_vertices.size(); ++i)
      r.labels[root_vertices[i]] = root_labels[i];
    r.root_vertex =
        *std::min_element(root_vertices.begin(), root_vertices.end());

    std::vector<std::uint8_t> scratch(g.vertex_count(), 0);
    std::vector<std::int8_t> ref_labels;
    for (std::size_t j = 1; j < order.size(); ++j) {
      BlockId block = order[j];
      BlockId ref_block = parent.at(block);
      auto S_ref = grid.vertices(ref_block);
      auto S_new = grid.vertices(block);
      ref_labels.resize(S_ref.size());
      for (std::size_t i = 0; i < S_ref.size(); ++i)
        ref_labels[i] = r.labels[S_ref[i]];
      auto out = propagate_impl(g, S_ref, ref_labels, S_new, params.a,
                                params.b, scratch);
      for (std::size_t i = 0; i < S_new.size(); ++i)
        r.labels[S_new[i]] = out[i];
    }
  }

  // Diagnostics relative to the anchor's true sign.
  if (!g.truth.empty()) {
    std::int8_t sign = g.truth[r.root_vertex];
    r.per_block_mistakes.assign(grid.block_count(), 0);
    for (BlockId b = 0; b < grid.block_count(); ++b) {
      std::int32_t mistakes = 0;
      for (VertexId v : grid.vertices(b))
        if (r.labels[v] != sign * g.truth[v]) ++mistakes;
      r.per_block_mistakes[b] = mistakes;
    }
    for (BlockId b : vg.occupied)
      r.max_occupied_block_mistakes = std::max<std::int64_t>(
          r.max_occupied_block_mistakes, r.per_block_mistakes[b]);
  }
  return r;
}

void dump_phase1(std::ostream& os, const BlockGrid& grid,
                 const Phase1Result& result) {
  for (BlockId b = 0; b < grid.block_count(); ++b) {
    os << 'b' << ' ' << b;
    for (VertexId v : grid.vertices(b))
      os << ' ' << static_cast<int>(result.labels[v]);
    os << '\n';
  }
}

}  // namespace gsbm

#include "gsbm/metrics.hpp"

#include <algorithm>
#include <stdexcept>

namespace gsbm {

std::size_t agreement_matches(const Labeling& sigma, const Labeling& truth) {
  if (sigma.size() != truth.size())
    throw std::invalid_argument("agreement: domain mismatch");
  std::size_t same = 0, flipped = 0;
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    if (truth[i] == 0)
      throw std::invalid_argument("agreement: truth labeling has zeros");
    if (sigma[i] == truth[i]) ++same;
    if (sigma[i] == -truth[i]) ++flipped;
  }
  return std::max(same, flipped);
}

double agreement(const Labeling& sigma, const Labeling& truth) {
  if (truth.empty()) return 1.0;
  return static_cast<double>(agreement_matches(sigma, truth)) /
         static_cast<double>(truth.size());
}

std::vector<std::int64_t> neighborhood_mistakes(const GeometricGraph& g,
                                                const Labeling& sigma,
                                                const Labeling& truth,
                                                int relative_sign) {
  if (sigma.size() != g.vertex_count() || truth.size() != g.vertex_count())
    throw std::invalid_argument("neighborhood_mistakes: size mismatch");
  std::vector<std::int64_t> out(g.vertex_count(), 0);
  for (VertexId u = 0; u < g.vertex_count(); ++u) {
    auto pu = g.positions[u];
    std::int64_t count = 0;
    g.index.for_each_candidate(pu, [&](VertexId v) {
      if (v == u) return;
      if (torus_distance(pu, g.positions[v], g.n, g.d) > g.radius) return;
      if (sigma[v] != relative_sign * truth[v]) ++count;
    });
    out[u] = count;
  }
  return out;
}

std::int64_t count_empty_block_segments(const BlockGrid& grid) {
  if (grid.dim() != 1)
    throw std::invalid_argument("count_empty_block_segments: requires d = 1");
  const std::int64_t m = grid.block_count();
  std::int64_t empties = 0;
  for (BlockId b = 0; b < m; ++b)
    if (grid.block_size(b) == 0) ++empties;
  if (empties == 0) return 1;
  if (empties == m) return 0;
  // circular runs of nonempty blocks = transitions empty -> nonempty
  std::int64_t segments = 0;
  for (BlockId b = 0; b < m; ++b) {
    bool here_empty = grid.block_size(b) == 0;
    bool next_empty = grid.block_size((b + 1) % m) == 0;
    if (here_empty && !next_empty) ++segments;
  }
  return segments;
}

}  // namespace gsbm

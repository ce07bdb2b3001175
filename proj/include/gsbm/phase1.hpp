// phase1.hpp — coarse labeling: classify the root block by common-neighbor
// counts, then propagate block to block along the visibility-graph BFS order.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "gsbm/generator.hpp"
#include "gsbm/visibility.hpp"

namespace gsbm {

struct Phase1Result {
  bool failed = false;  // visibility graph was disconnected
  Labeling labels;      // {-1, 0, +1}; zeros exactly on unoccupied blocks
  VertexId root_vertex = 0;  // anchor labeled +1
  // Diagnostics against truth, relative to truth[root_vertex]; counts cover
  // every block (zeros in unoccupied blocks count as mistakes there).
  std::vector<std::int32_t> per_block_mistakes;
  std::int64_t max_occupied_block_mistakes = 0;
};

// Labels S relative to its lowest-id vertex, which gets +1; another vertex
// gets +1 iff its common-neighbor count with the anchor exceeds
// (a+b)^2 (|S|-2) / 4. The comparison is exact over the decimal forms of a
// and b. Throws if S is empty or a == b.
std::vector<std::int8_t> pairwise_classify(const GeometricGraph& g,
                                           std::span<const VertexId> S,
                                           const EdgeProb& a,
                                           const EdgeProb& b);

// Labels S_new from a fully labeled reference set: pick the majority
// reference class m (ties go to +1), then threshold each vertex's edge count
// into that class against (a+b) |ref_m| / 2, with the orientation flipped
// when a < b. ref_labels must align with S_ref and contain no zeros.
std::vector<std::int8_t> propagate(const GeometricGraph& g,
                                   std::span<const VertexId> S_ref,
                                   std::span<const std::int8_t> ref_labels,
                                   std::span<const VertexId> S_new,
                                   const EdgeProb& a, const EdgeProb& b);

// Full first phase over a connected visibility graph: root block by
// pairwise_classify, the rest in BFS order against their parents, zeros on
// unoccupied blocks. A disconnected graph yields failed = true.
Phase1Result run_phase1(const GeometricGraph& g, const BlockGrid& grid,
                        const VisibilityGraph& vg, const ModelParams& params);

// Diagnostic dump: one line per block with the labels of its vertices.
void dump_phase1(std::ostream& os, const BlockGrid& grid,
                 const Phase1Result& result);

}  // namespace gsbm

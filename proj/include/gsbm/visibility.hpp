// visibility.hpp — graph over sufficiently occupied blocks, its BFS
// propagation order, and unoccupied-cluster diagnostics.
#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "gsbm/geometry.hpp"

namespace gsbm {

struct VisibilityGraph {
  double delta = 0;
  std::vector<BlockId> occupied;  // ascending block ids
  std::vector<std::vector<BlockId>> edges;  // adjacency, indexed like occupied
  std::vector<BlockId> order;  // BFS order over block ids; empty until built
  std::unordered_map<BlockId, BlockId> parent;  // over the BFS tree

  std::size_t occupied_count() const { return occupied.size(); }
};

// Blocks with strictly more than delta * log n vertices.
std::vector<BlockId> occupied_blocks(const BlockGrid& grid, double delta,
                                     double n);

// Builds the graph on occupied blocks with edges between mutually visible
// pairs. Neighbor candidates are limited to index offsets within the
// visibility radius, so each block examines O(1) candidates.
VisibilityGraph build_visibility_graph(const BlockGrid& grid, double delta,
                                       double n, int d);

// Standard connectivity; vacuously true for at most one occupied block.
bool connected(const VisibilityGraph& vg);

// BFS from `root`, frontier ties broken by ascending block id. Throws if the
// graph is disconnected or root is not occupied.
std::pair<std::vector<BlockId>, std::unordered_map<BlockId, BlockId>>
bfs_order(const VisibilityGraph& vg, BlockId root);

// Fills vg.order / vg.parent from the lowest-index occupied block.
void attach_bfs_order(VisibilityGraph& vg);

// Size of the largest cluster of unoccupied blocks under shared-edge-or-corner
// adjacency with toroidal wraparound.
std::int64_t max_unoccupied_cluster(const BlockGrid& grid, double delta,
                                    double n, int d);

// Number of blocks mutually visible to (and distinct from) a full-size block
// on an idealized unbounded grid with blocks of volume chi * log n. Pure
// function of (chi, d): offset o qualifies iff sum_k (|o_k|+1)^2 <= chi^(-2/d).
std::int64_t visible_block_count(double chi, int d);

}  // namespace gsbm

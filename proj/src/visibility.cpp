#include "gsbm/visibility.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

namespace gsbm {

namespace {

// Union-find over block ids.
class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n), size_(n, 1) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }
  std::size_t find(std::size_t x) {
    std::size_t root = x;
    while (parent_[root] != root) root = parent_[root];
    while (parent_[x] != root) x = std::exchange(parent_[x], root);
    return root;
  }
  void merge(std::size_t x, std::size_t y) {
    x = find(x);
    y = find(y);
    if (x == y) return;
    if (size_[x] < size_[y]) std::swap(x, y);
    parent_[y] = x;
    size_[x] += size_[y];
  }
  std::int64_t component_size(std::size_t x) { return size_[find(x)]; }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::int64_t> size_;
};

// Enumerates wrapped index-offset neighbors of a block, at most `reach` steps
// per axis, deduplicated when the torus folds offsets onto each other.
template <typename F>
void for_each_offset_neighbor(const BlockGrid& grid, BlockId b,
                              std::int64_t reach, F&& fn) {
  const int d = grid.dim();
  const std::int64_t per_axis = grid.per_axis();
  auto coords = grid.block_coords(b);
  std::vector<std::int64_t> lo(d), hi(d), cur(d);
  for (int k = 0; k < d; ++k) {
    if (2 * reach + 1 >= per_axis) {
      lo[k] = 0;
      hi[k] = per_axis - 1;
      cur[k] = 0;
    } else {
      lo[k] = -reach;
      hi[k] = reach;
      cur[k] = lo[k];
    }
  }
  std::vector<std::int64_t> nb(d);
  while (true) {
    for (int k = 0; k < d; ++k) {
      std::int64_t c = (lo[k] == 0) ? cur[k]
                                    : (coords[k] + cur[k] + per_axis) % per_axis;
      nb[k] = c;
    }
    BlockId other = grid.block_id(nb);
    if (other != b) fn(other);
    int k = d - 1;
    while (k >= 0 && cur[k] == hi[k]) {
      cur[k] = lo[k];
      --k;
    }
    if (k < 0) break;
    ++cur[k];
  }
}

}  // namespace

std::vector<BlockId> occupied_blocks(const BlockGrid& grid, double delta,
                                     double n) {
  if (!(delta > 0))
    throw std::invalid_argument("occupied_blocks: delta must be > 0");
  double threshold = delta * std::log(n);
  std::vector<BlockId> out;
  for (BlockId b = 0; b < grid.block_count(); ++b)
    if (static_cast<double>(grid.block_size(b)) > threshold)
      out.push_back(b);
  return out;
}

VisibilityGraph build_visibility_graph(const BlockGrid& grid, double delta,
                                       double n, int d) {
  VisibilityGraph vg;
  vg.delta = delta;
  vg.occupied = occupied_blocks(grid, delta, n);
  vg.edges.assign(vg.occupied.size(), {});

  std::unordered_map<BlockId, std::size_t> slot;
  slot.reserve(vg.occupied.size());
  for (std::size_t i = 0; i < vg.occupied.size(); ++i)
    slot.emplace(vg.occupied[i], i);

  double radius = visibility_radius(n, d);
  auto reach = static_cast<std::int64_t>(
      std::ceil(radius / grid.block_side())) + 1;
  for (std::size_t i = 0; i < vg.occupied.size(); ++i) {
    BlockId b = vg.occupied[i];
    for_each_offset_neighbor(grid, b, reach, [&](BlockId other) {
      if (other <= b) return;  // each unordered pair once
      auto it = slot.find(other);
      if (it == slot.end()) return;
      if (blocks_mutually_visible(b, other, grid, n, d)) {
        vg.edges[i].push_back(other);
        vg.edges[it->second].push_back(b);
      }
    });
  }
  for (auto& nb : vg.edges) std::sort(nb.begin(), nb.end());
  return vg;
}

bool connected(const VisibilityGraph& vg) {
  if (vg.occupied.size() <= 1) return true;
  std::unordered_map<BlockId, std::size_t> slot;
  for (std::size_t i = 0; i < vg.occupied.size(); ++i)
    slot.emplace(vg.occupied[i], i);
  std::vector<char> seen(vg.occupied.size(), 0);
  std::deque<std::size_t> queue{0};
  seen[0] = 1;
  std::size_t reached = 1;
  while (!queue.empty()) {
    std::size_t i = queue.front();
    queue.pop_front();
    for (BlockId nb : vg.edges[i]) {
      std::size_t j = slot.at(nb);
      if (!seen[j]) {
        seen[j] = 1;
        ++reached;
        queue.push_back(j);
      }
    }
  }
  return reached == vg.occupied.size();
}

std::pair<std::vector<BlockId>, std::unordered_map<BlockId, BlockId>>
bfs_order(const VisibilityGraph& vg, BlockId root) {
  std::unordered_map<BlockId, std::size_t> slot;
  for (std::size_t i = 0; i < vg.occupied.size(); ++i)
    slot.emplace(vg.occupied[i], i);
  if (!slot.count(root))
    throw std::invalid_argument("bfs_order: root is not an occupied block");

  std::vector<BlockId> order;
  std::unordered_map<BlockId, BlockId> parent;
  std::vector<char> seen(vg.occupied.size(), 0);
  std::deque<BlockId> queue{root};
  seen[slot.at(root)] = 1;
  while (!queue.empty()) {
    BlockId b = queue.front();
    queue.pop_front();
    order.push_back(b);
    // adjacency lists are sorted, so frontier ties break by ascending id
    for (BlockId nb : vg.edges[slot.at(b)]) {
      std::size_t j = slot.at(nb);
      if (!seen[j]) {
        seen[j] = 1;
        parent[nb] = b;
        queue.push_back(nb);
      }
    }
  }
  if (order.size() != vg.occupied.size())
    throw std::invalid_argument("bfs_order: visibility graph is disconnected");
  return {std::move(order), std::move(parent)};
}

void attach_bfs_order(VisibilityGraph& vg) {
  if (vg.occupied.empty()) return;
  auto [order, parent] = bfs_order(vg, vg.occupied.front());
  vg.order = std::move(order);
  vg.parent = std::move(parent);
}

std::int64_t max_unoccupied_cluster(const BlockGrid& grid, double delta,
                                    double n, int d) {
  double threshold = delta * std::log(n);
  std::vector<char> unocc(grid.block_count());
  for (BlockId b = 0; b < grid.block_count(); ++b)
    unocc[b] = static_cast<double>(grid.block_size(b)) <= threshold;

  UnionFind uf(grid.block_count());
  for (BlockId b = 0; b < grid.block_count(); ++b) {
    if (!unocc[b]) continue;
    for_each_offset_neighbor(grid, b, 1, [&](BlockId other) {
      if (unocc[other]) uf.merge(b, other);
    });
  }
  std::int64_t best = 0;
  for (BlockId b = 0; b < grid.block_count(); ++b)
    if (unocc[b]) best = std::max(best, uf.component_size(b));
  (void)d;
  return best;
}

std::int64_t visible_block_count(double chi, int d) {
  if (!(chi > 0)) throw std::invalid_argument("visible_block_count: chi <= 0");
  double bound = std::pow(chi, -2.0 / d);
  auto reach = static_cast<std::int64_t>(std::floor(std::sqrt(bound))) + 1;
  std::vector<std::int64_t> off(d, -reach);
  std::int64_t count = 0;
  while (true) {
    double s = 0;
    bool zero = true;
    for (int k = 0; k < d; ++k) {
      double t = static_cast<double>(std::llabs(off[k])) + 1;
      s += t * t;
      if (off[k] != 0) zero = false;
    }
    if (!zero && s <= bound) ++count;
    int k = d - 1;
    while (k >= 0 && off[k] == reach) off[k--] = -reach;
    if (k < 0) break;
    ++off[k];
  }
  return count;
}

}  // namespace gsbm

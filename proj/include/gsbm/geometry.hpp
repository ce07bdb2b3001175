// geometry.hpp — toroidal metric, unit-ball volumes, and the block partition
// of the region [-n^(1/d)/2, n^(1/d)/2]^d.
#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace gsbm {

using VertexId = std::uint32_t;
using BlockId = std::int64_t;

// Side length of the region, n^(1/d).
double region_side(double n, int d);

// Radius within which two vertices are mutually visible, (log n)^(1/d).
double visibility_radius(double n, int d);

// Volume of the d-dimensional unit Euclidean ball. Throws on d < 1.
double unit_ball_volume(int d);

// Wrapped distance of two scalars on a circle of circumference `side`.
double torus_axis_distance(double a, double b, double side);

// Euclidean norm of the per-coordinate wrapped differences. Throws on
// dimension mismatch.
double torus_distance(std::span<const double> u, std::span<const double> v,
                      double side);
double torus_distance(std::span<const double> u, std::span<const double> v,
                      double n, int d);

// Flat storage for a set of d-dimensional points.
class PointSet {
 public:
  PointSet() = default;
  explicit PointSet(int dim) : dim_(dim) {}
  PointSet(int dim, std::vector<double> flat);

  int dim() const { return dim_; }
  std::size_t size() const { return dim_ == 0 ? 0 : flat_.size() / dim_; }
  std::span<const double> operator[](std::size_t i) const {
    return {flat_.data() + i * dim_, static_cast<std::size_t>(dim_)};
  }
  void push_back(std::span<const double> p);
  const std::vector<double>& flat() const { return flat_; }

 private:
  int dim_ = 0;
  std::vector<double> flat_;
};

// Partition of the region into axis-aligned blocks of volume chi * log n.
// Blocks are cubes of a fixed side except the last block per axis, which
// absorbs the remainder (ceil convention). Ids are axis-major with the last
// axis fastest; the corner block at (-side/2, ..., -side/2) has id 0.
class BlockGrid {
 public:
  static BlockGrid build(const PointSet& points, double n, double chi);

  int dim() const { return d_; }
  double n() const { return n_; }
  double chi() const { return chi_; }
  double block_side() const { return block_side_; }
  std::int64_t per_axis() const { return per_axis_; }
  std::int64_t block_count() const { return block_count_; }
  std::size_t vertex_count() const { return vertex_block_.size(); }

  // Block containing a point; points exactly on a boundary belong to the
  // higher-index block, except the region's upper edge, which folds into the
  // last block.
  BlockId block_of_point(std::span<const double> p) const;

  BlockId block_of_vertex(VertexId v) const { return vertex_block_[v]; }
  std::span<const VertexId> vertices(BlockId b) const;
  std::int64_t block_size(BlockId b) const {
    return offsets_[b + 1] - offsets_[b];
  }

  std::vector<std::int64_t> block_coords(BlockId b) const;
  BlockId block_id(std::span<const std::int64_t> coords) const;

  // Per-axis closed interval [lo, hi] covered by index k along one axis.
  std::pair<double, double> axis_interval(std::int64_t k) const;

  // Exact supremum of the toroidal distance between the two closed blocks,
  // combined per axis from wrapped center distances and half-extents.
  double sup_distance(BlockId i, BlockId j) const;

 private:
  int d_ = 0;
  double n_ = 0;
  double chi_ = 0;
  double side_len_ = 0;    // region side n^(1/d)
  double block_side_ = 0;  // cube side (chi log n)^(1/d)
  std::int64_t per_axis_ = 0;
  std::int64_t block_count_ = 0;
  std::vector<std::int64_t> offsets_;  // CSR over block ids
  std::vector<VertexId> ids_;
  std::vector<BlockId> vertex_block_;
};

// True iff the supremum of toroidal distances between the two closed blocks
// is at most (log n)^(1/d).
bool blocks_mutually_visible(BlockId i, BlockId j, const BlockGrid& grid,
                             double n, int d);

}  // namespace gsbm

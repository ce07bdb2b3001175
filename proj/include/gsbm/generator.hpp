// generator.hpp — sampling of model instances: Poisson point process on the
// torus, +/-1 labels, and distance-gated Bernoulli edges.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gsbm/geometry.hpp"

namespace gsbm {

// Vertex labeling with values in {-1, 0, +1}; 0 marks unlabeled/uncertain.
using Labeling = std::vector<std::int8_t>;

// Edge probability carried both as a double and as an exact decimal fraction
// so that threshold tests can be decided in integer arithmetic. At most six
// fractional digits are accepted.
struct EdgeProb {
  double value = 0;
  std::int64_t num = 0;
  std::int64_t den = 1;
  std::string text;  // normalized decimal form, echoed in outputs

  static EdgeProb parse(std::string_view s);
  static EdgeProb from_ratio(std::int64_t num, std::int64_t den);
};

struct ModelParams {
  double lambda = 1;
  double n = 2;
  EdgeProb a;
  EdgeProb b;
  int d = 1;

  // Throws std::invalid_argument on out-of-range fields. a == b is legal for
  // sampling; recovery algorithms enforce a != b at their own entry points.
  void validate() const;
};

// Uniform-cell index over the region with cell side >= visibility radius.
// Axes with fewer than three cells fall back to scanning every cell, so
// tiny regions degrade to all-pairs along that axis.
class SpatialIndex {
 public:
  SpatialIndex() = default;
  SpatialIndex(const PointSet& points, double n, int d);

  // Calls fn(v) for every vertex in the 3^d cell neighborhood of u's cell
  // (or of the cell containing point p). Includes u itself.
  template <typename F>
  void for_each_candidate(std::span<const double> p, F&& fn) const {
    std::int64_t cell = cell_of(p);
    for_each_neighbor_cell(cell, [&](std::int64_t c) {
      for (VertexId v : cell_vertices(c)) fn(v);
    });
  }

  std::int64_t cell_of(std::span<const double> p) const;
  std::int64_t cell_count() const { return cell_count_; }
  std::span<const VertexId> cell_vertices(std::int64_t c) const;

  template <typename F>
  void for_each_neighbor_cell(std::int64_t cell, F&& fn) const {
    std::vector<std::int64_t> coords(d_);
    std::int64_t rest = cell;
    for (int k = d_ - 1; k >= 0; --k) {
      coords[k] = rest % per_axis_;
      rest /= per_axis_;
    }
    scan_axis(0, 0, coords, fn);
  }

 private:
  template <typename F>
  void scan_axis(int axis, std::int64_t prefix,
                 const std::vector<std::int64_t>& coords, F&& fn) const {
    if (axis == d_) {
      fn(prefix);
      return;
    }
    if (per_axis_ >= 3) {
      for (std::int64_t off = -1; off <= 1; ++off) {
        std::int64_t c = (coords[axis] + off + per_axis_) % per_axis_;
        scan_axis(axis + 1, prefix * per_axis_ + c, coords, fn);
      }
    } else {
      for (std::int64_t c = 0; c < per_axis_; ++c)
        scan_axis(axis + 1, prefix * per_axis_ + c, coords, fn);
    }
  }

  int d_ = 0;
  double side_len_ = 0;
  double cell_side_ = 0;
  std::int64_t per_axis_ = 1;
  std::int64_t cell_count_ = 1;
  std::vector<std::int64_t> offsets_;
  std::vector<VertexId> ids_;
};

// A sampled instance: positions, ground-truth labels, adjacency restricted to
// the visibility radius, and the spatial index used to enumerate candidates.
struct GeometricGraph {
  double n = 0;
  int d = 1;
  double radius = 0;  // (log n)^(1/d)
  PointSet positions;
  Labeling truth;  // +/-1, no zeros
  std::vector<std::int64_t> adj_offsets;
  std::vector<VertexId> adj;  // per-vertex sorted neighbor ids
  SpatialIndex index;

  std::size_t vertex_count() const { return truth.size(); }
  std::size_t edge_count() const { return adj.size() / 2; }
  std::span<const VertexId> neighbors(VertexId u) const {
    return {adj.data() + adj_offsets[u],
            static_cast<std::size_t>(adj_offsets[u + 1] - adj_offsets[u])};
  }
  bool has_edge(VertexId u, VertexId v) const;
};

// Poisson(lambda * n) many points, i.i.d. uniform on the region.
// Deterministic given the seed.
PointSet sample_point_process(const ModelParams& params, std::uint64_t seed);

// I.i.d. uniform +/-1 labels.
Labeling sample_labels(std::size_t count, std::uint64_t seed);

// Bernoulli(a or b) edges over mutually visible pairs, each unordered pair
// sampled exactly once, in deterministic grid-sweep order.
GeometricGraph sample_edges(PointSet positions, Labeling truth,
                            const ModelParams& params, std::uint64_t seed);

// Full instance from a master seed (separate streams for points, labels,
// edges).
GeometricGraph sample_instance(const ModelParams& params,
                               std::uint64_t master_seed);

// |{v in S \ {u0, u} : v adjacent to both u0 and u}|.
std::int64_t common_neighbor_count(const GeometricGraph& g, VertexId u0,
                                   VertexId u, std::span<const VertexId> S);

// Line-oriented text dump: header, vertex lines, edge lines. Coordinates are
// written with 17 significant digits so the round trip is exact.
void dump_instance(std::ostream& os, const GeometricGraph& g,
                   const ModelParams& params, std::uint64_t seed);
struct LoadedInstance {
  GeometricGraph graph;
  ModelParams params;
  std::uint64_t seed = 0;
};
LoadedInstance load_instance(std::istream& is);

}  // namespace gsbm

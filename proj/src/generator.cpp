#include "gsbm/generator.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "gsbm/rng.hpp"

namespace gsbm {

EdgeProb EdgeProb::parse(std::string_view s) {
  if (s.empty()) throw std::invalid_argument("EdgeProb: empty string");
  if (s.find_first_not_of("0123456789.") != std::string_view::npos)
    throw std::invalid_argument("EdgeProb: expected an unsigned decimal");
  std::string_view ip = s, fp;
  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    ip = s.substr(0, dot);
    fp = s.substr(dot + 1);
  }
  if (ip.empty() && fp.empty())
    throw std::invalid_argument("EdgeProb: no digits");
  if (fp.size() > 6)
    throw std::invalid_argument(
        "EdgeProb: at most 6 fractional digits supported");
  std::int64_t whole = 0;
  if (!ip.empty()) {
    auto r = std::from_chars(ip.data(), ip.data() + ip.size(), whole);
    if (r.ec != std::errc{} || r.ptr != ip.data() + ip.size() || whole < 0)
      throw std::invalid_argument("EdgeProb: bad integer part");
  }
  std::int64_t frac = 0, den = 1;
  if (!fp.empty()) {
    auto r = std::from_chars(fp.data(), fp.data() + fp.size(), frac);
    if (r.ec != std::errc{} || r.ptr != fp.data() + fp.size() || frac < 0)
      throw std::invalid_argument("EdgeProb: bad fractional part");
    for (std::size_t i = 0; i < fp.size(); ++i) den *= 10;
  }
  return from_ratio(whole * den + frac, den);
}

EdgeProb EdgeProb::from_ratio(std::int64_t num, std::int64_t den) {
  if (den <= 0 || num < 0) throw std::invalid_argument("EdgeProb: bad ratio");
  std::int64_t g = std::gcd(num, den);
  EdgeProb p;
  p.num = num / g;
  p.den = den / g;
  p.value = static_cast<double>(p.num) / static_cast<double>(p.den);
  // Normalized decimal echo (den is a power of ten before reduction, so the
  // expansion below terminates within 6 digits).
  std::ostringstream os;
  std::int64_t ip = p.num / p.den, rem = p.num % p.den;
  os << ip;
  if (rem != 0) {
    os << '.';
    for (int i = 0; i < 6 && rem != 0; ++i) {
      rem *= 10;
      os << rem / p.den;
      rem %= p.den;
    }
  }
  p.text = os.str();
  return p;
}

void ModelParams::validate() const {
  if (!(lambda > 0)) throw std::invalid_argument("params: lambda must be > 0");
  if (!(n >= 2)) throw std::invalid_argument("params: n must be >= 2");
  if (d < 1) throw std::invalid_argument("params: d must be >= 1");
  if (a.value < 0 || a.value > 1 || b.value < 0 || b.value > 1)
    throw std::invalid_argument("params: a, b must lie in [0, 1]");
}

SpatialIndex::SpatialIndex(const PointSet& points, double n, int d) : d_(d) {
  side_len_ = region_side(n, d);
  double radius = visibility_radius(n, d);
  per_axis_ = std::max<std::int64_t>(
      1, static_cast<std::int64_t>(std::floor(side_len_ / radius)));
  cell_side_ = side_len_ / static_cast<double>(per_axis_);
  cell_count_ = 1;
  for (int k = 0; k < d_; ++k) cell_count_ *= per_axis_;

  const std::size_t m = points.size();
  std::vector<std::int64_t> cell(m);
  std::vector<std::int64_t> counts(cell_count_, 0);
  for (std::size_t i = 0; i < m; ++i) {
    cell[i] = cell_of(points[i]);
    ++counts[cell[i]];
  }
  offsets_.assign(cell_count_ + 1, 0);
  for (std::int64_t c = 0; c < cell_count_; ++c)
    offsets_[c + 1] = offsets_[c] + counts[c];
  ids_.resize(m);
  std::vector<std::int64_t> cursor(offsets_.begin(), offsets_.end() - 1);
  for (std::size_t i = 0; i < m; ++i)
    ids_[cursor[cell[i]]++] = static_cast<VertexId>(i);
}

std::int64_t SpatialIndex::cell_of(std::span<const double> p) const {
  std::int64_t id = 0;
  for (int k = 0; k < d_; ++k) {
    double shifted = p[k] + side_len_ / 2;
    auto idx = static_cast<std::int64_t>(std::floor(shifted / cell_side_));
    if (idx < 0) idx = 0;
    if (idx >= per_axis_) idx = per_axis_ - 1;
    id = id * per_axis_ + idx;
  }
  return id;
}

std::span<const VertexId> SpatialIndex::cell_vertices(std::int64_t c) const {
  return {ids_.data() + offsets_[c],
          static_cast<std::size_t>(offsets_[c + 1] - offsets_[c])};
}

bool GeometricGraph::has_edge(VertexId u, VertexId v) const {
  auto nb = neighbors(u);
  return std::binary_search(nb.begin(), nb.end(), v);
}

PointSet sample_point_process(const ModelParams& params, std::uint64_t seed) {
  params.validate();
  auto rng = stream_rng(seed, Stream::Points);
  std::poisson_distribution<std::int64_t> count_dist(params.lambda * params.n);
  std::int64_t count = count_dist(rng);
  double half = region_side(params.n, params.d) / 2;
  std::uniform_real_distribution<double> coord(-half, half);
  std::vector<double> flat;
  flat.reserve(static_cast<std::size_t>(count) * params.d);
  for (std::int64_t i = 0; i < count; ++i)
    for (int k = 0; k < params.d; ++k) flat.push_back(coord(rng));
  return PointSet(params.d, std::move(flat));
}

Labeling sample_labels(std::size_t count, std::uint64_t seed) {
  auto rng = stream_rng(seed, Stream::Labels);
  std::uniform_int_distribution<int> coin(0, 1);
  Labeling labels(count);
  for (auto& s : labels) s = coin(rng) ? 1 : -1;
  return labels;
}

GeometricGraph sample_edges(PointSet positions, Labeling truth,
                            const ModelParams& params, std::uint64_t seed) {
  params.validate();
  if (positions.size() != truth.size())
    throw std::invalid_argument("sample_edges: positions/labels size mismatch");

  GeometricGraph g;
  g.n = params.n;
  g.d = params.d;
  g.radius = visibility_radius(params.n, params.d);
  g.index = SpatialIndex(positions, params.n, params.d);
  double side = region_side(params.n, params.d);

  auto rng = stream_rng(seed, Stream::Edges);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::vector<std::pair<VertexId, VertexId>> edges;
  auto try_pair = [&](VertexId u, VertexId v) {
    if (torus_distance(positions[u], positions[v], side) > g.radius) return;
    double p = (truth[u] == truth[v]) ? params.a.value : params.b.value;
    if (unit(rng) < p) edges.emplace_back(u, v);
  };

  // Sweep cells in id order; each unordered cell pair is visited once, and
  // within a pair every vertex pair is taken with u < v.
  for (std::int64_t c = 0; c < g.index.cell_count(); ++c) {
    g.index.for_each_neighbor_cell(c, [&](std::int64_t c2) {
      if (c2 < c) return;
      auto vs1 = g.index.cell_vertices(c);
      if (c2 == c) {
        for (std::size_t i = 0; i < vs1.size(); ++i)
          for (std::size_t j = i + 1; j < vs1.size(); ++j)
            try_pair(std::min(vs1[i], vs1[j]), std::max(vs1[i], vs1[j]));
      } else {
        auto vs2 = g.index.cell_vertices(c2);
        for (VertexId u : vs1)
          for (VertexId v : vs2)
            try_pair(std::min(u, v), std::max(u, v));
      }
    });
  }

  const std::size_t m = positions.size();
  std::vector<std::int64_t> deg(m, 0);
  for (auto [u, v] : edges) {
    ++deg[u];
    ++deg[v];
  }
  g.adj_offsets.assign(m + 1, 0);
  for (std::size_t i = 0; i < m; ++i)
    g.adj_offsets[i + 1] = g.adj_offsets[i] + deg[i];
  g.adj.resize(edges.size() * 2);
  std::vector<std::int64_t> cursor(g.adj_offsets.begin(),
                                   g.adj_offsets.end() - 1);
  for (auto [u, v] : edges) {
    g.adj[cursor[u]++] = v;
    g.adj[cursor[v]++] = u;
  }
  for (std::size_t i = 0; i < m; ++i)
    std::sort(g.adj.begin() + g.adj_offsets[i],
              g.adj.begin() + g.adj_offsets[i + 1]);

  g.positions = std::move(positions);
  g.truth = std::move(truth);
  return g;
}

GeometricGraph sample_instance(const ModelParams& params,
                               std::uint64_t master_seed) {
  PointSet pts = sample_point_process(params, master_seed);
  Labeling truth = sample_labels(pts.size(), master_seed);
  return sample_edges(std::move(pts), std::move(truth), params, master_seed);
}

std::int64_t common_neighbor_count(const GeometricGraph& g, VertexId u0,
                                   VertexId u, std::span<const VertexId> S) {
  if (u0 == u) throw std::invalid_argument("common_neighbor_count: u0 == u");
  auto a = g.neighbors(u0);
  auto b = g.neighbors(u);
  std::int64_t count = 0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] < b[j]) {
      ++i;
    } else if (a[i] > b[j]) {
      ++j;
    } else {
      VertexId v = a[i];
      if (v != u0 && v != u &&
          std::find(S.begin(), S.end(), v) != S.end())
        ++count;
      ++i;
      ++j;
    }
  }
  return count;
}

void dump_instance(std::ostream& os, const GeometricGraph& g,
                   const ModelParams& params, std::uint64_t seed) {
  os << "gsbm v1 " << params.d << ' ' << params.lambda << ' ' << params.n
     << ' ' << params.a.text << ' ' << params.b.text << ' ' << seed << '\n';
  char buf[40];
  for (std::size_t i = 0; i < g.vertex_count(); ++i) {
    os << "v " << i;
    auto p = g.positions[i];
    for (double x : p) {
      std::snprintf(buf, sizeof buf, "%.17g", x);
      os << ' ' << buf;
    }
    os << ' ' << static_cast<int>(g.truth[i]) << '\n';
  }
  for (VertexId u = 0; u < g.vertex_count(); ++u)
    for (VertexId v : g.neighbors(u))
      if (u < v) os << "e " << u << ' ' << v << '\n';
}

LoadedInstance load_instance(std::istream& is) {
  LoadedInstance out;
  std::string tag, version, a_text, b_text;
  is >> tag >> version;
  if (tag != "gsbm" || version != "v1")
    throw std::invalid_argument("load_instance: bad header");
  is >> out.params.d >> out.params.lambda >> out.params.n >> a_text >>
      b_text >> out.seed;
  out.params.a = EdgeProb::parse(a_text);
  out.params.b = EdgeProb::parse(b_text);
  out.params.validate();

  std::vector<double> flat;
  Labeling truth;
  std::vector<std::pair<VertexId, VertexId>> edges;
  std::string kind;
  while (is >> kind) {
    if (kind == "v") {
      std::size_t id;
      is >> id;
      if (id != truth.size())
        throw std::invalid_argument("load_instance: vertex ids out of order");
      double half = region_side(out.params.n, out.params.d) / 2;
      for (int k = 0; k < out.params.d; ++k) {
        double x;
        is >> x;
        if (!(x >= -half && x <= half))
          throw std::invalid_argument(
              "load_instance: coordinate outside the region");
        flat.push_back(x);
      }
      int label;
      is >> label;
      truth.push_back(static_cast<std::int8_t>(label));
    } else if (kind == "e") {
      VertexId u, v;
      is >> u >> v;
      edges.emplace_back(u, v);
    } else {
      throw std::invalid_argument("load_instance: unknown line kind");
    }
  }

  GeometricGraph& g = out.graph;
  g.n = out.params.n;
  g.d = out.params.d;
  g.radius = visibility_radius(g.n, g.d);
  g.positions = PointSet(out.params.d, std::move(flat));
  g.truth = std::move(truth);
  g.index = SpatialIndex(g.positions, g.n, g.d);
  const std::size_t m = g.truth.size();
  std::vector<std::int64_t> deg(m, 0);
  for (auto [u, v] : edges) {
    ++deg[u];
    ++deg[v];
  }
  g.adj_offsets.assign(m + 1, 0);
  for (std::size_t i = 0; i < m; ++i)
    g.adj_offsets[i + 1] = g.adj_offsets[i] + deg[i];
  g.adj.resize(edges.size() * 2);
  std::vector<std::int64_t> cursor(g.adj_offsets.begin(),
                                   g.adj_offsets.end() - 1);
  for (auto [u, v] : edges) {
    g.adj[cursor[u]++] = v;
    g.adj[cursor[v]++] = u;
  }
  for (std::size_t i = 0; i < m; ++i)
    std::sort(g.adj.begin() + g.adj_offsets[i],
              g.adj.begin() + g.adj_offsets[i + 1]);
  return out;
}

}  // namespace gsbm

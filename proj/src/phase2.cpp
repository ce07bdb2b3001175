#include "gsbm/phase2.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gsbm {

namespace {

constexpr double kLogClamp = 1e-12;

double clamp01(double p) {
  return std::min(1.0 - kLogClamp, std::max(kLogClamp, p));
}

void tally(DegreeProfile& p, std::int8_t label, bool edge) {
  if (label == 1) {
    if (edge)
      ++p.plus_edges;
    else
      ++p.plus_non_edges;
  } else if (label == -1) {
    if (edge)
      ++p.minus_edges;
    else
      ++p.minus_non_edges;
  }
}

}  // namespace

DegreeProfile degree_profile(const GeometricGraph& g, VertexId u,
                             const Labeling& sigma,
                             std::span<const VertexId> S) {
  DegreeProfile p;
  auto pu = g.positions[u];
  for (VertexId v : S) {
    if (v == u) continue;
    if (torus_distance(pu, g.positions[v], g.n, g.d) > g.radius) continue;
    tally(p, sigma[v], g.has_edge(u, v));
  }
  return p;
}

DegreeProfile degree_profile(const GeometricGraph& g, VertexId u,
                             const Labeling& sigma) {
  DegreeProfile p;
  auto pu = g.positions[u];
  g.index.for_each_candidate(pu, [&](VertexId v) {
    if (v == u) return;
    if (torus_distance(pu, g.positions[v], g.n, g.d) > g.radius) return;
    tally(p, sigma[v], g.has_edge(u, v));
  });
  return p;
}

double log_likelihood_score(const DegreeProfile& profile, double a, double b) {
  if (!(a >= 0 && a <= 1 && b >= 0 && b <= 1))
    throw std::invalid_argument("log_likelihood_score: a, b must be in [0,1]");
  double edge_term = std::log(clamp01(a) / clamp01(b));
  double gap_term = std::log((1 - clamp01(a)) / (1 - clamp01(b)));
  return edge_term * static_cast<double>(profile.plus_edges -
                                         profile.minus_edges) +
         gap_term * static_cast<double>(profile.plus_non_edges -
                                        profile.minus_non_edges);
}

std::int8_t refine_vertex(const GeometricGraph& g, VertexId u,
                          const Labeling& sigma, double a, double b) {
  double score = log_likelihood_score(degree_profile(g, u, sigma), a, b);
  return score < 0 ? -1 : 1;  // sign(0) := +1
}

std::int8_t genie_estimate(const GeometricGraph& g, VertexId u,
                           const Labeling& truth, double a, double b) {
  if (std::find(truth.begin(), truth.end(), 0) != truth.end())
    throw std::invalid_argument("genie_estimate: truth labeling has zeros");
  return refine_vertex(g, u, truth, a, b);
}

Labeling refine_all(const GeometricGraph& g, const Labeling& sigma, double a,
                    double b) {
  if (sigma.size() != g.vertex_count())
    throw std::invalid_argument("refine_all: labeling size mismatch");
  double edge_term = std::log(clamp01(a) / clamp01(b));
  double gap_term = std::log((1 - clamp01(a)) / (1 - clamp01(b)));
  if (!(a >= 0 && a <= 1 && b >= 0 && b <= 1))
    throw std::invalid_argument("refine_all: a, b must be in [0,1]");

  Labeling out(g.vertex_count());
  std::vector<std::uint8_t> is_neighbor(g.vertex_count(), 0);
  for (VertexId u = 0; u < g.vertex_count(); ++u) {
    for (VertexId v : g.neighbors(u)) is_neighbor[v] = 1;
    DegreeProfile p;
    auto pu = g.positions[u];
    g.index.for_each_candidate(pu, [&](VertexId v) {
      if (v == u) return;
      if (torus_distance(pu, g.positions[v], g.n, g.d) > g.radius) return;
      tally(p, sigma[v], is_neighbor[v]);
    });
    double score =
        edge_term * static_cast<double>(p.plus_edges - p.minus_edges) +
        gap_term * static_cast<double>(p.plus_non_edges - p.minus_non_edges);
    out[u] = score < 0 ? -1 : 1;
    for (VertexId v : g.neighbors(u)) is_neighbor[v] = 0;
  }
  return out;
}

Labeling genie_all(const GeometricGraph& g, double a, double b) {
  if (std::find(g.truth.begin(), g.truth.end(), 0) != g.truth.end())
    throw std::invalid_argument("genie_all: truth labeling has zeros");
  return refine_all(g, g.truth, a, b);
}

}  // namespace gsbm

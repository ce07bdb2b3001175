// phase2.hpp — degree profiles, the Poisson-test score, and label refinement.
#pragma once

#include <cstdint>

#include "gsbm/generator.hpp"

namespace gsbm {

// Edge / visible-non-edge counts from a vertex, split by the reference
// labeling. Zero-labeled vertices contribute to no count.
struct DegreeProfile {
  std::int64_t plus_edges = 0;       // edges to sigma = +1
  std::int64_t plus_non_edges = 0;   // visible non-edges to sigma = +1
  std::int64_t minus_edges = 0;      // edges to sigma = -1
  std::int64_t minus_non_edges = 0;  // visible non-edges to sigma = -1

  bool operator==(const DegreeProfile&) const = default;
};

// Profile of u against an explicit reference set S (u itself is skipped).
DegreeProfile degree_profile(const GeometricGraph& g, VertexId u,
                             const Labeling& sigma,
                             std::span<const VertexId> S);

// Profile of u against the whole vertex set, via the spatial index.
DegreeProfile degree_profile(const GeometricGraph& g, VertexId u,
                             const Labeling& sigma);

// log(a/b) (plus_edges - minus_edges)
//   + log((1-a)/(1-b)) (plus_non_edges - minus_non_edges),
// with a, b clamped into [1e-12, 1 - 1e-12] inside the logarithms only.
// Antisymmetric under swapping the two reference classes. Throws when a or b
// lies outside [0, 1].
double log_likelihood_score(const DegreeProfile& profile, double a, double b);

// Sign of the score of u against `sigma` over the whole vertex set; exact
// zero resolves to +1.
std::int8_t refine_vertex(const GeometricGraph& g, VertexId u,
                          const Labeling& sigma, double a, double b);

// refine_vertex with the ground truth as reference; throws if `truth`
// contains zeros.
std::int8_t genie_estimate(const GeometricGraph& g, VertexId u,
                           const Labeling& truth, double a, double b);

// Refines every vertex; equals refine_vertex pointwise but shares scratch
// space across vertices.
Labeling refine_all(const GeometricGraph& g, const Labeling& sigma, double a,
                    double b);

// refine_all against the truth (the genie-aided baseline).
Labeling genie_all(const GeometricGraph& g, double a, double b);

}  // namespace gsbm

// metrics.hpp — agreement and recovery statistics, per-neighborhood error
// dispersion, and the one-dimensional empty-block segment diagnostic.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gsbm/generator.hpp"

namespace gsbm {

// Matched fraction maximized over a global sign flip; zero labels mismatch
// under both signs. Throws on domain mismatch or zeros in the truth.
double agreement(const Labeling& sigma, const Labeling& truth);

// Matches under the better global sign, as an integer (exact recovery means
// this equals the vertex count).
std::size_t agreement_matches(const Labeling& sigma, const Labeling& truth);

// For each vertex, the number of other vertices within the visibility radius
// whose sigma label differs from relative_sign * truth.
std::vector<std::int64_t> neighborhood_mistakes(const GeometricGraph& g,
                                                const Labeling& sigma,
                                                const Labeling& truth,
                                                int relative_sign);

// Number of maximal circular runs of nonempty blocks separated by empty
// blocks; 0 when everything is empty, 1 when nothing is. Requires d = 1.
std::int64_t count_empty_block_segments(const BlockGrid& grid);

// One Monte-Carlo trial's record.
struct TrialResult {
  std::uint64_t seed = 0;
  int d = 1;
  double lambda = 0;
  double n = 0;
  std::string a_text, b_text;
  double chi = 0;
  double delta = 0;
  std::int64_t n_vertices = 0;
  std::int64_t n_edges = 0;
  bool visibility_connected = false;
  double phase1_agreement = 0;
  double final_agreement = 0;
  bool exact_success = false;
  std::int64_t max_block_mistakes = 0;
  std::int64_t max_nbhd_mistakes = 0;
  double t_generate_ms = 0;
  double t_phase1_ms = 0;
  double t_phase2_ms = 0;
};

}  // namespace gsbm

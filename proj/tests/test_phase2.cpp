// Phase-2 tests: degree profiles, the likelihood score, refinement, the
// genie baseline, and the Poisson moments of profiles.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "gsbm/metrics.hpp"
#include "gsbm/phase2.hpp"
#include "gsbm/theory.hpp"

using namespace gsbm;

namespace {

ModelParams make(double lambda, double n, const char* a, const char* b,
                 int d) {
  return ModelParams{lambda, n, EdgeProb::parse(a), EdgeProb::parse(b), d};
}

Labeling random_sigma(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Labeling sigma(count);
  for (auto& s : sigma)
    s = static_cast<std::int8_t>(static_cast<int>(rng() % 3) - 1);
  return sigma;
}

}  // namespace

TEST_CASE("profile of an isolated vertex is empty") {
  ModelParams params = make(0.02, 100, "0.5", "0.25", 1);
  // sparse enough that some seed yields exactly one point
  for (int s = 0; s < 50; ++s) {
    GeometricGraph g = sample_instance(params, s);
    if (g.vertex_count() != 1) continue;
    DegreeProfile p = degree_profile(g, 0, g.truth);
    CHECK(p == DegreeProfile{});
    CHECK(refine_vertex(g, 0, g.truth, 0.5, 0.25) == 1);  // score 0 -> +1
    return;
  }
  FAIL("no single-vertex instance found");
}

TEST_CASE("with all pairs connected there are no visible non-edges") {
  ModelParams params = make(2, 500, "1", "1", 1);
  GeometricGraph g = sample_instance(params, 3);
  REQUIRE(g.vertex_count() > 2);
  for (VertexId u = 0; u < g.vertex_count(); ++u) {
    DegreeProfile p = degree_profile(g, u, g.truth);
    CHECK(p.plus_non_edges == 0);
    CHECK(p.minus_non_edges == 0);
  }
}

TEST_CASE("zero-labeled vertices contribute to no count") {
  ModelParams params = make(2, 800, "0.7", "0.3", 2);
  GeometricGraph g = sample_instance(params, 8);
  Labeling sigma = random_sigma(g.vertex_count(), 1);
  std::vector<VertexId> nonzero;
  for (VertexId v = 0; v < g.vertex_count(); ++v)
    if (sigma[v] != 0) nonzero.push_back(v);
  std::vector<VertexId> everyone;
  for (VertexId v = 0; v < g.vertex_count(); ++v) everyone.push_back(v);
  for (VertexId u = 0; u < std::min<VertexId>(50, g.vertex_count()); ++u)
    CHECK(degree_profile(g, u, sigma, everyone) ==
          degree_profile(g, u, sigma, nonzero));
}

TEST_CASE("likelihood score evaluates the printed formula") {
  DegreeProfile p{5, 2, 3, 4};
  double got = log_likelihood_score(p, 0.9, 0.1);
  CHECK(got == doctest::Approx(4 * std::log(9.0)));  // 2 ln 9 - 2 ln(1/9)
  CHECK(log_likelihood_score(p, 0.4, 0.4) == 0.0);
  CHECK_THROWS_AS(log_likelihood_score(p, 1.2, 0.5), std::invalid_argument);

  // swapping the classes negates the score
  DegreeProfile swapped{3, 4, 5, 2};
  CHECK(log_likelihood_score(swapped, 0.9, 0.1) == doctest::Approx(-got));
}

TEST_CASE("score is antisymmetric under a global sign flip of the labeling") {
  ModelParams params = make(2, 1000, "0.8", "0.2", 1);
  GeometricGraph g = sample_instance(params, 21);
  Labeling sigma = random_sigma(g.vertex_count(), 2);
  Labeling flipped(sigma);
  for (auto& s : flipped) s = -s;
  for (VertexId u = 0; u < std::min<VertexId>(100, g.vertex_count()); ++u) {
    double forward =
        log_likelihood_score(degree_profile(g, u, sigma), 0.8, 0.2);
    double backward =
        log_likelihood_score(degree_profile(g, u, flipped), 0.8, 0.2);
    CHECK(forward == doctest::Approx(-backward).epsilon(1e-12));
    if (forward != 0)
      CHECK(refine_vertex(g, u, sigma, 0.8, 0.2) ==
            -refine_vertex(g, u, flipped, 0.8, 0.2));
  }
}

TEST_CASE("refinement against the truth is the genie, over many instances") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> unit(0, 1);
  for (int inst = 0; inst < 25; ++inst) {
    double lambda = 0.5 + 2 * unit(rng);
    int d = 1 + static_cast<int>(unit(rng) * 2);
    ModelParams params{lambda, 300 + 500 * unit(rng),
                       EdgeProb::from_ratio(10 + rng() % 80, 100),
                       EdgeProb::from_ratio(5 + rng() % 90, 100), d};
    GeometricGraph g = sample_instance(params, 1300 + inst);
    if (g.vertex_count() == 0) continue;
    Labeling genie = genie_all(g, params.a.value, params.b.value);
    for (VertexId u = 0; u < g.vertex_count(); ++u) {
      CHECK(genie[u] ==
            genie_estimate(g, u, g.truth, params.a.value, params.b.value));
      CHECK(genie[u] ==
            refine_vertex(g, u, g.truth, params.a.value, params.b.value));
    }
  }
}

TEST_CASE("genie refuses a truth labeling with zeros") {
  ModelParams params = make(1, 200, "0.6", "0.2", 1);
  GeometricGraph g = sample_instance(params, 5);
  REQUIRE(g.vertex_count() > 0);
  GeometricGraph broken = g;
  broken.truth[0] = 0;
  CHECK_THROWS_AS(genie_all(broken, 0.6, 0.2), std::invalid_argument);
}

TEST_CASE("batched refinement matches the per-vertex route") {
  ModelParams params = make(2, 2000, "0.75", "0.3", 2);
  GeometricGraph g = sample_instance(params, 33);
  Labeling sigma = random_sigma(g.vertex_count(), 3);
  Labeling batched = refine_all(g, sigma, 0.75, 0.3);
  for (VertexId u = 0; u < g.vertex_count(); ++u)
    CHECK(batched[u] == refine_vertex(g, u, sigma, 0.75, 0.3));
}

TEST_CASE("clamped degenerate probabilities keep the genie exact when every "
          "vertex sees its own community") {
  ModelParams params = make(3, 300, "1", "0", 1);
  for (int s = 0; s < 10; ++s) {
    GeometricGraph g = sample_instance(params, 90 + s);
    if (g.vertex_count() < 2) continue;
    // condition: every vertex has a visible same-community vertex
    bool eligible = true;
    for (VertexId u = 0; u < g.vertex_count() && eligible; ++u) {
      bool found = false;
      for (VertexId v = 0; v < g.vertex_count(); ++v) {
        if (v == u || g.truth[v] != g.truth[u]) continue;
        if (torus_distance(g.positions[u], g.positions[v], g.n, g.d) <=
            g.radius)
          found = true;
      }
      eligible = found;
    }
    if (!eligible) continue;
    Labeling genie = genie_all(g, params.a.value, params.b.value);
    CHECK(agreement(genie, g.truth) == 1.0);
  }
}

TEST_CASE("profile moments match the four-type Poisson intensities") {
  // across-seed means; the per-coordinate intensity is
  // lambda nu_d log n [a, 1-a, b, 1-b] / 2 for a positive vertex
  ModelParams params = make(2, 5000, "0.7", "0.2", 1);
  const int seeds = 40;
  IntensityVector per_log =
      profile_intensity_plus(params.lambda, params.d, 0.7, 0.2);
  std::array<double, 4> want{};
  for (int k = 0; k < 4; ++k) want[k] = per_log[k] * std::log(params.n);

  std::array<std::vector<double>, 4> per_seed;
  for (auto& v : per_seed) v.reserve(seeds);
  for (int s = 0; s < seeds; ++s) {
    GeometricGraph g = sample_instance(params, 5600 + s);
    std::array<double, 4> sum{};
    std::int64_t count = 0;
    for (VertexId u = 0; u < g.vertex_count(); ++u) {
      if (g.truth[u] != 1) continue;
      DegreeProfile p = degree_profile(g, u, g.truth);
      sum[0] += static_cast<double>(p.plus_edges);
      sum[1] += static_cast<double>(p.plus_non_edges);
      sum[2] += static_cast<double>(p.minus_edges);
      sum[3] += static_cast<double>(p.minus_non_edges);
      ++count;
    }
    REQUIRE(count > 0);
    for (int k = 0; k < 4; ++k)
      per_seed[k].push_back(sum[k] / static_cast<double>(count));
  }
  for (int k = 0; k < 4; ++k) {
    double mean = 0;
    for (double v : per_seed[k]) mean += v;
    mean /= seeds;
    double var = 0;
    for (double v : per_seed[k]) var += (v - mean) * (v - mean);
    var /= (seeds - 1);
    double stderr_mean = std::sqrt(var / seeds);
    CHECK(std::fabs(mean - want[k]) <= 3 * stderr_mean);
  }
}

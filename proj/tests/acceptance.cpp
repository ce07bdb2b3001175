// acceptance.cpp — end-to-end criteria for the library: generator fidelity,
// edge and common-neighbor laws, oracle equivalences, recovery above and
// failure below the threshold, visibility connectivity, runtime scaling, and
// the divergence calculus. One pass/fail line per criterion.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "gsbm/experiment.hpp"
#include "gsbm/phase1.hpp"
#include "gsbm/phase2.hpp"
#include "gsbm/rng.hpp"
#include "gsbm/theory.hpp"
#include "gsbm/visibility.hpp"

using namespace gsbm;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Check {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
  void note(const std::string& what) {
    if (!detail.empty()) detail += "; ";
    detail += what;
  }
};

std::string fmt(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof buf, format, args);
  va_end(args);
  return buf;
}

ModelParams make_params(double lambda, double n, const char* a, const char* b,
                        int d) {
  return ModelParams{lambda, n, EdgeProb::parse(a), EdgeProb::parse(b), d};
}

// ---------------------------------------------------------------- criterion 1
Check generator_fidelity() {
  Check c;
  auto start = Clock::now();
  const ModelParams params = make_params(2, 1e5, "0.5", "0.5", 1);
  const int seeds = 200;
  const double chi = 0.5;
  const double block_mean = params.lambda * chi * std::log(params.n);

  double count_sum = 0;
  double block_sum = 0, block_sumsq = 0;
  std::int64_t block_samples = 0;
  for (int s = 0; s < seeds; ++s) {
    PointSet pts = sample_point_process(params, 1000 + s);
    count_sum += static_cast<double>(pts.size());
    BlockGrid grid = BlockGrid::build(pts, params.n, chi);
    for (BlockId b = 0; b + 1 < grid.block_count(); ++b) {  // full blocks only
      auto size = static_cast<double>(grid.block_size(b));
      block_sum += size;
      block_sumsq += size * size;
      ++block_samples;
    }
  }

  double mean_count = count_sum / seeds;
  double bound = 3 * std::sqrt(params.lambda * params.n / seeds);
  c.require(std::fabs(mean_count - params.lambda * params.n) <= bound,
            fmt("mean vertex count %.1f outside %.1f +/- %.1f", mean_count,
                params.lambda * params.n, bound));

  auto nb = static_cast<double>(block_samples);
  double mean_block = block_sum / nb;
  double var_block = (block_sumsq - nb * mean_block * mean_block) / (nb - 1);
  double z_mean = (mean_block - block_mean) / std::sqrt(block_mean / nb);
  double z_disp = (var_block / mean_block - 1) * std::sqrt((nb - 1) / 2);
  c.require(std::fabs(z_mean) <= 3, fmt("block count mean z = %.2f", z_mean));
  c.require(std::fabs(z_disp) <= 3,
            fmt("block count dispersion z = %.2f", z_disp));

  double elapsed = seconds_since(start);
  c.require(elapsed < 60, fmt("took %.1f s (budget 60 s)", elapsed));
  c.note(fmt("mean |V| = %.1f, block mean z = %.2f, dispersion z = %.2f, "
             "%.1f s",
             mean_count, z_mean, z_disp, elapsed));
  return c;
}

// ---------------------------------------------------------------- criterion 2
Check edge_law() {
  Check c;
  const ModelParams params = make_params(2, 1e4, "0.7", "0.2", 1);
  std::int64_t same_pairs = 0, same_edges = 0;
  std::int64_t diff_pairs = 0, diff_edges = 0;
  for (int s = 0; s < 3; ++s) {
    GeometricGraph g = sample_instance(params, 2000 + s);
    // every edge respects the visibility radius
    for (VertexId u = 0; u < g.vertex_count(); ++u)
      for (VertexId v : g.neighbors(u))
        if (u < v)
          c.require(torus_distance(g.positions[u], g.positions[v], g.n, g.d) <=
                        g.radius,
                    "edge beyond the visibility radius");
    // pooled edge rates over mutually visible pairs
    for (VertexId u = 0; u < g.vertex_count(); ++u) {
      auto pu = g.positions[u];
      g.index.for_each_candidate(pu, [&](VertexId v) {
        if (v <= u) return;
        if (torus_distance(pu, g.positions[v], g.n, g.d) > g.radius) return;
        bool edge = g.has_edge(u, v);
        if (g.truth[u] == g.truth[v]) {
          ++same_pairs;
          same_edges += edge;
        } else {
          ++diff_pairs;
          diff_edges += edge;
        }
      });
    }
  }
  double intra = static_cast<double>(same_edges) / same_pairs;
  double inter = static_cast<double>(diff_edges) / diff_pairs;
  c.require(same_pairs + diff_pairs >= 100000, "too few visible pairs pooled");
  c.require(std::fabs(intra - 0.7) <= 0.01,
            fmt("intra rate %.4f vs 0.7 +/- 0.01", intra));
  c.require(std::fabs(inter - 0.2) <= 0.01,
            fmt("inter rate %.4f vs 0.2 +/- 0.01", inter));
  c.note(fmt("intra %.4f (n=%lld), inter %.4f (n=%lld)", intra,
             static_cast<long long>(same_pairs), inter,
             static_cast<long long>(diff_pairs)));
  return c;
}

// ---------------------------------------------------------------- criterion 3
Check common_neighbor_law() {
  Check c;
  const ModelParams params = make_params(4, 1000, "0.7", "0.2", 1);
  const double p_same =
      (params.a.value * params.a.value + params.b.value * params.b.value) / 2;
  const double p_diff = params.a.value * params.b.value;
  DerivedParams dp = solve_parameters(params, params.n, 0.5);

  // One uniformly drawn partner per instance, classified by its label after
  // the draw; any label-dependent selection rule would skew the composition
  // of the remaining block members and bias the count.
  double num_same = 0, var_same = 0, num_diff = 0, var_diff = 0;
  std::int64_t n_same = 0, n_diff = 0;
  int seed = 0;
  while ((n_same < 1000 || n_diff < 1000) && seed < 8000) {
    std::uint64_t s = 31000 + seed++;
    GeometricGraph g = sample_instance(params, s);
    BlockGrid grid = BlockGrid::build(g.positions, params.n, 0.5);
    auto occupied = occupied_blocks(grid, dp.delta, params.n);
    if (occupied.empty()) continue;
    auto block = grid.vertices(occupied.front());
    if (block.size() < 3) continue;
    VertexId u0 = *std::min_element(block.begin(), block.end());
    auto m = static_cast<double>(block.size());
    std::vector<VertexId> others(block.begin(), block.end());
    others.erase(std::find(others.begin(), others.end(), u0));
    std::mt19937_64 pick(mix64(s));
    VertexId partner = others[pick() % others.size()];
    auto count =
        static_cast<double>(common_neighbor_count(g, u0, partner, block));
    if (g.truth[partner] == g.truth[u0]) {
      if (n_same >= 1000) continue;
      num_same += count - (m - 2) * p_same;
      var_same += (m - 2) * p_same * (1 - p_same);
      ++n_same;
    } else {
      if (n_diff >= 1000) continue;
      num_diff += count - (m - 2) * p_diff;
      var_diff += (m - 2) * p_diff * (1 - p_diff);
      ++n_diff;
    }
  }
  c.require(n_same >= 1000 && n_diff >= 1000, "too few pairs collected");
  double z_same = num_same / std::sqrt(var_same);
  double z_diff = num_diff / std::sqrt(var_diff);
  c.require(std::fabs(z_same) <= 3, fmt("same-label z = %.2f", z_same));
  c.require(std::fabs(z_diff) <= 3, fmt("cross-label z = %.2f", z_diff));
  c.note(fmt("same-label z = %.2f (n=%lld), cross-label z = %.2f (n=%lld)",
             z_same, static_cast<long long>(n_same), z_diff,
             static_cast<long long>(n_diff)));
  return c;
}

// ---------------------------------------------------------------- criterion 4
DegreeProfile brute_profile(const GeometricGraph& g, VertexId u,
                            const Labeling& sigma,
                            std::span<const VertexId> S) {
  DegreeProfile p;
  for (VertexId v : S) {
    if (v == u) continue;
    if (torus_distance(g.positions[u], g.positions[v], g.n, g.d) > g.radius)
      continue;
    bool edge = false;
    for (VertexId w : g.neighbors(u)) edge |= (w == v);
    if (sigma[v] == 1) {
      if (edge)
        ++p.plus_edges;
      else
        ++p.plus_non_edges;
    } else if (sigma[v] == -1) {
      if (edge)
        ++p.minus_edges;
      else
        ++p.minus_non_edges;
    }
  }
  return p;
}

Check oracle_equivalence() {
  Check c;
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> unit(0, 1);

  // refine against the truth coincides with the genie estimator, and the
  // batched refinement matches the per-vertex route
  for (int inst = 0; inst < 100 && c.ok; ++inst) {
    double lambda = 0.5 + 2.5 * unit(rng);
    double n = 50 + 950 * unit(rng);
    int d = 1 + static_cast<int>(unit(rng) * 2);
    int ai = static_cast<int>(unit(rng) * 100);
    int bi = static_cast<int>(unit(rng) * 100);
    if (ai == bi) bi = (bi + 7) % 101;
    ModelParams params{lambda, n, EdgeProb::from_ratio(ai, 100),
                       EdgeProb::from_ratio(bi, 100), d};
    GeometricGraph g = sample_instance(params, 500 + inst);
    if (g.vertex_count() == 0) continue;
    Labeling genie = genie_all(g, params.a.value, params.b.value);
    Labeling refined = refine_all(g, g.truth, params.a.value, params.b.value);
    for (VertexId u = 0; u < g.vertex_count(); ++u) {
      c.require(genie[u] == genie_estimate(g, u, g.truth, params.a.value,
                                           params.b.value),
                fmt("genie mismatch at vertex %u (instance %d)", u, inst));
      c.require(refined[u] == genie[u],
                fmt("refine(truth) != genie at vertex %u (instance %d)", u,
                    inst));
      if (!c.ok) break;
    }
  }

  // degree profiles and neighborhood mistake counts against brute-force
  // double loops on small instances
  int checked = 0;
  for (int inst = 0; inst < 500 && c.ok; ++inst) {
    ModelParams params{1.0, static_cast<double>(8 + inst % 23), EdgeProb::parse("0.6"),
                       EdgeProb::parse("0.3"), 1 + inst % 2};
    GeometricGraph g = sample_instance(params, 7000 + inst);
    auto count = static_cast<VertexId>(g.vertex_count());
    if (count == 0 || count > 30) continue;
    ++checked;
    std::mt19937_64 inner(inst);
    Labeling sigma(count);
    std::vector<VertexId> everyone(count);
    for (VertexId v = 0; v < count; ++v) {
      sigma[v] = static_cast<std::int8_t>(static_cast<int>(inner() % 3) - 1);
      everyone[v] = v;
    }
    std::vector<VertexId> subset;
    for (VertexId v = 0; v < count; ++v)
      if (inner() % 2) subset.push_back(v);
    for (VertexId u = 0; u < count; ++u) {
      c.require(degree_profile(g, u, sigma) ==
                    brute_profile(g, u, sigma, everyone),
                fmt("degree profile (full) mismatch, instance %d", inst));
      c.require(degree_profile(g, u, sigma, subset) ==
                    brute_profile(g, u, sigma, subset),
                fmt("degree profile (subset) mismatch, instance %d", inst));
      if (!c.ok) break;
    }
    auto mistakes = neighborhood_mistakes(g, sigma, g.truth, 1);
    for (VertexId u = 0; u < count && c.ok; ++u) {
      std::int64_t brute = 0;
      for (VertexId v = 0; v < count; ++v) {
        if (v == u) continue;
        if (torus_distance(g.positions[u], g.positions[v], g.n, g.d) >
            g.radius)
          continue;
        if (sigma[v] != g.truth[v]) ++brute;
      }
      c.require(mistakes[u] == brute,
                fmt("neighborhood mistakes mismatch, instance %d", inst));
    }
  }
  c.require(checked >= 200, fmt("only %d small instances checked", checked));
  c.note(fmt("100 genie instances, %d brute-force instances", checked));
  return c;
}

// ---------------------------------------------------------------- criterion 5
Check above_threshold_recovery() {
  Check c;
  auto start = Clock::now();
  const ModelParams params = make_params(3, 1e5, "0.9", "0.1", 1);
  const double chi = 0.5;  // finite-size block size; keeps every block filled
  const int seeds = 20;

  std::vector<int> success(seeds, 0), dispersed(seeds, 0);
  DerivedParams dp = solve_parameters(params, params.n, chi);
  parallel_for(seeds, [&](std::size_t s) {
    GeometricGraph g = sample_instance(params, 41000 + s);
    BlockGrid grid = BlockGrid::build(g.positions, params.n, chi);
    VisibilityGraph vg =
        build_visibility_graph(grid, dp.delta, params.n, params.d);
    if (!connected(vg)) return;
    attach_bfs_order(vg);
    Phase1Result coarse = run_phase1(g, grid, vg, params);
    if (coarse.failed) return;
    std::int64_t labeled = 0, wrong = 0;
    std::int8_t sign = g.truth[coarse.root_vertex];
    for (std::size_t v = 0; v < g.vertex_count(); ++v) {
      if (coarse.labels[v] == 0) continue;
      ++labeled;
      if (coarse.labels[v] != sign * g.truth[v]) ++wrong;
    }
    double fraction = labeled ? static_cast<double>(wrong) / labeled : 0.0;
    dispersed[s] = fraction <= 0.01;
    Labeling final_labels =
        refine_all(g, coarse.labels, params.a.value, params.b.value);
    success[s] = agreement_matches(final_labels, g.truth) == g.vertex_count();
  });

  int successes = std::accumulate(success.begin(), success.end(), 0);
  int dispersed_ok = std::accumulate(dispersed.begin(), dispersed.end(), 0);
  double elapsed = seconds_since(start);
  c.require(successes >= 16,
            fmt("exact recovery in %d/20 seeds (need 16)", successes));
  c.require(dispersed_ok >= 18,
            fmt("phase-1 mistake fraction <= 1%% in %d/20 seeds (need 18)",
                dispersed_ok));
  c.require(elapsed <= 600, fmt("took %.0f s (budget 600 s)", elapsed));
  c.note(fmt("exact recovery %d/20, phase-1 dispersed %d/20, %.0f s",
             successes, dispersed_ok, elapsed));
  return c;
}

// ---------------------------------------------------------------- criterion 6
Check below_threshold_failure() {
  Check c;
  const int seeds = 20;

  const ModelParams dense = make_params(1.05, 1e5, "0.9", "0.1", 1);
  std::vector<int> genie_fail(seeds, 0);
  parallel_for(seeds, [&](std::size_t s) {
    GeometricGraph g = sample_instance(dense, 52000 + s);
    Labeling genie = genie_all(g, dense.a.value, dense.b.value);
    genie_fail[s] = agreement_matches(genie, g.truth) != g.vertex_count();
  });
  int failures = std::accumulate(genie_fail.begin(), genie_fail.end(), 0);
  c.require(failures >= 10,
            fmt("genie failed in %d/20 seeds (need 10)", failures));

  const ModelParams sparse = make_params(0.5, 1e5, "0.9", "0.1", 1);
  int split = 0;
  for (int s = 0; s < seeds; ++s) {
    PointSet pts = sample_point_process(sparse, 63000 + s);
    BlockGrid grid = BlockGrid::build(pts, sparse.n, 1.0);
    if (count_empty_block_segments(grid) >= 2) ++split;
  }
  c.require(split >= 18,
            fmt("interval split into >= 2 segments in %d/20 seeds (need 18)",
                split));
  c.note(fmt("genie failures %d/20, segment splits %d/20", failures, split));
  return c;
}

// ---------------------------------------------------------------- criterion 7
Check visibility_connectivity() {
  Check c;
  const ModelParams params = make_params(1, 1e5, "0.9", "0.1", 2);
  const double chi = 0.05;  // finite-size block size, see README notes
  const int seeds = 40;
  DerivedParams dp = solve_parameters(params, params.n, chi);
  const std::int64_t visible = visible_block_count(chi, params.d);

  std::vector<int> conn(seeds, 0), small_clusters(seeds, 0);
  std::vector<std::int64_t> largest(seeds, 0);
  parallel_for(seeds, [&](std::size_t s) {
    PointSet pts = sample_point_process(params, 74000 + s);
    BlockGrid grid = BlockGrid::build(pts, params.n, chi);
    VisibilityGraph vg =
        build_visibility_graph(grid, dp.delta, params.n, params.d);
    conn[s] = connected(vg);
    largest[s] = max_unoccupied_cluster(grid, dp.delta, params.n, params.d);
    small_clusters[s] = largest[s] < visible;
  });
  int connected_count = std::accumulate(conn.begin(), conn.end(), 0);
  int cluster_count =
      std::accumulate(small_clusters.begin(), small_clusters.end(), 0);
  std::int64_t worst = *std::max_element(largest.begin(), largest.end());
  c.require(connected_count >= 38,
            fmt("connected in %d/40 seeds (need 38)", connected_count));
  c.require(cluster_count >= 38,
            fmt("unoccupied clusters below %lld in %d/40 seeds (need 38); "
                "largest seen %lld",
                static_cast<long long>(visible), cluster_count,
                static_cast<long long>(worst)));
  c.note(fmt("connected %d/40, clusters < %lld in %d/40 (largest %lld)",
             connected_count, static_cast<long long>(visible), cluster_count,
             static_cast<long long>(worst)));
  return c;
}

// ---------------------------------------------------------------- criterion 8
Check runtime_scaling() {
  Check c;
  const int seeds = 5;
  auto total_ms = [&](double n) {
    TrialPoint point;
    point.params = make_params(3, n, "0.9", "0.1", 1);
    point.chi_override = 0.5;
    double total = 0;
    for (int s = 0; s < seeds; ++s) {
      TrialResult r = run_trial(point, 85000 + s);
      if (!r.visibility_connected) c.require(false, "trial reported FAIL");
      total += r.t_phase1_ms + r.t_phase2_ms;
    }
    return total / seeds;
  };
  double small = total_ms(1e5);
  double large = total_ms(2e5);
  double ratio = large / small;
  c.require(ratio <= 2.6, fmt("time ratio %.2f exceeds 2.6", ratio));
  c.note(fmt("mean two-phase time %.0f ms at n=1e5, %.0f ms at n=2e5, "
             "ratio %.2f",
             small, large, ratio));
  return c;
}

// ---------------------------------------------------------------- criterion 9
Check divergence_calculus() {
  Check c;
  const struct {
    double lambda;
    int d;
  } settings[] = {{2.0, 1}, {1.2, 2}};
  for (auto [lambda, d] : settings) {
    for (int i = 0; i < 10; ++i) {
      for (int j = 0; j < 10; ++j) {
        double a = 0.05 + 0.1 * i;
        double b = 0.05 + 0.1 * j;
        IntensityVector x = profile_intensity_plus(lambda, d, a, b);
        IntensityVector y = profile_intensity_minus(lambda, d, a, b);
        DivergenceMax got = ch_divergence_plus(x, y);
        double want = ch_threshold_expression(lambda, a, b, d);
        c.require(std::fabs(got.value - want) <= 1e-9,
                  fmt("divergence at a=%.2f b=%.2f off by %.2e", a, b,
                      got.value - want));
        c.require(std::fabs(got.t - 0.5) <= 1e-6,
                  fmt("argmax t = %.8f at a=%.2f b=%.2f", got.t, a, b));
        ModelParams ab{lambda, 1e4, EdgeProb::from_ratio(5 + 10 * i, 100),
                       EdgeProb::from_ratio(5 + 10 * j, 100), d};
        ModelParams ba{lambda, 1e4, ab.b, ab.a, d};
        c.require(classify_regime(ab) == classify_regime(ba),
                  fmt("regime not symmetric at a=%.2f b=%.2f", a, b));
        if (!c.ok) return c;
      }
    }
  }
  c.note("200 grid points within 1e-9, argmax within 1e-6, regimes "
         "symmetric");
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  struct Criterion {
    int id;
    const char* name;
    std::function<Check()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "generator fidelity", generator_fidelity},
      {2, "edge-law fidelity", edge_law},
      {3, "common-neighbor law", common_neighbor_law},
      {4, "oracle equivalences", oracle_equivalence},
      {5, "above-threshold recovery", above_threshold_recovery},
      {6, "below-threshold failure", below_threshold_failure},
      {7, "visibility connectivity", visibility_connectivity},
      {8, "runtime scaling", runtime_scaling},
      {9, "divergence calculus", divergence_calculus},
  };

  std::set<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.insert(std::atoi(argv[i]));

  int failures = 0;
  for (const auto& criterion : criteria) {
    if (!wanted.empty() && !wanted.count(criterion.id)) continue;
    Check result = criterion.run();
    std::printf("[%s] criterion %d: %s%s%s\n", result.ok ? "PASS" : "FAIL",
                criterion.id, criterion.name,
                result.detail.empty() ? "" : " -- ", result.detail.c_str());
    std::fflush(stdout);
    failures += result.ok ? 0 : 1;
  }
  return failures;
}

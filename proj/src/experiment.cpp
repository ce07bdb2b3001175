#include "gsbm/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "gsbm/phase1.hpp"
#include "gsbm/phase2.hpp"
#include "gsbm/rng.hpp"
#include "gsbm/visibility.hpp"

namespace gsbm {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start)
      .count();
}

std::string format_double(double x) {
  char buf[40];
  auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

// Finite-size fallbacks for regimes where the asymptotic constants are
// infeasible; keeps diagnostics-only runs (below threshold, tiny n) going.
double fallback_chi(const ModelParams& p, double n) {
  double cap = 0.98 * max_visible_chi(p.d);
  double occupancy = 12 / (p.lambda * std::log(n));
  return std::min(cap, std::max(cap / 256, occupancy));
}

double fallback_delta(double n) { return 0.5 / std::log(n); }

}  // namespace

Estimator parse_estimator(const std::string& name) {
  if (name == "two-phase") return Estimator::TwoPhase;
  if (name == "genie") return Estimator::Genie;
  if (name == "phase1-only") return Estimator::Phase1Only;
  throw std::invalid_argument("unknown estimator: " + name);
}

const char* to_string(Estimator e) {
  switch (e) {
    case Estimator::TwoPhase: return "two-phase";
    case Estimator::Genie: return "genie";
    case Estimator::Phase1Only: return "phase1-only";
  }
  return "?";
}

std::pair<double, double> effective_chi_delta(const TrialPoint& point) {
  try {
    DerivedParams dp = solve_parameters(point.params, point.params.n,
                                        point.chi_override,
                                        point.delta_override);
    return {dp.chi, dp.delta};
  } catch (const std::exception&) {
    double chi = point.chi_override.value_or(
        fallback_chi(point.params, point.params.n));
    double delta =
        point.delta_override.value_or(fallback_delta(point.params.n));
    return {chi, delta};
  }
}

TrialResult run_trial(const TrialPoint& point, std::uint64_t seed) {
  const ModelParams& params = point.params;
  params.validate();
  auto [chi, delta] = effective_chi_delta(point);

  TrialResult r;
  r.seed = seed;
  r.d = params.d;
  r.lambda = params.lambda;
  r.n = params.n;
  r.a_text = params.a.text;
  r.b_text = params.b.text;
  r.chi = chi;
  r.delta = delta;

  auto t0 = Clock::now();
  GeometricGraph g = sample_instance(params, seed);
  r.t_generate_ms = ms_since(t0);
  r.n_vertices = static_cast<std::int64_t>(g.vertex_count());
  r.n_edges = static_cast<std::int64_t>(g.edge_count());

  BlockGrid grid = BlockGrid::build(g.positions, params.n, chi);
  VisibilityGraph vg = build_visibility_graph(grid, delta, params.n, params.d);
  r.visibility_connected = connected(vg);

  Labeling final_labels;
  if (point.estimator == Estimator::Genie) {
    auto t2 = Clock::now();
    final_labels = genie_all(g, params.a.value, params.b.value);
    r.t_phase2_ms = ms_since(t2);
  } else {
    if (r.visibility_connected) attach_bfs_order(vg);
    auto t1 = Clock::now();
    Phase1Result coarse = run_phase1(g, grid, vg, params);
    r.t_phase1_ms = ms_since(t1);
    if (coarse.failed || !r.visibility_connected) {
      // propagation cannot run; record the failure as data
      r.phase1_agreement = 0;
      r.final_agreement = 0;
      r.exact_success = false;
      return r;
    }
    r.phase1_agreement = agreement(coarse.labels, g.truth);
    r.max_block_mistakes = coarse.max_occupied_block_mistakes;
    if (g.vertex_count() > 0) {
      auto nbhd = neighborhood_mistakes(g, coarse.labels, g.truth,
                                        g.truth[coarse.root_vertex]);
      r.max_nbhd_mistakes = *std::max_element(nbhd.begin(), nbhd.end());
    }
    if (point.estimator == Estimator::Phase1Only) {
      final_labels = std::move(coarse.labels);
    } else {
      auto t2 = Clock::now();
      final_labels = refine_all(g, coarse.labels, params.a.value,
                                params.b.value);
      r.t_phase2_ms = ms_since(t2);
    }
  }

  std::size_t matches = agreement_matches(final_labels, g.truth);
  r.final_agreement = g.truth.empty() ? 1.0
                                      : static_cast<double>(matches) /
                                            static_cast<double>(g.truth.size());
  r.exact_success = matches == g.truth.size();
  return r;
}

void SweepConfig::validate() const {
  if (trials < 1) throw std::invalid_argument("sweep: trials must be >= 1");
  if (a_values.empty() || b_values.empty())
    throw std::invalid_argument("sweep: a and b are required");
  for (int d : d_values)
    for (double lambda : lambda_values)
      for (double n : n_values)
        for (const EdgeProb& a : a_values)
          for (const EdgeProb& b : b_values) {
            ModelParams p{lambda, n, a, b, d};
            p.validate();
          }
}

SweepConfig parse_config(std::istream& is) {
  SweepConfig cfg;
  cfg.d_values.clear();
  cfg.lambda_values.clear();
  cfg.n_values.clear();
  std::string line;
  while (std::getline(is, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      auto from = s.find_first_not_of(" \t\r");
      auto to = s.find_last_not_of(" \t\r");
      return from == std::string::npos ? std::string()
                                       : s.substr(from, to - from + 1);
    };
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw std::invalid_argument("config: bad line: " + line);
    if (key == "lambda")
      cfg.lambda_values.push_back(std::stod(value));
    else if (key == "n")
      cfg.n_values.push_back(std::stod(value));
    else if (key == "a")
      cfg.a_values.push_back(EdgeProb::parse(value));
    else if (key == "b")
      cfg.b_values.push_back(EdgeProb::parse(value));
    else if (key == "d")
      cfg.d_values.push_back(std::stoi(value));
    else if (key == "trials")
      cfg.trials = std::stoi(value);
    else if (key == "seed")
      cfg.base_seed = std::stoull(value);
    else if (key == "chi")
      cfg.chi_override = std::stod(value);
    else if (key == "delta")
      cfg.delta_override = std::stod(value);
    else if (key == "estimator")
      cfg.estimator = parse_estimator(value);
    else if (key == "out")
      cfg.out_path = value;
    else if (key == "timings")
      cfg.timings = value == "1" || value == "true";
    else
      throw std::invalid_argument("config: unknown key: " + key);
  }
  if (cfg.d_values.empty()) cfg.d_values.push_back(1);
  if (cfg.lambda_values.empty()) cfg.lambda_values.push_back(2);
  if (cfg.n_values.empty()) cfg.n_values.push_back(10000);
  return cfg;
}

SweepConfig parse_config_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::invalid_argument("config: cannot open " + path);
  return parse_config(is);
}

unsigned worker_count() {
  if (const char* env = std::getenv("GSBM_LAB_THREADS")) {
    int v = std::atoi(env);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? hw : 1;
}

void parallel_for(std::size_t count,
                  const std::function<void(std::size_t)>& fn) {
  unsigned workers = std::min<std::size_t>(worker_count(), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < count;
           i = next.fetch_add(1))
        fn(i);
    });
  for (auto& t : pool) t.join();
}

namespace {

const char* kCsvHeader =
    "trial_id,seed,d,lambda,n,a,b,chi,delta,n_vertices,n_edges,"
    "visibility_connected,phase1_agreement,final_agreement,exact_success,"
    "max_block_mistakes,max_nbhd_mistakes,t_generate_ms,t_phase1_ms,"
    "t_phase2_ms";

void write_row(std::ostream& os, std::size_t trial_id, const TrialResult& r) {
  os << trial_id << ',' << r.seed << ',' << r.d << ','
     << format_double(r.lambda) << ',' << format_double(r.n) << ','
     << r.a_text << ',' << r.b_text << ',' << format_double(r.chi) << ','
     << format_double(r.delta) << ',' << r.n_vertices << ',' << r.n_edges
     << ',' << (r.visibility_connected ? 1 : 0) << ','
     << format_double(r.phase1_agreement) << ','
     << format_double(r.final_agreement) << ',' << (r.exact_success ? 1 : 0)
     << ',' << r.max_block_mistakes << ',' << r.max_nbhd_mistakes << ','
     << format_double(r.t_generate_ms) << ',' << format_double(r.t_phase1_ms)
     << ',' << format_double(r.t_phase2_ms) << '\n';
}

void write_summary(std::ostream& os, std::span<const TrialResult> rs) {
  auto mean = [&](auto pick) {
    double s = 0;
    for (const auto& r : rs) s += static_cast<double>(pick(r));
    return s / static_cast<double>(rs.size());
  };
  auto max_of = [&](auto pick) {
    std::int64_t best = 0;
    for (const auto& r : rs)
      best = std::max(best, static_cast<std::int64_t>(pick(r)));
    return best;
  };
  const TrialResult& first = rs.front();
  os << "summary," << rs.size() << ',' << first.d << ','
     << format_double(first.lambda) << ',' << format_double(first.n) << ','
     << first.a_text << ',' << first.b_text << ','
     << format_double(first.chi) << ',' << format_double(first.delta) << ','
     << format_double(mean([](auto& r) { return r.n_vertices; })) << ','
     << format_double(mean([](auto& r) { return r.n_edges; })) << ','
     << format_double(
            mean([](auto& r) { return r.visibility_connected ? 1 : 0; }))
     << ',' << format_double(mean([](auto& r) { return r.phase1_agreement; }))
     << ',' << format_double(mean([](auto& r) { return r.final_agreement; }))
     << ',' << format_double(mean([](auto& r) { return r.exact_success ? 1 : 0; }))
     << ',' << max_of([](auto& r) { return r.max_block_mistakes; }) << ','
     << max_of([](auto& r) { return r.max_nbhd_mistakes; }) << ','
     << format_double(mean([](auto& r) { return r.t_generate_ms; })) << ','
     << format_double(mean([](auto& r) { return r.t_phase1_ms; })) << ','
     << format_double(mean([](auto& r) { return r.t_phase2_ms; })) << '\n';
}

}  // namespace

void run_sweep(const SweepConfig& config, std::ostream& os) {
  config.validate();

  std::vector<TrialPoint> points;
  for (int d : config.d_values)
    for (double lambda : config.lambda_values)
      for (double n : config.n_values)
        for (const EdgeProb& a : config.a_values)
          for (const EdgeProb& b : config.b_values) {
            TrialPoint tp;
            tp.params = ModelParams{lambda, n, a, b, d};
            tp.chi_override = config.chi_override;
            tp.delta_override = config.delta_override;
            tp.estimator = config.estimator;
            points.push_back(std::move(tp));
          }

  const std::size_t trials = static_cast<std::size_t>(config.trials);
  std::vector<TrialResult> results(points.size() * trials);
  parallel_for(results.size(), [&](std::size_t i) {
    std::size_t point_idx = i / trials, trial_idx = i % trials;
    std::uint64_t seed = derive_seed(config.base_seed, point_idx, trial_idx);
    TrialResult r = run_trial(points[point_idx], seed);
    if (!config.timings) {
      r.t_generate_ms = 0;
      r.t_phase1_ms = 0;
      r.t_phase2_ms = 0;
    }
    results[i] = std::move(r);
  });

  os << kCsvHeader << '\n';
  for (std::size_t p = 0; p < points.size(); ++p) {
    for (std::size_t t = 0; t < trials; ++t)
      write_row(os, p * trials + t, results[p * trials + t]);
    write_summary(os,
                  std::span(results).subspan(p * trials, trials));
  }
}

void run_sweep_to_file(const SweepConfig& config) {
  if (config.out_path.empty()) {
    throw std::invalid_argument("sweep: no output path");
  }
  std::ofstream os(config.out_path, std::ios::binary);
  if (!os)
    throw std::runtime_error("sweep: cannot write " + config.out_path);
  run_sweep(config, os);
}

ThresholdCurve threshold_curve(double a, double b, int d) {
  double denom = unit_ball_volume(d) *
                 (1 - std::sqrt(a * b) - std::sqrt((1 - a) * (1 - b)));
  ThresholdCurve out;
  if (denom <= 0) {
    out.lambda_star = std::numeric_limits<double>::infinity();
    out.lambda_star_effective = out.lambda_star;
    return out;
  }
  out.lambda_star = 1 / denom;
  out.lambda_star_effective =
      (d == 1) ? std::max(out.lambda_star, 1.0) : out.lambda_star;
  return out;
}

}  // namespace gsbm

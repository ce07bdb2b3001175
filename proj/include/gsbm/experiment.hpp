// experiment.hpp — seeded trials, parameter sweeps, and the CSV harness.
#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gsbm/metrics.hpp"
#include "gsbm/theory.hpp"

namespace gsbm {

enum class Estimator { TwoPhase, Genie, Phase1Only };

Estimator parse_estimator(const std::string& name);
const char* to_string(Estimator e);

struct TrialPoint {
  ModelParams params;
  std::optional<double> chi_override;
  std::optional<double> delta_override;
  Estimator estimator = Estimator::TwoPhase;
};

// Samples one instance, runs the selected estimator, and returns the full
// record. A disconnected visibility graph is data, not an error: the trial
// reports visibility_connected = false and exact_success = false.
TrialResult run_trial(const TrialPoint& point, std::uint64_t seed);

// chi/delta actually used for a point (solver defaults unless overridden;
// falls back to finite-size heuristics when the regime is infeasible).
std::pair<double, double> effective_chi_delta(const TrialPoint& point);

struct SweepConfig {
  std::vector<int> d_values{1};
  std::vector<double> lambda_values{2};
  std::vector<double> n_values{10000};
  std::vector<EdgeProb> a_values;
  std::vector<EdgeProb> b_values;
  int trials = 1;
  std::uint64_t base_seed = 1;
  std::optional<double> chi_override;
  std::optional<double> delta_override;
  Estimator estimator = Estimator::TwoPhase;
  std::string out_path;  // empty = stdout
  // Wall-clock columns are zeroed by default so the emitted file is
  // byte-for-byte reproducible; enable to record real timings.
  bool timings = false;

  void validate() const;
};

// Flat key = value text; repeated grid keys (d, lambda, n, a, b) accumulate.
// '#' starts a comment.
SweepConfig parse_config_file(const std::string& path);
SweepConfig parse_config(std::istream& is);

// One CSV row per trial in grid-major order (d, lambda, n, a, b major to
// minor; then trial index), one summary row per grid point. Trials run on a
// worker pool; output order is deterministic regardless of parallelism.
void run_sweep(const SweepConfig& config, std::ostream& os);
void run_sweep_to_file(const SweepConfig& config);

// Critical intensity 1 / [nu_d (1 - sqrt(ab) - sqrt((1-a)(1-b)))]; infinite
// when a = b. For d = 1 the effective threshold also accounts for the
// connectivity requirement lambda > 1.
struct ThresholdCurve {
  double lambda_star = 0;
  double lambda_star_effective = 0;  // max(lambda_star, 1) when d = 1
};
ThresholdCurve threshold_curve(double a, double b, int d);

// Worker cap: GSBM_LAB_THREADS when set, else hardware concurrency.
unsigned worker_count();

// Runs fn(0..count-1) across the worker pool; blocks until done.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace gsbm

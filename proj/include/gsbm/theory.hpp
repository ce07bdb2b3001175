// theory.hpp — Chernoff–Hellinger divergence calculus, recovery-regime
// classification, and the derived-constant solver.
#pragma once

#include <array>
#include <optional>

#include "gsbm/generator.hpp"

namespace gsbm {

// Four-type Poisson intensity (per unit log n).
struct IntensityVector {
  std::array<double, 4> v{};
  double operator[](int i) const { return v[i]; }
};

// Expected degree profile per unit log n conditioned on the vertex label:
// lambda * nu_d * [a, 1-a, b, 1-b] / 2 for a positive vertex, with the
// community-swapped version for a negative one.
IntensityVector profile_intensity_plus(double lambda, int d, double a,
                                       double b);
IntensityVector profile_intensity_minus(double lambda, int d, double a,
                                        double b);

// D_t(x||y) = sum_i t x_i + (1-t) y_i - x_i^t y_i^(1-t). Throws for t
// outside [0, 1]; zero components follow the 0^positive = 0 convention.
double ch_divergence_t(const IntensityVector& x, const IntensityVector& y,
                       double t);

struct DivergenceMax {
  double value = 0;
  double t = 0.5;
};

// max_t D_t(x||y) by golden-section search (D_t is concave in t).
DivergenceMax ch_divergence_plus(const IntensityVector& x,
                                 const IntensityVector& y);

// lambda * nu_d * (1 - sqrt(ab) - sqrt((1-a)(1-b))); the exact-recovery
// boundary sits where this equals 1.
double ch_threshold_expression(double lambda, double a, double b, int d);

enum class Regime {
  Achievable,
  ImpossibleDivergence,
  ImpossibleSparseD1,
  Boundary,
};

const char* to_string(Regime r);

// Achievable requires the threshold expression above 1, plus lambda > 1 when
// d = 1. Sparse d=1 (lambda < 1) is impossible regardless of a, b. Values
// within 1e-12 of a boundary classify as Boundary.
Regime classify_regime(const ModelParams& params);

// Constants derived from (lambda, a, b, d) and n. Comments give the knob
// names used by the CLI and config files.
struct DerivedParams {
  double chi = 0;              // block volume factor in effect
  double chi_theoretical = 0;  // largest value satisfying both feasibility
                               // clauses, scaled by 0.99
  double chi_practical = 0;    // finite-size suggestion (see solver notes)
  double delta = 0;            // occupancy threshold factor
  double mistake_budget = 0;        // 5 / ((a-b)^2 delta)
  double error_budget = 0;          // per-neighborhood error rate bound
  double score_shift_rate = 0;      // 2(|log(a/b)| + |log((1-a)/(1-b))|)
  double neighborhood_block_bound = 0;  // nu_d (1 + sqrt(d) chi^(1/d))^d / chi
  double occupancy_root = 0;   // root of the occupancy rate function; NaN if
                               // infeasible at the chi in effect
  double core_radius_factor = 0;  // 1 - sqrt(d) chi^(1/d) / 2
  std::int64_t visible_blocks = 0;  // blocks visible from a full-size block
};

// Solves for chi (bisection on the shrinking-ball clause, closed form on the
// density clause), the occupancy root, and delta = 0.99 * min of its bounds.
// Overrides replace chi/delta and downstream constants follow. Throws when
// the regime leaves no feasible choice and no override is supplied.
DerivedParams solve_parameters(const ModelParams& params, double n,
                               std::optional<double> chi_override = {},
                               std::optional<double> delta_override = {});

// Largest chi for which a full-size block still has a visible distinct block;
// practical chi suggestions stay strictly below this.
double max_visible_chi(int d);

}  // namespace gsbm

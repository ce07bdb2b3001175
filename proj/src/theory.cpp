#include "gsbm/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "gsbm/visibility.hpp"

namespace gsbm {

namespace {

constexpr double kBoundaryTol = 1e-12;
constexpr double kRootTol = 1e-12;
constexpr double kLogClamp = 1e-12;

double clamp01(double p) {
  return std::min(1.0 - kLogClamp, std::max(kLogClamp, p));
}

// Occupancy rate function of the Poisson lower tail: decreasing on
// (0, lambda_nu] from lambda_nu down to 0.
double occupancy_rate(double x, double lambda_nu) {
  return x * (std::log(x) - std::log(lambda_nu)) + lambda_nu - x;
}

// Root of occupancy_rate(x) = (1 + lambda_nu) / 2; exists iff lambda_nu > 1.
double occupancy_root(double lambda_nu) {
  if (!(lambda_nu > 1)) return std::numeric_limits<double>::quiet_NaN();
  double target = (1 + lambda_nu) / 2;
  double lo = 0, hi = lambda_nu;
  while (hi - lo > kRootTol) {
    double mid = (lo + hi) / 2;
    if (mid == lo || mid == hi) break;  // interval at fp resolution
    if (occupancy_rate(mid, lambda_nu) > target)
      lo = mid;
    else
      hi = mid;
  }
  return (lo + hi) / 2;
}

// Largest chi satisfying the shrinking-ball clause
// nu_d (1 - 3 sqrt(d) chi^(1/d) / 2)^d >= (nu_d + 1/lambda) / 2,
// found by bisection (the left side decreases in chi).
double chi_ball_clause(double lambda, int d) {
  double nu = unit_ball_volume(d);
  double rhs = (nu + 1 / lambda) / 2;
  if (!(nu > rhs)) return std::numeric_limits<double>::quiet_NaN();
  double root_d = std::sqrt(static_cast<double>(d));
  auto lhs = [&](double chi) {
    double base = 1 - 3 * root_d * std::pow(chi, 1.0 / d) / 2;
    return base <= 0 ? -rhs : nu * std::pow(base, d) - rhs;
  };
  double lo = 0, hi = std::pow(2 / (3 * root_d), d);
  while (hi - lo > kRootTol) {
    double mid = (lo + hi) / 2;
    if (mid == lo || mid == hi) break;
    if (lhs(mid) >= 0)
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

// Density clause: chi < [(1_{d=1} + nu_d 1_{d>=2}) - 1/lambda] / 2.
double chi_density_clause(double lambda, int d) {
  double cap = (d == 1) ? 1.0 : unit_ball_volume(d);
  return (cap - 1 / lambda) / 2;
}

double isolated_block_expectation(double lambda, int d, double n, double chi) {
  double log_n = std::log(n);
  double blocks = n / (chi * log_n);
  double p_empty = std::exp(-lambda * chi * log_n);
  auto k = static_cast<double>(visible_block_count(chi, d));
  return blocks * (1 - p_empty) * std::pow(p_empty, k);
}

// Finite-size suggestion: the largest chi below the visibility cap for which
// the expected number of isolated occupied blocks stays negligible.
double practical_chi(double lambda, int d, double n, double theoretical) {
  double hi = 0.98 * max_visible_chi(d);
  double lo = std::isnan(theoretical) ? hi / 256 : std::min(theoretical, hi);
  double best = lo;
  for (double chi = hi; chi > lo; chi *= 0.97) {
    if (isolated_block_expectation(lambda, d, n, chi) <= 0.01) {
      best = chi;
      break;
    }
  }
  return best;
}

}  // namespace

IntensityVector profile_intensity_plus(double lambda, int d, double a,
                                       double b) {
  double c = lambda * unit_ball_volume(d) / 2;
  return {{c * a, c * (1 - a), c * b, c * (1 - b)}};
}

IntensityVector profile_intensity_minus(double lambda, int d, double a,
                                        double b) {
  double c = lambda * unit_ball_volume(d) / 2;
  return {{c * b, c * (1 - b), c * a, c * (1 - a)}};
}

double ch_divergence_t(const IntensityVector& x, const IntensityVector& y,
                       double t) {
  if (!(t >= 0 && t <= 1))
    throw std::invalid_argument("ch_divergence_t: t must lie in [0, 1]");
  double sum = 0;
  for (int i = 0; i < 4; ++i) {
    double xi = x[i], yi = y[i];
    if (xi < 0 || yi < 0)
      throw std::invalid_argument("ch_divergence_t: negative intensity");
    double cross;
    if (t == 0)
      cross = yi;
    else if (t == 1)
      cross = xi;
    else
      cross = (xi == 0 || yi == 0) ? 0
                                   : std::pow(xi, t) * std::pow(yi, 1 - t);
    sum += t * xi + (1 - t) * yi - cross;
  }
  return sum;
}

DivergenceMax ch_divergence_plus(const IntensityVector& x,
                                 const IntensityVector& y) {
  if (x.v == y.v) return {0.0, 0.5};
  auto f = [&](double t) { return ch_divergence_t(x, y, t); };
  const double invphi = (std::sqrt(5.0) - 1) / 2;
  double lo = 0, hi = 1;
  double c = hi - invphi * (hi - lo);
  double d = lo + invphi * (hi - lo);
  double fc = f(c), fd = f(d);
  while (hi - lo > 1e-10) {
    if (fc > fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - invphi * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + invphi * (hi - lo);
      fd = f(d);
    }
  }
  double t = (lo + hi) / 2;
  return {f(t), t};
}

double ch_threshold_expression(double lambda, double a, double b, int d) {
  return lambda * unit_ball_volume(d) *
         (1 - std::sqrt(a * b) - std::sqrt((1 - a) * (1 - b)));
}

const char* to_string(Regime r) {
  switch (r) {
    case Regime::Achievable: return "achievable";
    case Regime::ImpossibleDivergence: return "impossible-divergence";
    case Regime::ImpossibleSparseD1: return "impossible-sparse-d1";
    case Regime::Boundary: return "boundary";
  }
  return "?";
}

Regime classify_regime(const ModelParams& params) {
  params.validate();
  double ch = ch_threshold_expression(params.lambda, params.a.value,
                                      params.b.value, params.d);
  if (params.d == 1 && params.lambda < 1 - kBoundaryTol)
    return Regime::ImpossibleSparseD1;
  if (ch < 1 - kBoundaryTol) return Regime::ImpossibleDivergence;
  if (ch > 1 + kBoundaryTol &&
      (params.d >= 2 || params.lambda > 1 + kBoundaryTol))
    return Regime::Achievable;
  return Regime::Boundary;
}

double max_visible_chi(int d) {
  // The nearest distinct block has offset (1, 0, ..., 0); it stays visible
  // while 4 + (d - 1) <= chi^(-2/d).
  return std::pow(static_cast<double>(d) + 3.0, -d / 2.0);
}

DerivedParams solve_parameters(const ModelParams& params, double n,
                               std::optional<double> chi_override,
                               std::optional<double> delta_override) {
  params.validate();
  const int d = params.d;
  const double lambda = params.lambda;
  const double a = params.a.value, b = params.b.value;
  const double nu = unit_ball_volume(d);
  const double nan = std::numeric_limits<double>::quiet_NaN();

  DerivedParams out;
  double ball = chi_ball_clause(lambda, d);
  double density = chi_density_clause(lambda, d);
  if (std::isnan(ball) || density <= 0) {
    if (!chi_override)
      throw std::runtime_error(
          "solve_parameters: no feasible chi; the regime is below or too "
          "close to the threshold (supply an explicit chi)");
    out.chi_theoretical = nan;
  } else {
    out.chi_theoretical = 0.99 * std::min(ball, density);
  }
  out.chi = chi_override.value_or(out.chi_theoretical);
  if (!(out.chi > 0))
    throw std::invalid_argument("solve_parameters: chi must be positive");
  out.chi_practical = practical_chi(lambda, d, n, out.chi_theoretical);

  const double chi_rt = std::pow(out.chi, 1.0 / d);
  const double root_d = std::sqrt(static_cast<double>(d));
  out.core_radius_factor = 1 - root_d * chi_rt / 2;
  out.neighborhood_block_bound =
      nu * std::pow(1 + root_d * chi_rt, d) / out.chi;
  out.visible_blocks = visible_block_count(out.chi, d);

  double la = std::log(clamp01(a) / clamp01(b));
  double lb = std::log((1 - clamp01(a)) / (1 - clamp01(b)));
  out.score_shift_rate = 2 * (std::fabs(la) + std::fabs(lb));
  double ch = ch_threshold_expression(lambda, a, b, d);
  out.error_budget = out.score_shift_rate > 0
                         ? (ch - 1) / out.score_shift_rate
                         : nan;

  // Occupancy bound from the visible-neighborhood volume at the chi in
  // effect; unavailable when that volume is too thin.
  double neighbor_volume =
      (d == 1) ? (std::floor(1 / out.chi) - 1) * out.chi
               : nu * std::pow(1 - 3 * root_d * chi_rt / 2, d) - out.chi;
  out.occupancy_root = (neighbor_volume > 0)
                           ? occupancy_root(lambda * neighbor_volume)
                           : nan;
  double delta_occupancy =
      std::isnan(out.occupancy_root)
          ? nan
          : (d == 1
                 ? out.occupancy_root * out.chi
                 : out.occupancy_root * out.chi /
                       (nu * std::pow(out.core_radius_factor, d)));
  double delta_dispersion =
      (out.error_budget > 0)
          ? out.error_budget / out.neighborhood_block_bound
          : nan;

  if (delta_override) {
    out.delta = *delta_override;
  } else {
    double bound = std::numeric_limits<double>::infinity();
    if (!std::isnan(delta_occupancy)) bound = std::min(bound, delta_occupancy);
    if (!std::isnan(delta_dispersion))
      bound = std::min(bound, delta_dispersion);
    if (!std::isfinite(bound))
      throw std::runtime_error(
          "solve_parameters: no feasible delta at this chi (supply an "
          "explicit delta)");
    out.delta = 0.99 * bound;
  }
  if (!(out.delta > 0))
    throw std::invalid_argument("solve_parameters: delta must be positive");

  double gap = (a - b) * (a - b);
  out.mistake_budget = gap > 0
                           ? 5 / (gap * out.delta)
                           : std::numeric_limits<double>::infinity();
  return out;
}

}  // namespace gsbm

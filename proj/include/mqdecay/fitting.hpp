// fitting.hpp - weighted least-squares recovery of (p, M2) from measured
// decoherence rates of a single cluster size.

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "mqdecay/model.hpp"
#include "mqdecay/series.hpp"

namespace mqdecay {

struct RatePoint {
  int n = 0;
  int M = 0;
  double rate = 0.0;   // s^-1
  double sigma = 0.0;  // s^-1

  /// Throws DomainError unless n >= 1, rate > 0 and sigma > 0.
  void validate() const;
};

struct FitResult {
  int n = 0;
  double p = 0.0;
  double M2 = 0.0;  // s^-2
  double chi2 = 0.0;
  std::size_t n_points = 0;
  bool converged = false;
};

struct FitOptions {
  double p_step = 0.05;
  double M2_min = 1e7;
  double M2_max = 1e11;
  std::size_t M2_grid_points = 81;  // log spaced, 20 per decade by default
  double tolerance = 1e-8;          // relative, on the simplex
  std::size_t max_iterations = 5000;
  std::size_t workers = 0;          // 0 = hardware concurrency
};

/// Model rate for one point: the inverse 1/e time of s_m_composite, or 0
/// when the composite never decays to 1/e.
double model_rate(int n, double p, double M2, int M);

/// sum_i (model_rate_i - rate_i)^2 / sigma_i^2.
double chi_squared(std::span<const RatePoint> points, double p, double M2);

/// Grid search over p in {0, p_step, ..., 1} x log-spaced M2, then
/// Nelder-Mead in (p, log M2) from the best cell. p is clamped to [0, 1].
///
/// Throws FitError for fewer than three points, mixed n, or fewer than two
/// distinct |M| values. Non-convergence is reported through the result.
FitResult fit_rates(std::span<const RatePoint> points,
                    const FitOptions& options = {});

/// Splits by n (ascending) and fits each group.
std::vector<FitResult> fit_all(std::span<const RatePoint> points,
                               const FitOptions& options = {});

/// s_total for the fitted parameters, optionally with M2 replaced by a
/// pooled value. Throws FitError for a fit that did not converge.
DecaySeries predict_total_decay(const FitResult& fit,
                                std::span<const double> times,
                                std::optional<double> M2_override = std::nullopt);

struct PooledMoment {
  double mean = 0.0;  // s^-2
  double sd = 0.0;    // sample standard deviation, s^-2
  std::size_t count = 0;
};

/// Unweighted mean and sample standard deviation of M2 over fits.
/// Throws FitError for fewer than two fits.
PooledMoment pool_second_moment(std::span<const FitResult> fits);

}  // namespace mqdecay

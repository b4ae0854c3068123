#include "mqdecay/fitting.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <string>

#include "mqdecay/detail/parallel.hpp"
#include "mqdecay/errors.hpp"
#include "mqdecay/io.hpp"
#include "mqdecay/rates.hpp"

namespace mqdecay {

namespace {

// Rates inside the objective are solved tighter than the default so the
// simplex sees a smooth surface down to its own tolerance.
constexpr double kObjectiveRateTolerance = 1e-13;

struct Vertex {
  double p = 0.0;
  double log_M2 = 0.0;
  double chi2 = 0.0;
};

void check_points(std::span<const RatePoint> points) {
  if (points.size() < 3) throw FitError("fit needs at least three rate points");
  std::set<int> orders;
  for (const auto& point : points) {
    point.validate();
    if (point.n != points.front().n) throw FitError("fit points must share one cluster size n");
    orders.insert(std::abs(point.M));
  }
  if (orders.size() < 2) {
    throw FitError("fit is underdetermined: all points have the same |M|");
  }
}

class Objective {
 public:
  explicit Objective(std::span<const RatePoint> points) : points_(points) {}

  Vertex at(double p, double log_M2) const {
    p = std::clamp(p, 0.0, 1.0);
    return {p, log_M2, chi_squared(points_, p, std::exp(log_M2))};
  }

 private:
  std::span<const RatePoint> points_;
};

bool less_chi2(const Vertex& a, const Vertex& b) { return a.chi2 < b.chi2; }

struct SimplexOutcome {
  Vertex best;
  bool converged = false;
  std::size_t iterations = 0;
};

// Nelder-Mead on (p, log M2) with standard coefficients; p is clamped into
// [0, 1] whenever a trial point leaves it.
SimplexOutcome nelder_mead(const Objective& objective, const Vertex& start,
                           double step_p, double step_u, double tolerance,
                           std::size_t max_iterations) {
  const double p1 = start.p + step_p <= 1.0 ? start.p + step_p : start.p - step_p;
  std::array<Vertex, 3> simplex{start, objective.at(p1, start.log_M2),
                                objective.at(start.p, start.log_M2 + step_u)};
  SimplexOutcome outcome;
  for (; outcome.iterations < max_iterations; ++outcome.iterations) {
    std::sort(simplex.begin(), simplex.end(), less_chi2);
    const Vertex& best = simplex[0];
    double size = 0.0;
    for (std::size_t i = 1; i < 3; ++i) {
      size = std::max({size, std::abs(simplex[i].p - best.p),
                       std::abs(simplex[i].log_M2 - best.log_M2)});
    }
    const double spread = simplex[2].chi2 - best.chi2;
    if (size <= tolerance && spread <= tolerance * (1.0 + best.chi2)) {
      outcome.converged = true;
      break;
    }

    const double cp = 0.5 * (simplex[0].p + simplex[1].p);
    const double cu = 0.5 * (simplex[0].log_M2 + simplex[1].log_M2);
    const Vertex& worst = simplex[2];
    auto along = [&](double coeff) {
      return objective.at(cp + coeff * (worst.p - cp), cu + coeff * (worst.log_M2 - cu));
    };

    const Vertex reflected = along(-1.0);
    if (reflected.chi2 < simplex[0].chi2) {
      const Vertex expanded = along(-2.0);
      simplex[2] = expanded.chi2 < reflected.chi2 ? expanded : reflected;
      continue;
    }
    if (reflected.chi2 < simplex[1].chi2) {
      simplex[2] = reflected;
      continue;
    }
    const Vertex contracted =
        reflected.chi2 < worst.chi2 ? along(-0.5) : along(0.5);
    if (contracted.chi2 < std::min(reflected.chi2, worst.chi2)) {
      simplex[2] = contracted;
      continue;
    }
    for (std::size_t i = 1; i < 3; ++i) {
      simplex[i] = objective.at(0.5 * (simplex[0].p + simplex[i].p),
                                0.5 * (simplex[0].log_M2 + simplex[i].log_M2));
    }
  }
  std::sort(simplex.begin(), simplex.end(), less_chi2);
  outcome.best = simplex[0];
  return outcome;
}

}  // namespace

void RatePoint::validate() const {
  if (n < 1) throw DomainError("rate point needs n >= 1");
  if (std::abs(M) > n) throw DomainError("rate point has |M| > n");
  if (!(rate > 0.0) || !std::isfinite(rate)) throw DomainError("rate must be positive");
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw DomainError("sigma must be positive");
}

double model_rate(int n, double p, double M2, int M) {
  RateOptions options;
  options.relative_tolerance = kObjectiveRateTolerance;
  const RateResult r =
      composite_rate(ModelParams{static_cast<double>(n), p, M2 / 9.0}, M, options);
  return r.ok() ? r.rate : 0.0;
}

double chi_squared(std::span<const RatePoint> points, double p, double M2) {
  double chi2 = 0.0;
  for (const auto& point : points) {
    const double residual = (model_rate(point.n, p, M2, point.M) - point.rate) / point.sigma;
    chi2 += residual * residual;
  }
  return chi2;
}

FitResult fit_rates(std::span<const RatePoint> points, const FitOptions& options) {
  check_points(points);
  if (!(options.p_step > 0.0 && options.p_step <= 1.0) || options.M2_grid_points < 2 ||
      !(options.M2_min > 0.0 && options.M2_max > options.M2_min)) {
    throw DomainError("invalid fit grid options");
  }

  const auto p_count = static_cast<std::size_t>(std::llround(1.0 / options.p_step)) + 1;
  const double u_min = std::log(options.M2_min);
  const double u_step =
      (std::log(options.M2_max) - u_min) / static_cast<double>(options.M2_grid_points - 1);
  const Objective objective(points);

  std::vector<Vertex> grid(p_count * options.M2_grid_points);
  detail::parallel_for(grid.size(), options.workers, [&](std::size_t idx) {
    const std::size_t ip = idx / options.M2_grid_points;
    const std::size_t iu = idx % options.M2_grid_points;
    const double p = std::min(1.0, static_cast<double>(ip) * options.p_step);
    grid[idx] = objective.at(p, u_min + static_cast<double>(iu) * u_step);
  });
  // First minimum in index order keeps ties deterministic.
  Vertex best = *std::min_element(grid.begin(), grid.end(), less_chi2);

  // Restart from the incumbent until a fresh simplex stops improving it.
  bool converged = false;
  std::size_t budget = options.max_iterations;
  for (int restart = 0; restart < 4 && budget > 0; ++restart) {
    const double step_p = restart == 0 ? options.p_step : 1e-3;
    const double step_u = restart == 0 ? u_step : 1e-3;
    const SimplexOutcome run =
        nelder_mead(objective, best, step_p, step_u, options.tolerance, budget);
    budget -= std::min(budget, run.iterations);
    const bool improved = run.best.chi2 < best.chi2 - options.tolerance * (1.0 + best.chi2);
    if (run.best.chi2 < best.chi2) best = run.best;
    converged = run.converged;
    if (!run.converged || !improved) break;
  }

  FitResult result;
  result.n = points.front().n;
  result.p = best.p;
  result.M2 = std::exp(best.log_M2);
  result.chi2 = best.chi2;
  result.n_points = points.size();
  result.converged = converged;
  return result;
}

std::vector<FitResult> fit_all(std::span<const RatePoint> points, const FitOptions& options) {
  std::map<int, std::vector<RatePoint>> groups;
  for (const auto& point : points) groups[point.n].push_back(point);
  std::vector<FitResult> fits;
  fits.reserve(groups.size());
  for (const auto& [n, group] : groups) fits.push_back(fit_rates(group, options));
  return fits;
}

DecaySeries predict_total_decay(const FitResult& fit, std::span<const double> times,
                                std::optional<double> M2_override) {
  if (!fit.converged) throw FitError("cannot predict from a fit that did not converge");
  const double M2 = M2_override.value_or(fit.M2);
  DecaySeries out = total_series(
      ModelParams::from_second_moment(static_cast<double>(fit.n), fit.p, M2), times);
  out.label = "prediction n=" + std::to_string(fit.n) + " p=" + io::format_number(fit.p) +
              " M2=" + io::format_number(M2);
  return out;
}

PooledMoment pool_second_moment(std::span<const FitResult> fits) {
  if (fits.size() < 2) throw FitError("pooling needs at least two fits");
  PooledMoment pooled;
  pooled.count = fits.size();
  for (const auto& fit : fits) pooled.mean += fit.M2;
  pooled.mean /= static_cast<double>(fits.size());
  double ss = 0.0;
  for (const auto& fit : fits) ss += (fit.M2 - pooled.mean) * (fit.M2 - pooled.mean);
  pooled.sd = std::sqrt(ss / static_cast<double>(fits.size() - 1));
  return pooled;
}

}  // namespace mqdecay

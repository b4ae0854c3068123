#include "mqdecay/model.hpp"

#include <cmath>
#include <string>

#include "mqdecay/errors.hpp"
#include "mqdecay/io.hpp"

namespace mqdecay {

void ModelParams::validate() const {
  if (!(n >= 1.0) || !std::isfinite(n)) throw DomainError("model needs n >= 1");
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("degree of correlation p must lie in [0, 1]");
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
    throw DomainError("alpha must be finite and nonnegative");
  }
}

ModelParams ModelParams::from_second_moment(double n, double p, double M2) {
  ModelParams params{n, p, M2 / 9.0};
  params.validate();
  return params;
}

double s_m_uncorrelated(double n, double alpha, double t) {
  return std::exp(-0.5 * n * alpha * t * t);
}

double s_m_correlated(double M, double alpha, double t) {
  return std::exp(-M * M * alpha * t * t);
}

double s_m_short_time(const ModelParams& params, double M, double t) {
  const double rate = params.p * M * M + (1.0 - params.p) * 0.5 * params.n;
  return 1.0 - rate * params.alpha * t * t;
}

double s_m_composite(const ModelParams& params, double M, double t) {
  return params.p * s_m_correlated(M, params.alpha, t) +
         (1.0 - params.p) * s_m_uncorrelated(params.n, params.alpha, t);
}

double s_total(const ModelParams& params, double t) {
  const double x = params.n * params.alpha * t * t;
  return params.p / std::sqrt(x + 1.0) + (1.0 - params.p) * std::exp(-0.5 * x);
}

double gate_error(const ModelParams& params, double t_g) {
  // 1 - S written so small t_g does not cancel catastrophically.
  const double x = params.n * params.alpha * t_g * t_g;
  const double correlated = x / (std::sqrt(x + 1.0) * (std::sqrt(x + 1.0) + 1.0));
  const double uncorrelated = -std::expm1(-0.5 * x);
  return params.p * correlated + (1.0 - params.p) * uncorrelated;
}

double s_m_composite_limit(const ModelParams& params, double M) {
  return M == 0.0 ? params.p : 0.0;
}

DecaySeries composite_series(const ModelParams& params, double M,
                             std::span<const double> times) {
  params.validate();
  DecaySeries out;
  out.times.assign(times.begin(), times.end());
  validate_time_grid(out.times);
  out.values.reserve(out.times.size());
  for (double t : out.times) out.values.push_back(s_m_composite(params, M, t));
  out.label = "composite n=" + io::format_number(params.n) + " p=" +
              io::format_number(params.p) + " M=" + io::format_number(M);
  return out;
}

DecaySeries total_series(const ModelParams& params, std::span<const double> times) {
  params.validate();
  DecaySeries out;
  out.times.assign(times.begin(), times.end());
  validate_time_grid(out.times);
  out.values.reserve(out.times.size());
  for (double t : out.times) out.values.push_back(s_total(params, t));
  out.label = "total n=" + io::format_number(params.n) + " p=" + io::format_number(params.p);
  return out;
}

}  // namespace mqdecay

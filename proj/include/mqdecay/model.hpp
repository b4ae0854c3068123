// model.hpp - closed-form decay laws for a cluster dephasing through a
// composite bath of correlated (weight p) and uncorrelated (1-p) parts.

#pragma once

#include <span>
#include <vector>

#include "mqdecay/series.hpp"

namespace mqdecay {

struct ModelParams {
  double n = 1.0;      // spin count (real-valued so n/2 needs no cast)
  double p = 0.0;      // degree of correlation, [0, 1]
  double alpha = 0.0;  // s^-2, M2 / 9

  /// Throws DomainError unless n >= 1, 0 <= p <= 1 and alpha >= 0.
  void validate() const;

  static ModelParams from_second_moment(double n, double p, double M2);
};

/// exp(-(n/2) alpha t^2); independent of the coherence order.
double s_m_uncorrelated(double n, double alpha, double t);

/// exp(-M^2 alpha t^2).
double s_m_correlated(double M, double alpha, double t);

/// Second-order truncation 1 - (p M^2 + (1-p) n/2) alpha t^2. Only valid
/// while n alpha t^2 << 1.
double s_m_short_time(const ModelParams& params, double M, double t);

/// p exp(-M^2 alpha t^2) + (1-p) exp(-(n/2) alpha t^2).
double s_m_composite(const ModelParams& params, double M, double t);

/// Sum of the composite law over coherence orders:
///   p / sqrt(n alpha t^2 + 1) + (1-p) exp(-(n/2) alpha t^2).
double s_total(const ModelParams& params, double t);

/// 1 - s_total(params, t_g).
double gate_error(const ModelParams& params, double t_g);

/// Large-time limit of s_m_composite: p for M == 0, else 0.
double s_m_composite_limit(const ModelParams& params, double M);

DecaySeries composite_series(const ModelParams& params, double M,
                             std::span<const double> times);
DecaySeries total_series(const ModelParams& params,
                         std::span<const double> times);

}  // namespace mqdecay

// rates.hpp - decoherence rates as inverse 1/e decay times

#pragma once

#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "mqdecay/model.hpp"

namespace mqdecay {

enum class RateStatus {
  Ok,
  NoCrossing,   // the signal never reaches 1/e
  NonMonotone,  // the signal increased while bracketing the crossing
};

std::string_view to_string(RateStatus status);

struct RateResult {
  RateStatus status = RateStatus::NoCrossing;
  double rate = 0.0;           // s^-1, valid when ok()
  double crossing_time = 0.0;  // s, valid when ok()

  bool ok() const { return status == RateStatus::Ok; }
};

struct RateOptions {
  double relative_tolerance = 1e-10;
  int max_doublings = 256;
  /// Known t -> infinity limit of the signal. A limit >= 1/e proves there
  /// is no crossing without searching.
  std::optional<double> asymptote;
};

using SignalFunction = std::function<double(double)>;

/// Finds t* with signal(t*) = 1/e by doubling an upper bracket from
/// t_max_hint and bisecting, and returns 1/t*.
///
/// Throws DomainError when t_max_hint <= 0 or signal(0) <= 1/e.
RateResult decay_rate(const SignalFunction& signal, double t_max_hint,
                      const RateOptions& options = {});

/// Natural time scale 1/sqrt((M^2 + n/2) alpha), used as a bracket hint.
double rate_time_hint(const ModelParams& params, double M);

/// decay_rate of s_m_composite at fixed M.
RateResult composite_rate(const ModelParams& params, double M,
                          const RateOptions& options = {});

/// decay_rate of s_total.
RateResult total_rate(const ModelParams& params,
                      const RateOptions& options = {});

struct RateCurve {
  std::vector<int> M_values;
  std::vector<double> rates;  // 0 where there is no crossing
  std::vector<RateStatus> status;
  ModelParams params;
};

RateCurve rate_curve(const ModelParams& params, const std::vector<int>& M_values);

struct ScalingResult {
  std::vector<double> n_values;  // cluster sizes that produced a rate
  std::vector<double> rates;
  std::vector<double> excluded_n;  // sizes without a 1/e crossing
  double exponent = 0.0;           // slope of log(rate) vs log(n)
};

/// Log-log slope of the rate against n. With M unset the rate comes from
/// s_total, otherwise from s_m_composite at that M. All params must share
/// p and alpha and span at least three distinct n.
ScalingResult scaling_exponent(const std::vector<ModelParams>& params_list,
                               std::optional<int> M = std::nullopt);

}  // namespace mqdecay

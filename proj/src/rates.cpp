#include "mqdecay/rates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>

#include "mqdecay/errors.hpp"

namespace mqdecay {

namespace {

const double kInvE = std::exp(-1.0);

// Allowed rise between successive samples before a signal counts as
// increasing; absorbs rounding in otherwise flat signals.
constexpr double kMonotoneSlack = 1e-12;

RateResult crossing(double t) { return {RateStatus::Ok, 1.0 / t, t}; }

}  // namespace

std::string_view to_string(RateStatus status) {
  switch (status) {
    case RateStatus::Ok:
      return "ok";
    case RateStatus::NoCrossing:
      return "no_crossing";
    case RateStatus::NonMonotone:
      return "non_monotone";
  }
  return "unknown";
}

RateResult decay_rate(const SignalFunction& signal, double t_max_hint,
                      const RateOptions& options) {
  if (!(t_max_hint > 0.0) || !std::isfinite(t_max_hint)) {
    throw DomainError("decay_rate needs a finite positive time hint");
  }
  const double s0 = signal(0.0);
  if (!(s0 > kInvE)) throw DomainError("signal must start above 1/e");
  if (options.asymptote && *options.asymptote >= kInvE) {
    return {RateStatus::NoCrossing, 0.0, 0.0};
  }

  double lo = 0.0;
  double s_lo = s0;
  double hi = t_max_hint;
  double s_hi = signal(hi);
  for (int doublings = 0; s_hi > kInvE; ++doublings) {
    if (s_hi > s_lo + kMonotoneSlack) return {RateStatus::NonMonotone, 0.0, 0.0};
    if (doublings >= options.max_doublings || !std::isfinite(2.0 * hi)) {
      return {RateStatus::NoCrossing, 0.0, 0.0};
    }
    lo = hi;
    s_lo = s_hi;
    hi *= 2.0;
    s_hi = signal(hi);
  }
  if (std::isnan(s_hi)) throw DomainError("signal evaluated to NaN");

  while (hi - lo > options.relative_tolerance * hi) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double s_mid = signal(mid);
    if (s_mid > s_lo + kMonotoneSlack) return {RateStatus::NonMonotone, 0.0, 0.0};
    if (s_mid > kInvE) {
      lo = mid;
      s_lo = s_mid;
    } else {
      hi = mid;
    }
  }
  return crossing(0.5 * (lo + hi));
}

double rate_time_hint(const ModelParams& params, double M) {
  return 1.0 / std::sqrt((M * M + 0.5 * params.n) * params.alpha);
}

RateResult composite_rate(const ModelParams& params, double M,
                          const RateOptions& options) {
  params.validate();
  RateOptions opts = options;
  opts.asymptote = s_m_composite_limit(params, M);
  if (params.alpha == 0.0) return {RateStatus::NoCrossing, 0.0, 0.0};
  return decay_rate([&](double t) { return s_m_composite(params, M, t); },
                    rate_time_hint(params, M), opts);
}

RateResult total_rate(const ModelParams& params, const RateOptions& options) {
  params.validate();
  RateOptions opts = options;
  opts.asymptote = 0.0;
  if (params.alpha == 0.0) return {RateStatus::NoCrossing, 0.0, 0.0};
  return decay_rate([&](double t) { return s_total(params, t); },
                    rate_time_hint(params, 0.0), opts);
}

RateCurve rate_curve(const ModelParams& params, const std::vector<int>& M_values) {
  params.validate();
  RateCurve curve;
  curve.params = params;
  curve.M_values = M_values;
  for (int M : M_values) {
    if (std::abs(M) > params.n) throw DomainError("coherence order exceeds spin count");
    const RateResult r = composite_rate(params, M);
    curve.status.push_back(r.status);
    switch (r.status) {
      case RateStatus::Ok:
        curve.rates.push_back(r.rate);
        break;
      case RateStatus::NoCrossing:
        curve.rates.push_back(0.0);
        break;
      case RateStatus::NonMonotone:
        curve.rates.push_back(std::numeric_limits<double>::quiet_NaN());
        break;
    }
  }
  return curve;
}

ScalingResult scaling_exponent(const std::vector<ModelParams>& params_list,
                               std::optional<int> M) {
  std::set<double> distinct;
  for (const auto& params : params_list) {
    params.validate();
    distinct.insert(params.n);
    if (params.p != params_list.front().p || params.alpha != params_list.front().alpha) {
      throw DomainError("scaling study needs a common p and alpha");
    }
  }
  if (distinct.size() < 3) throw DomainError("scaling study needs at least three distinct n");

  ScalingResult out;
  for (const auto& params : params_list) {
    const RateResult r = M ? composite_rate(params, *M) : total_rate(params);
    if (!r.ok()) {
      out.excluded_n.push_back(params.n);
      continue;
    }
    out.n_values.push_back(params.n);
    out.rates.push_back(r.rate);
  }
  if (out.n_values.size() < 2) {
    throw FitError("scaling study left fewer than two sizes with a 1/e crossing");
  }
  const std::size_t k = out.n_values.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    mx += std::log(out.n_values[i]);
    my += std::log(out.rates[i]);
  }
  mx /= k;
  my /= k;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const double dx = std::log(out.n_values[i]) - mx;
    sxy += dx * (std::log(out.rates[i]) - my);
    sxx += dx * dx;
  }
  if (!(sxx > 0.0)) throw FitError("scaling study needs distinct n among the crossings");
  out.exponent = sxy / sxx;
  return out;
}

}  // namespace mqdecay

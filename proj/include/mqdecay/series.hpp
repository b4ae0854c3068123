// series.hpp - sampled decay signal with provenance

#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace mqdecay {

struct DecaySeries {
  std::vector<double> times;   // seconds
  std::vector<double> values;  // normalized signal
  std::string label;

  std::size_t size() const { return times.size(); }
};

/// Uniform grid t_i = i * t_max / steps for i = 0..steps.
/// Throws DomainError unless t_max > 0 and steps >= 1.
std::vector<double> uniform_time_grid(double t_max, std::size_t steps);

/// Throws DomainError unless times are finite, nonnegative and strictly
/// increasing.
void validate_time_grid(const std::vector<double>& times);

}  // namespace mqdecay

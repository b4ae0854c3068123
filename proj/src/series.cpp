#include "mqdecay/series.hpp"

#include <cmath>

#include "mqdecay/errors.hpp"

namespace mqdecay {

std::vector<double> uniform_time_grid(double t_max, std::size_t steps) {
  if (!(t_max > 0.0) || !std::isfinite(t_max)) {
    throw DomainError("time grid needs a finite t_max > 0");
  }
  if (steps < 1) throw DomainError("time grid needs at least one step");
  std::vector<double> times(steps + 1);
  for (std::size_t i = 0; i <= steps; ++i) {
    times[i] = t_max * static_cast<double>(i) / static_cast<double>(steps);
  }
  return times;
}

void validate_time_grid(const std::vector<double>& times) {
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!std::isfinite(times[i]) || times[i] < 0.0) {
      throw DomainError("times must be finite and nonnegative");
    }
    if (i > 0 && !(times[i] > times[i - 1])) {
      throw DomainError("times must be strictly increasing");
    }
  }
}

}  // namespace mqdecay

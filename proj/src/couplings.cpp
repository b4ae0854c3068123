#include "mqdecay/couplings.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

#include "mqdecay/errors.hpp"

namespace mqdecay {

namespace {

double dot(const Vec3& a, const Vec3& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

// splitmix64: a fixed, platform-independent stream for synth_random.
std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double unit_uniform(std::uint64_t& state) {
  return static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53;
}

void require_pairs(std::size_t n) {
  if (n < 2) throw DomainError("a coupling set needs at least two spins");
}

}  // namespace

std::string_view to_string(UnitsConvention units) {
  return units == UnitsConvention::SI ? "SI" : "Gaussian";
}

UnitsConvention parse_units(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char ch) { return std::tolower(ch); });
  if (lower == "si") return UnitsConvention::SI;
  if (lower == "gaussian") return UnitsConvention::Gaussian;
  throw DomainError("unknown units convention '" + std::string(text) + "'");
}

void SpinGeometry::validate() const {
  if (positions.size() < 2) throw DomainError("geometry needs at least two spins");
  if (std::abs(std::sqrt(dot(field_axis, field_axis)) - 1.0) > 1e-12) {
    throw DomainError("field_axis must have unit norm");
  }
  if (!(gyromagnetic_ratio > 0.0) || !std::isfinite(gyromagnetic_ratio)) {
    throw DomainError("gyromagnetic ratio must be positive and finite");
  }
  for (std::size_t j = 0; j < positions.size(); ++j) {
    for (std::size_t k = j + 1; k < positions.size(); ++k) {
      const Vec3 d{positions[k][0] - positions[j][0],
                   positions[k][1] - positions[j][1],
                   positions[k][2] - positions[j][2]};
      if (!(dot(d, d) > 0.0)) {
        throw DegenerateGeometryError("spins " + std::to_string(j) + " and " +
                                      std::to_string(k) + " coincide");
      }
    }
  }
}

CouplingSet::CouplingSet(std::size_t n, UnitsConvention units)
    : n_(n), units_(units), b_(n * n, 0.0) {}

CouplingSet CouplingSet::from_matrix(std::size_t n, std::span<const double> rows,
                                     UnitsConvention units) {
  if (rows.size() != n * n) throw DomainError("coupling matrix must be n x n");
  CouplingSet c(n, units);
  for (std::size_t j = 0; j < n; ++j) {
    if (rows[j * n + j] != 0.0) throw DomainError("coupling diagonal must be zero");
    for (std::size_t k = j + 1; k < n; ++k) {
      const double v = rows[j * n + k];
      if (v != rows[k * n + j]) throw DomainError("coupling matrix must be symmetric");
      c.set(j, k, v);
    }
  }
  return c;
}

CouplingSet CouplingSet::from_upper_triangle(std::size_t n,
                                             std::span<const double> upper,
                                             UnitsConvention units) {
  if (upper.size() != n * (n - (n > 0 ? 1 : 0)) / 2) {
    throw DomainError("upper triangle must hold n(n-1)/2 entries");
  }
  CouplingSet c(n, units);
  std::size_t idx = 0;
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = j + 1; k < n; ++k) c.set(j, k, upper[idx++]);
  }
  return c;
}

void CouplingSet::set(std::size_t j, std::size_t k, double value) {
  if (j >= n_ || k >= n_) throw DomainError("spin index out of range");
  if (j == k) throw DomainError("self-coupling is not allowed");
  if (!std::isfinite(value)) throw DomainError("couplings must be finite");
  b_[j * n_ + k] = value;
  b_[k * n_ + j] = value;
}

std::vector<double> CouplingSet::upper_triangle() const {
  std::vector<double> out;
  out.reserve(n_ * (n_ > 0 ? n_ - 1 : 0) / 2);
  for (std::size_t j = 0; j < n_; ++j) {
    for (std::size_t k = j + 1; k < n_; ++k) out.push_back((*this)(j, k));
  }
  return out;
}

CouplingSet dipolar_couplings(const SpinGeometry& geometry, UnitsConvention units) {
  geometry.validate();
  const std::size_t n = geometry.positions.size();
  const double gamma = geometry.gyromagnetic_ratio;
  const double prefactor = (units == UnitsConvention::SI ? constants::kMu0Over4Pi : 1.0) *
                           0.5 * constants::kHbar * gamma * gamma;
  CouplingSet c(n, units);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = j + 1; k < n; ++k) {
      const Vec3 d{geometry.positions[k][0] - geometry.positions[j][0],
                   geometry.positions[k][1] - geometry.positions[j][1],
                   geometry.positions[k][2] - geometry.positions[j][2]};
      const double r2 = dot(d, d);
      const double r = std::sqrt(r2);
      const double cos_theta = dot(d, geometry.field_axis) / r;
      c.set(j, k, prefactor * (1.0 - 3.0 * cos_theta * cos_theta) / (r2 * r));
    }
  }
  return c;
}

CouplingSet synth_constant(std::size_t n, double b) {
  require_pairs(n);
  CouplingSet c(n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = j + 1; k < n; ++k) c.set(j, k, b);
  }
  return c;
}

CouplingSet synth_random(std::size_t n, double magnitude, bool zero_mean,
                         std::uint64_t seed) {
  require_pairs(n);
  CouplingSet c(n);
  std::uint64_t state = seed;
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = j + 1; k < n; ++k) {
      const double u = unit_uniform(state);
      c.set(j, k, zero_mean ? magnitude * (2.0 * u - 1.0) : magnitude * u);
    }
  }
  return c;
}

CorrelationSummary degree_of_correlation(const CouplingSet& c) {
  require_pairs(c.size());
  const std::size_t n = c.size();
  CorrelationSummary out;
  out.per_spin_p.resize(n);
  double total = 0.0;
  std::size_t defined = 0;
  for (std::size_t k = 0; k < n; ++k) {
    double sum = 0.0;
    double sum_sq = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == k) continue;
      sum += c(j, k);
      sum_sq += c(j, k) * c(j, k);
    }
    if (sum_sq == 0.0) continue;
    // Cauchy-Schwarz bounds the ratio by 1; rounding can overshoot slightly.
    const double pk = std::min(1.0, sum * sum / (static_cast<double>(n - 1) * sum_sq));
    out.per_spin_p[k] = pk;
    total += pk;
    ++defined;
  }
  if (defined == 0) {
    throw UndefinedCorrelationError("degree of correlation undefined: all couplings are zero");
  }
  out.p = total / static_cast<double>(defined);
  return out;
}

CorrelationSummary second_moment(const CouplingSet& c) {
  require_pairs(c.size());
  const std::size_t n = c.size();
  double sum_sq = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    for (double v : c.row(k)) sum_sq += v * v;
  }
  if (sum_sq == 0.0) {
    throw UndefinedCorrelationError("second moment undefined: all couplings are zero");
  }
  CorrelationSummary out;
  out.M2 = 2.25 * sum_sq / static_cast<double>(n);
  out.alpha = out.M2 / 9.0;
  return out;
}

CorrelationSummary summarize(const CouplingSet& c) {
  CorrelationSummary out = degree_of_correlation(c);
  const CorrelationSummary moment = second_moment(c);
  out.M2 = moment.M2;
  out.alpha = moment.alpha;
  return out;
}

}  // namespace mqdecay

// couplings.hpp - pairwise dipolar couplings of an n-spin cluster and the
// scalars derived from them (degree of correlation p, second moment M2).

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace mqdecay {

using Vec3 = std::array<double, 3>;

namespace constants {
inline constexpr double kHbar = 1.054571817e-34;            // J s
inline constexpr double kMu0Over4Pi = 1.0e-7;               // T m / A
inline constexpr double kProtonGyromagneticRatio = 2.6752218744e8;  // rad/(s T)
}  // namespace constants

enum class UnitsConvention { SI, Gaussian };

std::string_view to_string(UnitsConvention units);
/// Accepts "SI" or "Gaussian" (case-insensitive); throws DomainError otherwise.
UnitsConvention parse_units(std::string_view text);

struct SpinGeometry {
  std::vector<Vec3> positions;  // meters
  Vec3 field_axis{0.0, 0.0, 1.0};
  double gyromagnetic_ratio = constants::kProtonGyromagneticRatio;

  /// Throws DomainError for n < 2 or a non-unit field axis and
  /// DegenerateGeometryError for coincident spins.
  void validate() const;
};

/// Symmetric matrix of angular-frequency couplings b_jk = d_jk / hbar
/// (rad/s) with zero diagonal.
class CouplingSet {
 public:
  CouplingSet() = default;
  explicit CouplingSet(std::size_t n,
                       UnitsConvention units = UnitsConvention::SI);

  /// Builds from a full row-major n x n matrix. The matrix must be
  /// symmetric with zero diagonal and finite entries.
  static CouplingSet from_matrix(std::size_t n, std::span<const double> rows,
                                 UnitsConvention units = UnitsConvention::SI);
  /// Builds from the row-major strict upper triangle (n(n-1)/2 entries).
  static CouplingSet from_upper_triangle(
      std::size_t n, std::span<const double> upper,
      UnitsConvention units = UnitsConvention::SI);

  std::size_t size() const { return n_; }
  UnitsConvention units() const { return units_; }

  double operator()(std::size_t j, std::size_t k) const {
    return b_[j * n_ + k];
  }
  /// Sets b_jk and b_kj together; j == k is rejected.
  void set(std::size_t j, std::size_t k, double value);

  std::span<const double> row(std::size_t k) const {
    return {b_.data() + k * n_, n_};
  }
  std::vector<double> upper_triangle() const;

 private:
  std::size_t n_ = 0;
  UnitsConvention units_ = UnitsConvention::SI;
  std::vector<double> b_;
};

struct CorrelationSummary {
  double p = 0.0;
  double M2 = 0.0;     // s^-2
  double alpha = 0.0;  // s^-2, M2 / 9
  /// Empty entries mark reference spins whose couplings are all zero.
  std::vector<std::optional<double>> per_spin_p;
};

/// b_jk = k_units * (1/2) * hbar * gamma^2 * (1 - 3 cos^2 theta_jk) / r_jk^3,
/// with k_units = mu0/4pi in SI mode and 1 in Gaussian mode.
CouplingSet dipolar_couplings(const SpinGeometry& geometry,
                              UnitsConvention units = UnitsConvention::SI);

CouplingSet synth_constant(std::size_t n, double b);

/// Independent uniform draws on [-magnitude, magnitude] (zero_mean) or
/// [0, magnitude]. Deterministic for a given seed on every platform.
CouplingSet synth_random(std::size_t n, double magnitude, bool zero_mean,
                         std::uint64_t seed);

/// per_spin_p[k] = (sum_j b_jk)^2 / ((n-1) sum_j b_jk^2); p is the mean over
/// reference spins with a nonzero row. Only p and per_spin_p are filled.
/// Throws UndefinedCorrelationError when every row is zero.
CorrelationSummary degree_of_correlation(const CouplingSet& c);

/// M2 = (9/4) * mean_k sum_j b_jk^2 and alpha = M2 / 9. Only M2 and alpha
/// are filled. Throws UndefinedCorrelationError for an all-zero set.
CorrelationSummary second_moment(const CouplingSet& c);

/// degree_of_correlation and second_moment combined.
CorrelationSummary summarize(const CouplingSet& c);

}  // namespace mqdecay

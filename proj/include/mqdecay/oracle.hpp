// oracle.hpp - exact signal of small clusters by enumeration of all (a,b)
// configuration pairs, plus the finite-n external-bath sums.

#pragma once

#include <cstddef>
#include <span>

#include "mqdecay/combinatorics.hpp"
#include "mqdecay/couplings.hpp"
#include "mqdecay/series.hpp"

namespace mqdecay {

struct OracleOptions {
  std::size_t max_spins = 14;
  /// 0 selects std::thread::hardware_concurrency().
  std::size_t workers = 0;
};

/// S_M(t) = (1/N_M) sum over pairs of order M of cos(t Phi_ab), with
/// Phi_ab = sum_{j in E, k in N} b_jk a_j a_k for the agreeing (E) and
/// flipped (N) spin sets. The sum over the free signs on E is carried out
/// in closed form, 2^{|E|} prod_{j in E} cos(t h_j).
///
/// Results are bit-identical for any worker count.
DecaySeries exact_signal_dipolar(const CouplingSet& c, int M,
                                 std::span<const double> times,
                                 const OracleOptions& options = {});

/// Equal-weight average over every even-order element:
///   S(t) = sum_{M even} N_M S_M(t) / sum_{M even} N_M.
DecaySeries exact_signal_total(const CouplingSet& c,
                               std::span<const double> times,
                               const OracleOptions& options = {});

/// Number of (a,b) pairs represented by the oracle enumeration of order M.
/// Equals coherence_count(n, M).
BigInt enumerated_pair_count(std::size_t n, int M);

enum class BathCorrelation { Uncorrelated, Correlated };

struct BathKind {
  BathCorrelation variant = BathCorrelation::Uncorrelated;
  /// Gamma(t) = gamma_alpha * t^2, s^-2.
  double gamma_alpha = 0.0;
};

/// Uncorrelated: sum_f w_f exp(-f Gamma(t)) / sum_f w_f with
/// w_f = config_count(n, M, f). Correlated: exp(-M^2 Gamma(t)).
DecaySeries exact_signal_bath(std::size_t n, int M, const BathKind& bath,
                              std::span<const double> times);

/// c in S(t) ~ 1 - c t^2 + d t^4, least squares over the leading samples
/// with 1 - S < 0.05. Throws FitError with fewer than three usable samples.
double quadratic_coefficient(const DecaySeries& series);

}  // namespace mqdecay

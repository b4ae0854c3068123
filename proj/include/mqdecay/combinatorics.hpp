// combinatorics.hpp - exact and asymptotic counts of coherences and
// (a,b) configuration pairs for an n-spin-1/2 cluster.

#pragma once

#include <boost/multiprecision/cpp_int.hpp>

namespace mqdecay {

using BigInt = boost::multiprecision::cpp_int;

/// A count that may be far outside double range, held as its natural log.
struct LogCount {
  double log_value = 0.0;

  /// exp(log_value); +inf when the count overflows a double.
  double value() const;
  /// Decimal mantissa in [1,10) and exponent such that value = m * 10^e.
  double mantissa10() const;
  long exponent10() const;
};

/// Exact binomial coefficient C(n, k); zero when k > n.
BigInt binomial(unsigned n, unsigned k);

/// Natural log of a positive big integer, accurate to double precision.
double log_of(const BigInt& value);

/// Number of density-matrix elements of coherence order M in an n-spin
/// system: C(2n, n+M). Throws DomainError when |M| > n.
BigInt coherence_count(int n, int M);

/// Large-n form 2^{2n} exp(-M^2/n) / sqrt(pi n), evaluated in the log domain.
LogCount coherence_count_asymptotic(int n, int M);

/// Number of configuration pairs with coherence order M and Hamming
/// distance f: 2^{n-f} C(n,f) C(f,(f+M)/2).
///
/// Requires |M| <= f <= n and f = M (mod 2); otherwise DomainError.
BigInt config_count(int n, int M, int f);

/// Gaussian (Stirling) approximation
///   2^{2n+1} / (pi sqrt(n f)) exp[-(f-n/2)^2/(n/2)] exp[-M^2/(2f)].
/// The prefactor carries the factor 2 from the two binomial Stirling
/// forms, so the ratio to config_count tends to 1 as n grows.
/// Meaningful for n >> 1. Throws DomainError for f outside [max(|M|,1), n].
LogCount config_count_asymptotic(int n, int M, int f);

/// True when (n, M, f) satisfies the parity and range conditions.
bool valid_hamming_distance(int n, int M, int f);

}  // namespace mqdecay

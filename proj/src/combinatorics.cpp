#include "mqdecay/combinatorics.hpp"

#include <cmath>
#include <cstdlib>
#include <numbers>
#include <string>

#include "mqdecay/errors.hpp"

namespace mqdecay {

namespace {

constexpr double kLn2 = std::numbers::ln2;

void require_order(int n, int M) {
  if (n < 0) throw DomainError("spin count must be nonnegative");
  if (std::abs(M) > n) {
    throw DomainError("coherence order |M|=" + std::to_string(std::abs(M)) +
                      " exceeds n=" + std::to_string(n));
  }
}

}  // namespace

double LogCount::value() const { return std::exp(log_value); }

long LogCount::exponent10() const {
  return static_cast<long>(std::floor(log_value / std::numbers::ln10));
}

double LogCount::mantissa10() const {
  const double e = static_cast<double>(exponent10());
  return std::exp(log_value - e * std::numbers::ln10);
}

BigInt binomial(unsigned n, unsigned k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  BigInt result = 1;
  // Each partial product is itself a binomial, so the division is exact.
  for (unsigned i = 1; i <= k; ++i) {
    result *= n - k + i;
    result /= i;
  }
  return result;
}

double log_of(const BigInt& value) {
  if (value <= 0) throw DomainError("log of a nonpositive count");
  const unsigned bits = boost::multiprecision::msb(value) + 1;
  if (bits <= 1000) return std::log(value.convert_to<double>());
  const unsigned shift = bits - 64;
  const BigInt top = value >> shift;
  return std::log(top.convert_to<double>()) + shift * kLn2;
}

BigInt coherence_count(int n, int M) {
  require_order(n, M);
  return binomial(static_cast<unsigned>(2 * n), static_cast<unsigned>(n + M));
}

LogCount coherence_count_asymptotic(int n, int M) {
  if (n < 1) throw DomainError("asymptotic coherence count needs n >= 1");
  const double nn = n;
  const double m = M;
  return {2.0 * nn * kLn2 - m * m / nn - 0.5 * std::log(std::numbers::pi * nn)};
}

bool valid_hamming_distance(int n, int M, int f) {
  const int m = std::abs(M);
  return n >= 0 && m <= n && f >= m && f <= n && (f - m) % 2 == 0;
}

BigInt config_count(int n, int M, int f) {
  require_order(n, M);
  if (!valid_hamming_distance(n, M, f)) {
    throw DomainError("Hamming distance f=" + std::to_string(f) +
                      " invalid for n=" + std::to_string(n) +
                      ", M=" + std::to_string(M) +
                      " (need |M| <= f <= n, same parity)");
  }
  const int m = std::abs(M);
  BigInt pow2 = 1;
  pow2 <<= static_cast<unsigned>(n - f);
  return pow2 * binomial(n, f) * binomial(f, (f + m) / 2);
}

LogCount config_count_asymptotic(int n, int M, int f) {
  require_order(n, M);
  if (f < std::max(std::abs(M), 1) || f > n) {
    throw DomainError("asymptotic configuration count needs max(|M|,1) <= f <= n");
  }
  const double nn = n;
  const double ff = f;
  const double m = M;
  const double dev = ff - nn / 2.0;
  return {(2.0 * nn + 1.0) * kLn2 - std::log(std::numbers::pi) -
          0.5 * std::log(nn * ff) - dev * dev / (nn / 2.0) - m * m / (2.0 * ff)};
}

}  // namespace mqdecay

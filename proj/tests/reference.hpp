// reference.hpp - independent reference computations used only by tests.
// Nothing here shares code paths with the library routines it checks.

#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include "mqdecay/couplings.hpp"

namespace mqdecay::reference {

/// Spin value a_j = +1 when bit j of `state` is set, else -1.
inline int spin(std::uint32_t state, std::size_t j) { return (state >> j) & 1U ? 1 : -1; }

/// Coherence order of |a><b| as popcount(a) - popcount(b).
inline int order_of(std::uint32_t a, std::uint32_t b) {
  return std::popcount(a) - std::popcount(b);
}

/// Direct sum over every (a, b) pair of cos(t Phi_ab) with
/// Phi_ab = (1/2) sum_{j<k} b_jk (a_j a_k - b_j b_k). With `even_only` the
/// average runs over all even orders, otherwise over order M only.
inline double direct_signal(const CouplingSet& c, double t, int M, bool even_only = false) {
  const std::size_t n = c.size();
  const std::uint32_t states = std::uint32_t{1} << n;
  double sum = 0.0;
  double count = 0.0;
  for (std::uint32_t a = 0; a < states; ++a) {
    for (std::uint32_t b = 0; b < states; ++b) {
      const int m = order_of(a, b);
      if (even_only ? (m % 2 != 0) : (m != M)) continue;
      double phase = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = j + 1; k < n; ++k) {
          phase += c(j, k) * (spin(a, j) * spin(a, k) - spin(b, j) * spin(b, k));
        }
      }
      sum += std::cos(0.5 * t * phase);
      count += 1.0;
    }
  }
  return sum / count;
}

/// Number of (a, b) pairs with order M and Hamming distance f, by
/// enumeration; f < 0 counts every distance.
inline std::uint64_t count_pairs(std::size_t n, int M, int f = -1) {
  const std::uint32_t states = std::uint32_t{1} << n;
  std::uint64_t count = 0;
  for (std::uint32_t a = 0; a < states; ++a) {
    for (std::uint32_t b = 0; b < states; ++b) {
      if (order_of(a, b) != M) continue;
      if (f >= 0 && std::popcount(a ^ b) != f) continue;
      ++count;
    }
  }
  return count;
}

/// Composite Simpson rule on [lo, hi] with an even number of panels.
inline double simpson(const std::function<double(double)>& g, double lo, double hi,
                      int panels) {
  if (panels % 2 != 0) ++panels;
  const double h = (hi - lo) / panels;
  double sum = g(lo) + g(hi);
  for (int i = 1; i < panels; ++i) sum += (i % 2 ? 4.0 : 2.0) * g(lo + i * h);
  return sum * h / 3.0;
}

/// Binomial coefficient in double via Pascal's rule.
inline double pascal_binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  std::vector<double> row(n + 1, 0.0);
  row[0] = 1.0;
  for (int i = 1; i <= n; ++i) {
    for (int j = i; j > 0; --j) row[j] += row[j - 1];
  }
  return row[k];
}

}  // namespace mqdecay::reference

#include "mqdecay/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "mqdecay/detail/parallel.hpp"
#include "mqdecay/errors.hpp"

namespace mqdecay {

namespace {

using Mask = std::uint32_t;

// Masks are split into this many contiguous blocks; each block owns one
// accumulator and blocks are reduced in index order.
constexpr Mask kMaxBlocks = 256;

/// Visits every configuration pair class (N, a_N) with flipped set N given
/// by a mask in [mask_begin, mask_end). With `order` set only sign patterns
/// with sum_{k in N} a_k = order are visited; otherwise every pattern of even
/// order. The visitor receives the agreeing spins E, the flipped spins N and
/// a bit pattern over N (bit i set means a_{N[i]} = +1).
template <typename Visitor>
void for_each_flip_class(std::size_t n, std::optional<int> order, Mask mask_begin,
                         Mask mask_end, Visitor&& visit) {
  std::vector<std::size_t> flipped;
  std::vector<std::size_t> agreeing;
  flipped.reserve(n);
  agreeing.reserve(n);
  for (Mask mask = mask_begin; mask < mask_end; ++mask) {
    const int f = std::popcount(mask);
    if (order) {
      if (!valid_hamming_distance(static_cast<int>(n), *order, f)) continue;
    } else if (f % 2 != 0) {
      continue;
    }
    flipped.clear();
    agreeing.clear();
    for (std::size_t i = 0; i < n; ++i) {
      ((mask >> i) & 1U ? flipped : agreeing).push_back(i);
    }
    const std::uint64_t limit = std::uint64_t{1} << f;
    if (order) {
      const int ups = (f + *order) / 2;
      if (ups == 0) {
        visit(agreeing, flipped, std::uint64_t{0});
        continue;
      }
      // Gosper's hack over all f-bit patterns with `ups` bits set.
      for (std::uint64_t s = (std::uint64_t{1} << ups) - 1; s < limit;) {
        visit(agreeing, flipped, s);
        const std::uint64_t low = s & (~s + 1);
        const std::uint64_t ripple = s + low;
        s = (((ripple ^ s) >> 2) / low) | ripple;
      }
    } else {
      for (std::uint64_t s = 0; s < limit; ++s) visit(agreeing, flipped, s);
    }
  }
}

void check_cap(std::size_t n, const OracleOptions& options) {
  if (n > options.max_spins) {
    throw ResourceError("oracle limited to " + std::to_string(options.max_spins) +
                        " spins, got " + std::to_string(n));
  }
  if (n >= 31) throw ResourceError("oracle cannot enumerate more than 30 spins");
}

// Raw sum over the selected pairs of cos(t Phi_ab), one entry per time.
std::vector<double> raw_signal(const CouplingSet& c, std::optional<int> order,
                               std::span<const double> times,
                               const OracleOptions& options) {
  const std::size_t n = c.size();
  const Mask mask_count = Mask{1} << n;
  const Mask blocks = std::min(mask_count, kMaxBlocks);
  const Mask per_block = mask_count / blocks;
  const std::size_t nt = times.size();

  std::vector<std::vector<double>> partial(blocks, std::vector<double>(nt, 0.0));
  detail::parallel_for(blocks, options.workers, [&](std::size_t block) {
    std::vector<double>& acc = partial[block];
    std::vector<double> fields;
    const Mask begin = static_cast<Mask>(block) * per_block;
    for_each_flip_class(
        n, order, begin, begin + per_block,
        [&](const std::vector<std::size_t>& agreeing,
            const std::vector<std::size_t>& flipped, std::uint64_t pattern) {
          // h_j = sum_{k in N} b_jk a_k for each agreeing spin j.
          fields.assign(agreeing.size(), 0.0);
          for (std::size_t e = 0; e < agreeing.size(); ++e) {
            const auto row = c.row(agreeing[e]);
            double h = 0.0;
            for (std::size_t i = 0; i < flipped.size(); ++i) {
              const double a = (pattern >> i) & 1U ? 1.0 : -1.0;
              h += row[flipped[i]] * a;
            }
            fields[e] = h;
          }
          const double weight = std::ldexp(1.0, static_cast<int>(agreeing.size()));
          for (std::size_t ti = 0; ti < nt; ++ti) {
            double product = weight;
            for (double h : fields) product *= std::cos(times[ti] * h);
            acc[ti] += product;
          }
        });
  });

  std::vector<double> total(nt, 0.0);
  for (const auto& acc : partial) {
    for (std::size_t ti = 0; ti < nt; ++ti) total[ti] += acc[ti];
  }
  return total;
}

std::vector<double> to_vector(std::span<const double> times) {
  std::vector<double> out(times.begin(), times.end());
  validate_time_grid(out);
  return out;
}

}  // namespace

DecaySeries exact_signal_dipolar(const CouplingSet& c, int M,
                                 std::span<const double> times,
                                 const OracleOptions& options) {
  const std::size_t n = c.size();
  check_cap(n, options);
  const double norm = coherence_count(static_cast<int>(n), M).convert_to<double>();
  DecaySeries out;
  out.times = to_vector(times);
  out.values = raw_signal(c, M, times, options);
  for (double& v : out.values) v /= norm;
  out.label = "oracle dipolar n=" + std::to_string(n) + " M=" + std::to_string(M);
  return out;
}

DecaySeries exact_signal_total(const CouplingSet& c, std::span<const double> times,
                               const OracleOptions& options) {
  const std::size_t n = c.size();
  check_cap(n, options);
  BigInt norm = 0;
  for (int M = -static_cast<int>(n); M <= static_cast<int>(n); ++M) {
    if (M % 2 == 0) norm += coherence_count(static_cast<int>(n), M);
  }
  const double denom = norm.convert_to<double>();
  DecaySeries out;
  out.times = to_vector(times);
  out.values = raw_signal(c, std::nullopt, times, options);
  for (double& v : out.values) v /= denom;
  out.label = "oracle dipolar total n=" + std::to_string(n);
  return out;
}

BigInt enumerated_pair_count(std::size_t n, int M) {
  if (n >= 31) throw ResourceError("oracle cannot enumerate more than 30 spins");
  if (std::abs(M) > static_cast<int>(n)) {
    throw DomainError("coherence order exceeds spin count");
  }
  BigInt total = 0;
  for_each_flip_class(n, M, 0, Mask{1} << n,
                      [&](const std::vector<std::size_t>& agreeing,
                          const std::vector<std::size_t>&, std::uint64_t) {
                        total += BigInt(1) << agreeing.size();
                      });
  return total;
}

DecaySeries exact_signal_bath(std::size_t n, int M, const BathKind& bath,
                              std::span<const double> times) {
  const int ni = static_cast<int>(n);
  if (n < 1) throw DomainError("bath signal needs n >= 1");
  if (std::abs(M) > ni) throw DomainError("coherence order exceeds spin count");
  if (!(bath.gamma_alpha >= 0.0) || !std::isfinite(bath.gamma_alpha)) {
    throw DomainError("gamma_alpha must be finite and nonnegative");
  }
  DecaySeries out;
  out.times = to_vector(times);
  out.values.resize(out.times.size());

  if (bath.variant == BathCorrelation::Correlated) {
    const double m2 = static_cast<double>(M) * M;
    for (std::size_t i = 0; i < out.times.size(); ++i) {
      const double t = out.times[i];
      out.values[i] = std::exp(-m2 * bath.gamma_alpha * t * t);
    }
    out.label = "bath correlated n=" + std::to_string(n) + " M=" + std::to_string(M);
    return out;
  }

  if (n > 2000) throw ResourceError("uncorrelated bath sum limited to n <= 2000");
  // Weights in the log domain; lgamma keeps n up to 2000 in range.
  const int m = std::abs(M);
  auto log_binomial = [](double a, double b) {
    return std::lgamma(a + 1.0) - std::lgamma(b + 1.0) - std::lgamma(a - b + 1.0);
  };
  std::vector<int> fs;
  std::vector<double> log_w;
  for (int f = m; f <= ni; f += 2) {
    fs.push_back(f);
    log_w.push_back((ni - f) * std::numbers::ln2 + log_binomial(ni, f) +
                    log_binomial(f, (f + m) / 2));
  }
  const double peak = *std::max_element(log_w.begin(), log_w.end());
  std::vector<double> w(log_w.size());
  double norm = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    w[i] = std::exp(log_w[i] - peak);
    norm += w[i];
  }
  for (std::size_t i = 0; i < out.times.size(); ++i) {
    const double gamma = bath.gamma_alpha * out.times[i] * out.times[i];
    double s = 0.0;
    for (std::size_t k = 0; k < w.size(); ++k) s += w[k] * std::exp(-fs[k] * gamma);
    out.values[i] = s / norm;
  }
  out.label = "bath uncorrelated n=" + std::to_string(n) + " M=" + std::to_string(M);
  return out;
}

double quadratic_coefficient(const DecaySeries& series) {
  if (series.times.size() != series.values.size()) {
    throw FitError("series times and values differ in length");
  }
  // Leading window with 1 - S < 0.05, excluding t = 0 which carries no
  // information about the curvature.
  std::vector<double> xs;
  std::vector<double> ys;
  for (std::size_t i = 0; i < series.size(); ++i) {
    const double y = 1.0 - series.values[i];
    if (!(y < 0.05)) break;
    if (series.times[i] > 0.0) {
      xs.push_back(series.times[i] * series.times[i]);
      ys.push_back(y);
    }
  }
  if (xs.size() < 3) {
    throw FitError("quadratic coefficient needs at least three samples with 1 - S < 0.05");
  }
  // y = c x + e x^2 by least squares, with x rescaled to [0, 1].
  const double scale = xs.back();
  double s11 = 0, s12 = 0, s22 = 0, r1 = 0, r2 = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double u = xs[i] / scale;
    const double u2 = u * u;
    s11 += u2;
    s12 += u2 * u;
    s22 += u2 * u2;
    r1 += u * ys[i];
    r2 += u2 * ys[i];
  }
  const double det = s11 * s22 - s12 * s12;
  if (!(std::abs(det) > 1e-300)) throw FitError("quadratic coefficient fit is singular");
  const double c_scaled = (r1 * s22 - r2 * s12) / det;
  return c_scaled / scale;
}

}  // namespace mqdecay

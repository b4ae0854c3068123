#include <doctest.h>

#include <cmath>

#include "mqdecay/combinatorics.hpp"
#include "mqdecay/errors.hpp"
#include "reference.hpp"

using namespace mqdecay;

TEST_CASE("coherence_count small cases") {
  CHECK(coherence_count(2, 0) == 6);
  CHECK(coherence_count(2, 2) == 1);
  CHECK(coherence_count(3, 1) == reference::count_pairs(3, 1));
  CHECK(coherence_count(3, 1) == 15);
  CHECK_THROWS_AS(coherence_count(3, 4), DomainError);
  CHECK_THROWS_AS(coherence_count(3, -4), DomainError);
}

TEST_CASE("coherence_count matches enumeration and is symmetric in M") {
  for (int n = 1; n <= 6; ++n) {
    for (int M = -n; M <= n; ++M) {
      CHECK(coherence_count(n, M) == reference::count_pairs(n, M));
      CHECK(coherence_count(n, M) == coherence_count(n, -M));
    }
  }
}

TEST_CASE("coherence_count is exact at n = 650") {
  const BigInt count = coherence_count(650, 0);
  // C(1300, 650) has 390 decimal digits.
  CHECK(count.str().size() == 390);
  CHECK(log_of(count) == doctest::Approx(std::lgamma(1301.0) - 2.0 * std::lgamma(651.0)).epsilon(1e-12));
}

TEST_CASE("coherence_count_asymptotic accuracy") {
  const double exact100 = log_of(coherence_count(100, 0));
  const double ratio100 = std::exp(coherence_count_asymptotic(100, 0).log_value - exact100);
  CHECK(std::abs(ratio100 - 1.0) < 0.01);
  CHECK(ratio100 == doctest::Approx(1.00125077636093121).epsilon(1e-9));

  const double drop = coherence_count_asymptotic(100, 10).log_value -
                      coherence_count_asymptotic(100, 0).log_value;
  CHECK(drop == doctest::Approx(-1.0).epsilon(1e-14));

  const double ratio10 =
      std::exp(coherence_count_asymptotic(10, 0).log_value - log_of(coherence_count(10, 0)));
  CHECK(std::abs(ratio10 - 1.0) < 0.05);
  CHECK(ratio10 == doctest::Approx(1.01257319341131445).epsilon(1e-9));
}

TEST_CASE("LogCount decimal decomposition survives overflow") {
  const LogCount big = coherence_count_asymptotic(650, 0);
  CHECK(std::isinf(big.value()));
  CHECK(big.mantissa10() >= 1.0);
  CHECK(big.mantissa10() < 10.0);
  CHECK(big.exponent10() == 389);
}

TEST_CASE("config_count examples") {
  CHECK(config_count(2, 1, 1) == 4);
  CHECK(config_count(2, 1, 1) == reference::count_pairs(2, 1, 1));
  for (int n = 1; n <= 12; ++n) CHECK(config_count(n, 0, 0) == (BigInt(1) << n));
  CHECK(config_count(3, 1, 1) + config_count(3, 1, 3) == 15);
}

TEST_CASE("config_count domain errors") {
  CHECK_THROWS_AS(config_count(4, 1, 2), DomainError);  // parity
  CHECK_THROWS_AS(config_count(4, 2, 0), DomainError);  // f < |M|
  CHECK_THROWS_AS(config_count(4, 0, 6), DomainError);  // f > n
  CHECK_THROWS_AS(config_count(4, 5, 5), DomainError);  // |M| > n
}

TEST_CASE("config_count matches pair enumeration") {
  for (int n = 1; n <= 6; ++n) {
    for (int M = -n; M <= n; ++M) {
      for (int f = 0; f <= n; ++f) {
        const auto brute = reference::count_pairs(n, M, f);
        if (valid_hamming_distance(n, M, f)) {
          CHECK(config_count(n, M, f) == brute);
        } else {
          CHECK(brute == 0);
        }
      }
    }
  }
}

TEST_CASE("sum over Hamming distance reproduces coherence_count") {
  for (int n = 0; n <= 20; ++n) {
    for (int M = -n; M <= n; ++M) {
      BigInt sum = 0;
      for (int f = std::abs(M); f <= n; f += 2) sum += config_count(n, M, f);
      CHECK(sum == coherence_count(n, M));
    }
  }
}

TEST_CASE("config_count_asymptotic shape and accuracy") {
  const int n = 100;
  int argmax = -1;
  double best = -INFINITY;
  for (int f = 2; f <= n; f += 2) {
    const double v = config_count_asymptotic(n, 0, f).log_value;
    if (v > best) {
      best = v;
      argmax = f;
    }
  }
  CHECK(std::abs(argmax - n / 2) <= 1);

  // Strictly decreasing away from the peak on both sides.
  for (int f = 52; f <= n; f += 2) {
    CHECK(config_count_asymptotic(n, 0, f).log_value <
          config_count_asymptotic(n, 0, f - 2).log_value);
  }
  for (int f = 48; f >= 2; f -= 2) {
    CHECK(config_count_asymptotic(n, 0, f).log_value <
          config_count_asymptotic(n, 0, f + 2).log_value);
  }

  const double ratio =
      std::exp(config_count_asymptotic(100, 0, 50).log_value - log_of(config_count(100, 0, 50)));
  CHECK(std::abs(ratio - 1.0) < 0.05);
  CHECK(ratio == doctest::Approx(1.00752781778757674).epsilon(1e-9));

  CHECK_THROWS_AS(config_count_asymptotic(10, 0, 0), DomainError);
}

TEST_CASE("asymptotic to exact ratio approaches 1 at fixed M/sqrt(n)") {
  // (n, M, f) with M ~ sqrt(n)/2 and f near n/2; reference ratios from
  // 30-digit arithmetic.
  struct Case {
    int n, M, f;
    double ratio;
  };
  const Case cases[] = {{50, 4, 26, 1.00339837533147126},
                        {100, 6, 50, 1.00121440501384244},
                        {200, 8, 100, 1.00090375653763268}};
  double previous = INFINITY;
  for (const auto& c : cases) {
    const double ratio = std::exp(config_count_asymptotic(c.n, c.M, c.f).log_value -
                                  log_of(config_count(c.n, c.M, c.f)));
    CHECK(ratio == doctest::Approx(c.ratio).epsilon(1e-9));
    CHECK(std::abs(ratio - 1.0) < previous);
    previous = std::abs(ratio - 1.0);
  }
}

TEST_CASE("binomial edge cases") {
  CHECK(binomial(0, 0) == 1);
  CHECK(binomial(5, 6) == 0);
  CHECK(binomial(60, 30) == BigInt("118264581564861424"));
  CHECK_THROWS_AS(log_of(BigInt(0)), DomainError);
}

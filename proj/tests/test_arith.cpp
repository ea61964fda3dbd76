#include <doctest.h>

#include "momentlab/arith.hpp"
#include "momentlab/bessel.hpp"
#include "momentlab/checks.hpp"
#include "momentlab/errors.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>

using namespace momentlab;

namespace {

double brute_kloosterman(std::int64_t m, std::int64_t n, std::int64_t c) {
  std::complex<double> s = 0;
  for (std::int64_t x = 0; x < c; ++x) {
    if (std::gcd(x, c) != 1) continue;
    std::int64_t xb = 1;
    while ((x * xb) % c != 1 % c) ++xb;
    const double t = static_cast<double>(floor_mod(m * x + n * xb, c)) / c;
    s += std::polar(1.0, 2 * std::numbers::pi * t);
  }
  return s.real();
}

}  // namespace

TEST_SUITE("arith") {
  TEST_CASE("Kloosterman sums against a brute-force loop") {
    for (std::int64_t c : {1, 2, 3, 5, 12, 49, 97, 360})
      for (std::int64_t m : {-7, 0, 1, 6})
        for (std::int64_t n : {1, 4, 35}) CHECK(kloosterman_real(m, n, c) == doctest::Approx(brute_kloosterman(m, n, c)).epsilon(1e-11));
    CHECK(kloosterman_real(1, 1, 5) == doctest::Approx(2.0 + 2.0 * std::cos(4.0 * std::numbers::pi / 5.0)));
  }

  TEST_CASE("Kloosterman rows match single evaluations") {
    for (std::int64_t c : {7, 30, 101}) {
      const auto row = kloosterman_row(3, c);
      for (std::int64_t j = 0; j < c; ++j) CHECK(row[j] == doctest::Approx(kloosterman_real(3, j, c)).epsilon(1e-11));
    }
  }

  TEST_CASE("Ramanujan sums are S(0, m; c)") {
    for (std::int64_t c = 1; c <= 40; ++c)
      for (std::int64_t m : {0, 1, 6, 12, 35})
        CHECK(static_cast<double>(ramanujan_sum(m, c)) == doctest::Approx(kloosterman_real(0, m, c)).epsilon(1e-10));
  }

  TEST_CASE("batch inverses") {
    const std::vector<std::int64_t> v{1, 2, 4, 7, 8, 11, 13, 14};
    const auto inv = batch_inverses(v, 15);
    for (std::size_t i = 0; i < v.size(); ++i) CHECK((v[i] * inv[i]) % 15 == 1);
  }

  TEST_CASE("Weil bound, symmetry and CRT on random tuples") {
    const auto r = kloosterman_properties(500, 2000, 7);
    CHECK(r.tuples == 500);
    CHECK(r.violations.empty());
    CHECK(r.max_weil_ratio <= 1.0);
  }

  TEST_CASE("reciprocity holds exactly and rejects common factors") {
    const auto r = reciprocity_check(300, 3, 200);
    CHECK(r.violations == 0);
    CHECK_THROWS_AS(reciprocity_identity(1, 1, 2, 1, 2, 1), PreconditionError);
  }

  TEST_CASE("arithmetic functions") {
    CHECK(mobius(30) == -1);
    CHECK(mobius(12) == 0);
    CHECK(euler_phi(360) == 96);
    CHECK(tau3(12) == 18);
    CHECK(primes_in(10, 20) == std::vector<std::int64_t>{11, 13, 17, 19});
  }
}

TEST_SUITE("bessel") {
  TEST_CASE("J_n against the standard library") {
    for (int n : {0, 1, 5, 11, 23, 47, 95})
      for (double x : {0.5, 3.0, 17.0, 60.0, 250.0, 1e3}) {
        const double ref = std::cyl_bessel_j(static_cast<double>(n), x);
        CHECK(bessel_j(n, x) == doctest::Approx(ref).epsilon(1e-10).scale(1e-3));
      }
  }

  TEST_CASE("one pass over orders agrees with single orders") {
    const auto all = bessel_j_orders(40.0, 80);
    for (int n : {0, 10, 39, 41, 80}) CHECK(all[n] == doctest::Approx(bessel_j(n, 40.0)).epsilon(1e-11).scale(1e-20));
  }
}

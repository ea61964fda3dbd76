#include <doctest.h>

#include "fixtures.hpp"
#include "momentlab/arith.hpp"
#include "momentlab/identities.hpp"

#include <cmath>
#include <complex>
#include <numbers>

using namespace momentlab;

TEST_SUITE("identities") {
  TEST_CASE("Petersson formula, both sides") {
    for (int k : {12, 18, 26}) {
      const auto r = petersson_two_sided(k, 1, 1, petersson_cmax(k, 1, 1, 1e-12));
      CHECK(r.rel_gap < 1e-12);
      CHECK(r.pass(1e-8));
    }
    const auto grid = petersson_grid(16, 12);
    CHECK(grid.size() == 144);
    for (const auto& r : grid) CHECK(r.pass(1e-8));
  }

  TEST_CASE("harmonic weights sum to the Petersson side at (1, 1)") {
    const auto& forms = level_one_forms(24, 2000);
    double s = 0;
    for (const auto& f : forms) s += 1.0 / f.petersson_weight;
    const auto side = petersson_kloosterman_side(24, 1, 1, petersson_cmax(24, 1, 1, 1e-13));
    CHECK(s == doctest::Approx(side.value).epsilon(1e-11));
  }

  TEST_CASE("newform sieve: no weight-12 newforms of level 2") {
    for (std::int64_t n : {1, 2, 3, 4, 9}) CHECK(std::abs(delta_star(12, 2, 1, n).value) < 1e-10);
  }

  TEST_CASE("newform sieve reduces to Petersson at M = 1") {
    const auto a = delta_star(16, 1, 2, 3);
    const auto b = petersson_kloosterman_side(16, 2, 3, petersson_cmax(16, 2, 3, 1e-13));
    CHECK(a.value == b.value);
  }

  TEST_CASE("newform sieve: weight-8 level-2 ratios are Hecke eigenvalues") {
    // S_8(Gamma_0(2)) is one newform with a(2) = -8, i.e. lambda(2) = -1/sqrt 2
    const double d11 = delta_star(8, 2, 1, 1).value;
    const double d12 = delta_star(8, 2, 1, 2).value;
    CHECK(d12 / d11 == doctest::Approx(-1 / std::sqrt(2.0)).epsilon(1e-9));
    CHECK(sl2_index(6) == doctest::Approx(12.0));
  }

  TEST_CASE("GL(3) Voronoi on a small grid, both branches") {
    const auto& F = testing::sym2_delta();
    const auto w = TestFunction::bump(0.5, 2.5, 8.0);
    const OmegaTable table(w, F.alpha);
    for (std::int64_t c : {1, 3, 4})
      for (std::int64_t a = 1; a <= c; ++a) {
        if (gcd(a, c) != 1) continue;
        const auto r = voronoi_two_sided(F, table, w, 1, a, c, 50.0, VoronoiBranch::unramified);
        const auto r2 = voronoi_two_sided(F, table, w, 1, a, c, 50.0, VoronoiBranch::ramified);
        CHECK(r.pass(1e-5));
        CHECK(r.rel_gap < 1e-6);
        CHECK(r.truncation_bound < 1e-5 * std::abs(r.lhs));
        CHECK(std::abs(r.rhs - r2.rhs) <= 1e-8 * std::abs(r.rhs));
      }
  }

  TEST_CASE("nonlinear exponential sum against a direct loop") {
    const auto& F = testing::sym2_delta();
    const auto w = TestFunction::bump();
    const QuadraticAlpha alpha{3, 1, true};
    const double X = 2000;
    std::complex<double> s = 0;
    for (std::int64_t m = 1; m <= 3 * X; ++m)
      s += F.first_row[m] / std::sqrt(double(m)) * std::polar(1.0, 2 * std::numbers::pi * alpha.value() * std::sqrt(double(m))) * w(m / X);
    const auto r = nonlinear_exp_sum(F, alpha, X, w);
    CHECK(std::abs(r.value - s) < 1e-10 * std::max(1.0, std::abs(s)));
    CHECK(r.stated_bound > 0);
  }

  TEST_CASE("bilinear forms: direct loop, Ramanujan collapse, zero weight") {
    const auto& F = testing::sym2_delta();
    const auto w = TestFunction::bump();
    const double X = 40, Y = 200;
    for (std::int64_t h : {0, 2}) {
      double s = 0;
      for (std::int64_t n = 1; n <= 3 * X; ++n)
        for (std::int64_t m = 1; m <= 3 * Y; ++m)
          s += w(n / X) * w(m / Y) * F.first_row[m] / std::sqrt(double(m)) * kloosterman_real(n * h, m, 12);
      const auto r = bilinear_form(F, h, 12, X, Y, w, w, BilinearMethod::kloosterman_shift);
      CHECK(r.lhs_value == doctest::Approx(s).epsilon(1e-10).scale(1.0));
      if (h == 0) CHECK(bilinear_ramanujan(F, 12, X, Y, w, w) == doctest::Approx(s).epsilon(1e-10));
    }
    CHECK(bilinear_form(F, 1, 7, X, Y, TestFunction::zero(), w, BilinearMethod::poisson).lhs_value == 0.0);
    CHECK_THROWS_AS(bilinear_form(F, 7, 7, X, Y, w, w, BilinearMethod::poisson), PreconditionError);
  }
}

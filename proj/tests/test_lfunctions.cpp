#include <doctest.h>

#include "fixtures.hpp"
#include "momentlab/afe.hpp"
#include "momentlab/lfunctions.hpp"

#include <cmath>

using namespace momentlab;

TEST_SUITE("lfunctions") {
  TEST_CASE("root number at level one is i^k") {
    const auto& F = testing::sym2_delta();
    for (int k : {12, 16, 18, 24}) {
      const auto fs = eigenforms(k, 2000);
      const auto r = root_number(F, fs.at(0));
      CHECK(r.value.real() == (k % 4 == 0 ? 1.0 : -1.0));
      CHECK(std::abs(std::abs(r.value) - 1.0) < 1e-12);
    }
    CHECK_THROWS_AS(root_number(F, eigenforms(12, 2000).at(0), 2), PreconditionError);
  }

  TEST_CASE("functional equation selects the Rankin-Selberg sign") {
    const auto& F = testing::sym2_delta();
    for (int k : {16, 18, 28}) {
      const auto f = eigenforms(k, 5000).at(0);
      const double eps = rankin_selberg_sign(k, F.base_weight);
      const auto good = rankin_selberg_lfunction(F, f, 4000, eps);
      const auto bad = rankin_selberg_lfunction(F, f, 4000, -eps);
      CHECK(fe_residual(good, {0.6, 0.3}, AfeOptions{}) < 1e-10);
      CHECK(fe_residual(bad, {0.6, 0.3}, AfeOptions{}) > 1e-4);
    }
  }

  TEST_CASE("L(1/2, f) against an independent smoothed functional equation") {
    for (int k : {12, 24}) {
      for (const auto& f : eigenforms(k, 5000)) {
        const auto cv = central_value_gl2(f);
        SelfDualL l;
        l.gamma = gl2_gamma(k);
        l.root_number = cv.root_number;
        l.coeffs.assign(f.lambda.begin() + 1, f.lambda.end());
        CHECK(fe_residual(l, {0.6, 0.3}, AfeOptions{}) < 1e-10);
        CHECK(cv.value == doctest::Approx(afe_value(l, 0.5).real()).epsilon(1e-10));
      }
    }
  }

  TEST_CASE("L(1/2, F x f) against the same oracle, and Lapid positivity") {
    const auto& F = testing::sym2_delta();
    for (int k : {24, 28}) {
      for (const auto& f : eigenforms(k, 5000)) {
        const auto cv = central_value_rs(F, f);
        const auto l = rankin_selberg_lfunction(F, f, 4000, cv.root_number);
        CHECK(cv.value == doctest::Approx(afe_value(l, 0.5).real()).epsilon(1e-9));
        CHECK(cv.value >= -1e-6);
      }
    }
  }

  TEST_CASE("sign -1 annihilates the central values") {
    const auto& F = testing::sym2_delta();
    CHECK(central_value_gl2(eigenforms(18, 2000).at(0)).value == 0.0);
    CHECK(central_value_rs(F, eigenforms(26, 2000).at(0)).value == 0.0);
    CHECK(central_value_rs(F, eigenforms(16, 2000).at(0)).value == 0.0);
  }

  TEST_CASE("damping order changes V* but not the central value") {
    const auto& F = testing::sym2_delta();
    CHECK(v_star(30.0, 24, F, 48) != doctest::Approx(v_star(30.0, 24, F, 64)));
    const auto f = eigenforms(24, 20000).at(0);
    CentralValueOptions a, b;
    a.kernel.A = 48;
    b.kernel.A = 64;
    CHECK(central_value_rs(F, f, a).value == doctest::Approx(central_value_rs(F, f, b).value).epsilon(1e-8));
  }
}

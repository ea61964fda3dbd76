#include <doctest.h>

#include "fixtures.hpp"
#include "momentlab/checks.hpp"
#include "momentlab/special.hpp"

#include <cmath>
#include <complex>
#include <numbers>

using namespace momentlab;

TEST_SUITE("special") {
  TEST_CASE("the bump test function") {
    const auto w = TestFunction::bump();
    CHECK(w(1.5) == doctest::Approx(1.0));
    CHECK(w(0.5) == 0.0);
    CHECK(w(2.6) == 0.0);
    CHECK(TestFunction::zero().is_zero());
    CHECK(integrate_support(w, [](double) { return 1.0; }) == doctest::Approx(2.0));
  }

  TEST_CASE("gamma_rho grows like |t|^{3(sigma + 1/2)}") {
    const auto& F = testing::sym2_delta();
    for (double sigma : {-0.5, 0.0, 0.5}) {
      std::vector<double> t, g;
      for (double x = 300; x <= 3000; x *= 1.25) {
        t.push_back(x);
        g.push_back(std::abs(gamma_factor(0, {sigma, x}, F.alpha)));
      }
      const double expected = 3 * (sigma + 0.5);
      CHECK(std::abs(loglog_slope(t, g) - expected) <= 0.05 * std::max(1.0, expected));
    }
  }

  TEST_CASE("h-check against direct quadrature") {
    const auto h = TestFunction::bump();
    for (double t : {0.0, 1.3, 7.0}) {
      // direct: (2 pi)^{-1/2} int_0^inf h(sqrt u) u^{-1/2} e^{itu} du = (2 pi)^{-1/2} 2 int h(v) e^{itv^2} dv
      const std::complex<double> ref =
          2.0 / std::sqrt(2 * std::numbers::pi) *
          integrate_support_c(h, [&](double v) { return h(v) * std::polar(1.0, t * v * v); });
      const auto got = h_check(h, t);
      CHECK(std::abs(got - ref) <= 1e-10 * std::max(1.0, std::abs(ref)));
    }
  }

  TEST_CASE("Omega table: FFT grid against direct quadrature") {
    const auto& F = testing::sym2_delta();
    const auto w = TestFunction::bump();
    const OmegaTable table(w, F.alpha);
    for (double x : {10.0, 300.0, 5e3, 1e5})
      for (OmegaSign s : {OmegaSign::plus, OmegaSign::minus}) {
        const auto a = table.eval(s, x), b = table.eval_direct(s, x);
        CHECK(std::abs(a.value - b.value) <= a.error + b.error + 1e-12);
      }
  }

  TEST_CASE("stationary phase: leading constant of Omega_+ is i/sqrt 3") {
    const auto& F = testing::sym2_delta();
    const auto w = TestFunction::bump();
    const OmegaTable table(w, F.alpha);
    const OmegaStationary sp(table, w, OmegaSign::plus);
    CHECK(std::abs(sp.c(1) - std::complex<double>(0, 1 / std::sqrt(3.0))) < 2e-3);
    CHECK(std::abs(sp.d(1)) < 5e-3);
    for (double x : {1e3, 3e4, 1e6}) {
      const auto a = table.eval(OmegaSign::plus, x), b = sp.eval(x, sp.max_terms());
      CHECK(std::abs(a.value - b.value) <= a.error + b.error);
    }
  }

  TEST_CASE("weight-averaged Bessel sums follow their asymptotics") {
    const auto h = TestFunction::bump();
    const auto r = averaged_bessel(h, 50, 0.25 * 2500, BesselAverageMode::even_twisted);
    CHECK(std::abs(r.residual) < 1e-3 * std::max(1.0, std::abs(r.lhs)));
    const auto d = bessel_decay(h, {50, 100}, 0.25, BesselAverageMode::even_twisted, 0, 6);
    CHECK(d.exponent > 1.5);
  }
}

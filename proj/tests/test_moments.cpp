#include <doctest.h>

#include "fixtures.hpp"
#include "momentlab/moments.hpp"
#include "momentlab/report.hpp"

#include <cmath>
#include <sstream>

using namespace momentlab;

TEST_SUITE("moments") {
  TEST_CASE("amplifier: expansion, positivity, self-amplification") {
    const auto& f0 = testing::delta();
    const auto others = eigenforms(24, 5000);
    for (std::int64_t L : {5, 11, 23}) {
      const Amplifier amp(f0, L);
      CHECK(amp.evaluate(f0) >= amp.self_lower_bound());
      for (const auto& f : others) {
        const double v = amp.evaluate(f);
        CHECK(v >= 0.0);
        CHECK(std::abs(v - amp.expand(f).value) <= 1e-10 * std::max(1.0, v));
      }
    }
    const Amplifier amp(f0, 11);
    CHECK(amp.primes() == std::vector<std::int64_t>{11, 13, 17, 19});
    CHECK(amp.x(13, 1) == (f0.lambda[13] < 0 ? -1.0 : 1.0));
    CHECK_THROWS_AS(Amplifier(f0, 1), PreconditionError);
  }

  TEST_CASE("zero test function gives an empty moment") {
    const auto r = weight_moment(testing::sym2_delta(), 20, TestFunction::zero(), 1, false);
    CHECK(r.moment == 0.0);
    CHECK(r.main_term == 0.0);
    CHECK(r.per_weight.empty());
  }

  TEST_CASE("moment at K = 12: breakdown, signs, harmonic sums") {
    const auto& F = testing::sym2_delta();
    CentralValueCache cache(F);
    const auto r = weight_moment(F, 12, TestFunction::bump(), 1, false, {}, &cache);
    CHECK(r.moment == doctest::Approx(r.resum()).epsilon(1e-12));
    CHECK(r.main_term > 0);
    for (const auto& e : r.per_weight) {
      CHECK(e.k % 2 == 0);
      if (e.root_number == -1.0) CHECK(e.L_rs == 0.0);
      if (e.k >= 24 && e.k % 4 == 2) CHECK(e.contribution == 0.0);
      CHECK(e.L_rs >= -1e-6);
    }
    std::ostringstream csv;
    write_csv(csv, r);
    CHECK(csv.str().rfind("k,f_index,lambda_l,L_gl2,L_rs,weight\n", 0) == 0);
    const auto j = to_json(r);
    CHECK(j["per_weight"].size() == r.per_weight.size());
    CHECK(j["moment"].get<double>() == r.moment);
  }

  TEST_CASE("off-diagonal diagnostics") {
    const auto& F = testing::sym2_delta();
    const double K = 30;
    const auto vac = offdiag_diagnostics(F, K, 1, std::pow(K, 2.5));
    CHECK(vac.T_vacuous);
    CHECK(vac.T == std::complex<double>(0.0));
    CHECK(vac.err_natural == doctest::Approx(std::pow(K, 2.5) / std::pow(K, 4)));

    const double Y = std::pow(K, 2.9);
    const auto a = offdiag_diagnostics(F, K, 30, Y);
    OffDiagonalOptions doubled;
    doubled.cut_scale = 2.0;
    const auto b = offdiag_diagnostics(F, K, 30, Y, TestFunction::bump(), doubled);
    CHECK(std::abs(a.T_hat - b.T_hat) <= 1e-6 * std::abs(a.T_hat));
    CHECK(a.err_flat == doctest::Approx(std::pow(Y, 0.75) * std::pow(30.0, 0.25) / std::pow(K, 2.5)));
  }
}

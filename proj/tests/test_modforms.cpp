#include <doctest.h>

#include "fixtures.hpp"
#include "momentlab/modforms.hpp"
#include "momentlab/symsq.hpp"

#include <cmath>
#include <numbers>

using namespace momentlab;

TEST_SUITE("modforms") {
  TEST_CASE("dimensions of S_k") {
    const int expected[] = {0, 0, 0, 0, 0, 0, 1, 0, 1, 1, 1, 1, 2};  // k = 0, 2, ..., 24
    for (int i = 0; i <= 12; ++i) CHECK(cusp_dimension(2 * i) == expected[i]);
    CHECK(cusp_dimension(80) == 6);
    CHECK(cusp_dimension(13) == 0);
  }

  TEST_CASE("Ramanujan tau") {
    const auto& f = testing::delta();
    const std::pair<int, double> tau[] = {{2, -24}, {3, 252}, {5, 4830}, {7, -16744}, {11, 534612}, {13, -577738}};
    for (auto [p, t] : tau) CHECK(f.lambda[p] == doctest::Approx(t / std::pow(p, 5.5)).epsilon(1e-13));
    CHECK(hecke_lambda(f, 6) == doctest::Approx(f.lambda[2] * f.lambda[3]).epsilon(1e-13));
  }

  TEST_CASE("T_2 on S_24 has the known characteristic polynomial") {
    const auto cp = charpoly(hecke_matrix(24, 2));
    REQUIRE(cp.size() == 3);
    CHECK(cp[2] == 1);
    CHECK(cp[1] == -1080);
    CHECK(cp[0] == BigInt("-20468736"));
    const auto fs = eigenforms(24, 3000);
    REQUIRE(fs.size() == 2);
    CHECK(fs[0].field_degree == 2);
  }

  TEST_CASE("Hecke relations hold in the eigenvalue tables") {
    for (int k : {24, 36}) {
      const auto fs = eigenforms(k, 3000);
      for (const auto& f : fs)
        for (std::int64_t p : {2, 3, 5, 7, 31})
          CHECK(f.lambda[p * p] == doctest::Approx(f.lambda[p] * f.lambda[p] - 1.0).epsilon(1e-10).scale(1.0));
    }
  }

  TEST_CASE("Petersson weight of Delta from its Petersson norm") {
    // <Delta, Delta> = 1.03536205680432e-6, omega = (4 pi)^{k-1} / Gamma(k-1) <f, f>
    const double norm = 1.03536205680432092e-6;
    const double omega = std::pow(4 * std::numbers::pi, 11) / std::tgamma(11.0) * norm;
    CHECK(testing::delta().petersson_weight == doctest::Approx(omega).epsilon(1e-9));
  }
}

TEST_SUITE("symsq") {
  TEST_CASE("A(p, 1) = lambda(p)^2 - 1 and multiplicativity") {
    const auto& F = testing::sym2_delta();
    const auto& f = testing::delta();
    for (std::int64_t p : {2, 3, 5, 7, 101})
      CHECK(F.first_row[p] == doctest::Approx(hecke_lambda(f, p) * hecke_lambda(f, p) - 1.0).epsilon(1e-12).scale(1.0));
    CHECK(F.first_row[35] == doctest::Approx(F.first_row[5] * F.first_row[7]).epsilon(1e-12));
  }

  TEST_CASE("L(1, F) agrees with the harmonic weight of Delta") {
    const auto& F = testing::sym2_delta();
    const auto l1 = l_one(F);
    const double from_weight = 2 * std::numbers::pi * std::numbers::pi / 11.0 * testing::delta().petersson_weight;
    CHECK(l1.value == doctest::Approx(from_weight).epsilon(1e-9));
    CHECK(symsq_fe_residual(F, {0.7, 0.4}) < 1e-10);
  }
}

#include "momentlab/checks.hpp"

#include "momentlab/arith.hpp"
#include "momentlab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace momentlab {

KloostermanCheck kloosterman_properties(std::size_t count, std::int64_t c_max,
                                        std::uint64_t seed, double tol) {
  if (c_max < 1) throw PreconditionError("kloosterman_properties: c_max >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::int64_t> cdist(1, c_max);
  KloostermanCheck out;
  for (std::size_t t = 0; t < count; ++t) {
    const std::int64_t c = cdist(rng);
    std::uniform_int_distribution<std::int64_t> rdist(0, 4 * c);
    const std::int64_t m = rdist(rng) - 2 * c, n = rdist(rng) - 2 * c;
    ++out.tuples;

    const double s = kloosterman_real(m, n, c);
    const double weil = weil_bound(m, n, c);
    const double ratio = std::abs(s) / weil;
    out.max_weil_ratio = std::max(out.max_weil_ratio, ratio);
    if (std::abs(s) > weil + tol) out.violations.push_back({m, n, c, "weil", ratio});

    const double sym = std::max(std::abs(s - kloosterman_real(n, m, c)),
                                std::abs(s - kloosterman_real(-m, -n, c)));
    out.max_symmetry_gap = std::max(out.max_symmetry_gap, sym);
    if (sym > tol) out.violations.push_back({m, n, c, "symmetry", sym});

    // random coprime split c = c1 c2 from the prime-power factors
    std::int64_t c1 = 1;
    for (const auto& [p, e] : factorize(c))
      if (rng() & 1) c1 *= static_cast<std::int64_t>(std::pow(p, e) + 0.5);
    const std::int64_t c2 = c / c1;
    const std::int64_t i2 = mod_inverse(floor_mod(c2, c1), c1).value;
    const std::int64_t i1 = mod_inverse(floor_mod(c1, c2), c2).value;
    const double prod = kloosterman_real(mul_mod(floor_mod(m, c1), i2, c1),
                                         mul_mod(floor_mod(n, c1), i2, c1), c1) *
                        kloosterman_real(mul_mod(floor_mod(m, c2), i1, c2),
                                         mul_mod(floor_mod(n, c2), i1, c2), c2);
    const double crt = std::abs(s - prod) / static_cast<double>(c);
    out.max_crt_gap = std::max(out.max_crt_gap, crt);
    if (std::abs(s - prod) > tol) out.violations.push_back({m, n, c, "crt", crt});
  }
  return out;
}

ReciprocityCheck reciprocity_check(std::size_t count, std::uint64_t seed, std::int64_t bound) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::int64_t> d(1, bound);
  ReciprocityCheck out;
  while (out.tuples < count) {
    const std::int64_t m = d(rng), r = d(rng), c = d(rng), M = d(rng), l = d(rng), q = d(rng);
    if (gcd(c * M, l * q * q) != 1) continue;
    ++out.tuples;
    const auto [left, arith, arch] = reciprocity_identity(m, r, c, M, l, q);
    const RationalPhase diff = (left - (arith + arch)).reduced();
    if (diff.numerator() != 0) {
      ++out.violations;
      out.failing.push_back({m, r, c, M, l, q});
    }
  }
  return out;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw PreconditionError("loglog_slope: need >= 2 points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

BesselDecay bessel_decay(const TestFunction& h, const std::vector<double>& Ks, double ratio,
                         BesselAverageMode mode, int iota, int points) {
  BesselDecay out;
  for (double K : Ks) {
    double worst = 0.0;
    for (int j = 0; j < points; ++j) {
      const double x = ratio * K * K + 2.0 * std::numbers::pi * j / points;
      worst = std::max(worst, std::abs(averaged_bessel(h, K, x, mode, iota).residual));
    }
    out.K.push_back(K);
    out.max_residual.push_back(worst);
  }
  out.exponent = -loglog_slope(out.K, out.max_residual);
  return out;
}

}  // namespace momentlab

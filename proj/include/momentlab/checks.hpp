#pragma once

// Grid drivers shared by the command-line tool and the acceptance run: each
// returns raw measurements; the caller decides the tolerance.

#include "momentlab/identities.hpp"
#include "momentlab/special.hpp"
#include "momentlab/symsq.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace momentlab {

struct KloostermanTuple {
  std::int64_t m = 0, n = 0, c = 0;
  std::string property;  // "weil", "symmetry", "crt"
  double detail = 0.0;   // |S| / Weil bound, or the absolute mismatch
};

struct KloostermanCheck {
  std::size_t tuples = 0;
  double max_weil_ratio = 0.0;   // max |S| / (tau(c) sqrt((m,n,c)) sqrt c)
  double max_symmetry_gap = 0.0;
  double max_crt_gap = 0.0;      // relative to c
  std::vector<KloostermanTuple> violations;
};

/// Random (m, n, c) with c <= c_max: the Weil bound, S(m,n;c) = S(n,m;c) = S(-m,-n;c),
/// and S(m, n; c1 c2) = S(c2-bar m, c2-bar n; c1) S(c1-bar m, c1-bar n; c2) on a random
/// coprime split of c. `tol` is the absolute slack allowed for rounding.
KloostermanCheck kloosterman_properties(std::size_t count, std::int64_t c_max,
                                        std::uint64_t seed, double tol = 1e-7);

struct ReciprocityCheck {
  std::size_t tuples = 0;
  std::size_t violations = 0;
  std::vector<std::vector<std::int64_t>> failing;  // (m, r, c, M, l, q)
};

/// Random coprime (cM, l q^2): the exact rational identity of the phases mod 1.
ReciprocityCheck reciprocity_check(std::size_t count, std::uint64_t seed,
                                   std::int64_t bound = 1000);

struct BesselDecay {
  std::vector<double> K;
  std::vector<double> max_residual;  // over the x-window at each K
  double exponent = 0.0;             // least-squares slope of -log residual in log K
};

/// max |residual| of averaged_bessel over `points` values of x around ratio K^2
/// (spread over one period of the leading oscillation), then the fitted decay rate.
BesselDecay bessel_decay(const TestFunction& h, const std::vector<double>& Ks, double ratio,
                         BesselAverageMode mode, int iota = 0, int points = 20);

/// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace momentlab

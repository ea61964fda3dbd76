#pragma once

// Two-sided numerical checks of exact summation identities (Petersson,
// newform sieve, GL(3) Voronoi) and the bilinear / nonlinear sums whose
// sizes are compared against their stated bounds.

#include "momentlab/modforms.hpp"
#include "momentlab/special.hpp"
#include "momentlab/symsq.hpp"

#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace momentlab {

struct IdentityReport {
  std::complex<double> lhs = 0.0;
  std::complex<double> rhs = 0.0;
  double abs_gap = 0.0;
  double rel_gap = 0.0;           // abs_gap / max(|lhs|, |rhs|)
  double truncation_bound = 0.0;  // tails cut off on either side
  double quadrature_error = 0.0;  // estimated error of the evaluated terms
  std::map<std::string, double> parameters;

  /// abs_gap <= rel_tol max(|lhs|, |rhs|) + truncation_bound + quadrature_error.
  bool pass(double rel_tol) const;
};

struct BilinearBoundReport {
  double lhs_value = 0.0;
  double stated_bound = 0.0;
  double ratio = 0.0;  // |lhs| / stated_bound; recorded, never asserted <= 1
  std::map<std::string, double> regime;
};

// ---- Petersson -------------------------------------------------------------------

/// Kloosterman rows S(1, j; c), j mod c, for every c <= c_max, kept for reuse.
class KloostermanCache {
 public:
  explicit KloostermanCache(std::int64_t c_max = 0) { reserve(c_max); }
  void reserve(std::int64_t c_max);
  /// S(m, n; c) through S(m, n; c) = sum_{d | (m, n, c)} d S(1, mn/d^2; c/d).
  double operator()(std::int64_t m, std::int64_t n, std::int64_t c);
  std::int64_t size() const { return static_cast<std::int64_t>(rows_.size()) - 1; }

 private:
  std::vector<std::vector<double>> rows_;  // rows_[c][j] = S(1, j; c)
};

/// Smallest c_max with the rigorous tail bound of the Kloosterman side below
/// `tol`: |J_{k-1}(x)| <= (x/2)^{k-1}/(k-1)! and |S(m, n; c)| <= c give
///   2 pi (2 pi sqrt(mn)/R)^{k-1} / (k-1)! * sum_{c > c_max} c^{1-k}.
std::int64_t petersson_cmax(int k, std::int64_t m, std::int64_t n, double tol,
                            std::int64_t level = 1);
double petersson_tail_bound(int k, std::int64_t m, std::int64_t n, std::int64_t c_max,
                            std::int64_t level = 1);

struct PeterssonSide {
  double value = 0.0;
  double truncation_bound = 0.0;
  std::int64_t c_max = 0;
};

/// Delta_{k,R}(m, n) = delta(m, n) + 2 pi i^{-k} sum_{c <= c_max} S(m, n; cR)/(cR) J_{k-1}(4 pi sqrt(mn)/(cR)).
PeterssonSide petersson_kloosterman_side(int k, std::int64_t m, std::int64_t n,
                                         std::int64_t c_max, std::int64_t level = 1,
                                         KloostermanCache* cache = nullptr);

/// sum_f omega_f^{-1} lambda_f(m) lambda_f(n) over the level-one eigenforms.
double petersson_spectral_side(const std::vector<Newform>& forms, std::int64_t m,
                               std::int64_t n);

/// Both sides of the Petersson formula at level one. The eigenforms are
/// computed (and cached per weight) on demand.
IdentityReport petersson_two_sided(int k, std::int64_t m, std::int64_t n,
                                   std::int64_t c_max);

/// The whole grid 1 <= m, n <= mn_max for one weight, sharing the Kloosterman
/// rows; c_max chosen per pair so the tail bound is below tail_tol.
std::vector<IdentityReport> petersson_grid(int k, std::int64_t mn_max,
                                           double tail_tol = 1e-12,
                                           KloostermanCache* cache = nullptr);

/// Eigenforms of level one and weight k with lambda up to n_max (memoized).
const std::vector<Newform>& level_one_forms(int k, std::int64_t n_max);

// ---- newform sieve ---------------------------------------------------------------

struct DeltaStarOptions {
  double tail_tol = 1e-12;        // stop the l-sum once terms are this small
  double petersson_tol = 1e-13;   // c_max for each inner Petersson side
  std::int64_t max_argument = 2500;  // largest m l^2 n handed to a Kloosterman side
  bool literal_index = false;  // nu((m, S)) instead of nu((n, S))
};

struct DeltaStar {
  double value = 0.0;
  double truncation_bound = 0.0;  // l-sum remainder + inner Petersson tails
  std::size_t terms = 0;
};

/// Delta*_{k,M}(m, n) = sum_{RS = M} mu(S) / (S nu((n, S))) sum_{l | S^inf} l^{-1}
///   sum_{l1 | S, l1^2 | n} mu(l1) l1 Delta_{k,R}(m l^2, n / l1^2).
/// Delta_{k,1} with large arguments comes from the level-one spectrum, other
/// levels from the Kloosterman side. M = 1 returns the Kloosterman side of
/// Delta_{k,1}(m, n) itself.
DeltaStar delta_star(int k, std::int64_t M, std::int64_t m, std::int64_t n,
                     const DeltaStarOptions& opt = {});

/// nu(M) = M prod_{p | M} (1 + 1/p).
double sl2_index(std::int64_t M);

// ---- GL(3) Voronoi ----------------------------------------------------------------

enum class VoronoiBranch { unramified, ramified };

struct VoronoiOptions {
  double epsilon = 0.1;          // main range n2 << c^3 m / (n1^2 X^{1 - eps})
  double safety = 8.0;
  double omega_tol = 1e-10;      // also run n2 until |Omega| stays below this
};

/// lhs = sum_n A(m, n) e(n a-bar / c) w(n / X) against
/// rhs = c sqrt(N) sum_+- sum_{n1 | cm} sum_{n2} A(n1, n2)/(n1 n2) S(a m N-bar, +-n2; cm/n1)
///       Omega_+-(n2 n1^2 X / (c^3 N m); w)   (N = 1; the ramified branch drops N-bar).
/// `omega` must be the table of w for the parameters of F.
IdentityReport voronoi_two_sided(const SymSquareForm& F, const OmegaTable& omega,
                                 const TestFunction& w, std::int64_t m, std::int64_t a,
                                 std::int64_t c, double X, VoronoiBranch branch,
                                 const VoronoiOptions& opt = {});
IdentityReport voronoi_two_sided(const SymSquareForm& F, const TestFunction& w,
                                 std::int64_t m, std::int64_t a, std::int64_t c, double X,
                                 VoronoiBranch branch, const VoronoiOptions& opt = {});

// ---- nonlinear and bilinear sums ---------------------------------------------------

/// alpha = sign * sqrt(num / den), so alpha^2 is rational by construction.
struct QuadraticAlpha {
  std::int64_t num = 0;
  std::int64_t den = 1;
  bool negative = false;
  double value() const;
};

struct NonlinearSum {
  std::complex<double> value = 0.0;
  double stated_bound = 0.0;  // Z P (1 + |alpha| log X)
};

/// sum_m A(m, 1) m^{-1/2} e(alpha sqrt m) W(m / X), (Z, P) the declared envelope of W.
NonlinearSum nonlinear_exp_sum(const SymSquareForm& F, const QuadraticAlpha& alpha,
                               double X, const TestFunction& W, double Z = 1.0,
                               double P = 1.0);

enum class BilinearMethod { kloosterman_shift, poisson };

struct BilinearEnvelope {
  double Z = 1.0, Z1 = 1.0, Z2 = 1.0;
};

/// sum_n sum_m A(m, 1) m^{-1/2} S(nh, m; q) W1(n / X) W2(m / Y).
/// kloosterman_shift: Z1 Z sqrt(XYq) + Z1 Z X q^{3/4} (h, q)^{1/4} + Z1 Z q;
/// poisson ((h, q) = 1): Z sqrt(XYq) + sqrt(Z2) Z X q^{3/4} [Z2 q > Y] + Z X sqrt(Y).
BilinearBoundReport bilinear_form(const SymSquareForm& F, std::int64_t h, std::int64_t q,
                                  double X, double Y, const TestFunction& W1,
                                  const TestFunction& W2, BilinearMethod method,
                                  const BilinearEnvelope& env = {});

/// The h = 0 collapse: S(0, m; q) is the Ramanujan sum c_q(m).
double bilinear_ramanujan(const SymSquareForm& F, std::int64_t q, double X, double Y,
                          const TestFunction& W1, const TestFunction& W2);

}  // namespace momentlab

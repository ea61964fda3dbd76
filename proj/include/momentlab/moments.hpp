#pragma once

// Weight-aspect first moments of L(1/2, F x f) (optionally times L(1/2, f)),
// the off-diagonal sums T and T-hat of the Petersson expansion, and the
// amplifier built from signed Hecke eigenvalues.

#include "momentlab/lfunctions.hpp"
#include "momentlab/modforms.hpp"
#include "momentlab/special.hpp"
#include "momentlab/symsq.hpp"

#include <complex>
#include <cstdint>
#include <map>
#include <vector>

namespace momentlab {

struct WeightEntry {
  int k = 0;
  int f_index = 0;
  double lambda_l = 0.0;      // lambda_f(l)
  double L_gl2 = 0.0;         // L(1/2, f), 1 unless the GL(2) factor is included
  double L_rs = 0.0;          // L(1/2, F x f)
  double root_number = 0.0;   // sign used for L(1/2, F x f)
  double weight = 0.0;        // W((k-1)/K) / omega_f
  double contribution = 0.0;  // weight * lambda_l * L_gl2 * L_rs
};

struct MomentReport {
  double K = 0.0;
  std::int64_t ell = 1;
  bool include_gl2 = false;
  double moment = 0.0;
  double main_term = 0.0;      // L(1, F) A(l,1)/sqrt(l) K/4 W-hat(0)
  double diagonal_sum = 0.0;   // L(1, F) A(l,1)/sqrt(l) sum_k (1 + eps_k) W((k-1)/K)
  double gap = 0.0;            // moment - main_term
  double diag_T = 0.0;         // |T|
  double diag_That = 0.0;
  double err_flat_bound = 0.0;
  double err_natural_bound = 0.0;
  double Y = 0.0;              // length parameter used for the diagnostics (0 if skipped)
  std::vector<WeightEntry> per_weight;

  /// The per-weight contributions summed again in (k, f) order.
  double resum() const;
};

/// Eigenforms and central values per weight, shared between moment runs with
/// the same F and central-value options.
class CentralValueCache {
 public:
  CentralValueCache(const SymSquareForm& F, CentralValueOptions opt = {});

  /// Level-one eigenforms of weight k with tables long enough for both central values.
  const std::vector<Newform>& forms(int k);
  double rankin_selberg(int k, int index);
  double gl2(int k, int index);
  double sign(int k, int index);
  const SymSquareForm& F() const { return *F_; }

 private:
  struct Slot {
    std::vector<Newform> forms;
    std::vector<double> rs, gl2, sign;
    std::vector<bool> have_rs, have_gl2;
  };
  Slot& slot(int k);

  const SymSquareForm* F_;
  CentralValueOptions opt_;
  std::map<int, Slot> slots_;
};

struct MomentOptions {
  CentralValueOptions central;
  bool diagnostics = false;   // also fill T, T-hat and the Err bounds
  double Y_exponent = 2.9;    // Y = K^{Y_exponent}
};

/// sum_{k even} W((k-1)/K) sum_f omega_f^{-1} lambda_f(l) [L(1/2, f)] L(1/2, F x f)
/// over every even k with (k-1)/K inside the support of W.
MomentReport weight_moment(const SymSquareForm& F, double K, const TestFunction& W,
                           std::int64_t ell, bool include_gl2, const MomentOptions& opt = {},
                           CentralValueCache* cache = nullptr);

struct OffDiagonal {
  std::complex<double> T = 0.0;
  double T_hat = 0.0;
  double err_flat = 0.0;      // Y^{3/4} l^{1/4} / K^{5/2}
  double err_natural = 0.0;   // Y sqrt(l) / K^4
  bool T_vacuous = false;     // no c with c <= sqrt(Y l) / K^2
  std::int64_t T_c_max = 0;
  std::int64_t That_c_min = 0, That_c_max = 0;
  std::int64_t n_cut = 0;
  double T_bound = 0.0;       // sqrt(l)
  double T_ratio = 0.0;       // |T| / T_bound
  int k_ref = 0;              // weight whose V* is used
};

struct OffDiagonalOptions {
  double cut_tol = 1e-12;     // n-cut where |V*| drops below cut_tol L(1, F)
  double cut_scale = 1.0;
};

/// T(K, l) = sum_{c <= sqrt(Y l)/K^2} sum_n A(n,1)/sqrt(n) S(n,l;c)/c e(2 sqrt(n l)/c) V*(n/Y),
/// T-hat(K, l) = sum_{c >= sqrt(Y l)/K} sum_n A(n,1)/sqrt(n) S(n,l;c)/c W(4 pi sqrt(n l)/(cK)) V*(n/Y),
/// with V*(y) the kernel of weight k_ref (even k nearest K) at k_ref^3 y.
OffDiagonal offdiag_diagnostics(const SymSquareForm& F, double K, std::int64_t ell, double Y,
                                const TestFunction& W = TestFunction::bump(),
                                const OffDiagonalOptions& opt = {});

struct AmplifierExpansion {
  double constant = 0.0;                       // sum_l (x(l)^2 + x(l^2)^2)
  std::map<std::int64_t, double> coefficients;  // n -> c_n in sum_n c_n lambda_f(n)
  double value = 0.0;                          // constant + sum c_n lambda_f(n)
};

/// A_f = sum_{j=1,2} |sum_{l in P_L} lambda_f(l^j) x(l^j)|^2, x(n) = sgn(lambda_{f0}(n)),
/// P_L the primes in [L, 2L] coprime to `coprime_to`.
class Amplifier {
 public:
  Amplifier(const Newform& f0, std::int64_t L, std::int64_t coprime_to = 1);

  std::int64_t L_param() const { return L_; }
  const std::vector<std::int64_t>& primes() const { return primes_; }
  double x(std::int64_t p, int j) const;  // x(p^j), j = 1, 2

  double evaluate(const Newform& f) const;
  /// The same quantity through lambda(p)^2 = 1 + lambda(p^2),
  /// lambda(p^2)^2 = 1 + lambda(p^2) + lambda(p^4), lambda(p)lambda(q) = lambda(pq).
  AmplifierExpansion expand(const Newform& f) const;
  /// |P_L|^2 / 2, the lower bound for A_{f0}.
  double self_lower_bound() const;

 private:
  std::int64_t L_;
  std::vector<std::int64_t> primes_;
  std::vector<double> x1_, x2_;
};

}  // namespace momentlab

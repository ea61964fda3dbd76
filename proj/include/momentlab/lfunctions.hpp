#pragma once

// Central values of L(s, F x f) and L(s, f) through the cos-damped
// Mellin-Barnes kernels V*, V_2, and the root numbers that gate them.

#include "momentlab/afe.hpp"
#include "momentlab/errors.hpp"
#include "momentlab/modforms.hpp"
#include "momentlab/symsq.hpp"

#include <complex>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace momentlab {

struct RootNumber {
  std::complex<double> value;
  struct Components {
    std::complex<double> archimedean;          // i^k
    std::complex<double> steinberg{1.0, 0.0};  // prod_{p | M} (-lambda_f(p) sqrt p)
    std::string level_part;                    // prod_{p | N} eps(Pi_{F,p})^2, symbolic
  } components;
};

/// eps(F x f) = i^k * prod_{p|M} (-lambda_f(p) sqrt p) * prod_{p|N} eps(Pi_{F,p})^2.
/// For F of level one the last product is 1. M > 1 needs f to be a genuine
/// level-M newform (|lambda_f(p) sqrt p| = 1); a level-one f is rejected.
RootNumber root_number(const SymSquareForm& F, const Newform& f, std::int64_t M = 1,
                       std::int64_t N = 1);

/// Sign of L(s, F x f) for level-one F (base weight kappa) and f of weight k,
/// read off from the archimedean type: i^k when k >= 2 kappa - 1, -i^k below,
/// where the third Gamma_C parameter |(k-1)/2 - kappa + 1| changes branch.
double rankin_selberg_sign(int k, int kappa);

/// L_inf(s, F x f) = Gamma_C(s + (k-1)/2) Gamma_C(s + (k-1)/2 + kappa - 1)
///                   Gamma_C(s + |(k-1)/2 - kappa + 1|).
GammaFactor rankin_selberg_gamma(int k, int kappa);
/// L_inf(s, f) = Gamma_C(s + (k-1)/2).
GammaFactor gl2_gamma(int k);

struct KernelOptions {
  int A = 64;                   // damping cos(pi s / 4A)^{-24A}
  double step = 0.02;           // trapezoid spacing in t
  std::optional<double> sigma;  // one fixed line, evaluated in 50 digits
  double grid_step = 0.02;      // log-y spacing of the cached samples
};

struct KernelValue {
  double value = 0.0;
  double error = 0.0;
};

/// V(y) = (1/2 pi i) int cos(pi s/4A)^{-24A} gamma(1/2 + s)/gamma(1/2) E(s) y^{-s} ds/s,
/// E an optional extra factor. By default two lines are kept, Re s = -1/2
/// (plus the residue E(0) at s = 0) and Re s = 1, and each y uses the one
/// with less cancellation. A fixed `sigma` keeps a single line instead.
class MellinKernel {
 public:
  using Extra = std::function<std::complex<double>(std::complex<double>)>;

  MellinKernel(GammaFactor gamma, double residue, KernelOptions opt = {}, Extra extra = {});

  /// Interpolated from the log-y samples where available.
  double operator()(double y) const;
  KernelValue direct(double y) const;
  /// Smallest y beyond which |V| stays below tol |residue| (on the sample grid).
  double cutoff(double tol) const;
  double residue() const { return residue_; }
  const KernelOptions& options() const { return opt_; }
  std::size_t nodes() const;

 private:
  struct Line;
  KernelValue eval_line(const Line& line, double log_y) const;

  GammaFactor gamma_;
  double residue_ = 0.0;
  KernelOptions opt_;
  std::vector<std::shared_ptr<const Line>> lines_;
  double u0_ = 0.0;
  std::vector<double> grid_;  // V(exp(u0 + i grid_step))
};

/// The kernel V* for weight k and F (extra factor L(1 + 2s, F), residue L(1, F)).
std::shared_ptr<const MellinKernel> vstar_kernel(int k, const SymSquareForm& F,
                                                 KernelOptions opt = {});
/// Cached V*(y); cache keyed on (k, F, A).
double v_star(double y, int k, const SymSquareForm& F, int A = 64);

struct CentralValueOptions {
  KernelOptions kernel;
  bool literal_argument = false;  // V*(m^3 n / k^3) instead of V*(m^3 n)
  double cut_tol = 1e-12;         // drop terms with |V| below cut_tol * V(0+)
  double cut_scale = 1.0;         // multiply the resulting length
  bool printed_sign = false;      // use i^k for every k instead of rankin_selberg_sign
};

struct CentralValue {
  double value = 0.0;
  double root_number = 0.0;
  std::int64_t length = 0;  // largest argument m^3 n (or n) summed
  std::size_t terms = 0;
};

/// (1 + eps) sum_{m,n} mu(m) A(n,1) lambda_f(mn) (m^3 n)^{-1/2} V*(m^3 n).
CentralValue central_value_rs(const SymSquareForm& F, const Newform& f,
                              const CentralValueOptions& opt = {});
/// (1 + i^k) sum_n lambda_f(n) n^{-1/2} V_2(n).
CentralValue central_value_gl2(const Newform& f, const CentralValueOptions& opt = {});

/// Dirichlet coefficients of L(s, F x f) = L(2s, F) sum mu(m) A(n,1) lambda_f(mn) (m^3 n)^{-s}
/// up to `length`, packaged with its gamma factor for the generic AFE.
SelfDualL rankin_selberg_lfunction(const SymSquareForm& F, const Newform& f,
                                   std::int64_t length, double root_number);

}  // namespace momentlab

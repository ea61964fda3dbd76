#pragma once

// Test functions, GL(3) gamma quotients, the Voronoi transforms Omega_+-,
// their stationary-phase expansion, h-check and weight-averaged Bessel sums.

#include "momentlab/afe.hpp"
#include "momentlab/errors.hpp"

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <functional>
#include <memory>
#include <vector>

namespace momentlab {

/// Smooth function with compact support [a, b] in (0, inf).
struct TestFunction {
  double a = 0.5, b = 2.5;
  std::function<double(double)> eval;
  std::vector<double> derivative_bounds;  // optional hints, sup |w^(j)|

  double operator()(double x) const {
    if (!(x > a && x < b) || !eval) return 0.0;
    return eval(x);
  }
  bool is_zero() const { return !eval; }

  /// exp(s (1 - 1/(1 - u^2))) with u the affine image of x in (-1, 1).
  /// Larger s concentrates the mass and pushes the Fourier decay of the
  /// edges out (roughly exp(-2 sqrt(s xi)) against a Gaussian core).
  static TestFunction bump(double a = 0.5, double b = 2.5, double sharpness = 1.0);
  static TestFunction zero(double a = 0.5, double b = 2.5);
  /// c1 w1 + c2 w2 on the union of the supports.
  static TestFunction combine(double c1, const TestFunction& w1, double c2,
                              const TestFunction& w2);
};

/// Integral of f over the support of w (f is sampled only inside it), by
/// composite Gauss-Legendre with panel doubling until two passes agree.
double integrate_support(const TestFunction& w, const std::function<double(double)>& f,
                         int min_panels = 16, double rel_tol = 1e-14);
std::complex<double> integrate_support_c(
    const TestFunction& w, const std::function<std::complex<double>(double)>& f,
    int min_panels = 16, double rel_tol = 1e-14);

/// Vertical contour for the Omega transforms.
struct ContourSpec {
  double sigma = -0.5;
  double height = 0.0;  // 0: chosen adaptively
  int nodes = 0;        // 0: derived from height and step
  double step = 0.05;
};

enum class OmegaSign { plus, minus };

/// Shift lists mu^(rho) such that
///   gamma_rho(s) = i^rho pi^{-3/2 - 3s} prod Gamma((1 + s + mu_j)/2) / Gamma((-s + mu_j)/2).
/// For alpha = (a, 0, -a): mu^(0) = (1, a, a + 1), mu^(1) = (0, a, a + 1).
std::array<double, 3> gl3_shifts(const std::array<std::complex<double>, 3>& alpha, int rho);

/// gamma_rho(s), rho = 0 or 1, with the i^rho included.
std::complex<double> gamma_factor(int rho, std::complex<double> s,
                                  const std::array<std::complex<double>, 3>& alpha);
/// gamma_+- = (gamma_0 -+ gamma_1) / 2 = (gamma_0 -+ i (gamma_1 / i)) / 2.
/// Not conjugate-symmetric, so Omega_+- is complex.
std::complex<double> gamma_pm(OmegaSign sign, std::complex<double> s,
                              const std::array<std::complex<double>, 3>& alpha);

struct OmegaValue {
  std::complex<double> value = 0.0;
  double error = 0.0;  // bound on |error| of the complex value
};

struct OmegaPart {
  double value = 0.0;
  double error = 0.0;
};

/// Omega_+-(x; w) = (1/2 pi i) int_(sigma) x^{-s} gamma_+-(s) w~(-s) ds tabulated
/// on a fine grid in log x (FFT over the t-nodes), with per-point error
/// estimates (truncation + discretization + rounding).
/// Internally two real transforms are kept, Omega_rho for gamma_0 and
/// gamma_1 / i, and Omega_+- = (Omega_0 -+ i Omega_1) / 2.
class OmegaTable {
 public:
  OmegaTable(const TestFunction& w, const std::array<std::complex<double>, 3>& alpha,
             ContourSpec contour = {}, double tail_tol = 1e-13);

  OmegaValue eval(OmegaSign sign, double x) const;
  /// Direct trapezoid sum at one x, bypassing the FFT grid.
  OmegaValue eval_direct(OmegaSign sign, double x) const;
  /// The real transform of gamma_0 (rho = 0) or gamma_1 / i (rho = 1).
  OmegaPart part(int rho, double x) const;
  OmegaPart part_direct(int rho, double x) const;
  /// Smallest tabulated x beyond which max |Omega_+-| stays below tol.
  double decay_point(double tol) const;
  /// Estimate of sup_{x' >= x} max |Omega_+-(x')|: the tabulated magnitude in
  /// excess of its error bar, continued with x^{-2} decay where the table
  /// loses significance. Not a rigorous bound.
  double envelope(double x) const;
  double height() const { return height_; }
  const ContourSpec& contour() const { return contour_; }
  bool vanishing() const { return zero_; }

 private:
  ContourSpec contour_;
  double height_ = 0.0;
  double step_ = 0.0;
  bool zero_ = false;
  double tail_bound_ = 0.0;       // sum of |H| beyond the height, times weight
  double abs_sum_ = 0.0;          // sum of |H| over the nodes, times weight
  double du_ = 0.0, u0_ = 0.0;    // grid spacing and first abscissa
  std::vector<std::complex<double>> h_[2];  // H_j for t_j = j step >= 0, per rho
  std::array<std::vector<double>, 2> grid_;      // e^{sigma u} Omega(e^u)
  std::array<std::vector<double>, 2> grid_err_;  // discretization estimate
  std::vector<double> suffix_max_;  // sup_{j' >= j} of max |Omega_+-| minus its error bar
};

/// One-shot Omega_+-(x; w) for sigma-line quadrature.
OmegaValue omega_pm(double x, const TestFunction& w, OmegaSign sign,
                    const std::array<std::complex<double>, 3>& alpha,
                    const ContourSpec& contour = {});

/// Cube-root stationary-phase expansion of Omega_+ and Omega_- with
/// least-squares fitted constants:
///   Omega(x) ~ x int w(y) sum_j (xy)^{-j/3} [c_j e(3 (xy)^{1/3}) + d_j e(-3 (xy)^{1/3})] dy.
/// The two real parts Omega_0, Omega_1 are fitted separately and combined.
class OmegaStationary {
 public:
  OmegaStationary(const OmegaTable& table, const TestFunction& w, OmegaSign sign,
                  int max_terms = 6, double x_lo = 300.0, double x_hi = 3e6,
                  int grid_points = 48);

  /// Sum of the first `terms` pairs; error = next term + fit residual.
  OmegaValue eval(double x, int terms) const;
  std::complex<double> c(int j) const { return coef_c_.at(j - 1); }
  std::complex<double> d(int j) const { return coef_d_.at(j - 1); }
  int max_terms() const { return static_cast<int>(coef_c_.size()); }
  double fit_residual() const { return fit_residual_; }

 private:
  Eigen::VectorXd basis_row(double x) const;  // (cos_j, sin_j) pairs
  TestFunction w_;
  OmegaSign sign_;
  std::vector<std::complex<double>> coef_c_, coef_d_;
  Eigen::VectorXd coef_[2];
  double fit_residual_ = 0.0;  // max relative residual on the calibration grid
};

/// h-check(t) = (2 pi)^{-1/2} int_0^inf h(sqrt u) u^{-1/2} e^{itu} du.
std::complex<double> h_check(const TestFunction& h, double t);

enum class BesselAverageMode { even_twisted, mod4 };

struct AveragedBessel {
  double lhs = 0.0;
  double main_term = 0.0;
  double residual = 0.0;
};

/// even_twisted: sum_{k even} i^{-k} h((k-1)/K) J_{k-1}(x) against
///   -(K / 2 sqrt x) Im(e(x/2pi - 1/8) h-check(K^2 / 2x));
/// mod4 (iota in {0, 2}): 4 sum_{k = iota mod 4} h(k/K) J_{k-1}(x) against
///   h(x/K) - i^{-iota} (K / sqrt x) Im(e(x/2pi - 1/8) h-check(K^2 / 2x)).
/// shift_argument samples h((k-1)/K) in the mod4 sum instead of h(k/K).
AveragedBessel averaged_bessel(const TestFunction& h, double K, double x,
                               BesselAverageMode mode, int iota = 0,
                               bool shift_argument = false);

}  // namespace momentlab

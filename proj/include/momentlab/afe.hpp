#pragma once

// Smoothed approximate functional equation for self-dual L-functions
//   Lambda(s) = Q^{s/2} gamma(s) L(s) = eps Lambda(1 - s),
// and a generic trapezoid rule on vertical lines shared by the other
// Mellin-Barnes kernels in the library.

#include "momentlab/gamma.hpp"

#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

namespace momentlab {

using cplx = std::complex<double>;

/// Trapezoid nodes c + i t_j, |t_j| <= height, spacing `step`.
/// (1/2 pi i) int f(u) du ~ (step / 2 pi) sum_j f(u_j).
struct LineRule {
  double abscissa = 0.0;
  double height = 0.0;
  double step = 0.0;
  std::vector<cplx> nodes;

  static LineRule make(double abscissa, double height, double step);
  double weight() const;  // step / (2 pi)
};

/// Smallest height beyond which log|integrand(c + it)| stays `drop` below
/// its running peak.
double vertical_height(const std::function<double(double)>& log_abs, double drop);

struct SelfDualL {
  GammaFactor gamma;
  double conductor = 1.0;
  double root_number = 1.0;
  std::vector<double> coeffs;  // coeffs[n - 1] = a_n
};

struct AfeOptions {
  double abscissa = 1.5;  // line for the test function exp(u^2 / B^2) w^u
  double gauss_width = 6.0;  // B
  double step = 0.05;
  double scale = 1.0;     // w; the result is independent of w iff the FE holds
  double tol = 1e-16;     // truncation target, relative to Lambda(1/2)
};

/// Number of terms n for which the smoothed sum at s still matters.
std::size_t afe_length(const GammaFactor& gamma, double conductor, cplx s,
                       const AfeOptions& opt);

/// Lambda(s) / (Q^{1/4} gamma(1/2)).
cplx afe_completed_normalized(const SelfDualL& L, cplx s, const AfeOptions& opt);

/// L(s) itself.
cplx afe_value(const SelfDualL& L, cplx s, const AfeOptions& opt = {});

/// |Lambda(s) - eps Lambda(1 - s)| / |Lambda(s)| with scale w != 1, which is
/// small only when the gamma factor and root number are right.
double fe_residual(const SelfDualL& L, cplx s, AfeOptions opt);

}  // namespace momentlab

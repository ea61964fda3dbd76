#pragma once

// Complex log-Gamma with a continuous branch, and archimedean gamma factors
// written as products of Gamma_R(s) = pi^{-s/2} Gamma(s/2).

#include <boost/math/constants/constants.hpp>

#include <array>
#include <cmath>
#include <complex>
#include <algorithm>
#include <limits>
#include <vector>

namespace momentlab {

template <typename Real>
using Complex = std::complex<Real>;

/// log Gamma(z) for z off the non-positive integers. The branch is the one
/// obtained by analytic continuation from the positive real axis along
/// vertical lines: recurrence shifts use principal logs of each factor.
template <typename Real>
Complex<Real> log_gamma(Complex<Real> z) {
  using C = Complex<Real>;
  // Bernoulli B_{2k} / (2k (2k-1)), k = 1..10.
  static constexpr std::array<double, 10> kStirling = {
      1.0 / 12.0,           -1.0 / 360.0,         1.0 / 1260.0,
      -1.0 / 1680.0,        1.0 / 1188.0,         -691.0 / 360360.0,
      1.0 / 156.0,          -3617.0 / 122400.0,   43867.0 / 244188.0,
      -174611.0 / 125400.0};
  // Ten Stirling terms give about |z|^-21; push further for wider types.
  const double floor_ = std::max(15.0, 1.15 * std::numeric_limits<Real>::digits10);
  C shift(0);
  while (std::real(z) < Real(floor_) || std::abs(z) < Real(floor_)) {
    // Keep the imaginary part: only push right.
    shift += std::log(z);
    z += Real(1);
  }
  const C inv = Real(1) / z;
  const C inv2 = inv * inv;
  C series(0);
  C pw = inv;
  for (double c : kStirling) {
    series += Real(c) * pw;
    pw *= inv2;
  }
  using std::log;
  const Real half_log_2pi = Real(0.5) * log(Real(2) * boost::math::constants::pi<Real>());
  return (z - Real(0.5)) * std::log(z) - z + half_log_2pi + series - shift;
}

template <typename Real>
Real log_gamma_real(Real x) {
  return std::real(log_gamma(Complex<Real>(x, 0)));
}

/// Product of Gamma_R(s + mu_j), optionally scaled by a conductor Q^{s/2}.
/// Gamma_C(s + l) is represented as Gamma_R(s + l) Gamma_R(s + l + 1).
struct GammaFactor {
  std::vector<double> shifts;

  static GammaFactor real_shifts(std::vector<double> mu) { return {std::move(mu)}; }
  GammaFactor& add_real(double mu) {
    shifts.push_back(mu);
    return *this;
  }
  GammaFactor& add_complex(double lambda) {
    shifts.push_back(lambda);
    shifts.push_back(lambda + 1.0);
    return *this;
  }
  std::size_t degree() const { return shifts.size(); }

  template <typename Real = double>
  Complex<Real> log_value(Complex<Real> s) const {
    using std::log;
    const Real log_pi = log(boost::math::constants::pi<Real>());
    Complex<Real> acc(0);
    for (double mu : shifts) {
      Complex<Real> z = s + Real(mu);
      acc += -Real(0.5) * z * log_pi + log_gamma(z * Real(0.5));
    }
    return acc;
  }

  /// Distance from s to the nearest pole s = -mu_j - 2m.
  double pole_distance(std::complex<double> s) const {
    double best = 1e300;
    for (double mu : shifts) {
      std::complex<double> z = s + mu;
      double m = std::round(-z.real() / 2.0);
      if (m < 0) m = 0;
      best = std::min(best, std::abs(z + 2.0 * m));
    }
    return best;
  }

  /// Leftmost abscissa that keeps every pole strictly to the left.
  double rightmost_pole() const {
    double r = -1e300;
    for (double mu : shifts) r = std::max(r, -mu);
    return r;
  }
};

}  // namespace momentlab

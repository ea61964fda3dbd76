#include "momentlab/afe.hpp"

#include "momentlab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace momentlab {

LineRule LineRule::make(double abscissa, double height, double step) {
  LineRule r;
  r.abscissa = abscissa;
  r.height = height;
  r.step = step;
  const int half = static_cast<int>(std::ceil(height / step));
  r.nodes.reserve(2 * half + 1);
  for (int j = -half; j <= half; ++j) r.nodes.emplace_back(abscissa, j * step);
  return r;
}

double LineRule::weight() const { return step / (2.0 * std::numbers::pi); }

double vertical_height(const std::function<double(double)>& log_abs, double drop) {
  // Walk outwards from t = 0 until both sides have been quiet for a while.
  double peak = log_abs(0.0);
  double t = 0.0, quiet = 0.0;
  while (t < 1e4) {
    t += 0.5;
    const double v = std::max(log_abs(t), log_abs(-t));
    peak = std::max(peak, v);
    quiet = v < peak - drop ? quiet + 0.5 : 0.0;
    if (quiet >= 2.0) return t;
  }
  throw ContourTruncationError("vertical_height: integrand does not decay");
}

namespace {

double log_gamma_factor_real(const GammaFactor& g, double x) {
  return g.log_value<double>(cplx(x, 0)).real();
}

// log of a bound for |Psi(n; z)| with the contour moved to Re u = c.
double log_psi_bound(const GammaFactor& g, double log_q, double re_z, double c,
                     double b, double log_w, double log_n, double log_ref) {
  return c * c / (b * b) + c * log_w + log_gamma_factor_real(g, re_z + c) - log_ref +
         0.5 * (re_z + c - 0.5) * log_q - (re_z + c) * log_n +
         std::log(b * std::sqrt(std::numbers::pi) / (2.0 * std::numbers::pi * c));
}

std::size_t length_for(const GammaFactor& g, double log_q, double re_z,
                       double c0, double b, double log_w, double tol) {
  const double log_ref = log_gamma_factor_real(g, 0.5);
  auto small_enough = [&](double n) {
    const double log_n = std::log(n);
    double best = 1e300;
    for (double c = c0; c <= 80.0; c += 0.25)
      best = std::min(best, log_psi_bound(g, log_q, re_z, c, b, log_w, log_n, log_ref));
    // Allow for coefficient growth and the number of remaining terms.
    return best + 2.0 * log_n + std::log(10.0) < std::log(tol);
  };
  double lo = 1, hi = 2;
  while (!small_enough(hi)) {
    lo = hi;
    hi *= 2;
    if (hi > 1e12) throw ConvergenceError("afe_length: no cutoff found", hi);
  }
  while (hi - lo > 1) {
    double mid = std::floor((lo + hi) / 2);
    if (small_enough(mid))
      hi = mid;
    else
      lo = mid;
  }
  return static_cast<std::size_t>(hi);
}

// sum_n a_n Psi_w(n; z), Psi as in the header comment of afe_completed.
cplx smoothed_sum(const SelfDualL& L, cplx z, double log_w, std::size_t len,
                  const AfeOptions& opt) {
  const double c = opt.abscissa;
  const double log_q = std::log(L.conductor);
  const double log_ref = log_gamma_factor_real(L.gamma, 0.5);
  const double b2 = opt.gauss_width * opt.gauss_width;
  auto log_integrand = [&](cplx u) {
    return u * u / b2 + u * log_w + L.gamma.log_value<double>(z + u) - log_ref +
           0.5 * (z + u - 0.5) * log_q - std::log(u);
  };
  const double height = vertical_height(
      [&](double t) { return log_integrand(cplx(c, t)).real(); }, 42.0);
  LineRule rule = LineRule::make(c, height, opt.step);
  std::vector<cplx> h(rule.nodes.size());
  for (std::size_t j = 0; j < h.size(); ++j)
    h[j] = std::exp(log_integrand(rule.nodes[j])) * rule.weight();
  cplx total = 0;
  for (std::size_t n = 1; n <= len; ++n) {
    const double a = L.coeffs[n - 1];
    if (a == 0.0) continue;
    const double log_n = std::log(static_cast<double>(n));
    cplx acc = 0;
    for (std::size_t j = 0; j < h.size(); ++j)
      acc += h[j] * std::exp(-rule.nodes[j] * log_n);
    total += a * acc * std::exp(-z * log_n);
  }
  return total;
}

}  // namespace

std::size_t afe_length(const GammaFactor& gamma, double conductor, cplx s,
                       const AfeOptions& opt) {
  const double log_q = std::log(conductor);
  const double log_w = std::log(opt.scale);
  return std::max(
      length_for(gamma, log_q, s.real(), opt.abscissa, opt.gauss_width, log_w, opt.tol),
      length_for(gamma, log_q, 1.0 - s.real(), opt.abscissa, opt.gauss_width, -log_w,
                 opt.tol));
}

// Lambda(s) / R = sum a_n Psi_w(n; s) + eps sum a_n Psi_{1/w}(n; 1 - s),
//   Psi_w(n; z) = (1/2 pi i) int e^{u^2/B^2} w^u / u * gamma(z+u)/gamma(1/2)
//                 * Q^{(z+u-1/2)/2} n^{-z-u} du.
cplx afe_completed_normalized(const SelfDualL& L, cplx s, const AfeOptions& opt) {
  if (L.gamma.pole_distance(s) < 1e-6 || L.gamma.pole_distance(1.0 - s) < 1e-6)
    throw PoleProximity("afe: s is at a pole of the gamma factor");
  const std::size_t need = afe_length(L.gamma, L.conductor, s, opt);
  if (L.coeffs.size() < need)
    throw TableExhausted("afe: coefficient table too short",
                         static_cast<std::int64_t>(need));
  const double log_w = std::log(opt.scale);
  return smoothed_sum(L, s, log_w, need, opt) +
         L.root_number * smoothed_sum(L, 1.0 - s, -log_w, need, opt);
}

cplx afe_value(const SelfDualL& L, cplx s, const AfeOptions& opt) {
  const cplx lam = afe_completed_normalized(L, s, opt);
  const double log_q = std::log(L.conductor);
  const cplx log_ratio = L.gamma.log_value<double>(s) -
                         L.gamma.log_value<double>(cplx(0.5, 0)) +
                         0.5 * (s - 0.5) * log_q;
  return lam * std::exp(-log_ratio);
}

double fe_residual(const SelfDualL& L, cplx s, AfeOptions opt) {
  if (opt.scale == 1.0) opt.scale = 1.25;
  const cplx a = afe_completed_normalized(L, s, opt);
  const cplx b = afe_completed_normalized(L, 1.0 - s, opt);
  return std::abs(a - L.root_number * b) / std::abs(a);
}

}  // namespace momentlab

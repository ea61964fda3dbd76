#include "momentlab/bessel.hpp"

#include "momentlab/arith.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace momentlab {

namespace {

using ld = long double;

// cos and sin of m pi / 4 for m = 0..7.
constexpr double kR = 0.70710678118654752440;
constexpr double kCos8[8] = {1, kR, 0, -kR, -1, -kR, 0, kR};
constexpr double kSin8[8] = {0, kR, 1, kR, 0, -kR, -1, -kR};

// Miller's algorithm normalized by J_0 + 2 sum J_{2k} = 1; orders 0..nmax.
std::vector<double> miller_normalized(double x, int nmax) {
  int top = std::max(nmax, static_cast<int>(x)) + 40 +
            static_cast<int>(8.0 * std::cbrt(std::max(x, 1.0)));
  if (top % 2) ++top;
  std::vector<ld> b(static_cast<std::size_t>(top) + 2, 0.0L);
  b[top] = 1e-30L;
  ld norm = 0;
  for (int k = top; k >= 1; --k) {
    b[k - 1] = (2.0L * k / x) * b[k] - b[k + 1];
    if (std::fabs(b[k - 1]) > 1e200L) {
      for (int j = k - 1; j <= top; ++j) b[j] *= 1e-200L;
      norm *= 1e-200L;
    }
    if ((k - 1) % 2 == 0) norm += (k - 1 == 0 ? 1.0L : 2.0L) * b[k - 1];
  }
  std::vector<double> out(static_cast<std::size_t>(nmax) + 1);
  for (int k = 0; k <= nmax; ++k) out[k] = static_cast<double>(b[k] / norm);
  return out;
}

// Orders 0..nmax for x >= 25: Hankel anchors, forward recurrence while the
// order stays below x, backward recurrence matched on an overlap window above.
std::vector<double> anchored_recurrence(double x, int nmax) {
  std::vector<double> out(static_cast<std::size_t>(nmax) + 1);
  const int m0 = std::min(nmax, static_cast<int>(std::floor(x)));
  std::vector<ld> fwd(static_cast<std::size_t>(std::max(m0, 1)) + 1);
  fwd[0] = bessel_j_hankel(0, x);
  fwd[1] = bessel_j_hankel(1, x);
  for (int k = 1; k < m0; ++k) fwd[k + 1] = (2.0L * k / x) * fwd[k] - fwd[k - 1];
  for (int k = 0; k <= m0; ++k) out[k] = static_cast<double>(fwd[k]);
  if (nmax <= m0) return out;

  const int top = nmax + 50 + static_cast<int>(30.0 * std::cbrt(x));
  const int m1 = std::max(0, m0 - 8);
  std::vector<ld> b(static_cast<std::size_t>(top) + 2, 0.0L);
  b[top] = 1e-30L;
  for (int k = top; k > m1; --k) {
    b[k - 1] = (2.0L * k / x) * b[k] - b[k + 1];
    if (std::fabs(b[k - 1]) > 1e200L)
      for (int j = k - 1; j <= top; ++j) b[j] *= 1e-200L;
  }
  ld num = 0, den = 0;
  for (int k = m1; k <= m0; ++k) {
    num += fwd[k] * b[k];
    den += b[k] * b[k];
  }
  const ld scale = num / den;
  for (int k = m0 + 1; k <= nmax; ++k) out[k] = static_cast<double>(scale * b[k]);
  return out;
}

}  // namespace

double bessel_j_series(int n, double x) {
  if (x == 0.0) return n == 0 ? 1.0 : 0.0;
  const ld q = -static_cast<ld>(x) * x / 4.0L;
  ld term = 1.0L, sum = 1.0L, peak = 1.0L;
  for (int k = 0; k < 100000; ++k) {
    term *= q / ((k + 1.0L) * (n + k + 1.0L));
    sum += term;
    peak = std::max(peak, std::fabs(term));
    if (std::fabs(term) < 1e-22L * peak && k > x) break;
  }
  const ld log_pref = n * std::log(static_cast<ld>(x) / 2.0L) - std::lgamma(n + 1.0L);
  return static_cast<double>(std::exp(log_pref) * sum);
}

double bessel_j_hankel(int n, double x) {
  const ld mu = 4.0L * n * n;
  ld p = 1.0L, q = 0.0L, a = 1.0L, last = 1e300L;
  for (int k = 1; k < 400; ++k) {
    a *= (mu - static_cast<ld>(2 * k - 1) * (2 * k - 1)) / (k * 8.0L * x);
    if (std::fabs(a) > last) break;  // asymptotic series started to diverge
    last = std::fabs(a);
    const int r = k % 4;
    if (r == 1) q += a;
    if (r == 2) p -= a;
    if (r == 3) q -= a;
    if (r == 0) p += a;
    if (a == 0.0L || std::fabs(a) < 1e-22L) break;
  }
  // omega = x - (2n + 1) pi / 4
  const int m = (2 * n + 1) % 8;
  const ld cx = std::cos(static_cast<ld>(x)), sx = std::sin(static_cast<ld>(x));
  const ld cw = cx * kCos8[m] + sx * kSin8[m];
  const ld sw = sx * kCos8[m] - cx * kSin8[m];
  return static_cast<double>(std::sqrt(2.0L / (std::numbers::pi_v<ld> * x)) *
                             (p * cw - q * sw));
}

double bessel_j(int n, double x) {
  if (n < 0 || x < 0) throw PreconditionError("bessel_j: need n >= 0, x >= 0");
  if (x == 0.0) return n == 0 ? 1.0 : 0.0;
  if (x <= n / 2.0) return bessel_j_series(n, x);
  if (x >= 25.0 && x >= static_cast<double>(n) * n) return bessel_j_hankel(n, x);
  return bessel_j_orders(x, n)[static_cast<std::size_t>(n)];
}

std::vector<double> bessel_j_orders(double x, int nmax) {
  if (nmax < 0 || x < 0) throw PreconditionError("bessel_j_orders: bad input");
  if (x == 0.0) {
    std::vector<double> out(static_cast<std::size_t>(nmax) + 1, 0.0);
    out[0] = 1.0;
    return out;
  }
  if (x < 25.0) return miller_normalized(x, nmax);
  return anchored_recurrence(x, nmax);
}

}  // namespace momentlab

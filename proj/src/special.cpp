#include "momentlab/special.hpp"

#include "momentlab/arith.hpp"
#include "momentlab/bessel.hpp"
#include "momentlab/gamma.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <cmath>
#include <numbers>

namespace momentlab {

namespace {

constexpr double kPi = std::numbers::pi;

// Gauss-Legendre nodes/weights on [-1, 1] by Newton on P_n.
struct GaussLegendre {
  std::vector<double> x, w;
  explicit GaussLegendre(int n) : x(n), w(n) {
    for (int i = 0; i < n; ++i) {
      double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = z;
        for (int k = 2; k <= n; ++k) {
          double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        double dp = n * (z * p1 - p0) / (z * z - 1.0);
        double dz = p1 / dp;
        z -= dz;
        if (std::abs(dz) < 1e-16) {
          x[i] = z;
          w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
          break;
        }
        x[i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
      }
    }
  }
};

const GaussLegendre& gl20() {
  static const GaussLegendre g(20);
  return g;
}

template <typename T, typename F>
T composite(double a, double b, int panels, const F& f, double* abs_sum) {
  const GaussLegendre& g = gl20();
  const double width = (b - a) / panels;
  T total{};
  double mag = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * width;
    for (std::size_t i = 0; i < g.x.size(); ++i) {
      const double x = lo + 0.5 * width * (g.x[i] + 1.0);
      const T v = f(x);
      total += 0.5 * width * g.w[i] * v;
      mag += 0.5 * width * g.w[i] * std::abs(v);
    }
  }
  if (abs_sum) *abs_sum = mag;
  return total;
}

template <typename T, typename F>
T adaptive_support(const TestFunction& w, const F& f, int min_panels, double rel_tol) {
  if (w.is_zero()) return T{};
  int panels = std::max(1, min_panels);
  double mag = 0.0;
  T prev = composite<T>(w.a, w.b, panels, f, &mag);
  for (int round = 0; round < 14; ++round) {
    panels *= 2;
    T cur = composite<T>(w.a, w.b, panels, f, &mag);
    if (std::abs(cur - prev) <= rel_tol * std::max(std::abs(cur), mag)) return cur;
    prev = cur;
  }
  return prev;
}

void check_poles(std::complex<double> s, const std::array<double, 3>& mu) {
  for (double m : mu) {
    // poles of Gamma((1 + s + mu)/2) at s = -1 - mu - 2j
    std::complex<double> z = 1.0 + s + m;
    double j = std::round(-z.real() / 2.0);
    if (j >= 0 && std::abs(z + 2.0 * j) < 1e-6)
      throw PoleProximity("gamma_factor: s too close to a pole");
  }
}

std::complex<double> log_gamma_rho(int rho, std::complex<double> s,
                                   const std::array<double, 3>& mu) {
  std::complex<double> acc = (-1.5 - 3.0 * s) * std::log(kPi);
  for (double m : mu)
    acc += log_gamma<double>((1.0 + s + m) * 0.5) - log_gamma<double>((-s + m) * 0.5);
  if (rho == 1) acc += std::complex<double>(0.0, kPi / 2);
  return acc;
}

}  // namespace

// ---- TestFunction ---------------------------------------------------------------

TestFunction TestFunction::bump(double a, double b, double sharpness) {
  if (!(sharpness > 0)) throw PreconditionError("bump: sharpness must be positive");
  TestFunction w;
  w.a = a;
  w.b = b;
  w.eval = [a, b, sharpness](double x) {
    const double u = (2.0 * x - a - b) / (b - a);
    const double d = 1.0 - u * u;
    return d <= 0 ? 0.0 : std::exp(sharpness * (1.0 - 1.0 / d));
  };
  return w;
}

TestFunction TestFunction::zero(double a, double b) {
  TestFunction w;
  w.a = a;
  w.b = b;
  return w;
}

TestFunction TestFunction::combine(double c1, const TestFunction& w1, double c2,
                                   const TestFunction& w2) {
  TestFunction w;
  w.a = std::min(w1.a, w2.a);
  w.b = std::max(w1.b, w2.b);
  if (w1.is_zero() && w2.is_zero()) return w;
  w.eval = [c1, w1, c2, w2](double x) { return c1 * w1(x) + c2 * w2(x); };
  return w;
}

double integrate_support(const TestFunction& w, const std::function<double(double)>& f,
                         int min_panels, double rel_tol) {
  return adaptive_support<double>(w, f, min_panels, rel_tol);
}

std::complex<double> integrate_support_c(
    const TestFunction& w, const std::function<std::complex<double>(double)>& f,
    int min_panels, double rel_tol) {
  return adaptive_support<std::complex<double>>(w, f, min_panels, rel_tol);
}

// ---- gamma quotients -------------------------------------------------------------

std::array<double, 3> gl3_shifts(const std::array<std::complex<double>, 3>& alpha,
                                 int rho) {
  double a = 0.0;
  for (const auto& x : alpha) a = std::max(a, std::abs(x.real()));
  // The +-a pair gives Gamma_C(s + a) = Gamma_R(s + a) Gamma_R(s + a + 1), which
  // is unchanged by the sign twist; the GL(1) part Gamma_R(s + 1) flips parity.
  return {rho == 0 ? 1.0 : 0.0, a, a + 1.0};
}

std::complex<double> gamma_factor(int rho, std::complex<double> s,
                                  const std::array<std::complex<double>, 3>& alpha) {
  if (rho != 0 && rho != 1) throw PreconditionError("gamma_factor: rho must be 0 or 1");
  const auto mu = gl3_shifts(alpha, rho);
  check_poles(s, mu);
  return std::exp(log_gamma_rho(rho, s, mu));
}

std::complex<double> gamma_pm(OmegaSign sign, std::complex<double> s,
                              const std::array<std::complex<double>, 3>& alpha) {
  const std::complex<double> g0 = gamma_factor(0, s, alpha);
  const std::complex<double> g1 = gamma_factor(1, s, alpha);
  return sign == OmegaSign::plus ? (g0 - g1) / 2.0 : (g0 + g1) / 2.0;
}

// ---- Omega table --------------------------------------------------------------------

namespace {

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

constexpr double kGridLo = -12.0, kGridHi = 30.0;

}  // namespace

OmegaTable::OmegaTable(const TestFunction& w,
                       const std::array<std::complex<double>, 3>& alpha,
                       ContourSpec contour, double tail_tol)
    : contour_(contour), step_(contour.step) {
  const auto mu0 = gl3_shifts(alpha, 0);
  const auto mu1 = gl3_shifts(alpha, 1);
  const double pole_bound = -1.0 - std::min({mu0[0], mu1[0]});
  if (!(contour_.sigma > pole_bound))
    throw PreconditionError("OmegaTable: contour must lie right of the poles");
  if (w.is_zero()) {
    zero_ = true;
    return;
  }
  const double sigma = contour_.sigma;
  const std::complex<double> i(0, 1);
  double T = contour_.height > 0 ? contour_.height : 512.0;
  for (;;) {
    const std::size_t J = static_cast<std::size_t>(std::ceil(T / step_));
    // w~(-sigma - it) for t = j step via an FFT of g(v) = w(e^v) e^{-sigma v}.
    const std::size_t N = next_pow2(4 * (J + 1));
    const double delta = 2.0 * kPi / (N * step_);
    const double v0 = std::log(w.a);
    const std::size_t nv = static_cast<std::size_t>(std::ceil((std::log(w.b) - v0) / delta)) + 1;
    std::vector<std::complex<double>> g(N, 0.0), G;
    double gabs = 0.0;
    for (std::size_t k = 0; k < nv && k < N; ++k) {
      const double v = v0 + k * delta;
      g[k] = w(std::exp(v)) * std::exp(-sigma * v);
      gabs += std::abs(g[k]);
    }
    Eigen::FFT<double> fft;
    fft.fwd(G, g);
    // w~ below this is FFT rounding; gamma grows like t^{3 sigma + 3/2} and
    // would amplify it, so such nodes are dropped and charged to the error.
    const double noise = 64.0 * std::numeric_limits<double>::epsilon() * gabs * delta;
    h_[0].assign(J + 1, 0.0);
    h_[1].assign(J + 1, 0.0);
    std::vector<double> gmag(J + 1);
    std::size_t cut = J;
    double peak = 0.0;
    for (std::size_t j = 0; j <= J; ++j) {
      const double t = j * step_;
      const std::complex<double> s(sigma, t);
      const std::complex<double> wt = delta * std::exp(-i * t * v0) * G[j];
      const std::complex<double> g0 = std::exp(log_gamma_rho(0, s, mu0));
      const std::complex<double> g1 = std::exp(log_gamma_rho(1, s, mu1)) / i;
      gmag[j] = std::abs(g0) + std::abs(g1);
      if (std::abs(wt) > noise) cut = J;
      else if (cut == J) cut = j;
      h_[0][j] = g0 * wt;
      h_[1][j] = g1 * wt;
      peak = std::max({peak, std::abs(h_[0][j]), std::abs(h_[1][j])});
    }
    std::size_t last = 0;
    for (std::size_t j = 0; j <= std::min(cut, J); ++j)
      if (std::max(std::abs(h_[0][j]), std::abs(h_[1][j])) > tail_tol * peak) last = j;
    const bool converged = last < J * 3 / 4 || cut < J * 3 / 4;
    if (converged || contour_.height > 0 || T >= 65536.0) {
      if (!converged && contour_.height <= 0)
        throw ContourTruncationError("OmegaTable: Mellin integrand does not decay");
      const double wgt = step_ / (2.0 * kPi);
      const std::size_t e = cut < J ? cut - (cut > 0) : J;
      const double edge = std::abs(h_[0][e]) + std::abs(h_[1][e]);
      double tail = 0.0, total = 0.0;
      for (std::size_t j = 0; j <= J; ++j) {
        if (j >= cut) {
          tail += noise * gmag[j];
          h_[0][j] = h_[1][j] = 0.0;
          continue;
        }
        const double m = std::abs(h_[0][j]) + std::abs(h_[1][j]);
        total += (j == 0 ? 1.0 : 2.0) * m;
        if (j > last) tail += 2.0 * m;
      }
      // Beyond the last node the integrand decays like exp(-c sqrt t); the
      // remaining sum is a few sqrt(J) multiples of the edge value.
      tail_bound_ = wgt * (tail + 8.0 * edge * std::sqrt(static_cast<double>(e) + 1.0));
      abs_sum_ = wgt * total;
      h_[0].resize(std::min(cut, J) + 1);
      h_[1].resize(h_[0].size());
      height_ = (h_[0].size() - 1) * step_;
      break;
    }
    T *= 2.0;
  }

  // Grid in u = log x by FFT over t-nodes, plus the 2h rule for comparison.
  const std::size_t J = h_[0].size() - 1;
  const std::size_t M = next_pow2(2 * J + 1);
  du_ = 2.0 * kPi / (M * step_);
  const long m_lo = static_cast<long>(std::floor(kGridLo / du_));
  const long m_hi = static_cast<long>(std::ceil(kGridHi / du_));
  u0_ = m_lo * du_;
  const double wgt = step_ / (2.0 * kPi);
  for (int side = 0; side < 2; ++side) {
    const auto& h = h_[side];
    std::vector<std::complex<double>> a(M, 0.0), ac(M / 2, 0.0), out, outc;
    for (std::size_t j = 0; j <= J; ++j) {
      a[j] += h[j];
      if (j > 0) a[M - j] += std::conj(h[j]);
      if (j % 2 == 0) {
        ac[j / 2] += h[j];
        if (j > 0) ac[M / 2 - j / 2] += std::conj(h[j]);
      }
    }
    Eigen::FFT<double> fft;
    fft.fwd(out, a);
    fft.fwd(outc, ac);
    grid_[side].resize(static_cast<std::size_t>(m_hi - m_lo + 1));
    grid_err_[side].resize(grid_[side].size());
    for (long m = m_lo; m <= m_hi; ++m) {
      const std::size_t idx = static_cast<std::size_t>((m % static_cast<long>(M) + M) % M);
      const std::size_t idc = idx % (M / 2);
      const double fine = wgt * out[idx].real();
      const double coarse = 2.0 * wgt * outc[idc].real();
      grid_[side][m - m_lo] = fine;
      grid_err_[side][m - m_lo] = std::abs(fine - coarse);
    }
  }
  // |Omega_+-| = |Omega_0 -+ i Omega_1| / 2 <= (|Omega_0| + |Omega_1|) / 2; only
  // the part above the local error counts, so rounding at large x does not
  // masquerade as signal.
  suffix_max_.assign(grid_[0].size(), 0.0);
  double run = 0.0;
  for (std::size_t j = grid_[0].size(); j-- > 0;) {
    const double scale = std::exp(-contour_.sigma * (u0_ + j * du_));
    const double mag = 0.5 * (std::abs(grid_[0][j]) + std::abs(grid_[1][j]));
    const double err = 0.5 * (grid_err_[0][j] + grid_err_[1][j]) + tail_bound_ + 1e-15 * abs_sum_;
    run = std::max(run, scale * std::max(0.0, mag - err));
    suffix_max_[j] = run;
  }
}

OmegaPart OmegaTable::part(int rho, double x) const {
  if (!(x > 0)) throw PreconditionError("omega: x must be positive");
  if (zero_) return {0.0, 0.0};
  const double u = std::log(x);
  const auto& gr = grid_[rho];
  const double pos = (u - u0_) / du_;
  const long base = static_cast<long>(std::floor(pos)) - 3;
  if (base < 0 || base + 7 >= static_cast<long>(gr.size())) return part_direct(rho, x);
  double val = 0.0, err = 0.0;
  for (int p = 0; p < 8; ++p) {
    double l = 1.0;
    for (int q = 0; q < 8; ++q)
      if (q != p) l *= (pos - (base + q)) / static_cast<double>(p - q);
    val += l * gr[base + p];
    err = std::max(err, grid_err_[rho][base + p]);
  }
  const double scale = std::exp(-contour_.sigma * u);
  return {scale * val, scale * (err + tail_bound_ + 1e-15 * abs_sum_)};
}

OmegaPart OmegaTable::part_direct(int rho, double x) const {
  if (!(x > 0)) throw PreconditionError("omega: x must be positive");
  if (zero_) return {0.0, 0.0};
  const double u = std::log(x);
  const auto& h = h_[rho];
  const std::complex<double> rot = std::exp(std::complex<double>(0, -step_ * u));
  std::complex<double> ph = 1.0;
  double fine = h[0].real(), coarse = h[0].real();
  for (std::size_t j = 1; j < h.size(); ++j) {
    ph *= rot;
    if (j % 256 == 0) ph = std::exp(std::complex<double>(0, -step_ * u * j));
    const double term = 2.0 * (h[j] * ph).real();
    fine += term;
    if (j % 2 == 0) coarse += term;
  }
  const double wgt = step_ / (2.0 * kPi);
  const double scale = std::exp(-contour_.sigma * u);
  const double disc = std::abs(wgt * fine - 2.0 * wgt * coarse);
  return {scale * wgt * fine, scale * (disc + tail_bound_ + 1e-15 * abs_sum_)};
}

double OmegaTable::decay_point(double tol) const {
  if (zero_) return 0.0;
  for (std::size_t j = 0; j < suffix_max_.size(); ++j)
    if (suffix_max_[j] < tol) return std::exp(u0_ + j * du_);
  return std::exp(u0_ + (suffix_max_.size() - 1) * du_);
}

double OmegaTable::envelope(double x) const {
  if (zero_) return 0.0;
  const double pos = (std::log(x) - u0_) / du_;
  const long n = static_cast<long>(suffix_max_.size());
  long j = std::clamp(static_cast<long>(std::floor(pos)), 0L, n - 1);
  if (suffix_max_[static_cast<std::size_t>(j)] > 0) return suffix_max_[static_cast<std::size_t>(j)];
  // Past the last point where |Omega| clears its error bar: continue from the
  // last significant level with x^{-2} decay (the observed decay is faster).
  long last = j;
  while (last > 0 && suffix_max_[static_cast<std::size_t>(last)] == 0.0) --last;
  const double level = suffix_max_[static_cast<std::size_t>(last)];
  const double x_last = std::exp(u0_ + last * du_);
  return level * (x_last / x) * (x_last / x);
}

namespace {

OmegaValue combine_parts(OmegaSign sign, const OmegaPart& p0, const OmegaPart& p1) {
  const double sg = sign == OmegaSign::plus ? -1.0 : 1.0;
  return {std::complex<double>(p0.value, sg * p1.value) / 2.0,
          0.5 * (p0.error + p1.error)};
}

}  // namespace

OmegaValue OmegaTable::eval(OmegaSign sign, double x) const {
  return combine_parts(sign, part(0, x), part(1, x));
}

OmegaValue OmegaTable::eval_direct(OmegaSign sign, double x) const {
  return combine_parts(sign, part_direct(0, x), part_direct(1, x));
}

OmegaValue omega_pm(double x, const TestFunction& w, OmegaSign sign,
                    const std::array<std::complex<double>, 3>& alpha,
                    const ContourSpec& contour) {
  OmegaTable table(w, alpha, contour);
  return table.eval_direct(sign, x);
}

// ---- stationary phase -------------------------------------------------------------

OmegaStationary::OmegaStationary(const OmegaTable& table, const TestFunction& w,
                                 OmegaSign sign, int max_terms, double x_lo,
                                 double x_hi, int grid_points)
    : w_(w), sign_(sign) {
  if (x_lo < 100.0) throw AsymptoticRegimeError("OmegaStationary: x_lo must be >= 100");
  const int n = 2 * max_terms;
  coef_[0] = coef_[1] = Eigen::VectorXd::Zero(n);
  coef_c_.assign(max_terms, 0.0);
  coef_d_.assign(max_terms, 0.0);
  if (w.is_zero()) return;
  Eigen::MatrixXd a(grid_points, n);
  Eigen::VectorXd env(grid_points);
  Eigen::VectorXd rhs[2] = {Eigen::VectorXd(grid_points), Eigen::VectorXd(grid_points)};
  for (int r = 0; r < grid_points; ++r) {
    const double x = x_lo * std::pow(x_hi / x_lo, r / (grid_points - 1.0));
    Eigen::VectorXd row = basis_row(x);
    env(r) = std::hypot(row(0), row(1)) + 1e-300;
    a.row(r) = row.transpose() / env(r);
    for (int rho = 0; rho < 2; ++rho) rhs[rho](r) = table.part(rho, x).value / env(r);
  }
  // Columns differ by powers of x^{1/3}; equilibrate before solving.
  Eigen::VectorXd colscale = a.colwise().norm().transpose();
  for (int c = 0; c < n; ++c)
    if (colscale(c) > 0) a.col(c) /= colscale(c);
  const auto qr = a.colPivHouseholderQr();
  for (int c = 0; c < n; ++c) a.col(c) *= colscale(c);
  std::vector<std::complex<double>> cc[2], dd[2];
  for (int rho = 0; rho < 2; ++rho) {
    Eigen::VectorXd sol = qr.solve(rhs[rho]);
    for (int c = 0; c < n; ++c)
      coef_[rho](c) = colscale(c) > 0 ? sol(c) / colscale(c) : 0.0;
    fit_residual_ = std::max(fit_residual_, (a * coef_[rho] - rhs[rho]).cwiseAbs().maxCoeff());
    for (int j = 0; j < max_terms; ++j) {
      const double ac = coef_[rho](2 * j), bs = coef_[rho](2 * j + 1);
      cc[rho].emplace_back(ac / 2.0, -bs / 2.0);
      dd[rho].emplace_back(ac / 2.0, bs / 2.0);
    }
  }
  // Omega_+- = (Omega_0 -+ i Omega_1) / 2
  const std::complex<double> mix(0.0, sign == OmegaSign::plus ? -1.0 : 1.0);
  for (int j = 0; j < max_terms; ++j) {
    coef_c_[j] = (cc[0][j] + mix * cc[1][j]) / 2.0;
    coef_d_[j] = (dd[0][j] + mix * dd[1][j]) / 2.0;
  }
}

Eigen::VectorXd OmegaStationary::basis_row(double x) const {
  const int m = static_cast<int>(coef_c_.size());
  Eigen::VectorXd row = Eigen::VectorXd::Zero(2 * m);
  if (w_.is_zero()) return row;
  const double cycles = 3.0 * std::cbrt(x) * (std::cbrt(w_.b) - std::cbrt(w_.a));
  const int panels = 32 + static_cast<int>(4.0 * cycles);
  const GaussLegendre& g = gl20();
  const double width = (w_.b - w_.a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double lo = w_.a + p * width;
    for (std::size_t i = 0; i < g.x.size(); ++i) {
      const double y = lo + 0.5 * width * (g.x[i] + 1.0);
      const double wy = w_(y);
      if (wy == 0.0) continue;
      const double z = std::cbrt(x * y);
      const double ph = 6.0 * kPi * z;
      const double c = std::cos(ph), s = std::sin(ph);
      double pw = x * wy * 0.5 * width * g.w[i];
      for (int j = 0; j < m; ++j) {
        pw /= z;
        row(2 * j) += pw * c;
        row(2 * j + 1) += pw * s;
      }
    }
  }
  return row;
}

OmegaValue OmegaStationary::eval(double x, int terms) const {
  if (x < 100.0) throw AsymptoticRegimeError("omega_pm_stationary: x must be >= 100");
  if (terms < 1 || terms > max_terms())
    throw PreconditionError("omega_pm_stationary: terms out of range");
  if (w_.is_zero()) return {0.0, 0.0};
  Eigen::VectorXd row = basis_row(x);
  double v[2] = {0.0, 0.0}, next = 0.0;
  for (int rho = 0; rho < 2; ++rho) {
    const auto& cf = coef_[rho];
    for (int c = 0; c < 2 * terms; ++c) v[rho] += row(c) * cf(c);
    if (terms < max_terms())
      next += std::abs(row(2 * terms) * cf(2 * terms)) +
              std::abs(row(2 * terms + 1) * cf(2 * terms + 1));
    else
      next += (std::abs(row(2 * terms - 2) * cf(2 * terms - 2)) +
               std::abs(row(2 * terms - 1) * cf(2 * terms - 1))) /
              std::cbrt(x);
  }
  const double env = std::hypot(row(0), row(1));
  const double sg = sign_ == OmegaSign::plus ? -1.0 : 1.0;
  return {std::complex<double>(v[0], sg * v[1]) / 2.0, 0.5 * next + fit_residual_ * env};
}

// ---- h-check and averaged Bessel sums -----------------------------------------------

std::complex<double> h_check(const TestFunction& h, double t) {
  if (h.is_zero()) return 0.0;
  // u = v^2: (2 / sqrt(2 pi)) int h(v) e^{i t v^2} dv
  const double cycles = std::abs(t) * (h.b * h.b - h.a * h.a) / (2.0 * kPi);
  const int panels = 16 + static_cast<int>(2.0 * cycles);
  auto f = [&](double v) {
    return h(v) * std::exp(std::complex<double>(0.0, t * v * v));
  };
  return 2.0 / std::sqrt(2.0 * kPi) * integrate_support_c(h, f, panels);
}

AveragedBessel averaged_bessel(const TestFunction& h, double K, double x,
                               BesselAverageMode mode, int iota, bool shift_argument) {
  AveragedBessel r;
  if (h.is_zero()) return r;
  if (!(x > 0) || !(K > 0)) throw PreconditionError("averaged_bessel: need K, x > 0");
  const int kmax = static_cast<int>(std::ceil(h.b * K)) + 2;
  const std::vector<double> j = bessel_j_orders(x, kmax);
  const std::complex<double> e8 = std::exp(std::complex<double>(0.0, x - kPi / 4.0));
  const double im = (e8 * h_check(h, K * K / (2.0 * x))).imag();
  if (mode == BesselAverageMode::even_twisted) {
    double s = 0.0;
    for (int k = 2; k <= kmax; k += 2) {
      const double hv = h((k - 1.0) / K);
      if (hv == 0.0) continue;
      s += ((k / 2) % 2 ? -1.0 : 1.0) * hv * j[k - 1];
    }
    r.lhs = s;
    r.main_term = -K / (2.0 * std::sqrt(x)) * im;
  } else {
    if (iota != 0 && iota != 2)
      throw PreconditionError("averaged_bessel: iota must be 0 or 2");
    double s = 0.0;
    const double shift = shift_argument ? 1.0 : 0.0;
    for (int k = iota == 0 ? 4 : 2; k <= kmax; k += 4) {
      const double hv = h((k - shift) / K);
      if (hv == 0.0) continue;
      s += hv * j[k - 1];
    }
    r.lhs = 4.0 * s;
    const double sign = iota == 0 ? 1.0 : -1.0;
    r.main_term = h(x / K) - sign * K / std::sqrt(x) * im;
  }
  r.residual = r.lhs - r.main_term;
  return r;
}

}  // namespace momentlab

#include "momentlab/identities.hpp"

#include "momentlab/arith.hpp"
#include "momentlab/bessel.hpp"
#include "momentlab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>

namespace momentlab {

namespace {

constexpr double kPi = std::numbers::pi;

std::complex<double> e_frac(std::int64_t num, std::int64_t den) {
  const double t = 2.0 * kPi * static_cast<double>(floor_mod(num, den)) / static_cast<double>(den);
  return {std::cos(t), std::sin(t)};
}

void fill_gap(IdentityReport& r) {
  r.abs_gap = std::abs(r.lhs - r.rhs);
  const double scale = std::max(std::abs(r.lhs), std::abs(r.rhs));
  r.rel_gap = scale > 0 ? r.abs_gap / scale : 0.0;
}

// i^{-k} for even k
double i_pow_neg(int k) { return (k / 2) % 2 == 0 ? 1.0 : -1.0; }

void check_weight(int k) {
  if (k < 4 || k % 2 != 0) throw PreconditionError("Petersson: weight must be even and >= 4");
}

}  // namespace

bool IdentityReport::pass(double rel_tol) const {
  return abs_gap <= rel_tol * std::max(std::abs(lhs), std::abs(rhs)) + truncation_bound +
                        quadrature_error;
}

// ---- Petersson -------------------------------------------------------------------

void KloostermanCache::reserve(std::int64_t c_max) {
  if (rows_.empty()) rows_.emplace_back();
  for (std::int64_t c = static_cast<std::int64_t>(rows_.size()); c <= c_max; ++c)
    rows_.push_back(kloosterman_row(1, c));
}

double KloostermanCache::operator()(std::int64_t m, std::int64_t n, std::int64_t c) {
  if (c < 1) throw PreconditionError("kloosterman: modulus must be >= 1");
  reserve(c);
  const std::int64_t g = gcd(gcd(m, n), c);
  if (g == 1) return rows_[c][floor_mod(mul_mod(floor_mod(m, c), floor_mod(n, c), c), c)];
  double s = 0.0;
  for (std::int64_t d : divisors(g)) {
    const std::int64_t cd = c / d;
    const std::int64_t mn = mul_mod(floor_mod(m / d, cd), floor_mod(n / d, cd), cd);
    s += static_cast<double>(d) * rows_[cd][mn];
  }
  return s;
}

double petersson_tail_bound(int k, std::int64_t m, std::int64_t n, std::int64_t c_max,
                            std::int64_t level) {
  check_weight(k);
  const double a = 2.0 * kPi * std::sqrt(static_cast<double>(m) * n) / level;
  const double C = static_cast<double>(std::max<std::int64_t>(c_max, 1));
  const double lg = std::log(2.0 * kPi) + (k - 1) * std::log(a) - std::lgamma(k) -
                    (k - 2) * std::log(C) - std::log(k - 2.0);
  return std::exp(lg);
}

std::int64_t petersson_cmax(int k, std::int64_t m, std::int64_t n, double tol,
                            std::int64_t level) {
  check_weight(k);
  const double a = 2.0 * kPi * std::sqrt(static_cast<double>(m) * n) / level;
  const double lg = std::log(2.0 * kPi) + (k - 1) * std::log(a) - std::lgamma(k) -
                    std::log(k - 2.0) - std::log(tol);
  const double c = std::exp(lg / (k - 2));
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(c)));
}

PeterssonSide petersson_kloosterman_side(int k, std::int64_t m, std::int64_t n,
                                         std::int64_t c_max, std::int64_t level,
                                         KloostermanCache* cache) {
  check_weight(k);
  if (m < 1 || n < 1 || level < 1) throw PreconditionError("Petersson: m, n, level >= 1");
  const double root = 4.0 * kPi * std::sqrt(static_cast<double>(m) * n);
  double s = 0.0;
  for (std::int64_t c = 1; c <= c_max; ++c) {
    const std::int64_t cr = c * level;
    const double kl = cache ? (*cache)(m, n, cr) : kloosterman_real(m, n, cr);
    if (kl == 0.0) continue;
    s += kl / static_cast<double>(cr) * bessel_j(k - 1, root / static_cast<double>(cr));
  }
  PeterssonSide out;
  out.value = (m == n ? 1.0 : 0.0) + 2.0 * kPi * i_pow_neg(k) * s;
  out.truncation_bound = petersson_tail_bound(k, m, n, c_max, level);
  out.c_max = c_max;
  return out;
}

double petersson_spectral_side(const std::vector<Newform>& forms, std::int64_t m,
                               std::int64_t n) {
  double s = 0.0;
  for (const auto& f : forms) s += hecke_lambda(f, m) * hecke_lambda(f, n) / f.petersson_weight;
  return s;
}

const std::vector<Newform>& level_one_forms(int k, std::int64_t n_max) {
  static std::mutex mu;
  static std::map<int, std::unique_ptr<std::vector<Newform>>> memo;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = memo[k];
  // the weights need a long lambda table anyway; never go below 2000
  const std::int64_t want = std::max<std::int64_t>(n_max, 2000);
  if (!slot || (!slot->empty() && slot->front().n_max() < want))
    slot = std::make_unique<std::vector<Newform>>(eigenforms(k, want));
  return *slot;
}

IdentityReport petersson_two_sided(int k, std::int64_t m, std::int64_t n,
                                   std::int64_t c_max) {
  check_weight(k);
  if (m < 1 || n < 1) throw PreconditionError("Petersson: m, n >= 1");
  const auto& forms = level_one_forms(k, std::max(m, n));
  IdentityReport r;
  r.lhs = petersson_spectral_side(forms, m, n);
  const PeterssonSide side = petersson_kloosterman_side(k, m, n, c_max);
  r.rhs = side.value;
  r.truncation_bound = side.truncation_bound;
  fill_gap(r);
  r.parameters = {{"k", k}, {"m", m}, {"n", n}, {"c_max", c_max}};
  return r;
}

std::vector<IdentityReport> petersson_grid(int k, std::int64_t mn_max, double tail_tol,
                                           KloostermanCache* cache) {
  check_weight(k);
  KloostermanCache local;
  if (!cache) cache = &local;
  const auto& forms = level_one_forms(k, mn_max);
  cache->reserve(petersson_cmax(k, mn_max, mn_max, tail_tol));
  std::vector<IdentityReport> out;
  out.reserve(static_cast<std::size_t>(mn_max * mn_max));
  for (std::int64_t m = 1; m <= mn_max; ++m)
    for (std::int64_t n = 1; n <= mn_max; ++n) {
      const std::int64_t c_max = petersson_cmax(k, m, n, tail_tol);
      IdentityReport r;
      r.lhs = petersson_spectral_side(forms, m, n);
      const PeterssonSide side = petersson_kloosterman_side(k, m, n, c_max, 1, cache);
      r.rhs = side.value;
      r.truncation_bound = side.truncation_bound;
      fill_gap(r);
      r.parameters = {{"k", k}, {"m", m}, {"n", n}, {"c_max", c_max}};
      out.push_back(std::move(r));
    }
  return out;
}

// ---- newform sieve ---------------------------------------------------------------

double sl2_index(std::int64_t M) {
  if (M < 1) throw PreconditionError("sl2_index: M >= 1");
  double v = static_cast<double>(M);
  for (const auto& [p, e] : factorize(M)) v *= 1.0 + 1.0 / static_cast<double>(p);
  return v;
}

namespace {

// lambda_f(p^j) for j = 0..J from the Hecke recursion.
std::vector<double> prime_power_lambdas(const Newform& f, std::int64_t p, int J) {
  std::vector<double> l(static_cast<std::size_t>(J) + 1, 0.0);
  l[0] = 1.0;
  if (J >= 1) l[1] = hecke_lambda(f, p);
  for (int j = 2; j <= J; ++j) l[j] = l[1] * l[j - 1] - l[j - 2];
  return l;
}

struct SmoothNumber {
  std::int64_t value;
  std::vector<int> exponents;  // per prime of S
};

// S-smooth numbers up to `limit`, in increasing order.
std::vector<SmoothNumber> smooth_numbers(const std::vector<std::int64_t>& primes,
                                         std::int64_t limit) {
  std::vector<SmoothNumber> out{{1, std::vector<int>(primes.size(), 0)}};
  for (std::size_t i = 0; i < primes.size(); ++i) {
    const std::size_t base = out.size();
    for (std::size_t j = 0; j < base; ++j) {
      SmoothNumber s = out[j];
      while (s.value <= limit / primes[i]) {
        s.value *= primes[i];
        s.exponents[i] += 1;
        out.push_back(s);
      }
    }
  }
  std::sort(out.begin(), out.end(),
            [](const SmoothNumber& a, const SmoothNumber& b) { return a.value < b.value; });
  return out;
}

}  // namespace

DeltaStar delta_star(int k, std::int64_t M, std::int64_t m, std::int64_t n,
                     const DeltaStarOptions& opt) {
  check_weight(k);
  if (M < 1 || !is_squarefree(M)) throw PreconditionError("delta_star: M must be square-free");
  if (m < 1 || n < 1) throw PreconditionError("delta_star: m, n >= 1");
  if (gcd(m, M) != 1) throw PreconditionError("delta_star: need gcd(m, M) = 1");
  DeltaStar out;
  if (M == 1) {
    const PeterssonSide side =
        petersson_kloosterman_side(k, m, n, petersson_cmax(k, m, n, opt.petersson_tol));
    out.value = side.value;
    out.truncation_bound = side.truncation_bound;
    out.terms = 1;
    return out;
  }
  KloostermanCache cache;
  const auto& forms = level_one_forms(k, std::max<std::int64_t>(m, n));
  const double trivial_bound = petersson_spectral_side(forms, 1, 1);  // sum omega^{-1}
  for (std::int64_t R : divisors(M)) {
    const std::int64_t S = M / R;
    const double coef =
        mobius(S) / (static_cast<double>(S) * sl2_index(gcd(opt.literal_index ? m : n, S)));
    std::vector<std::int64_t> primes;
    for (const auto& [p, e] : factorize(S)) primes.push_back(p);
    std::vector<std::int64_t> l1s;
    for (std::int64_t l1 : divisors(S))
      if (n % (l1 * l1) == 0) l1s.push_back(l1);

    // Size of a Delta_{k,R}(a, b) term: |lambda(a) lambda(b)| <= tau(a) tau(b)
    // for the level-one spectrum; the same shape is used as the estimate at
    // level R.
    double level_scale = trivial_bound;
    if (R > 1) {
      const PeterssonSide d11 = petersson_kloosterman_side(
          k, 1, 1, petersson_cmax(k, 1, 1, opt.petersson_tol, R), R, &cache);
      level_scale = std::abs(d11.value);
    }
    double l1_weight = 0.0;
    for (std::int64_t l1 : l1s)
      l1_weight += static_cast<double>(l1) * static_cast<double>(divisor_count(n / (l1 * l1)));
    const double per_l = std::abs(coef) * level_scale * static_cast<double>(divisor_count(m)) *
                         l1_weight;
    // sum over all S-smooth l of tau(l^2)/l = prod_p (1 + 1/p)/(1 - 1/p)^2
    double total = 1.0;
    for (std::int64_t p : primes) {
      const double x = 1.0 / static_cast<double>(p);
      total *= (1.0 + x) / ((1.0 - x) * (1.0 - x));
    }

    double partial = 0.0;
    std::int64_t limit = 64;
    std::size_t done = 0;
    bool stopped = false;
    std::vector<SmoothNumber> ls;
    for (;;) {
      ls = smooth_numbers(primes, limit);
      for (; done < ls.size() && !stopped; ++done) {
        const SmoothNumber& l = ls[done];
        double tau_l2 = 1.0;
        for (int e : l.exponents) tau_l2 *= 2.0 * e + 1.0;
        const double lw = 1.0 / static_cast<double>(l.value);
        double term = 0.0;
        for (std::int64_t l1 : l1s) {
          const std::int64_t b = n / (l1 * l1);
          const double mu_l1 = mobius(l1) * static_cast<double>(l1);
          const bool small = l.value <= opt.max_argument &&
                             static_cast<double>(m) * l.value * l.value * b <=
                                 static_cast<double>(opt.max_argument);
          if (small) {
            const std::int64_t a = m * l.value * l.value;
            const PeterssonSide side = petersson_kloosterman_side(
                k, a, b, petersson_cmax(k, a, b, opt.petersson_tol, R), R, &cache);
            term += mu_l1 * side.value;
            out.truncation_bound += std::abs(coef) * lw * std::abs(mu_l1) * side.truncation_bound;
          } else if (R == 1) {
            // multiplicativity: gcd(m, l) = 1
            double s = 0.0;
            for (const auto& f : forms) {
              double lam = hecke_lambda(f, m) * hecke_lambda(f, b);
              for (std::size_t i = 0; i < primes.size(); ++i)
                if (l.exponents[i] > 0)
                  lam *= prime_power_lambdas(f, primes[i], 2 * l.exponents[i]).back();
              s += lam / f.petersson_weight;
            }
            term += mu_l1 * s;
          } else {
            stopped = true;  // argument beyond the Kloosterman side's reach
            break;
          }
        }
        if (stopped) break;
        out.value += coef * lw * term;
        partial += tau_l2 * lw;
        ++out.terms;
        if (per_l * (total - partial) < opt.tail_tol) break;
      }
      if (stopped || per_l * (total - partial) < opt.tail_tol) break;
      if (limit > (std::int64_t{1} << 60) / 4) break;
      limit *= 4;
    }
    out.truncation_bound += per_l * std::max(0.0, total - partial);
  }
  return out;
}

// ---- GL(3) Voronoi ----------------------------------------------------------------

IdentityReport voronoi_two_sided(const SymSquareForm& F, const OmegaTable& omega,
                                 const TestFunction& w, std::int64_t m, std::int64_t a,
                                 std::int64_t c, double X, VoronoiBranch branch,
                                 const VoronoiOptions& opt) {
  if (c < 1 || m < 1 || !(X > 0)) throw PreconditionError("voronoi: need c, m >= 1, X > 0");
  if (gcd(a, c) != 1) throw PreconditionError("voronoi: need gcd(a, c) = 1");
  const std::int64_t N = 1;  // level of F
  if (branch == VoronoiBranch::unramified && gcd(c * m, N) != 1)
    throw PreconditionError("voronoi: unramified branch needs gcd(cm, N) = 1");
  if (branch == VoronoiBranch::ramified && c % N != 0)
    throw PreconditionError("voronoi: ramified branch needs N | c");

  IdentityReport r;
  r.parameters = {{"m", m}, {"a", a}, {"c", c}, {"X", X},
                  {"branch", branch == VoronoiBranch::unramified ? 0.0 : 1.0}};
  if (w.is_zero()) return r;

  const std::int64_t n_hi = static_cast<std::int64_t>(std::floor(w.b * X));
  if (n_hi > F.n_max()) throw TableExhausted("voronoi: coefficient table too short", n_hi);
  const std::int64_t abar = c == 1 ? 0 : mod_inverse(a, c).value;
  std::complex<double> lhs = 0.0;
  for (std::int64_t n = std::max<std::int64_t>(1, static_cast<std::int64_t>(w.a * X));
       n <= n_hi; ++n) {
    const double wv = w(static_cast<double>(n) / X);
    if (wv == 0.0) continue;
    lhs += gl3_coeff(F, m, n) * wv * e_frac(n * abar, c);
  }
  r.lhs = lhs;

  const double c3 = static_cast<double>(c) * c * c;
  const double x_cut = omega.decay_point(opt.omega_tol);
  std::complex<double> rhs = 0.0;
  double quad = 0.0, tail = 0.0, n2_used = 0.0;
  for (std::int64_t n1 : divisors(c * m)) {
    const std::int64_t q = c * m / n1;
    const std::int64_t first = branch == VoronoiBranch::unramified
                                   ? a * m * (q == 1 ? 0 : mod_inverse(N, q).value)
                                   : a * m;
    const std::vector<double> row = kloosterman_row(first, q);
    const double y = static_cast<double>(n1) * n1 * X /
                     (c3 * static_cast<double>(m) *
                      (branch == VoronoiBranch::unramified ? static_cast<double>(N) : 1.0));
    const double main =
        opt.safety * c3 * m / (static_cast<double>(n1) * n1 * std::pow(X, 1.0 - opt.epsilon));
    std::int64_t n2_max = static_cast<std::int64_t>(std::ceil(std::max(main, x_cut / y)));
    n2_max = std::min(n2_max, F.n_max());
    n2_used = std::max(n2_used, static_cast<double>(n2_max));
    std::complex<double> part = 0.0;
    double s_max = 0.0;
    for (double v : row) s_max = std::max(s_max, std::abs(v));
    for (std::int64_t n2 = 1; n2 <= n2_max; ++n2) {
      const double A = gl3_coeff(F, n1, n2);
      if (A == 0.0) continue;
      const double sp = row[static_cast<std::size_t>(n2 % q)];
      const double sm = row[static_cast<std::size_t>((q - n2 % q) % q)];
      const double x = static_cast<double>(n2) * y;
      const OmegaPart p0 = omega.part(0, x), p1 = omega.part(1, x);
      // S+ Omega+ + S- Omega- = [(S+ + S-) Omega_0 - i (S+ - S-) Omega_1] / 2
      const std::complex<double> t((sp + sm) * p0.value, -(sp - sm) * p1.value);
      const double coef = A / (static_cast<double>(n1) * static_cast<double>(n2));
      part += coef * 0.5 * t;
      quad += std::abs(coef) * 0.5 * (std::abs(sp) + std::abs(sm)) * (p0.error + p1.error);
    }
    rhs += part;
    // Tail beyond n2_max, estimated with |A(n1, n2)| <= tau3(n1) tau3(n2) and the
    // mean of tau3 ((log t)^2/2 + 2 log t + 1): sum over ratio-1.05 blocks.
    const double t0 = static_cast<double>(n2_max) + 1.0;
    double t = t0, est = 0.0;
    const double top = std::exp(29.0) / y;
    while (t < top) {
      const double env = omega.envelope(t * y);
      const double lt = std::log(t);
      const double block = (0.5 * lt * lt + 2.0 * lt + 1.0) * std::log(1.05) * env;
      est += block;
      if (env == 0.0 || block < 1e-12 * est) break;
      t *= 1.05;
    }
    tail += static_cast<double>(tau3(n1)) / static_cast<double>(n1) * 2.0 * s_max * est;
  }
  const double pref = static_cast<double>(c) *
                      (branch == VoronoiBranch::unramified ? std::sqrt(static_cast<double>(N)) : 1.0);
  r.rhs = pref * rhs;
  r.quadrature_error = pref * quad;
  r.truncation_bound = pref * tail;
  r.parameters["n2_max"] = n2_used;
  fill_gap(r);
  return r;
}

IdentityReport voronoi_two_sided(const SymSquareForm& F, const TestFunction& w,
                                 std::int64_t m, std::int64_t a, std::int64_t c, double X,
                                 VoronoiBranch branch, const VoronoiOptions& opt) {
  if (w.is_zero()) {
    IdentityReport r;
    r.parameters = {{"m", m}, {"a", a}, {"c", c}, {"X", X}};
    return r;
  }
  const OmegaTable table(w, F.alpha);
  return voronoi_two_sided(F, table, w, m, a, c, X, branch, opt);
}

// ---- nonlinear and bilinear sums ---------------------------------------------------

double QuadraticAlpha::value() const {
  if (den <= 0 || num < 0) throw PreconditionError("alpha: need num >= 0, den > 0");
  const double v = std::sqrt(static_cast<double>(num) / static_cast<double>(den));
  return negative ? -v : v;
}

NonlinearSum nonlinear_exp_sum(const SymSquareForm& F, const QuadraticAlpha& alpha, double X,
                               const TestFunction& W, double Z, double P) {
  if (!(X >= 2)) throw PreconditionError("nonlinear_exp_sum: X >= 2");
  const double al = alpha.value();
  NonlinearSum out;
  out.stated_bound = Z * P * (1.0 + std::abs(al) * std::log(X));
  if (W.is_zero()) return out;
  const std::int64_t hi = static_cast<std::int64_t>(std::floor(W.b * X));
  if (hi > F.n_max()) throw TableExhausted("nonlinear_exp_sum: table too short", hi);
  for (std::int64_t m = std::max<std::int64_t>(1, static_cast<std::int64_t>(W.a * X)); m <= hi;
       ++m) {
    const double wv = W(static_cast<double>(m) / X);
    if (wv == 0.0) continue;
    const double sm = std::sqrt(static_cast<double>(m));
    const double ph = 2.0 * kPi * al * sm;
    out.value += F.first_row[m] / sm * wv * std::complex<double>(std::cos(ph), std::sin(ph));
  }
  return out;
}

namespace {

// a_m = A(m, 1) m^{-1/2} W2(m / Y) on the support.
std::vector<std::pair<std::int64_t, double>> bilinear_m_weights(const SymSquareForm& F,
                                                                double Y,
                                                                const TestFunction& W2) {
  std::vector<std::pair<std::int64_t, double>> out;
  if (W2.is_zero()) return out;
  const std::int64_t hi = static_cast<std::int64_t>(std::floor(W2.b * Y));
  if (hi > F.n_max()) throw TableExhausted("bilinear_form: table too short", hi);
  for (std::int64_t m = std::max<std::int64_t>(1, static_cast<std::int64_t>(W2.a * Y)); m <= hi;
       ++m) {
    const double wv = W2(static_cast<double>(m) / Y);
    if (wv != 0.0) out.emplace_back(m, F.first_row[m] / std::sqrt(static_cast<double>(m)) * wv);
  }
  return out;
}

// sum of W1(n / X) over n = r mod q, indexed by r = n h mod q.
std::vector<double> bilinear_n_weights(std::int64_t h, std::int64_t q, double X,
                                       const TestFunction& W1) {
  std::vector<double> out(static_cast<std::size_t>(q), 0.0);
  if (W1.is_zero()) return out;
  const std::int64_t hi = static_cast<std::int64_t>(std::floor(W1.b * X));
  for (std::int64_t n = std::max<std::int64_t>(1, static_cast<std::int64_t>(W1.a * X)); n <= hi;
       ++n) {
    const double wv = W1(static_cast<double>(n) / X);
    if (wv != 0.0) out[static_cast<std::size_t>(floor_mod(mul_mod(floor_mod(n, q), floor_mod(h, q), q), q))] += wv;
  }
  return out;
}

}  // namespace

BilinearBoundReport bilinear_form(const SymSquareForm& F, std::int64_t h, std::int64_t q,
                                  double X, double Y, const TestFunction& W1,
                                  const TestFunction& W2, BilinearMethod method,
                                  const BilinearEnvelope& env) {
  if (q < 1 || !(X >= 1) || !(Y >= 1)) throw PreconditionError("bilinear_form: q, X, Y >= 1");
  if (method == BilinearMethod::poisson && gcd(h, q) != 1)
    throw PreconditionError("bilinear_form: the Poisson bound needs gcd(h, q) = 1");
  BilinearBoundReport out;
  const double sxyq = std::sqrt(X * Y * static_cast<double>(q));
  const double q34 = std::pow(static_cast<double>(q), 0.75);
  if (method == BilinearMethod::kloosterman_shift) {
    const double g = static_cast<double>(gcd(h, q) == 0 ? q : gcd(h, q));
    out.stated_bound = env.Z1 * env.Z * sxyq + env.Z1 * env.Z * X * q34 * std::pow(g, 0.25) +
                      env.Z1 * env.Z * static_cast<double>(q);
  } else {
    out.stated_bound = env.Z * sxyq +
                      (env.Z2 * static_cast<double>(q) > Y ? std::sqrt(env.Z2) * env.Z * X * q34 : 0.0) +
                      env.Z * X * std::sqrt(Y);
  }
  out.regime = {{"X", X},   {"Y", Y},     {"q", static_cast<double>(q)},
                {"h", static_cast<double>(h)}, {"Z", env.Z}, {"Z1", env.Z1},
                {"Z2", env.Z2}, {"poisson", method == BilinearMethod::poisson ? 1.0 : 0.0}};
  const auto am = bilinear_m_weights(F, Y, W2);
  const auto wn = bilinear_n_weights(h, q, X, W1);
  if (am.empty()) return out;

  // S(r, m; q) = sum_{d | (r, m, q)} d S(1, rm/d^2; q/d), rows for q/d kept by d.
  std::map<std::int64_t, std::vector<double>> rows;
  for (std::int64_t d : divisors(q)) rows[d] = kloosterman_row(1, q / d);
  double total = 0.0;
  for (std::int64_t r = 0; r < q; ++r) {
    const double wr = wn[static_cast<std::size_t>(r)];
    if (wr == 0.0) continue;
    double s = 0.0;
    const std::int64_t g_rq = gcd(r, q);
    for (const auto& [m, a] : am) {
      const std::int64_t g = gcd(g_rq == 0 ? q : g_rq, m);
      double kl = 0.0;
      if (g == 1) {
        kl = rows[1][static_cast<std::size_t>(mul_mod(r, m % q, q))];
      } else {
        for (std::int64_t d : divisors(g)) {
          const std::int64_t qd = q / d;
          kl += static_cast<double>(d) *
                rows[d][static_cast<std::size_t>(mul_mod((r / d) % qd, (m / d) % qd, qd))];
        }
      }
      s += a * kl;
    }
    total += wr * s;
  }
  out.lhs_value = total;
  out.ratio = out.stated_bound > 0 ? std::abs(total) / out.stated_bound : 0.0;
  return out;
}

double bilinear_ramanujan(const SymSquareForm& F, std::int64_t q, double X, double Y,
                          const TestFunction& W1, const TestFunction& W2) {
  if (q < 1) throw PreconditionError("bilinear_ramanujan: q >= 1");
  const auto am = bilinear_m_weights(F, Y, W2);
  double wsum = 0.0;
  if (!W1.is_zero()) {
    const std::int64_t hi = static_cast<std::int64_t>(std::floor(W1.b * X));
    for (std::int64_t n = std::max<std::int64_t>(1, static_cast<std::int64_t>(W1.a * X));
         n <= hi; ++n)
      wsum += W1(static_cast<double>(n) / X);
  }
  double s = 0.0;
  for (const auto& [m, a] : am) s += a * static_cast<double>(ramanujan_sum(m, q));
  return wsum * s;
}

}  // namespace momentlab

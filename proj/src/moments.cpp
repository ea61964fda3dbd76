#include "momentlab/moments.hpp"

#include "momentlab/arith.hpp"
#include "momentlab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

namespace momentlab {

namespace {

constexpr double kPi = std::numbers::pi;

double sgn(double v) { return v < 0 ? -1.0 : 1.0; }

// e(t) with t reduced mod 1 in extended precision first.
std::complex<double> phase(long double t) {
  const long double r = t - std::floor(t);
  return std::polar(1.0, 2.0 * kPi * static_cast<double>(r));
}

}  // namespace

double MomentReport::resum() const {
  double s = 0.0;
  for (const auto& e : per_weight) s += e.contribution;
  return s;
}

// ---- central values per weight ------------------------------------------------------

CentralValueCache::CentralValueCache(const SymSquareForm& F, CentralValueOptions opt)
    : F_(&F), opt_(std::move(opt)) {}

CentralValueCache::Slot& CentralValueCache::slot(int k) {
  auto it = slots_.find(k);
  if (it != slots_.end()) return it->second;
  Slot s;
  std::int64_t len = 2000;
  if (cusp_dimension(k) > 0) {
    const double k3 = static_cast<double>(k) * k * k;
    const double scale = opt_.literal_argument ? k3 : 1.0;
    const double cut = vstar_kernel(k, *F_, opt_.kernel)->cutoff(opt_.cut_tol) * scale *
                       opt_.cut_scale;
    len = std::max<std::int64_t>(len, static_cast<std::int64_t>(cut) + 1);
    s.forms = eigenforms(k, len);
  }
  const std::size_t n = s.forms.size();
  s.rs.assign(n, 0.0);
  s.gl2.assign(n, 0.0);
  s.sign.assign(n, 0.0);
  s.have_rs.assign(n, false);
  s.have_gl2.assign(n, false);
  return slots_.emplace(k, std::move(s)).first->second;
}

const std::vector<Newform>& CentralValueCache::forms(int k) { return slot(k).forms; }

double CentralValueCache::rankin_selberg(int k, int index) {
  Slot& s = slot(k);
  const auto i = static_cast<std::size_t>(index);
  if (!s.have_rs.at(i)) {
    const CentralValue cv = central_value_rs(*F_, s.forms[i], opt_);
    s.rs[i] = cv.value;
    s.sign[i] = cv.root_number;
    s.have_rs[i] = true;
  }
  return s.rs[i];
}

double CentralValueCache::gl2(int k, int index) {
  Slot& s = slot(k);
  const auto i = static_cast<std::size_t>(index);
  if (!s.have_gl2.at(i)) {
    s.gl2[i] = central_value_gl2(s.forms[i], opt_).value;
    s.have_gl2[i] = true;
  }
  return s.gl2[i];
}

double CentralValueCache::sign(int k, int index) {
  rankin_selberg(k, index);
  return slot(k).sign[static_cast<std::size_t>(index)];
}

// ---- the moment -------------------------------------------------------------------------

MomentReport weight_moment(const SymSquareForm& F, double K, const TestFunction& W,
                           std::int64_t ell, bool include_gl2, const MomentOptions& opt,
                           CentralValueCache* cache) {
  if (!(K > 0)) throw PreconditionError("weight_moment: K must be positive");
  if (ell < 1) throw PreconditionError("weight_moment: l must be positive");
  MomentReport r;
  r.K = K;
  r.ell = ell;
  r.include_gl2 = include_gl2;
  if (W.is_zero()) return r;

  CentralValueCache local(F, opt.central);
  CentralValueCache& cv = cache ? *cache : local;

  const double l1 = l_one(F).value;
  if (ell > F.n_max()) throw TableExhausted("weight_moment: A(l, 1)", ell);
  const double diag_coeff = l1 * F.first_row[ell] / std::sqrt(static_cast<double>(ell));
  const double w_hat0 = integrate_support(W, [&](double x) { return W(x); });
  r.main_term = diag_coeff * K / 4.0 * w_hat0;

  const int k_lo = std::max(2, static_cast<int>(std::ceil(W.a * K + 1.0)));
  const int k_hi = static_cast<int>(std::floor(W.b * K + 1.0));
  double diag_weights = 0.0;
  for (int k = k_lo + (k_lo % 2); k <= k_hi; k += 2) {
    const double wk = W((k - 1) / K);
    if (wk == 0.0) continue;
    diag_weights += (1.0 + rankin_selberg_sign(k, F.base_weight)) * wk;
    const auto& forms = cv.forms(k);
    for (std::size_t i = 0; i < forms.size(); ++i) {
      const Newform& f = forms[i];
      WeightEntry e;
      e.k = k;
      e.f_index = f.index;
      e.lambda_l = hecke_lambda(f, ell);
      e.L_rs = cv.rankin_selberg(k, static_cast<int>(i));
      e.root_number = cv.sign(k, static_cast<int>(i));
      e.L_gl2 = include_gl2 ? cv.gl2(k, static_cast<int>(i)) : 1.0;
      e.weight = wk / f.petersson_weight;
      e.contribution = e.weight * e.lambda_l * e.L_gl2 * e.L_rs;
      r.per_weight.push_back(e);
    }
  }
  r.diagonal_sum = diag_coeff * diag_weights;
  r.moment = r.resum();
  r.gap = r.moment - r.main_term;

  if (opt.diagnostics) {
    r.Y = std::pow(K, opt.Y_exponent);
    const OffDiagonal od = offdiag_diagnostics(F, K, ell, r.Y, W);
    r.diag_T = std::abs(od.T);
    r.diag_That = od.T_hat;
    r.err_flat_bound = od.err_flat;
    r.err_natural_bound = od.err_natural;
  }
  return r;
}

// ---- off-diagonal diagnostics ------------------------------------------------------------

OffDiagonal offdiag_diagnostics(const SymSquareForm& F, double K, std::int64_t ell, double Y,
                                const TestFunction& W, const OffDiagonalOptions& opt) {
  if (!(K > 0) || !(Y >= 1) || ell < 1)
    throw PreconditionError("offdiag_diagnostics: K > 0, Y >= 1, l >= 1");
  OffDiagonal r;
  const double l = static_cast<double>(ell);
  r.err_flat = std::pow(Y, 0.75) * std::pow(l, 0.25) / std::pow(K, 2.5);
  r.err_natural = Y * std::sqrt(l) / std::pow(K, 4.0);
  r.T_bound = std::sqrt(l);

  r.k_ref = std::max(12, 2 * static_cast<int>(std::lround(K / 2.0)));
  auto kernel = vstar_kernel(r.k_ref, F);
  const double k3 = static_cast<double>(r.k_ref) * r.k_ref * r.k_ref;
  const double yscale = k3 / Y;
  r.n_cut = static_cast<std::int64_t>(kernel->cutoff(opt.cut_tol) / yscale * opt.cut_scale);
  r.n_cut = std::max<std::int64_t>(r.n_cut, 1);
  if (r.n_cut > F.n_max()) throw TableExhausted("offdiag_diagnostics: A(n, 1)", r.n_cut);

  std::vector<double> a(static_cast<std::size_t>(r.n_cut) + 1, 0.0);
  for (std::int64_t n = 1; n <= r.n_cut; ++n)
    a[n] = F.first_row[n] / std::sqrt(static_cast<double>(n)) * (*kernel)(n * yscale);

  const double root = std::sqrt(Y * l);
  r.T_c_max = static_cast<std::int64_t>(std::floor(root / (K * K)));
  r.T_vacuous = r.T_c_max < 1;
  for (std::int64_t c = 1; c <= r.T_c_max; ++c) {
    const auto row = kloosterman_row(ell, c);
    std::complex<double> s = 0.0;
    for (std::int64_t n = 1; n <= r.n_cut; ++n) {
      if (a[n] == 0.0) continue;
      const long double t = 2.0L * std::sqrt(static_cast<long double>(n) * l) / c;
      s += a[n] * row[n % c] * phase(t);
    }
    r.T += s / static_cast<double>(c);
  }
  r.T_ratio = r.T_bound > 0 ? std::abs(r.T) / r.T_bound : 0.0;

  // c with W(4 pi sqrt(n l)/(cK)) != 0 for some n <= n_cut
  r.That_c_min = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(root / K)));
  r.That_c_max = static_cast<std::int64_t>(
      std::floor(4.0 * kPi * std::sqrt(r.n_cut * l) / (W.a * K)));
  for (std::int64_t c = r.That_c_min; c <= r.That_c_max; ++c) {
    // W vanishes unless n lies in the window below
    const double lo = std::pow(W.a * c * K / (4.0 * kPi), 2) / l;
    const double hi = std::pow(W.b * c * K / (4.0 * kPi), 2) / l;
    const std::int64_t n0 = std::max<std::int64_t>(1, static_cast<std::int64_t>(lo));
    const std::int64_t n1 = std::min<std::int64_t>(r.n_cut, static_cast<std::int64_t>(hi) + 1);
    if (n0 > n1) continue;
    const auto row = kloosterman_row(ell, c);
    double s = 0.0;
    for (std::int64_t n = n0; n <= n1; ++n) {
      if (a[n] == 0.0) continue;
      const double wv = W(4.0 * kPi * std::sqrt(n * l) / (c * K));
      if (wv == 0.0) continue;
      s += a[n] * row[n % c] * wv;
    }
    r.T_hat += s / static_cast<double>(c);
  }
  return r;
}

// ---- amplifier -----------------------------------------------------------------------

Amplifier::Amplifier(const Newform& f0, std::int64_t L, std::int64_t coprime_to) : L_(L) {
  if (L < 2) throw PreconditionError("Amplifier: L >= 2");
  for (std::int64_t p : primes_in(L, 2 * L)) {
    if (gcd(p, coprime_to) != 1) continue;
    primes_.push_back(p);
    x1_.push_back(sgn(hecke_lambda(f0, p)));
    x2_.push_back(sgn(hecke_lambda(f0, p * p)));
  }
}

double Amplifier::x(std::int64_t p, int j) const {
  const auto it = std::lower_bound(primes_.begin(), primes_.end(), p);
  if (it == primes_.end() || *it != p || (j != 1 && j != 2))
    throw PreconditionError("Amplifier::x: p^j with p in P_L, j in {1, 2}");
  const auto i = static_cast<std::size_t>(it - primes_.begin());
  return j == 1 ? x1_[i] : x2_[i];
}

double Amplifier::evaluate(const Newform& f) const {
  double s1 = 0.0, s2 = 0.0;
  for (std::size_t i = 0; i < primes_.size(); ++i) {
    const std::int64_t p = primes_[i];
    s1 += hecke_lambda(f, p) * x1_[i];
    s2 += hecke_lambda(f, p * p) * x2_[i];
  }
  return s1 * s1 + s2 * s2;
}

AmplifierExpansion Amplifier::expand(const Newform& f) const {
  AmplifierExpansion e;
  const std::size_t n = primes_.size();
  for (std::size_t i = 0; i < n; ++i) {
    const std::int64_t p = primes_[i];
    const double a = x1_[i] * x1_[i], b = x2_[i] * x2_[i];
    e.constant += a + b;
    e.coefficients[p * p] += a + b;
    e.coefficients[p * p * p * p] += b;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const std::int64_t q = primes_[j];
      e.coefficients[p * q] += x1_[i] * x1_[j];
      e.coefficients[p * p * q * q] += x2_[i] * x2_[j];
    }
  }
  e.value = e.constant;
  for (const auto& [m, c] : e.coefficients) e.value += c * hecke_lambda(f, m);
  return e;
}

double Amplifier::self_lower_bound() const {
  const double P = static_cast<double>(primes_.size());
  return P * P / 2.0;
}

}  // namespace momentlab

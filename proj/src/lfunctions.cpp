#include "momentlab/lfunctions.hpp"

#include "momentlab/arith.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <tuple>

namespace momentlab {

namespace {

using mp = boost::multiprecision::cpp_bin_float_50;
using cmp = std::complex<mp>;
constexpr double kPi = std::numbers::pi;

std::complex<double> i_pow(int k) {
  switch (((k % 4) + 4) % 4) {
    case 0: return {1, 0};
    case 1: return {0, 1};
    case 2: return {-1, 0};
    default: return {0, -1};
  }
}

template <typename Real>
std::complex<Real> log_damping(std::complex<Real> s, int A) {
  // cos^{-24A}: the exponent is an integer, so the branch of log cos is irrelevant.
  const Real arg_scale = boost::math::constants::pi<Real>() / Real(4 * A);
  return Real(-24 * A) * std::log(std::cos(s * arg_scale));
}

}  // namespace

// ---- root numbers and gamma factors -----------------------------------------------

RootNumber root_number(const SymSquareForm& F, const Newform& f, std::int64_t M,
                       std::int64_t N) {
  (void)F;
  if (M < 1 || N < 1) throw PreconditionError("root_number: M, N must be positive");
  if (!is_squarefree(M)) throw PreconditionError("root_number: M must be squarefree");
  if (gcd(M, N) != 1) throw PreconditionError("root_number: gcd(M, N) must be 1");
  RootNumber r;
  r.components.archimedean = i_pow(f.weight);
  for (const auto& [p, e] : factorize(M)) {
    (void)e;
    if (p > f.n_max()) throw TableExhausted("root_number: lambda_f(p)", p);
    const double local = -f.lambda[p] * std::sqrt(static_cast<double>(p));
    if (std::abs(std::abs(local) - 1.0) > 1e-9)
      throw PreconditionError("root_number: f is not a newform of level M (|lambda_f(p) sqrt p| != 1)");
    r.components.steinberg *= local;
  }
  r.components.level_part =
      N == 1 ? "empty" : "prod_{p|N} eps(Pi_F,p)^2 = 1 (F unramified at every p)";
  r.value = r.components.archimedean * r.components.steinberg;
  return r;
}

double rankin_selberg_sign(int k, int kappa) {
  const double ik = i_pow(k).real();
  return k >= 2 * kappa - 1 ? ik : -ik;
}

GammaFactor rankin_selberg_gamma(int k, int kappa) {
  const double h = (k - 1) / 2.0;
  GammaFactor g;
  g.add_complex(h);
  g.add_complex(h + kappa - 1);
  g.add_complex(std::abs(h - kappa + 1));
  return g;
}

GammaFactor gl2_gamma(int k) {
  GammaFactor g;
  g.add_complex((k - 1) / 2.0);
  return g;
}

// ---- Mellin kernels ---------------------------------------------------------------

struct MellinKernel::Line {
  double sigma = 0.0;
  bool residue = false;
  bool high_precision = false;
  double step = 0.0;
  std::vector<std::complex<double>> w;  // H(s_j) / s_j, t_j = j step
  std::vector<cmp> wmp;
  double abs_sum = 0.0;  // (step / 2 pi) sum |w_j| over both half-lines
};

MellinKernel::MellinKernel(GammaFactor gamma, double residue, KernelOptions opt,
                           Extra extra)
    : gamma_(std::move(gamma)), residue_(residue), opt_(opt) {
  if (opt_.A < 1) throw PreconditionError("MellinKernel: A must be >= 1");
  const double ref = gamma_.log_value<double>(std::complex<double>(0.5, 0)).real();
  auto log_core = [&](std::complex<double> s) {
    return log_damping<double>(s, opt_.A) + gamma_.log_value<double>(0.5 + s) - ref -
           std::log(s);
  };
  auto check_line = [&](double sigma) {
    for (double mu : gamma_.shifts)
      if (0.5 + sigma + mu <= 1e-6)
        throw PoleProximity("MellinKernel: line left of a gamma pole");
    if (std::abs(sigma) < 1e-6) throw PoleProximity("MellinKernel: line through s = 0");
  };

  auto build = [&](double sigma, bool hp) {
    // The damping has poles at s = 2A(2j + 1); stay strictly between them.
    if (std::abs(sigma) >= 2.0 * opt_.A)
      throw PoleProximity("MellinKernel: |Re s| must stay below 2A");
    check_line(sigma);
    auto line = std::make_shared<Line>();
    line->sigma = sigma;
    line->residue = sigma < 0;
    line->high_precision = hp;
    line->step = hp ? std::min(opt_.step, 0.01) : opt_.step;
    const double drop = hp ? 110.0 : 50.0;
    const double height = vertical_height(
        [&](double t) { return log_core(std::complex<double>(sigma, t)).real(); }, drop);
    const std::size_t J = static_cast<std::size_t>(std::ceil(height / line->step));
    const double wgt = line->step / (2.0 * kPi);
    const mp ref_mp = gamma_.log_value<mp>(cmp(mp(0.5), mp(0))).real();
    for (std::size_t j = 0; j <= J; ++j) {
      const std::complex<double> s(sigma, j * line->step);
      const std::complex<double> e = extra ? extra(s) : std::complex<double>(1.0);
      if (hp) {
        const cmp sm(mp(sigma), mp(j * line->step));
        const cmp lg = log_damping<mp>(sm, opt_.A) + gamma_.log_value<mp>(mp(0.5) + sm) -
                       ref_mp - std::log(sm);
        const cmp v = std::exp(lg) * cmp(mp(e.real()), mp(e.imag()));
        line->wmp.push_back(v);
        line->abs_sum += (j == 0 ? 1.0 : 2.0) * wgt * static_cast<double>(std::abs(v));
      } else {
        const std::complex<double> v = std::exp(log_core(s)) * e;
        line->w.push_back(v);
        line->abs_sum += (j == 0 ? 1.0 : 2.0) * wgt * std::abs(v);
      }
    }
    lines_.push_back(line);
  };

  if (opt_.sigma) {
    build(*opt_.sigma, true);
    return;
  }
  build(-0.5, false);
  build(1.0, false);

  // Cached samples on a log-y grid: from y = 1e-9 up to where V is negligible.
  const double g = opt_.grid_step;
  u0_ = std::log(1e-9);
  double u_hi = 0.0;
  const double floor_ = 1e-24 * std::max(std::abs(residue_), 1e-300);
  while (u_hi < 120.0) {
    if (std::abs(direct(std::exp(u_hi)).value) < floor_) break;
    u_hi += 0.5;
  }
  const std::size_t n = static_cast<std::size_t>(std::ceil((u_hi - u0_) / g)) + 1;
  grid_.resize(n);
  for (std::size_t i = 0; i < n; ++i) grid_[i] = direct(std::exp(u0_ + i * g)).value;
}

std::size_t MellinKernel::nodes() const {
  std::size_t n = 0;
  for (const auto& l : lines_) n += l->high_precision ? l->wmp.size() : l->w.size();
  return n;
}

KernelValue MellinKernel::eval_line(const Line& line, double u) const {
  const double wgt = line.step / (2.0 * kPi);
  if (line.high_precision) {
    const mp scale = exp(mp(-line.sigma) * mp(u));
    const cmp rot(cos(mp(line.step) * mp(u)), -sin(mp(line.step) * mp(u)));
    cmp ph(mp(1), mp(0));
    mp fine = line.wmp[0].real(), coarse = line.wmp[0].real();
    for (std::size_t j = 1; j < line.wmp.size(); ++j) {
      ph *= rot;
      const mp term = 2 * (line.wmp[j] * ph).real();
      fine += term;
      if (j % 2 == 0) coarse += term;
    }
    const double sc = static_cast<double>(scale);
    KernelValue r;
    r.value = static_cast<double>(mp(wgt) * fine * scale) + (line.residue ? residue_ : 0.0);
    r.error = static_cast<double>(abs(mp(wgt) * (fine - 2 * coarse) * scale)) +
              1e-16 * std::abs(r.value) + 1e-45 * line.abs_sum * sc;
    return r;
  }
  const double scale = std::exp(-line.sigma * u);
  const std::complex<double> rot = std::exp(std::complex<double>(0.0, -line.step * u));
  std::complex<double> ph = 1.0;
  double fine = line.w[0].real(), coarse = line.w[0].real();
  for (std::size_t j = 1; j < line.w.size(); ++j) {
    ph = (j % 64 == 0) ? std::exp(std::complex<double>(0.0, -line.step * u * j)) : ph * rot;
    const double term = 2.0 * (line.w[j] * ph).real();
    fine += term;
    if (j % 2 == 0) coarse += term;
  }
  KernelValue r;
  r.value = wgt * fine * scale + (line.residue ? residue_ : 0.0);
  r.error = std::abs(wgt * (fine - 2.0 * coarse) * scale) +
            4e-16 * (line.abs_sum * scale + (line.residue ? std::abs(residue_) : 0.0));
  return r;
}

KernelValue MellinKernel::direct(double y) const {
  if (!(y > 0)) throw PreconditionError("MellinKernel: y must be positive");
  const double u = std::log(y);
  const Line* best = nullptr;
  double best_amp = 0.0;
  for (const auto& l : lines_) {
    const double amp =
        l->abs_sum * std::exp(-l->sigma * u) + (l->residue ? std::abs(residue_) : 0.0);
    if (!best || amp < best_amp) {
      best = l.get();
      best_amp = amp;
    }
  }
  return eval_line(*best, u);
}

double MellinKernel::operator()(double y) const {
  if (grid_.empty()) return direct(y).value;
  const double pos = (std::log(y) - u0_) / opt_.grid_step;
  const long base = static_cast<long>(std::floor(pos)) - 3;
  if (base < 0 || base + 7 >= static_cast<long>(grid_.size())) return direct(y).value;
  double v = 0.0;
  for (int p = 0; p < 8; ++p) {
    double l = 1.0;
    for (int q = 0; q < 8; ++q)
      if (q != p) l *= (pos - (base + q)) / static_cast<double>(p - q);
    v += l * grid_[base + p];
  }
  return v;
}

double MellinKernel::cutoff(double tol) const {
  const double level = tol * std::max(std::abs(residue_), 1e-300);
  if (!grid_.empty()) {
    for (std::size_t i = grid_.size(); i-- > 0;)
      if (std::abs(grid_[i]) > level) return std::exp(u0_ + (i + 1) * opt_.grid_step);
    return std::exp(u0_);
  }
  double last = 0.0;
  for (double u = 0.0; u <= 120.0; u += 0.1)
    if (std::abs(direct(std::exp(u)).value) > level) last = u;
  return std::exp(last + 0.1);
}

// ---- V* --------------------------------------------------------------------------

namespace {

using KernelKey = std::tuple<int, int, int, std::int64_t, double, double, double, double, double>;

KernelKey key_for(int k, const SymSquareForm& F, const KernelOptions& opt) {
  const double a2 = F.n_max() >= 2 ? F.first_row[2] : 0.0;
  const double a3 = F.n_max() >= 3 ? F.first_row[3] : 0.0;
  return {k, opt.A, F.base_weight, F.n_max(), a2, a3, opt.step, opt.grid_step,
          opt.sigma ? *opt.sigma : 1e300};
}

// L(1 + 2s, F) is the same for every weight; keep the values at the kernel
// nodes (s = sigma + i j step) per F.
struct SymsqLineCache {
  SelfDualL lf;
  double l_one = 0.0;
  std::mutex mu;
  std::map<std::pair<long, long>, std::complex<double>> values;

  std::complex<double> at(std::complex<double> s) {
    const long a = std::lround(s.real() * 1e6), b = std::lround(s.imag() * 1e6);
    {
      std::lock_guard<std::mutex> lock(mu);
      auto it = values.find({a, b});
      if (it != values.end()) return it->second;
    }
    const std::complex<double> v = afe_value(lf, 1.0 + 2.0 * s);
    std::lock_guard<std::mutex> lock(mu);
    values.emplace(std::make_pair(a, b), v);
    return v;
  }
};

std::shared_ptr<SymsqLineCache> symsq_line_cache(const SymSquareForm& F) {
  static std::mutex mu;
  static std::map<KernelKey, std::shared_ptr<SymsqLineCache>> cache;
  const KernelKey key = key_for(0, F, KernelOptions{});
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[key];
  if (!slot) {
    slot = std::make_shared<SymsqLineCache>();
    slot->lf = symsq_lfunction(F);
    slot->l_one = afe_value(slot->lf, 1.0).real();
  }
  return slot;
}

}  // namespace

std::shared_ptr<const MellinKernel> vstar_kernel(int k, const SymSquareForm& F,
                                                 KernelOptions opt) {
  static std::mutex mu;
  static std::map<KernelKey, std::shared_ptr<const MellinKernel>> cache;
  const KernelKey key = key_for(k, F, opt);
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  auto line_cache = symsq_line_cache(F);
  const double l1 = line_cache->l_one;
  auto extra = [line_cache](std::complex<double> s) { return line_cache->at(s); };
  auto kernel = std::make_shared<const MellinKernel>(
      rankin_selberg_gamma(k, F.base_weight), l1, opt, extra);
  std::lock_guard<std::mutex> lock(mu);
  cache.emplace(key, kernel);
  return kernel;
}

double v_star(double y, int k, const SymSquareForm& F, int A) {
  KernelOptions opt;
  opt.A = A;
  return (*vstar_kernel(k, F, opt))(y);
}

// ---- central values -----------------------------------------------------------------

CentralValue central_value_rs(const SymSquareForm& F, const Newform& f,
                              const CentralValueOptions& opt) {
  CentralValue r;
  const int k = f.weight;
  r.root_number = opt.printed_sign ? root_number(F, f).value.real()
                                   : rankin_selberg_sign(k, F.base_weight);
  if (1.0 + r.root_number == 0.0) return r;
  auto kernel = vstar_kernel(k, F, opt.kernel);
  const double k3 = static_cast<double>(k) * k * k;
  const double arg_scale = opt.literal_argument ? 1.0 / k3 : 1.0;
  const double cut = kernel->cutoff(opt.cut_tol) / arg_scale * opt.cut_scale;
  const std::int64_t len = static_cast<std::int64_t>(std::floor(std::max(cut, 1.0)));
  if (len > f.n_max()) throw TableExhausted("central_value_rs: lambda_f table (weight " + std::to_string(k) + ")", len);
  if (len > F.n_max()) throw TableExhausted("central_value_rs: A(n,1) table", len);
  std::vector<double> v(static_cast<std::size_t>(len) + 1, 0.0);
  for (std::int64_t N = 1; N <= len; ++N) v[N] = (*kernel)(N * arg_scale);
  double sum = 0.0;
  for (std::int64_t m = 1; m * m * m <= len; ++m) {
    const int mu = mobius(m);
    if (mu == 0) continue;
    const std::int64_t m3 = m * m * m;
    for (std::int64_t n = 1; m3 * n <= len; ++n) {
      const double a = F.first_row[n];
      if (a == 0.0) continue;
      sum += mu * a * f.lambda[m * n] / std::sqrt(static_cast<double>(m3 * n)) * v[m3 * n];
      ++r.terms;
    }
  }
  r.length = len;
  r.value = (1.0 + r.root_number) * sum;
  return r;
}

CentralValue central_value_gl2(const Newform& f, const CentralValueOptions& opt) {
  CentralValue r;
  const int k = f.weight;
  r.root_number = i_pow(k).real();
  if (1.0 + r.root_number == 0.0) return r;
  MellinKernel kernel(gl2_gamma(k), 1.0, opt.kernel);
  const double cut = kernel.cutoff(opt.cut_tol) * opt.cut_scale;
  const std::int64_t len = static_cast<std::int64_t>(std::floor(std::max(cut, 1.0)));
  if (len > f.n_max()) throw TableExhausted("central_value_gl2: lambda_f table", len);
  double sum = 0.0;
  for (std::int64_t n = 1; n <= len; ++n) {
    const double y = static_cast<double>(n);
    const double vn = opt.kernel.sigma ? kernel.direct(y).value : kernel(y);
    sum += f.lambda[n] / std::sqrt(y) * vn;
    ++r.terms;
  }
  r.length = len;
  r.value = (1.0 + r.root_number) * sum;
  return r;
}

SelfDualL rankin_selberg_lfunction(const SymSquareForm& F, const Newform& f,
                                   std::int64_t length, double root_number) {
  if (length > f.n_max()) throw TableExhausted("rankin_selberg_lfunction: lambda_f", length);
  if (length > F.n_max()) throw TableExhausted("rankin_selberg_lfunction: A(n,1)", length);
  std::vector<double> d(static_cast<std::size_t>(length) + 1, 0.0);
  for (std::int64_t m = 1; m * m * m <= length; ++m) {
    const int mu = mobius(m);
    if (mu == 0) continue;
    for (std::int64_t n = 1; m * m * m * n <= length; ++n)
      d[m * m * m * n] += mu * F.first_row[n] * f.lambda[m * n];
  }
  SelfDualL l;
  l.gamma = rankin_selberg_gamma(f.weight, F.base_weight);
  l.conductor = 1.0;
  l.root_number = root_number;
  l.coeffs.assign(static_cast<std::size_t>(length), 0.0);
  for (std::int64_t j = 1; j * j <= length; ++j)
    for (std::int64_t N = 1; j * j * N <= length; ++N)
      l.coeffs[j * j * N - 1] += F.first_row[j] * d[N];
  return l;
}

}  // namespace momentlab

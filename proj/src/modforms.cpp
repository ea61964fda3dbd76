#include "momentlab/modforms.hpp"

#include "momentlab/afe.hpp"
#include "momentlab/ntt.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/eigen.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <map>
#include <numbers>

namespace momentlab {

using Real100 = boost::multiprecision::cpp_bin_float_100;
using MatMp = Eigen::Matrix<Real100, Eigen::Dynamic, Eigen::Dynamic>;
using VecMp = Eigen::Matrix<Real100, Eigen::Dynamic, 1>;

// ---- IntMatrix ----------------------------------------------------------------

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::operator*(const IntMatrix& o) const {
  IntMatrix r(rows, o.cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t l = 0; l < cols; ++l) {
      if ((*this)(i, l) == 0) continue;
      for (std::size_t j = 0; j < o.cols; ++j) r(i, j) += (*this)(i, l) * o(l, j);
    }
  return r;
}

IntMatrix IntMatrix::operator+(const IntMatrix& o) const {
  IntMatrix r = *this;
  for (std::size_t i = 0; i < data.size(); ++i) r.data[i] += o.data[i];
  return r;
}

IntMatrix IntMatrix::scaled(const BigInt& s) const {
  IntMatrix r = *this;
  for (auto& x : r.data) x *= s;
  return r;
}

BigInt IntMatrix::trace() const {
  BigInt t = 0;
  for (std::size_t i = 0; i < std::min(rows, cols); ++i) t += (*this)(i, i);
  return t;
}

// ---- exact short series -------------------------------------------------------

namespace {

using BigSeries = std::vector<BigInt>;

BigSeries big_mul(const BigSeries& a, const BigSeries& b, std::size_t len) {
  BigSeries r(len, 0);
  for (std::size_t i = 0; i < std::min(a.size(), len); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size() && i + j < len; ++j)
      r[i + j] += a[i] * b[j];
  }
  return r;
}

BigSeries big_eisenstein(std::size_t len, int power, int factor) {
  BigSeries s(len, 0);
  if (len == 0) return s;
  s[0] = 1;
  for (std::size_t d = 1; d < len; ++d) {
    BigInt dk = boost::multiprecision::pow(BigInt(d), static_cast<unsigned>(power));
    for (std::size_t m = d; m < len; m += d) s[m] += factor * dk;
  }
  return s;
}

struct ExactPieces {
  BigSeries e4, e6, delta;
};

ExactPieces exact_pieces(std::size_t len) {
  ExactPieces p;
  p.e4 = big_eisenstein(len, 3, 240);
  p.e6 = big_eisenstein(len, 5, -504);
  BigSeries e4_3 = big_mul(big_mul(p.e4, p.e4, len), p.e4, len);
  BigSeries e6_2 = big_mul(p.e6, p.e6, len);
  p.delta.resize(len);
  for (std::size_t i = 0; i < len; ++i) p.delta[i] = (e4_3[i] - e6_2[i]) / 1728;
  return p;
}

// g_j = Delta^j E4^a E6^b with 12 j + 4 a + 6 b = k, b in {0, 1}.
struct Monomial {
  int j = 0, a = 0, b = 0;
};

std::vector<Monomial> monomials(int k) {
  std::vector<Monomial> out;
  const int d = cusp_dimension(k);
  for (int j = 1; j <= d; ++j) {
    int w = k - 12 * j;
    Monomial m{j, 0, 0};
    if (w % 4 == 0) {
      m.a = w / 4;
    } else {
      m.b = 1;
      m.a = (w - 6) / 4;
    }
    out.push_back(m);
  }
  return out;
}

BigSeries big_power(const BigSeries& base, int e, std::size_t len) {
  BigSeries r(len, 0);
  r[0] = 1;
  for (int i = 0; i < e; ++i) r = big_mul(r, base, len);
  return r;
}

std::vector<BigSeries> exact_monomial_series(int k, std::size_t len) {
  ExactPieces p = exact_pieces(len);
  std::vector<BigSeries> g;
  for (const Monomial& m : monomials(k)) {
    BigSeries s = big_power(p.delta, m.j, len);
    s = big_mul(s, big_power(p.e4, m.a, len), len);
    if (m.b) s = big_mul(s, p.e6, len);
    g.push_back(std::move(s));
  }
  return g;
}

// f = R g with f_i(j) = delta_ij for j <= d; R is integral and unitriangular.
IntMatrix echelon_transform(const std::vector<BigSeries>& g) {
  const std::size_t d = g.size();
  IntMatrix r = IntMatrix::identity(d);
  // rows of r are coefficient vectors; process from the bottom up.
  std::vector<BigSeries> f(g);
  for (std::size_t i = d; i-- > 0;) {
    for (std::size_t n = i + 1; n < d; ++n) {
      BigInt c = f[i][n + 1];
      if (c == 0) continue;
      for (std::size_t t = 0; t < f[i].size(); ++t) f[i][t] -= c * f[n][t];
      for (std::size_t t = 0; t < d; ++t) r(i, t) -= c * r(n, t);
    }
  }
  return r;
}

std::vector<BigSeries> apply_transform(const IntMatrix& r,
                                       const std::vector<BigSeries>& g) {
  std::vector<BigSeries> f(g.size(), BigSeries(g.empty() ? 0 : g[0].size(), 0));
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = 0; j < g.size(); ++j) {
      if (r(i, j) == 0) continue;
      for (std::size_t n = 0; n < g[j].size(); ++n) f[i][n] += r(i, j) * g[j][n];
    }
  return f;
}

}  // namespace

int cusp_dimension(int k) {
  if (k < 12 || k % 2 != 0) return 0;
  int d = k / 12;
  if (k % 12 == 2) d -= 1;
  return d;
}

std::vector<QExpansion> victor_miller_basis(int k, int n_max) {
  const int d = cusp_dimension(k);
  if (d == 0) return {};
  if (n_max < d + 1)
    throw PreconditionError("victor_miller_basis: n_max must be >= dim + 1");
  const std::size_t len = static_cast<std::size_t>(n_max) + 1;
  std::vector<BigSeries> g = exact_monomial_series(k, len);
  std::vector<BigSeries> f = apply_transform(echelon_transform(g), g);
  std::vector<QExpansion> out;
  for (auto& s : f) out.push_back({k, std::move(s)});
  return out;
}

IntMatrix hecke_matrix(int k, int p) {
  const int d = cusp_dimension(k);
  if (d == 0) return {};
  if (!is_prime(p)) throw PreconditionError("hecke_matrix: p must be prime");
  std::vector<QExpansion> basis = victor_miller_basis(k, p * d + 1);
  const BigInt pk = boost::multiprecision::pow(BigInt(p), static_cast<unsigned>(k - 1));
  IntMatrix m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 1; j <= d; ++j) {
      BigInt v = basis[i].coeffs[static_cast<std::size_t>(p * j)];
      if (j % p == 0) v += pk * basis[i].coeffs[static_cast<std::size_t>(j / p)];
      m(i, j - 1) = v;
    }
  return m;
}

std::vector<BigInt> charpoly(const IntMatrix& m) {
  // Faddeev-LeVerrier; every division is exact over Z.
  const std::size_t n = m.rows;
  std::vector<BigInt> c(n + 1, 0);
  c[n] = 1;
  IntMatrix mk(n, n);  // M_0 = 0
  IntMatrix id = IntMatrix::identity(n);
  for (std::size_t k = 1; k <= n; ++k) {
    mk = m * mk + id.scaled(c[n - k + 1]);
    IntMatrix am = m * mk;
    c[n - k] = -am.trace() / static_cast<long>(k);
  }
  return c;
}

// ---- irreducibility of the characteristic polynomial ---------------------------

namespace {

using PolyMod = std::vector<std::int64_t>;  // low to high, coefficients mod l

void trim(PolyMod& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

PolyMod poly_mod(PolyMod a, const PolyMod& f, std::int64_t l) {
  trim(a);
  const std::int64_t lead_inv = mod_inverse(f.back(), l).value;
  while (a.size() >= f.size()) {
    std::int64_t c = mul_mod(a.back(), lead_inv, l);
    std::size_t shift = a.size() - f.size();
    for (std::size_t i = 0; i < f.size(); ++i)
      a[shift + i] = floor_mod(a[shift + i] - mul_mod(c, f[i], l), l);
    trim(a);
  }
  return a;
}

PolyMod poly_mulmod(const PolyMod& a, const PolyMod& b, const PolyMod& f,
                    std::int64_t l) {
  if (a.empty() || b.empty()) return {};
  PolyMod r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      r[i + j] = (r[i + j] + mul_mod(a[i], b[j], l)) % l;
  return poly_mod(r, f, l);
}

PolyMod poly_powmod(PolyMod base, std::int64_t e, const PolyMod& f, std::int64_t l) {
  PolyMod r{1};
  base = poly_mod(base, f, l);
  while (e > 0) {
    if (e & 1) r = poly_mulmod(r, base, f, l);
    base = poly_mulmod(base, base, f, l);
    e >>= 1;
  }
  return r;
}

PolyMod poly_gcd(PolyMod a, PolyMod b, std::int64_t l) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    PolyMod r = poly_mod(a, b, l);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

// x^(l^e) mod f
PolyMod frobenius_power(const PolyMod& f, std::int64_t l, int e) {
  PolyMod x{0, 1};
  PolyMod r = poly_mod(x, f, l);
  for (int i = 0; i < e; ++i) r = poly_powmod(r, l, f, l);
  return r;
}

// Rabin's test over F_l.
bool irreducible_mod(const PolyMod& f, std::int64_t l) {
  const int n = static_cast<int>(f.size()) - 1;
  if (n <= 1) return true;
  auto minus_x = [&](PolyMod p) {
    if (p.size() < 2) p.resize(2, 0);
    p[1] = floor_mod(p[1] - 1, l);
    trim(p);
    return p;
  };
  if (!minus_x(frobenius_power(f, l, n)).empty()) return false;
  for (auto [q, e] : factorize(n)) {
    PolyMod g = poly_gcd(f, minus_x(frobenius_power(f, l, n / static_cast<int>(q))), l);
    if (g.size() > 1) return false;
  }
  return true;
}

// Degree of the Hecke field: d when the characteristic polynomial is shown
// irreducible modulo some small prime, otherwise the degree stays unknown and
// the dimension is reported.
int hecke_field_degree(const std::vector<BigInt>& cp) {
  const int n = static_cast<int>(cp.size()) - 1;
  for (std::int64_t l : primes_up_to(400)) {
    PolyMod f(cp.size());
    for (std::size_t i = 0; i < cp.size(); ++i) {
      BigInt r = cp[i] % l;
      if (r < 0) r += l;
      f[i] = r.convert_to<std::int64_t>();
    }
    if (irreducible_mod(f, l)) return n;
  }
  return n;
}

// ---- eigenvalues and eigenvectors ------------------------------------------------

Real100 eval_poly(const std::vector<BigInt>& c, const Real100& x, Real100* deriv,
                  Real100* scale) {
  Real100 v = 0, dv = 0, s = 0, ax = abs(x);
  for (std::size_t i = c.size(); i-- > 0;) {
    dv = dv * x + v;
    v = v * x + Real100(c[i]);
    s = s * ax + abs(Real100(c[i]));
  }
  if (deriv) *deriv = dv;
  if (scale) *scale = s;
  return v;
}

struct Spectrum {
  std::vector<Real100> values;
  std::vector<VecMp> vectors;  // left eigenvectors, first entry 1
  std::vector<double> residuals;
  int field_degree = 1;
};

Spectrum diagonalize(const IntMatrix& m) {
  const std::size_t d = m.rows;
  Spectrum sp;
  std::vector<BigInt> cp = charpoly(m);
  sp.field_degree = hecke_field_degree(cp);
  Eigen::MatrixXd md(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) md(i, j) = m(i, j).convert_to<double>();
  Eigen::EigenSolver<Eigen::MatrixXd> es(md, false);
  std::vector<double> guesses;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
    guesses.push_back(es.eigenvalues()[i].real());
  std::sort(guesses.begin(), guesses.end());
  for (double g : guesses) {
    // Newton with the roots found so far divided out (Maehly), so two nearby
    // double-precision guesses cannot land on the same root.
    Real100 x = g, dp, scale;
    for (int it = 0; it < 500; ++it) {
      Real100 p = eval_poly(cp, x, &dp, nullptr);
      if (p == 0) break;
      Real100 defl = 0;
      for (const Real100& r : sp.values) defl += 1 / (x - r);
      const Real100 denom = dp - p * defl;
      if (denom == 0) break;
      Real100 step = p / denom;
      x -= step;
      if (abs(step) <= abs(x) * Real100("1e-90")) break;
    }
    Real100 p = eval_poly(cp, x, nullptr, &scale);
    sp.values.push_back(x);
    sp.residuals.push_back(scale == 0 ? 0.0 : static_cast<double>(abs(p) / scale));
  }
  Real100 top = 0;
  for (auto& v : sp.values) top = std::max(top, Real100(abs(v)));
  for (std::size_t i = 0; i + 1 < sp.values.size(); ++i)
    if (abs(sp.values[i + 1] - sp.values[i]) <= top * Real100("1e-40") + Real100("1e-40"))
      throw DegenerateHecke("repeated Hecke eigenvalue");

  // Left eigenvectors: (M^T - x I) v = 0 with v_0 = 1.
  MatMp mt(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) mt(i, j) = Real100(m(j, i));
  for (const Real100& x : sp.values) {
    VecMp v(d);
    v(0) = 1;
    if (d > 1) {
      MatMp a = mt.bottomRightCorner(d - 1, d - 1);
      for (std::size_t i = 0; i + 1 < d; ++i) a(i, i) -= x;
      VecMp rhs = -mt.block(1, 0, d - 1, 1);
      v.tail(d - 1) = a.fullPivLu().solve(rhs);
    }
    sp.vectors.push_back(v);
  }
  return sp;
}

Spectrum hecke_spectrum(int k) {
  IntMatrix t2 = hecke_matrix(k, 2);
  try {
    return diagonalize(t2);
  } catch (const DegenerateHecke&) {
    IntMatrix t3 = hecke_matrix(k, 3);
    return diagonalize(t2 + t3.scaled(2));
  }
}

// ---- long expansions modulo NTT primes -------------------------------------------

class PowerCache {
 public:
  PowerCache(ModSeries base, std::size_t len, const NttPrime& pr)
      : base_(std::move(base)), len_(len), pr_(pr) {}
  const ModSeries& get(int e) {
    auto it = cache_.find(e);
    if (it != cache_.end()) return it->second;
    ModSeries r;
    if (e == 0) {
      r.assign(len_, 0);
      r[0] = 1;
    } else if (e == 1) {
      r = base_;
    } else {
      ModSeries half = get(e / 2);
      r = square(half, len_, pr_);
      if (e % 2) r = multiply(r, base_, len_, pr_);
    }
    return cache_.emplace(e, std::move(r)).first->second;
  }

 private:
  ModSeries base_;
  std::size_t len_;
  NttPrime pr_;
  std::map<int, ModSeries> cache_;
};

// f_i(l) mod p for every prime l in `primes`; result[i][t].
std::vector<std::vector<std::uint32_t>> basis_at_primes_mod(
    int k, const IntMatrix& r, const std::vector<std::int64_t>& primes,
    std::size_t len, const NttPrime& pr) {
  const std::vector<Monomial> mons = monomials(k);
  ModSeries e6 = eisenstein_e6(len, pr);
  PowerCache e4(eisenstein_e4(len, pr), len, pr);
  PowerCache delta(delta_series(len, pr), len, pr);
  const std::size_t d = mons.size();
  std::vector<std::vector<std::uint32_t>> g_at(d);
  for (std::size_t j = 0; j < d; ++j) {
    const Monomial& m = mons[j];
    ModSeries s = multiply(delta.get(m.j), e4.get(m.a), len, pr);
    if (m.b) s = multiply(s, e6, len, pr);
    g_at[j].reserve(primes.size());
    for (std::int64_t l : primes) g_at[j].push_back(s[static_cast<std::size_t>(l)]);
  }
  std::vector<std::vector<std::uint32_t>> f_at(d, std::vector<std::uint32_t>(primes.size(), 0));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      BigInt c = r(i, j) % pr.p;
      if (c < 0) c += pr.p;
      const std::uint64_t cm = c.convert_to<std::uint64_t>();
      if (cm == 0) continue;
      for (std::size_t t = 0; t < primes.size(); ++t)
        f_at[i][t] = static_cast<std::uint32_t>((f_at[i][t] + cm * g_at[j][t]) % pr.p);
    }
  return f_at;
}

// ---- caches -------------------------------------------------------------------

constexpr char kLambdaMagic[4] = {'M', 'L', 'E', 'V'};
constexpr std::uint32_t kCacheVersion = 1;

template <typename T>
void put(std::ostream& os, const T& v) {
  static_assert(std::endian::native == std::endian::little);
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
bool get(std::istream& is, T& v) {
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  return static_cast<bool>(is);
}

std::optional<std::filesystem::path> cache_directory(const EigenformOptions& opt) {
  if (opt.cache_dir) return opt.cache_dir;
  if (const char* env = std::getenv("MOMENTLAB_CACHE_DIR"); env && *env)
    return std::filesystem::path(env);
  return std::nullopt;
}

std::filesystem::path lambda_file(const std::filesystem::path& dir, int k,
                                  std::int64_t n_max, int index) {
  return dir / ("lambda_k" + std::to_string(k) + "_n" + std::to_string(n_max) +
                "_f" + std::to_string(index) + ".bin");
}

void fill_multiplicative(std::vector<double>& lambda, std::int64_t n_max) {
  Sieve sv(n_max);
  for (std::int64_t n = 2; n <= n_max; ++n) {
    std::int64_t p = sv.smallest_prime_factor(n);
    if (p == n) continue;
    std::int64_t m = n, pe = 1;
    while (m % p == 0) {
      m /= p;
      pe *= p;
    }
    if (m > 1) {
      lambda[n] = lambda[pe] * lambda[m];
    } else {
      // n = p^e with e >= 2
      lambda[n] = lambda[p] * lambda[n / p] - lambda[n / p / p];
    }
  }
}

}  // namespace

std::vector<Newform> eigenforms(int k, std::int64_t n_max, const EigenformOptions& opt) {
  const int d = cusp_dimension(k);
  if (d == 0) return {};
  if (n_max < 2 * d + 2) n_max = 2 * d + 2;
  auto dir = cache_directory(opt);
  if (dir) {
    std::vector<Newform> cached;
    for (int i = 0; i < d; ++i) {
      auto f = read_lambda_cache(lambda_file(*dir, k, n_max, i));
      if (!f) break;
      cached.push_back(std::move(*f));
    }
    if (static_cast<int>(cached.size()) == d) return cached;
  }

  Spectrum sp = hecke_spectrum(k);
  std::vector<BigSeries> g_short = exact_monomial_series(k, static_cast<std::size_t>(d) + 2);
  IntMatrix r = echelon_transform(g_short);

  // V(F, i) = a_F(i + 1); f_i = sum_F W(i, F) F with W = V^{-1}.
  MatMp v(d, d);
  for (int f = 0; f < d; ++f) v.row(f) = sp.vectors[f].transpose();
  MatMp w = v.fullPivLu().inverse();
  Real100 wmax = 0;
  for (int i = 0; i < d; ++i) {
    Real100 s = 0;
    for (int f = 0; f < d; ++f) s += abs(w(i, f));
    wmax = std::max(wmax, s);
  }
  const double half_weight = (k - 1) / 2.0;
  const double bits = static_cast<double>(boost::multiprecision::log2(wmax)) + 3.0 +
                      half_weight * std::log2(static_cast<double>(n_max)) + 4.0;
  const std::size_t n_crt = static_cast<std::size_t>(std::ceil(bits / 30.0));
  std::vector<NttPrime> nprimes = ntt_primes(n_crt + 1);  // last one checks

  std::vector<std::int64_t> lprimes = primes_up_to(n_max);
  const std::size_t len = static_cast<std::size_t>(n_max) + 1;
  // residues[prime][i][t]
  std::vector<std::vector<std::vector<std::uint32_t>>> residues;
  for (const NttPrime& pr : nprimes)
    residues.push_back(basis_at_primes_mod(k, r, lprimes, len, pr));

  CrtBasis crt(std::span<const NttPrime>(nprimes.data(), n_crt));
  std::vector<std::vector<BigInt>> f_at(d, std::vector<BigInt>(lprimes.size()));
  std::vector<std::uint32_t> res(n_crt);
  const NttPrime& check = nprimes.back();
  for (int i = 0; i < d; ++i)
    for (std::size_t t = 0; t < lprimes.size(); ++t) {
      for (std::size_t q = 0; q < n_crt; ++q) res[q] = residues[q][i][t];
      BigInt x = crt.reconstruct(res);
      BigInt xm = x % check.p;
      if (xm < 0) xm += check.p;
      if (xm.convert_to<std::uint32_t>() != residues[n_crt][i][t])
        throw ConvergenceError("eigenforms: CRT reconstruction failed check prime",
                               bits);
      f_at[i][t] = std::move(x);
    }

  std::vector<Newform> out;
  for (int fi = 0; fi < d; ++fi) {
    Newform f;
    f.weight = k;
    f.index = fi;
    f.field_degree = sp.field_degree;
    f.eigenvalue_residual = sp.residuals[fi];
    f.lambda.assign(len, 0.0);
    f.lambda[1] = 1.0;
    for (std::size_t t = 0; t < lprimes.size(); ++t) {
      Real100 a = 0;
      for (int i = 0; i < d; ++i) a += sp.vectors[fi](i) * Real100(f_at[i][t]);
      Real100 norm = pow(Real100(lprimes[t]), Real100(half_weight));
      f.lambda[static_cast<std::size_t>(lprimes[t])] = static_cast<double>(a / norm);
    }
    fill_multiplicative(f.lambda, n_max);
    if (opt.compute_weights) f.petersson_weight = petersson_weight(f);
    out.push_back(std::move(f));
  }
  if (dir) {
    std::filesystem::create_directories(*dir);
    for (const Newform& f : out) write_lambda_cache(lambda_file(*dir, k, n_max, f.index), f);
  }
  return out;
}

double hecke_lambda(const Newform& f, std::int64_t n) {
  if (n < 1) throw PreconditionError("hecke_lambda: n must be >= 1");
  const std::int64_t top = f.n_max();
  if (n <= top) return f.lambda[static_cast<std::size_t>(n)];
  double v = 1.0;
  for (auto [p, e] : factorize(n)) {
    if (p > top)
      throw TableExhausted("hecke_lambda: prime factor beyond eigenvalue table", p);
    double prev = 1.0, cur = f.lambda[static_cast<std::size_t>(p)];
    for (int j = 1; j < e; ++j) {
      double next = f.lambda[static_cast<std::size_t>(p)] * cur - prev;
      prev = cur;
      cur = next;
    }
    v *= cur;
  }
  return v;
}

std::vector<double> sym2_coefficients(const Newform& f, std::int64_t len) {
  if (len > f.n_max())
    throw TableExhausted("sym2_coefficients: eigenvalue table too short", len);
  // lambda(m^2) multiplicatively: lambda(p^{2e}) by the Hecke recursion.
  std::vector<double> sq(static_cast<std::size_t>(len) + 1, 0.0);
  Sieve sv(len);
  if (len >= 1) sq[1] = 1.0;
  for (std::int64_t m = 2; m <= len; ++m) {
    std::int64_t p = sv.smallest_prime_factor(m);
    std::int64_t rest = m;
    int e = 0;
    while (rest % p == 0) {
      rest /= p;
      ++e;
    }
    if (rest > 1) {
      sq[m] = sq[m / rest] * sq[rest];
      continue;
    }
    const double lp = f.lambda[static_cast<std::size_t>(p)];
    double prev = 1.0, cur = lp;
    for (int j = 1; j < 2 * e; ++j) {
      double next = lp * cur - prev;
      prev = cur;
      cur = next;
    }
    sq[m] = cur;
  }
  std::vector<double> b(static_cast<std::size_t>(len), 0.0);
  for (std::int64_t d = 1; d * d <= len; ++d)
    for (std::int64_t m = 1; d * d * m <= len; ++m) b[d * d * m - 1] += sq[m];
  return b;
}

double petersson_weight(const Newform& f) {
  SelfDualL l;
  l.gamma.add_real(1.0).add_complex(f.weight - 1.0);
  const std::size_t len = afe_length(l.gamma, 1.0, cplx(1.0, 0.0), AfeOptions{});
  l.coeffs = sym2_coefficients(f, static_cast<std::int64_t>(len));
  const double l1 = afe_value(l, cplx(1.0, 0.0)).real();
  if (!(l1 > 0))
    throw ConvergenceError("petersson_weight: L(1, sym^2 f) not positive", l1);
  return (f.weight - 1.0) / (2.0 * std::numbers::pi * std::numbers::pi) * l1;
}

// ---- cache I/O ------------------------------------------------------------------

void write_lambda_cache(const std::filesystem::path& file, const Newform& f) {
  std::ofstream os(file, std::ios::binary);
  os.write(kLambdaMagic, 4);
  put(os, kCacheVersion);
  put(os, static_cast<std::int32_t>(f.weight));
  put(os, static_cast<std::int64_t>(f.n_max()));
  put(os, static_cast<std::int32_t>(f.field_degree));
  put(os, static_cast<std::int32_t>(f.index));
  put(os, f.petersson_weight);
  put(os, f.eigenvalue_residual);
  for (std::size_t n = 1; n < f.lambda.size(); ++n) put(os, f.lambda[n]);
}

std::optional<Newform> read_lambda_cache(const std::filesystem::path& file) {
  std::ifstream is(file, std::ios::binary);
  if (!is) return std::nullopt;
  char magic[4];
  is.read(magic, 4);
  std::uint32_t version = 0;
  std::int32_t weight = 0, degree = 0, index = 0;
  std::int64_t n_max = 0;
  Newform f;
  if (!is || std::memcmp(magic, kLambdaMagic, 4) != 0) return std::nullopt;
  if (!get(is, version) || version != kCacheVersion) return std::nullopt;
  if (!get(is, weight) || !get(is, n_max) || !get(is, degree) || !get(is, index) ||
      !get(is, f.petersson_weight) || !get(is, f.eigenvalue_residual))
    return std::nullopt;
  f.weight = weight;
  f.field_degree = degree;
  f.index = index;
  f.lambda.assign(static_cast<std::size_t>(n_max) + 1, 0.0);
  for (std::int64_t n = 1; n <= n_max; ++n)
    if (!get(is, f.lambda[static_cast<std::size_t>(n)])) return std::nullopt;
  return f;
}

void write_qexp_cache(const std::filesystem::path& file,
                      const std::vector<QExpansion>& basis) {
  std::ofstream os(file, std::ios::binary);
  put(os, static_cast<std::uint32_t>(basis.size()));
  for (const QExpansion& q : basis) {
    put(os, static_cast<std::int32_t>(q.weight));
    put(os, static_cast<std::uint64_t>(q.coeffs.size()));
    for (const BigInt& c : q.coeffs) {
      std::vector<unsigned char> bytes;
      BigInt mag = c < 0 ? BigInt(-c) : c;
      boost::multiprecision::export_bits(mag, std::back_inserter(bytes), 8);
      put(os, static_cast<std::int8_t>(c < 0 ? -1 : 1));
      put(os, static_cast<std::uint32_t>(bytes.size()));
      os.write(reinterpret_cast<const char*>(bytes.data()),
               static_cast<std::streamsize>(bytes.size()));
    }
  }
}

std::vector<QExpansion> read_qexp_cache(const std::filesystem::path& file) {
  std::ifstream is(file, std::ios::binary);
  std::uint32_t count = 0;
  if (!get(is, count)) return {};
  std::vector<QExpansion> out(count);
  for (QExpansion& q : out) {
    std::int32_t weight = 0;
    std::uint64_t n = 0;
    if (!get(is, weight) || !get(is, n)) return {};
    q.weight = weight;
    q.coeffs.resize(n);
    for (BigInt& c : q.coeffs) {
      std::int8_t sign = 1;
      std::uint32_t nbytes = 0;
      if (!get(is, sign) || !get(is, nbytes)) return {};
      std::vector<unsigned char> bytes(nbytes);
      is.read(reinterpret_cast<char*>(bytes.data()), nbytes);
      c = 0;
      if (nbytes) boost::multiprecision::import_bits(c, bytes.begin(), bytes.end(), 8);
      if (sign < 0) c = -c;
    }
  }
  return out;
}

}  // namespace momentlab

#include "momentlab/arith.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace momentlab {

namespace {

// Neumaier variant of Kahan summation.
struct CompensatedSum {
  double sum = 0.0;
  double comp = 0.0;
  void add(double v) {
    double t = sum + v;
    if (std::abs(sum) >= std::abs(v))
      comp += (sum - t) + v;
    else
      comp += (v - t) + sum;
    sum = t;
  }
  double value() const { return sum + comp; }
};

std::int64_t ext_gcd(std::int64_t a, std::int64_t b, std::int64_t& x,
                     std::int64_t& y) {
  std::int64_t x0 = 1, y0 = 0, x1 = 0, y1 = 1;
  while (b != 0) {
    std::int64_t q = a / b;
    std::tie(a, b) = std::make_pair(b, a - q * b);
    std::tie(x0, x1) = std::make_pair(x1, x0 - q * x1);
    std::tie(y0, y1) = std::make_pair(y1, y0 - q * y1);
  }
  x = x0;
  y = y0;
  return a;
}

BigInt big_gcd(BigInt a, BigInt b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    BigInt t = a % b;
    a = b;
    b = t;
  }
  return a;
}

}  // namespace

// ---- RationalPhase ------------------------------------------------------

RationalPhase::RationalPhase(BigInt numerator, BigInt denominator)
    : num_(std::move(numerator)), den_(std::move(denominator)) {
  if (den_ == 0) throw PreconditionError("RationalPhase: zero denominator");
  if (den_ < 0) {
    num_ = -num_;
    den_ = -den_;
  }
  BigInt g = big_gcd(num_, den_);
  if (g > 1) {
    num_ /= g;
    den_ /= g;
  }
}

RationalPhase RationalPhase::reduced() const {
  BigInt r = num_ % den_;
  if (r < 0) r += den_;
  return {r, den_};
}

double RationalPhase::to_double() const {
  RationalPhase r = reduced();
  return r.num_.convert_to<double>() / r.den_.convert_to<double>();
}

RationalPhase RationalPhase::operator+(const RationalPhase& o) const {
  return {num_ * o.den_ + o.num_ * den_, den_ * o.den_};
}

RationalPhase RationalPhase::operator-(const RationalPhase& o) const {
  return *this + (-o);
}

bool RationalPhase::congruent_mod1(const RationalPhase& o) const {
  return (*this - o).den_ == 1;
}

// ---- elementary number theory -------------------------------------------

std::int64_t gcd(std::int64_t a, std::int64_t b) {
  a = a < 0 ? -a : a;
  b = b < 0 ? -b : b;
  while (b != 0) {
    std::int64_t t = a % b;
    a = b;
    b = t;
  }
  return a;
}

std::int64_t floor_mod(std::int64_t a, std::int64_t c) {
  std::int64_t r = a % c;
  return r < 0 ? r + c : r;
}

std::int64_t mul_mod(std::int64_t a, std::int64_t b, std::int64_t c) {
  return static_cast<std::int64_t>(static_cast<__int128>(a) * b % c);
}

std::vector<std::pair<std::int64_t, int>> factorize(std::int64_t n) {
  std::vector<std::pair<std::int64_t, int>> out;
  if (n < 0) n = -n;
  for (std::int64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
    if (n % p != 0) continue;
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.emplace_back(p, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

int mobius(std::int64_t n) {
  int mu = 1;
  for (auto [p, e] : factorize(n)) {
    if (e > 1) return 0;
    mu = -mu;
  }
  return mu;
}

std::int64_t euler_phi(std::int64_t n) {
  std::int64_t phi = n;
  for (auto [p, e] : factorize(n)) phi = phi / p * (p - 1);
  return phi;
}

std::vector<std::int64_t> divisors(std::int64_t n) {
  std::vector<std::int64_t> ds{1};
  for (auto [p, e] : factorize(n)) {
    std::size_t base = ds.size();
    std::int64_t pk = 1;
    for (int j = 1; j <= e; ++j) {
      pk *= p;
      for (std::size_t i = 0; i < base; ++i) ds.push_back(ds[i] * pk);
    }
  }
  std::sort(ds.begin(), ds.end());
  return ds;
}

std::int64_t divisor_count(std::int64_t n) {
  std::int64_t t = 1;
  for (auto [p, e] : factorize(n)) t *= e + 1;
  return t;
}

std::int64_t tau3(std::int64_t n) {
  std::int64_t t = 1;
  for (auto [p, e] : factorize(n)) t *= (e + 1) * (e + 2) / 2;
  return t;
}

bool is_squarefree(std::int64_t n) {
  for (auto [p, e] : factorize(n))
    if (e > 1) return false;
  return true;
}

bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t p = 2; p * p <= n; ++p)
    if (n % p == 0) return false;
  return true;
}

std::vector<std::int64_t> primes_up_to(std::int64_t n) {
  if (n < 2) return {};
  std::vector<bool> composite(static_cast<std::size_t>(n + 1), false);
  std::vector<std::int64_t> ps;
  for (std::int64_t i = 2; i <= n; ++i) {
    if (composite[i]) continue;
    ps.push_back(i);
    for (std::int64_t j = i * i; j <= n; j += i) composite[j] = true;
  }
  return ps;
}

std::vector<std::int64_t> primes_in(std::int64_t lo, std::int64_t hi) {
  std::vector<std::int64_t> out;
  for (std::int64_t p : primes_up_to(hi))
    if (p >= lo) out.push_back(p);
  return out;
}

Sieve::Sieve(std::int64_t n)
    : n_(n), spf_(static_cast<std::size_t>(n + 1), 0),
      mu_(static_cast<std::size_t>(n + 1), 0) {
  if (n >= 1) mu_[1] = 1;
  for (std::int64_t i = 2; i <= n; ++i) {
    if (spf_[i] == 0) {
      spf_[i] = static_cast<std::int32_t>(i);
      mu_[i] = -1;
      primes_.push_back(i);
    }
    for (std::int64_t p : primes_) {
      if (p > spf_[i] || i * p > n) break;
      spf_[i * p] = static_cast<std::int32_t>(p);
      mu_[i * p] = (p == spf_[i]) ? 0 : static_cast<std::int8_t>(-mu_[i]);
    }
  }
}

std::vector<std::pair<std::int64_t, int>> Sieve::factorize(
    std::int64_t k) const {
  std::vector<std::pair<std::int64_t, int>> out;
  while (k > 1) {
    std::int64_t p = spf_[k];
    int e = 0;
    while (k % p == 0) {
      k /= p;
      ++e;
    }
    out.emplace_back(p, e);
  }
  return out;
}

// ---- inverses -------------------------------------------------------------

Residue mod_inverse(std::int64_t a, std::int64_t c) {
  if (c < 1) throw PreconditionError("mod_inverse: modulus must be >= 1");
  if (c == 1) return {0, 1};
  std::int64_t x = 0, y = 0;
  std::int64_t g = ext_gcd(floor_mod(a, c), c, x, y);
  if (g != 1) throw NotInvertible(a, c, g);
  return {floor_mod(x, c), c};
}

std::vector<std::int64_t> batch_inverses(std::span<const std::int64_t> values,
                                         std::int64_t c) {
  std::vector<std::int64_t> prefix(values.size());
  std::int64_t acc = 1 % c;
  for (std::size_t i = 0; i < values.size(); ++i) {
    prefix[i] = acc;
    acc = mul_mod(acc, floor_mod(values[i], c), c);
  }
  std::int64_t inv = mod_inverse(acc, c).value;
  std::vector<std::int64_t> out(values.size());
  for (std::size_t i = values.size(); i-- > 0;) {
    out[i] = mul_mod(inv, prefix[i], c);
    inv = mul_mod(inv, floor_mod(values[i], c), c);
  }
  return out;
}

// ---- exponential sums -----------------------------------------------------

namespace {

std::vector<std::int64_t> units_mod(std::int64_t c) {
  std::vector<std::int64_t> u;
  u.reserve(static_cast<std::size_t>(c));
  for (std::int64_t x = 1; x <= c; ++x)
    if (gcd(x, c) == 1) u.push_back(x % c);
  return u;
}

}  // namespace

KloostermanValue kloosterman(std::int64_t m, std::int64_t n, std::int64_t c) {
  if (c < 1) throw PreconditionError("kloosterman: modulus must be >= 1");
  if (c == 1) return {1.0, 0.0, 1};
  const std::int64_t mr = floor_mod(m, c), nr = floor_mod(n, c);
  std::vector<std::int64_t> xs = units_mod(c);
  std::vector<std::int64_t> inv = batch_inverses(xs, c);
  const double w = 2.0 * std::numbers::pi / static_cast<double>(c);
  CompensatedSum re, im;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    std::int64_t r = floor_mod(mul_mod(mr, xs[i], c) + mul_mod(nr, inv[i], c), c);
    double a = w * static_cast<double>(r);
    re.add(std::cos(a));
    im.add(std::sin(a));
  }
  return {re.value(), im.value(), static_cast<std::int64_t>(xs.size())};
}

double kloosterman_real(std::int64_t m, std::int64_t n, std::int64_t c) {
  return kloosterman(m, n, c).real_part;
}

std::vector<double> kloosterman_row(std::int64_t m, std::int64_t c) {
  if (c < 1) throw PreconditionError("kloosterman_row: modulus must be >= 1");
  if (c == 1) return {1.0};
  const std::int64_t mr = floor_mod(m, c);
  std::vector<std::int64_t> xs = units_mod(c);
  std::vector<std::int64_t> inv = batch_inverses(xs, c);
  const double w = 2.0 * std::numbers::pi / static_cast<double>(c);
  std::vector<double> cosine(static_cast<std::size_t>(c));
  for (std::int64_t r = 0; r < c; ++r) cosine[static_cast<std::size_t>(r)] = std::cos(w * r);
  // For each unit x the residue m x + j x^{-1} moves by x^{-1} as j steps, so
  // the whole row costs c phi(c) table lookups and no divisions.
  std::vector<CompensatedSum> acc(static_cast<std::size_t>(c));
  for (std::size_t i = 0; i < xs.size(); ++i) {
    std::int64_t r = mul_mod(mr, xs[i], c);
    const std::int64_t step = inv[i];
    for (std::int64_t j = 0; j < c; ++j) {
      acc[static_cast<std::size_t>(j)].add(cosine[static_cast<std::size_t>(r)]);
      r += step;
      if (r >= c) r -= c;
    }
  }
  std::vector<double> row(static_cast<std::size_t>(c));
  for (std::int64_t j = 0; j < c; ++j)
    row[static_cast<std::size_t>(j)] = acc[static_cast<std::size_t>(j)].value();
  return row;
}

std::int64_t ramanujan_sum(std::int64_t m, std::int64_t c) {
  if (c < 1) throw PreconditionError("ramanujan_sum: modulus must be >= 1");
  std::int64_t g = gcd(m, c);
  std::int64_t s = 0;
  for (std::int64_t d : divisors(g)) s += d * mobius(c / d);
  return s;
}

double weil_bound(std::int64_t m, std::int64_t n, std::int64_t c) {
  std::int64_t g = gcd(gcd(m, n), c);
  return static_cast<double>(divisor_count(c)) *
         std::sqrt(static_cast<double>(g)) * std::sqrt(static_cast<double>(c));
}

std::tuple<RationalPhase, RationalPhase, RationalPhase> reciprocity_identity(
    std::int64_t m, std::int64_t r, std::int64_t c, std::int64_t M,
    std::int64_t l, std::int64_t q) {
  const std::int64_t b = c * M;
  const std::int64_t d = l * q * q;
  if (b < 1 || d < 1)
    throw PreconditionError("reciprocity_identity: moduli must be positive");
  if (gcd(b, d) != 1)
    throw PreconditionError("reciprocity_identity: gcd(cM, lq^2) != 1");
  const BigInt num = BigInt(m) * r * r;
  const std::int64_t d_inv = mod_inverse(d, b).value;
  const std::int64_t b_inv = mod_inverse(b, d).value;
  RationalPhase left(num * d_inv, BigInt(b));
  RationalPhase right_arith(-num * b_inv, BigInt(d));
  RationalPhase right_arch(num, BigInt(b) * d);
  return {left.reduced(), right_arith.reduced(), right_arch.reduced()};
}

}  // namespace momentlab

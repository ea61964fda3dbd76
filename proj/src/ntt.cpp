#include "momentlab/ntt.hpp"

#include <algorithm>
#include <stdexcept>

namespace momentlab {

std::uint32_t pow_mod(std::uint64_t b, std::uint64_t e, std::uint32_t p) {
  std::uint64_t r = 1 % p;
  b %= p;
  while (e > 0) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
    e >>= 1;
  }
  return static_cast<std::uint32_t>(r);
}

std::vector<NttPrime> ntt_primes(std::size_t count) {
  std::vector<NttPrime> out;
  constexpr std::uint64_t step = 1u << 22;
  for (std::uint64_t k = ((1ull << 31) - 1) / step; k >= 1 && out.size() < count;
       --k) {
    std::uint64_t p = k * step + 1;
    if (!is_prime(static_cast<std::int64_t>(p))) continue;
    auto fac = factorize(static_cast<std::int64_t>(p - 1));
    std::uint32_t g = 2;
    for (;; ++g) {
      bool ok = true;
      for (auto [q, e] : fac)
        if (pow_mod(g, (p - 1) / static_cast<std::uint64_t>(q),
                    static_cast<std::uint32_t>(p)) == 1) {
          ok = false;
          break;
        }
      if (ok) break;
    }
    int s = 0;
    while (((p - 1) >> s & 1) == 0) ++s;
    out.push_back({static_cast<std::uint32_t>(p), g, s});
  }
  if (out.size() < count) throw std::runtime_error("ntt_primes: exhausted");
  return out;
}

namespace {

void ntt(std::vector<std::uint32_t>& a, bool inverse, const NttPrime& pr) {
  const std::uint32_t p = pr.p;
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  std::vector<std::uint32_t> tw;
  for (std::size_t len = 2; len <= n; len <<= 1) {
    std::uint64_t w = pow_mod(pr.root, (p - 1) / len, p);
    if (inverse) w = pow_mod(w, p - 2, p);
    const std::size_t half = len / 2;
    tw.resize(half);
    tw[0] = 1;
    for (std::size_t k = 1; k < half; ++k)
      tw[k] = static_cast<std::uint32_t>(tw[k - 1] * w % p);
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t k = 0; k < half; ++k) {
        std::uint32_t u = a[i + k];
        std::uint32_t v =
            static_cast<std::uint32_t>(std::uint64_t(a[i + k + half]) * tw[k] % p);
        a[i + k] = u + v >= p ? u + v - p : u + v;
        a[i + k + half] = u >= v ? u - v : u + p - v;
      }
    }
  }
  if (inverse) {
    std::uint64_t ninv = pow_mod(n, p - 2, p);
    for (auto& x : a) x = static_cast<std::uint32_t>(x * ninv % p);
  }
}

std::size_t fft_size(std::size_t len) {
  std::size_t n = 1;
  while (n < 2 * len) n <<= 1;
  return n;
}

}  // namespace

ModSeries multiply(const ModSeries& a, const ModSeries& b, std::size_t len,
                   const NttPrime& prime) {
  const std::size_t la = std::min(a.size(), len), lb = std::min(b.size(), len);
  if (la == 0 || lb == 0) return ModSeries(len, 0);
  if (std::min(la, lb) <= 32) {
    ModSeries out(len, 0);
    for (std::size_t i = 0; i < la; ++i) {
      if (a[i] == 0) continue;
      for (std::size_t j = 0; j < lb && i + j < len; ++j)
        out[i + j] = static_cast<std::uint32_t>(
            (out[i + j] + std::uint64_t(a[i]) * b[j]) % prime.p);
    }
    return out;
  }
  const std::size_t n = fft_size(len);
  std::vector<std::uint32_t> fa(n, 0), fb(n, 0);
  std::copy_n(a.begin(), la, fa.begin());
  std::copy_n(b.begin(), lb, fb.begin());
  ntt(fa, false, prime);
  ntt(fb, false, prime);
  for (std::size_t i = 0; i < n; ++i)
    fa[i] = static_cast<std::uint32_t>(std::uint64_t(fa[i]) * fb[i] % prime.p);
  ntt(fa, true, prime);
  fa.resize(len);
  return fa;
}

ModSeries square(const ModSeries& a, std::size_t len, const NttPrime& prime) {
  const std::size_t la = std::min(a.size(), len);
  const std::size_t n = fft_size(len);
  std::vector<std::uint32_t> fa(n, 0);
  std::copy_n(a.begin(), la, fa.begin());
  ntt(fa, false, prime);
  for (auto& x : fa)
    x = static_cast<std::uint32_t>(std::uint64_t(x) * x % prime.p);
  ntt(fa, true, prime);
  fa.resize(len);
  return fa;
}

namespace {

// sigma_k(n) mod p for n < len.
ModSeries divisor_power_sums(std::size_t len, int k, std::uint32_t p) {
  ModSeries s(len, 0);
  for (std::size_t d = 1; d < len; ++d) {
    std::uint32_t dk = pow_mod(d, static_cast<std::uint64_t>(k), p);
    for (std::size_t m = d; m < len; m += d) {
      std::uint32_t v = s[m] + dk;
      s[m] = v >= p ? v - p : v;
    }
  }
  return s;
}

}  // namespace

ModSeries eisenstein_e4(std::size_t len, const NttPrime& prime) {
  ModSeries s = divisor_power_sums(len, 3, prime.p);
  for (auto& x : s) x = static_cast<std::uint32_t>(std::uint64_t(x) * 240 % prime.p);
  if (len > 0) s[0] = 1;
  return s;
}

ModSeries eisenstein_e6(std::size_t len, const NttPrime& prime) {
  ModSeries s = divisor_power_sums(len, 5, prime.p);
  for (auto& x : s)
    x = static_cast<std::uint32_t>((prime.p - std::uint64_t(x) * 504 % prime.p) %
                                   prime.p);
  if (len > 0) s[0] = 1;
  return s;
}

ModSeries delta_series(std::size_t len, const NttPrime& prime) {
  // eta^3 = sum_{n>=0} (-1)^n (2n+1) q^{n(n+1)/2}, Delta = q (eta^3)^8.
  const std::uint32_t p = prime.p;
  if (len == 0) return {};
  ModSeries j(len, 0);
  for (std::size_t n = 0; n * (n + 1) / 2 < len; ++n) {
    std::uint64_t v = (2 * n + 1) % p;
    j[n * (n + 1) / 2] = static_cast<std::uint32_t>(n % 2 ? (p - v) % p : v);
  }
  ModSeries j2 = square(j, len, prime);
  ModSeries j4 = square(j2, len, prime);
  ModSeries j8 = square(j4, len, prime);
  ModSeries d(len, 0);
  for (std::size_t i = 1; i < len; ++i) d[i] = j8[i - 1];
  return d;
}

CrtBasis::CrtBasis(std::span<const NttPrime> primes) {
  BigInt acc = 1;
  for (const auto& pr : primes) {
    primes_.push_back(pr.p);
    partial_.push_back(acc);
    std::uint32_t r = static_cast<std::uint32_t>(acc % pr.p);
    inv_.push_back(pow_mod(r, pr.p - 2, pr.p));
    acc *= pr.p;
  }
  modulus_ = acc;
}

BigInt CrtBasis::reconstruct(std::span<const std::uint32_t> residues) const {
  // Garner's mixed-radix scheme.
  BigInt x = 0;
  for (std::size_t i = 0; i < primes_.size(); ++i) {
    const std::uint32_t p = primes_[i];
    std::uint32_t xr = static_cast<std::uint32_t>(x % p);
    std::uint64_t diff = (residues[i] + std::uint64_t(p) - xr) % p;
    std::uint64_t t = diff * inv_[i] % p;
    x += partial_[i] * t;
  }
  if (x > modulus_ / 2) x -= modulus_;
  return x;
}

}  // namespace momentlab

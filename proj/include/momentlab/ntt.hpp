#pragma once

// Power series over Z/pZ for word-sized NTT primes, plus Chinese remainder
// reconstruction of integers from residues.

#include "momentlab/arith.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace momentlab {

/// An NTT-friendly prime p = k 2^s + 1 < 2^31 with a primitive root.
struct NttPrime {
  std::uint32_t p = 0;
  std::uint32_t root = 0;  // primitive root mod p
  int two_adicity = 0;
};

/// The first `count` primes of the form k 2^22 + 1 below 2^31, descending.
std::vector<NttPrime> ntt_primes(std::size_t count);

using ModSeries = std::vector<std::uint32_t>;

std::uint32_t pow_mod(std::uint64_t b, std::uint64_t e, std::uint32_t p);

/// Truncated product (a * b) mod (p, q^len).
ModSeries multiply(const ModSeries& a, const ModSeries& b, std::size_t len,
                   const NttPrime& prime);
ModSeries square(const ModSeries& a, std::size_t len, const NttPrime& prime);

/// Eisenstein series E4 = 1 + 240 sum sigma_3(n) q^n and
/// E6 = 1 - 504 sum sigma_5(n) q^n modulo p, coefficients 0..len-1.
ModSeries eisenstein_e4(std::size_t len, const NttPrime& prime);
ModSeries eisenstein_e6(std::size_t len, const NttPrime& prime);

/// Delta = q prod (1 - q^n)^24 mod p via Jacobi's identity for eta^3.
ModSeries delta_series(std::size_t len, const NttPrime& prime);

/// Incremental Chinese remaindering over a fixed list of primes.
class CrtBasis {
 public:
  explicit CrtBasis(std::span<const NttPrime> primes);
  /// Symmetric representative in (-P/2, P/2] of the residues.
  BigInt reconstruct(std::span<const std::uint32_t> residues) const;
  const BigInt& modulus() const { return modulus_; }
  std::size_t size() const { return primes_.size(); }

 private:
  std::vector<std::uint32_t> primes_;
  std::vector<BigInt> partial_;        // p_0 ... p_{i-1}
  std::vector<std::uint32_t> inv_;     // inverse of partial_[i] mod p_i
  BigInt modulus_;
};

}  // namespace momentlab

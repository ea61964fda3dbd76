#pragma once

// Exact integer and modular arithmetic: Moebius, divisors, modular inverses,
// Kloosterman and Ramanujan sums, and the elementary reciprocity law.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace momentlab {

using BigInt = boost::multiprecision::cpp_int;

/// Thrown when a residue has no inverse; carries gcd(a, c).
class NotInvertible : public std::domain_error {
 public:
  NotInvertible(std::int64_t a, std::int64_t c, std::int64_t g)
      : std::domain_error("no inverse of " + std::to_string(a) + " mod " +
                          std::to_string(c) + " (gcd " + std::to_string(g) +
                          ")"),
        gcd(g) {}
  std::int64_t gcd;
};

class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Residue {
  std::int64_t value = 0;
  std::int64_t modulus = 1;
};

/// Exponential argument t of e(t) = exp(2 pi i t), kept in lowest terms.
class RationalPhase {
 public:
  RationalPhase() = default;
  RationalPhase(BigInt numerator, BigInt denominator);

  const BigInt& numerator() const { return num_; }
  const BigInt& denominator() const { return den_; }

  /// Representative in [0, 1).
  RationalPhase reduced() const;
  double to_double() const;

  RationalPhase operator+(const RationalPhase& o) const;
  RationalPhase operator-(const RationalPhase& o) const;
  RationalPhase operator-() const { return {-num_, den_}; }

  /// True when the two phases differ by an integer.
  bool congruent_mod1(const RationalPhase& o) const;
  bool operator==(const RationalPhase& o) const = default;

 private:
  BigInt num_ = 0;
  BigInt den_ = 1;
};

struct KloostermanValue {
  double real_part = 0.0;
  double certified_imag_residual = 0.0;
  std::int64_t terms = 0;
};

// ---- elementary number theory -------------------------------------------

std::int64_t gcd(std::int64_t a, std::int64_t b);
std::int64_t floor_mod(std::int64_t a, std::int64_t c);
std::int64_t mul_mod(std::int64_t a, std::int64_t b, std::int64_t c);

/// Prime factorization by trial division, as (prime, exponent) pairs.
std::vector<std::pair<std::int64_t, int>> factorize(std::int64_t n);
int mobius(std::int64_t n);
std::int64_t euler_phi(std::int64_t n);
std::vector<std::int64_t> divisors(std::int64_t n);
std::int64_t divisor_count(std::int64_t n);
/// Number of ordered factorizations n = abc.
std::int64_t tau3(std::int64_t n);
bool is_squarefree(std::int64_t n);
bool is_prime(std::int64_t n);
std::vector<std::int64_t> primes_up_to(std::int64_t n);
std::vector<std::int64_t> primes_in(std::int64_t lo, std::int64_t hi);

/// Linear sieve over [1, n]: smallest prime factor and Moebius values.
class Sieve {
 public:
  explicit Sieve(std::int64_t n);
  std::int64_t limit() const { return n_; }
  std::int64_t smallest_prime_factor(std::int64_t k) const { return spf_[k]; }
  int mobius(std::int64_t k) const { return mu_[k]; }
  const std::vector<std::int64_t>& primes() const { return primes_; }
  std::vector<std::pair<std::int64_t, int>> factorize(std::int64_t k) const;

 private:
  std::int64_t n_;
  std::vector<std::int32_t> spf_;
  std::vector<std::int8_t> mu_;
  std::vector<std::int64_t> primes_;
};

// ---- modular inverses ---------------------------------------------------

Residue mod_inverse(std::int64_t a, std::int64_t c);

/// Inverses of every entry of `values` modulo c using one extended-gcd call
/// (Montgomery's prefix-product trick). Every entry must be a unit mod c.
std::vector<std::int64_t> batch_inverses(std::span<const std::int64_t> values,
                                         std::int64_t c);

// ---- exponential sums ---------------------------------------------------

/// S(m, n; c) summed over units x in ascending order with compensated
/// accumulation. S(m, n; 1) = 1.
KloostermanValue kloosterman(std::int64_t m, std::int64_t n, std::int64_t c);

/// Real value of S(m, n; c); shorthand for kloosterman(...).real_part.
double kloosterman_real(std::int64_t m, std::int64_t n, std::int64_t c);

/// Table S(m, j; c) for j = 0..c-1, sharing one pass of inverses.
std::vector<double> kloosterman_row(std::int64_t m, std::int64_t c);

/// c_c(m) = sum_{d | (m, c)} d mu(c/d).
std::int64_t ramanujan_sum(std::int64_t m, std::int64_t c);

/// Weil bound tau(c) sqrt(gcd(m, n, c)) sqrt(c).
double weil_bound(std::int64_t m, std::int64_t n, std::int64_t c);

/// The three phases (left, right_arithmetic, right_archimedean) of
///   e(m r^2 inv(lq^2 mod cM) / cM)
///     = e(-m r^2 inv(cM mod lq^2) / lq^2) e(m r^2 / (cM lq^2)).
/// Throws PreconditionError unless gcd(cM, lq^2) = 1.
std::tuple<RationalPhase, RationalPhase, RationalPhase> reciprocity_identity(
    std::int64_t m, std::int64_t r, std::int64_t c, std::int64_t M,
    std::int64_t l, std::int64_t q);

}  // namespace momentlab

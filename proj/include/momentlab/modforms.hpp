#pragma once

// Level-one holomorphic cusp forms: integral echelon bases built from E4, E6
// and Delta, exact Hecke matrices, Hecke eigenforms with eigenvalue tables
// reconstructed from multi-prime power series, and harmonic weights.

#include "momentlab/arith.hpp"
#include "momentlab/errors.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace momentlab {

/// Integer q-expansion; coeffs[n] = a(n) for 0 <= n <= n_max.
struct QExpansion {
  int weight = 0;
  std::vector<BigInt> coeffs;

  std::int64_t n_max() const { return static_cast<std::int64_t>(coeffs.size()) - 1; }
};

/// Small dense integer matrix, row-major.
struct IntMatrix {
  std::size_t rows = 0, cols = 0;
  std::vector<BigInt> data;

  IntMatrix() = default;
  IntMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0) {}
  static IntMatrix identity(std::size_t n);

  BigInt& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  const BigInt& operator()(std::size_t i, std::size_t j) const {
    return data[i * cols + j];
  }
  IntMatrix operator*(const IntMatrix& o) const;
  IntMatrix operator+(const IntMatrix& o) const;
  IntMatrix scaled(const BigInt& s) const;
  BigInt trace() const;
  bool operator==(const IntMatrix& o) const = default;
};

/// dim S_k(SL2(Z)); 0 for odd or small k.
int cusp_dimension(int k);

/// Echelon basis of S_k: basis[i] has a(j) = delta_{i+1, j} for j <= dim.
/// Empty for dim S_k = 0.
std::vector<QExpansion> victor_miller_basis(int k, int n_max);

/// Matrix of T_p on the echelon basis: T_p f_i = sum_j M(i, j) f_j.
IntMatrix hecke_matrix(int k, int p);

/// Characteristic polynomial det(x I - M), coefficients low to high.
std::vector<BigInt> charpoly(const IntMatrix& m);

struct Newform {
  int weight = 0;
  int index = 0;            // position among the eigenforms of this weight
  int field_degree = 1;     // degree of the Hecke field (dim of the Galois orbit)
  std::vector<double> lambda;  // lambda[n] for 1 <= n <= n_max, lambda[0] = 0
  double petersson_weight = 0.0;  // omega_f
  double eigenvalue_residual = 0.0;  // certified |charpoly(T)(ev)| / scale

  std::int64_t n_max() const { return static_cast<std::int64_t>(lambda.size()) - 1; }
};

struct EigenformOptions {
  /// Directory for binary eigenvalue caches; defaults to $MOMENTLAB_CACHE_DIR.
  std::optional<std::filesystem::path> cache_dir;
  bool compute_weights = true;
};

/// Hecke eigenforms of weight k with lambda tables up to n_max.
std::vector<Newform> eigenforms(int k, std::int64_t n_max,
                                const EigenformOptions& opt = {});

/// lambda_f(n) for any n whose prime factors are all <= n_max of the table.
double hecke_lambda(const Newform& f, std::int64_t n);

/// Dirichlet coefficients b(n), n = 1..len, of zeta(2s) sum lambda(n^2) n^{-s}.
std::vector<double> sym2_coefficients(const Newform& f, std::int64_t len);

/// omega_f = (k - 1) / (2 pi^2) L(1, sym^2 f).
double petersson_weight(const Newform& f);

// ---- binary caches ------------------------------------------------------------

void write_lambda_cache(const std::filesystem::path& file, const Newform& f);
std::optional<Newform> read_lambda_cache(const std::filesystem::path& file);
void write_qexp_cache(const std::filesystem::path& file,
                      const std::vector<QExpansion>& basis);
std::vector<QExpansion> read_qexp_cache(const std::filesystem::path& file);

}  // namespace momentlab

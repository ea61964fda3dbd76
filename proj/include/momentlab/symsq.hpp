#pragma once

// GL(3) coefficients of the symmetric square lift F = sym^2 g of a level-one
// eigenform g, its archimedean parameters and L(1, F).

#include "momentlab/afe.hpp"
#include "momentlab/modforms.hpp"

#include <array>
#include <complex>
#include <cstdint>
#include <vector>

namespace momentlab {

struct SymSquareForm {
  int base_weight = 0;                       // kappa
  std::vector<double> first_row;             // first_row[n] = A(n, 1), n >= 1
  std::array<std::complex<double>, 3> alpha; // archimedean parameters

  std::int64_t n_max() const { return static_cast<std::int64_t>(first_row.size()) - 1; }
};

/// A(n, 1) for n <= n_max from sum A(n,1) n^{-s} = zeta(2s) sum lambda_g(n^2) n^{-s}.
std::vector<double> symsq_first_row(const Newform& g, std::int64_t n_max);

/// (kappa - 1, 0, -(kappa - 1)).
std::array<std::complex<double>, 3> langlands_params(const Newform& g);

SymSquareForm make_symsq(const Newform& g, std::int64_t n_max);

/// A(m, n) = sum_{d | (m, n)} mu(d) A(m/d, 1) A(1, n/d).
double gl3_coeff(const SymSquareForm& F, std::int64_t m, std::int64_t n);

/// Gamma_R(s + 1) Gamma_C(s + kappa - 1): the pair +-alpha contributes
/// Gamma_C(s + |alpha|), the parameter 0 contributes Gamma_R(s + 1).
GammaFactor symsq_gamma(const SymSquareForm& F);

/// The L-function data of F for the smoothed functional equation.
SelfDualL symsq_lfunction(const SymSquareForm& F);

struct LOneResult {
  double value = 0.0;
  double doubling_change = 0.0;  // relative change when the cutoff tolerance is squared
  std::size_t terms = 0;
};

/// L(1, F) through the smoothed functional equation.
LOneResult l_one(const SymSquareForm& F);

/// |Lambda(s) - Lambda(1 - s)| / |Lambda(s)| with a non-symmetric test function.
double symsq_fe_residual(const SymSquareForm& F, std::complex<double> s);

}  // namespace momentlab

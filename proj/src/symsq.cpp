#include "momentlab/symsq.hpp"

#include <cmath>

namespace momentlab {

std::vector<double> symsq_first_row(const Newform& g, std::int64_t n_max) {
  std::vector<double> b = sym2_coefficients(g, n_max);
  std::vector<double> row(static_cast<std::size_t>(n_max) + 1, 0.0);
  for (std::int64_t n = 1; n <= n_max; ++n) row[n] = b[n - 1];
  return row;
}

std::array<std::complex<double>, 3> langlands_params(const Newform& g) {
  const double a = g.weight - 1.0;
  return {std::complex<double>(a, 0), std::complex<double>(0, 0),
          std::complex<double>(-a, 0)};
}

SymSquareForm make_symsq(const Newform& g, std::int64_t n_max) {
  SymSquareForm F;
  F.base_weight = g.weight;
  F.first_row = symsq_first_row(g, n_max);
  F.alpha = langlands_params(g);
  return F;
}

double gl3_coeff(const SymSquareForm& F, std::int64_t m, std::int64_t n) {
  if (m < 1 || n < 1) throw PreconditionError("gl3_coeff: indices must be >= 1");
  if (m > F.n_max() || n > F.n_max())
    throw TableExhausted("gl3_coeff: first row too short", std::max(m, n));
  double s = 0.0;
  for (std::int64_t d : divisors(gcd(m, n))) {
    int mu = mobius(d);
    if (mu == 0) continue;
    s += mu * F.first_row[m / d] * F.first_row[n / d];
  }
  return s;
}

GammaFactor symsq_gamma(const SymSquareForm& F) {
  GammaFactor g;
  for (const auto& a : F.alpha) {
    if (a.real() > 0) g.add_complex(a.real());
    if (a.real() == 0) g.add_real(1.0);
  }
  return g;
}

SelfDualL symsq_lfunction(const SymSquareForm& F) {
  SelfDualL l;
  l.gamma = symsq_gamma(F);
  l.conductor = 1.0;
  l.root_number = 1.0;
  l.coeffs.assign(F.first_row.begin() + 1, F.first_row.end());
  return l;
}

LOneResult l_one(const SymSquareForm& F) {
  SelfDualL l = symsq_lfunction(F);
  AfeOptions loose;
  loose.tol = 1e-8;
  AfeOptions tight;
  LOneResult r;
  const double coarse = afe_value(l, 1.0, loose).real();
  r.value = afe_value(l, 1.0, tight).real();
  r.terms = afe_length(l.gamma, 1.0, 1.0, tight);
  r.doubling_change = std::abs(r.value - coarse) / std::abs(r.value);
  return r;
}

double symsq_fe_residual(const SymSquareForm& F, std::complex<double> s) {
  return fe_residual(symsq_lfunction(F), s, AfeOptions{});
}

}  // namespace momentlab

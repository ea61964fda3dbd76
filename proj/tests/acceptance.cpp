// Acceptance run: one PASS/FAIL line per criterion, followed by the measured
// numbers. Exit status 1 if any criterion fails.

#include "momentlab/arith.hpp"
#include "momentlab/checks.hpp"
#include "momentlab/identities.hpp"
#include "momentlab/lfunctions.hpp"
#include "momentlab/moments.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

using namespace momentlab;

namespace {

int failures = 0;

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void verdict(int id, bool ok, const std::string& what, const std::string& detail) {
  if (!ok) ++failures;
  std::printf("%s criterion %d: %s\n      %s\n", ok ? "PASS" : "FAIL", id, what.c_str(), detail.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

void guarded(int id, const std::string& what, const std::function<void()>& body) {
  try {
    body();
  } catch (const std::exception& e) {
    verdict(id, false, what, std::string("exception: ") + e.what());
  }
}

struct Sym2 {
  std::vector<Newform> delta;
  SymSquareForm F;
};

}  // namespace

int main() {
  const auto t_start = std::chrono::steady_clock::now();

  guarded(1, "Petersson two-sided", [] {
    const auto t0 = std::chrono::steady_clock::now();
    std::size_t pairs = 0, bad = 0;
    double worst = 0;
    for (int k : {12, 16, 18, 20, 22, 26}) {
      KloostermanCache cache;
      for (const auto& r : petersson_grid(k, 50, 1e-12, &cache)) {
        ++pairs;
        if (!r.pass(1e-8)) ++bad;
        worst = std::max(worst, r.rel_gap);
      }
    }
    const double t = seconds_since(t0);
    verdict(1, bad == 0 && t < 120, "Petersson two-sided, k in {12,16,18,20,22,26}, 1 <= m,n <= 50",
            fmt("%.0f pairs, %.0f failing, worst rel_gap %.2e, %.1f s (limit 120 s)", double(pairs), double(bad), worst, t));
  });

  guarded(2, "Kloosterman properties", [] {
    const auto t0 = std::chrono::steady_clock::now();
    const auto r = kloosterman_properties(10000, 10000, 20240611);
    const double t = seconds_since(t0);
    verdict(2, r.violations.empty() && t < 60, "Weil bound, symmetry, CRT on 1e4 random tuples, c <= 1e4",
            fmt("%.0f violations, max |S|/Weil %.4f, max symmetry gap %.1e, max CRT gap/c %.1e", double(r.violations.size()), r.max_weil_ratio, r.max_symmetry_gap, r.max_crt_gap) +
                fmt(", %.1f s (limit 60 s)", t));
  });

  guarded(3, "reciprocity", [] {
    const auto r = reciprocity_check(10000, 977);
    verdict(3, r.violations == 0, "reciprocity identity, exact mod 1, 1e4 coprime tuples",
            fmt("%.0f tuples, %.0f violations", double(r.tuples), double(r.violations)));
  });

  const auto t_sym = std::chrono::steady_clock::now();
  Sym2 s;
  s.delta = eigenforms(12, 2000000, EigenformOptions{std::nullopt, false});
  s.F = make_symsq(s.delta.at(0), 2000000);
  std::printf("      (sym^2 Delta up to n = 2e6 in %.1f s)\n", seconds_since(t_sym));

  guarded(4, "GL(3) Voronoi", [&] {
    const auto w = TestFunction::bump(0.5, 2.5, 8.0);
    const OmegaTable table(w, s.F.alpha);
    std::size_t tuples = 0, bad = 0, bad_branch = 0;
    double worst = 0, worst_branch = 0, worst_trunc = 0;
    for (double X : {50.0, 200.0})
      for (std::int64_t c = 1; c <= 10; ++c)
        for (std::int64_t m = 1; m <= 3; ++m)
          for (std::int64_t a = 1; a <= c; ++a) {
            if (gcd(a, c) != 1) continue;
            const auto r = voronoi_two_sided(s.F, table, w, m, a, c, X, VoronoiBranch::unramified);
            const auto r2 = voronoi_two_sided(s.F, table, w, m, a, c, X, VoronoiBranch::ramified);
            const double agree = std::abs(r.rhs - r2.rhs) / std::abs(r.rhs);
            ++tuples;
            if (!r.pass(1e-5)) ++bad;
            if (!(agree <= 1e-8)) ++bad_branch;
            worst = std::max(worst, r.rel_gap);
            worst_branch = std::max(worst_branch, agree);
            worst_trunc = std::max(worst_trunc, r.truncation_bound / std::abs(r.lhs));
          }
    const double t = seconds_since(t_sym);
    verdict(4, bad == 0 && bad_branch == 0 && t < 600, "Voronoi two-sided (1e-5) and branch agreement (1e-8), c <= 10, m <= 3, X in {50, 200}",
            fmt("%.0f tuples, %.0f gap failures, %.0f branch failures, worst rel_gap %.2e", double(tuples), double(bad), double(bad_branch), worst) +
                fmt(", worst truncation/|lhs| %.1e, worst branch %.1e, %.1f s incl. coefficients (limit 600 s)", worst_trunc, worst_branch, t));
  });

  guarded(5, "Omega dual method", [&] {
    const auto w = TestFunction::bump();
    const OmegaTable table(w, s.F.alpha);
    std::size_t bad = 0, pts = 0;
    double worst = 0;
    for (OmegaSign sign : {OmegaSign::plus, OmegaSign::minus}) {
      const OmegaStationary sp(table, w, sign);
      for (int i = 0; i < 12; ++i) {
        const double x = 1e3 * std::pow(1e3, i / 11.0);
        const auto a = table.eval(sign, x), b = sp.eval(x, sp.max_terms());
        const double gap = std::abs(a.value - b.value), err = a.error + b.error;
        ++pts;
        if (!(gap <= err)) ++bad;
        worst = std::max(worst, gap / err);
      }
    }
    verdict(5, bad == 0, "Omega_+- contour vs stationary phase, 12 log points in [1e3, 1e6], both signs",
            fmt("%.0f points, %.0f outside the combined error, worst gap/error %.2f", double(pts), double(bad), worst));
  });

  guarded(6, "averaged Bessel decay", [] {
    const auto h = TestFunction::bump();
    const auto tw = bessel_decay(h, {50, 100, 200}, 0.25, BesselAverageMode::even_twisted);
    const auto m4 = bessel_decay(h, {50, 100, 200}, 0.25, BesselAverageMode::mod4);
    const bool ok = tw.exponent >= 3.5 && m4.exponent >= 3.5;
    verdict(6, ok, "residual decay exponent in K >= 3.5 at x/K^2 = 1/4, K in {50, 100, 200}",
            fmt("twisted: exponent %.2f (max residuals %.2e, %.2e, %.2e)", tw.exponent, tw.max_residual[0], tw.max_residual[1], tw.max_residual[2]) +
                fmt("; mod 4: exponent %.2f (%.2e, %.2e, %.2e)", m4.exponent, m4.max_residual[0], m4.max_residual[1], m4.max_residual[2]));
  });

  // Criteria 7-9 and 11 share the central values.
  CentralValueCache cache(s.F);
  std::vector<MomentReport> first, mixed;
  guarded(7, "weight moment", [&] {
    const auto t0 = std::chrono::steady_clock::now();
    for (double K : {12.0, 20.0, 32.0}) {
      first.push_back(weight_moment(s.F, K, TestFunction::bump(), 1, false, {}, &cache));
      mixed.push_back(weight_moment(s.F, K, TestFunction::bump(), 1, true, {}, &cache));
    }
    const double g0 = std::abs(first[0].gap), g1 = std::abs(first[1].gap), g2 = std::abs(first[2].gap);
    const double limit = 5 * std::pow(32.0, -0.25);
    verdict(7, g1 < g0 && g2 < g1 && g2 <= limit, "|moment - L(1,F) K/4 W-hat(0)| decreasing over K in {12, 20, 32} and <= 5 K^{-1/4} at K = 32",
            fmt("moment %.6f / %.6f / %.6f", first[0].moment, first[1].moment, first[2].moment) +
                fmt("; main term %.6f / %.6f / %.6f", first[0].main_term, first[1].main_term, first[2].main_term) +
                fmt("; |gap| %.4f / %.4f / %.4f (limit %.4f)", g0, g1, g2, limit) +
                fmt("; against the diagonal sum: %.4f / %.4f / %.4f", first[0].moment - first[0].diagonal_sum, first[1].moment - first[1].diagonal_sum, first[2].moment - first[2].diagonal_sum) +
                fmt("; %.1f s", seconds_since(t0)));
  });

  guarded(8, "mixed moment shape", [&] {
    if (mixed.size() != 3) throw std::runtime_error("moments unavailable");
    double r[3];
    for (int i = 0; i < 3; ++i) r[i] = std::abs(mixed[i].moment) / std::pow(mixed[i].K, 1.1);
    verdict(8, r[1] <= r[0] && r[2] <= r[1], "|mixed moment| / K^1.1 non-increasing over K in {12, 20, 32}",
            fmt("%.5f / %.5f / %.5f", r[0], r[1], r[2]) + fmt(" (moments %.5f / %.5f / %.5f)", mixed[0].moment, mixed[1].moment, mixed[2].moment));
  });

  guarded(9, "root-number annihilation", [&] {
    if (mixed.empty()) throw std::runtime_error("moments unavailable");
    std::size_t weights = 0, leaks = 0, sign_leaks = 0;
    std::string where;
    for (const auto& rep : mixed)
      for (const auto& e : rep.per_weight) {
        if (e.root_number == -1.0 && e.L_rs != 0.0) ++sign_leaks;
        if (e.k % 4 != 2) continue;
        ++weights;
        if (e.L_rs != 0.0 || e.L_gl2 != 0.0) {
          ++leaks;
          where += fmt(" k=%.0f (L_rs %.4f, L_gl2 %.1f)", e.k, e.L_rs, e.L_gl2);
        }
      }
    verdict(9, leaks == 0, "every k = 2 mod 4 gives exactly 0 for both central values",
            fmt("%.0f entries with k = 2 mod 4, %.0f nonzero;", double(weights), double(leaks)) + where +
                fmt("; entries with sign -1 and nonzero L_rs: %.0f", double(sign_leaks)));
  });

  guarded(10, "amplifier", [&] {
    const auto f24 = eigenforms(24, 5000);
    std::size_t bad_exp = 0, bad_self = 0;
    double worst = 0;
    std::string selfs;
    for (std::int64_t L : {5, 11, 23}) {
      const Amplifier amp(s.delta.at(0), L);
      std::vector<const Newform*> fs{&s.delta.at(0)};
      for (const auto& f : f24) fs.push_back(&f);
      for (const Newform* f : fs) {
        const double v = amp.evaluate(*f), gap = std::abs(v - amp.expand(*f).value);
        worst = std::max(worst, gap);
        if (gap > 1e-10) ++bad_exp;
      }
      const double v0 = amp.evaluate(s.delta.at(0));
      if (v0 < amp.self_lower_bound()) ++bad_self;
      selfs += fmt(" L=%.0f: %.3f >= %.1f;", double(L), v0, amp.self_lower_bound());
    }
    verdict(10, bad_exp == 0 && bad_self == 0, "amplifier expansion exact to 1e-10, A_{f0} >= |P_L|^2/2 for L in {5, 11, 23}",
            fmt("worst expansion gap %.1e;", worst) + selfs);
  });

  guarded(11, "positivity", [&] {
    if (first.empty()) throw std::runtime_error("moments unavailable");
    std::size_t n = 0, bad = 0;
    double lo = 1e300;
    for (const auto& rep : first)
      for (const auto& e : rep.per_weight) {
        ++n;
        lo = std::min(lo, e.L_rs);
        if (e.L_rs < -1e-6) ++bad;
      }
    verdict(11, bad == 0, "L(1/2, F x f) >= -1e-6 for every computed (k, f)",
            fmt("%.0f (k, f) entries over the three windows, %.0f below -1e-6, minimum %.3e", double(n), double(bad), lo));
  });

  std::printf("%d criteria failed, total %.1f s\n", failures, seconds_since(t_start));
  return failures == 0 ? 0 : 1;
}

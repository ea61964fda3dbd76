// Command-line front end: one subcommand per verification suite or experiment.
// Exit status 0 when every PASS-type check passes, 1 on a numerical FAIL,
// 2 on bad input.

#include "momentlab/arith.hpp"
#include "momentlab/checks.hpp"
#include "momentlab/errors.hpp"
#include "momentlab/identities.hpp"
#include "momentlab/lfunctions.hpp"
#include "momentlab/moments.hpp"
#include "momentlab/report.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

using namespace momentlab;
using nlohmann::json;

namespace {

struct BadConfig : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---- output ------------------------------------------------------------------

class Run {
 public:
  Run(std::string command, const std::string& path, json config) : command_(std::move(command)) {
    if (path == "-") {
      out_ = &std::cout;
      log_ = &std::cerr;
    } else if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw BadConfig("cannot open output file " + path);
      out_ = file_.get();
    }
    emit({{"record", "header"},
          {"command", command_},
          {"version", kVersion},
          {"config", std::move(config)}});
  }

  void emit(const json& j) {
    if (out_) JsonLines(*out_).write(j);
  }

  /// A PASS-type check; the row carries its own parameters and tolerance.
  void check(bool ok, const std::string& label, json row) {
    ++checks_;
    if (!ok) failing_.push_back(label);
    row["record"] = "check";
    row["label"] = label;
    row["pass"] = ok;
    emit(row);
    *log_ << (ok ? "PASS " : "FAIL ") << label << '\n';
  }

  void note(const std::string& line) { *log_ << line << '\n'; }

  int finish() {
    std::ostream& s = *log_;
    if (checks_ == 0) {
      s << command_ << ": 0 checks (vacuous)\n";
      emit({{"record", "summary"}, {"checks", 0}, {"vacuous", true}});
      return 0;
    }
    s << command_ << ": " << checks_ - failing_.size() << "/" << checks_ << " passed\n";
    for (const auto& f : failing_) s << "  failing: " << f << '\n';
    emit({{"record", "summary"}, {"checks", checks_}, {"failed", failing_}, {"vacuous", false}});
    return failing_.empty() ? 0 : 1;
  }

 private:
  std::string command_;
  std::unique_ptr<std::ofstream> file_;
  std::ostream* out_ = nullptr;
  std::ostream* log_ = &std::cout;
  std::size_t checks_ = 0;
  std::vector<std::string> failing_;
};

std::string fmt(double v, int prec = 3) {
  std::ostringstream os;
  os.precision(prec);
  os << v;
  return os.str();
}

// ---- config files -------------------------------------------------------------

std::map<std::string, std::string> read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw BadConfig("cannot read config file " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw BadConfig(path + ":" + std::to_string(lineno) + ": expected key = value");
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return kv;
}

// Values from the file fill options not given on the command line.
void apply_config(CLI::App* sub, const std::map<std::string, std::string>& kv) {
  for (const auto& [key, value] : kv) {
    CLI::Option* o = sub->get_option_no_throw("--" + key);
    if (!o || key == "config") throw BadConfig("unknown config key '" + key + "' for " + sub->get_name());
    if (o->count() > 0) continue;
    try {
      if (o->get_expected_max() > 1) {
        for (const auto& piece : CLI::detail::split(value, ',')) o->add_result(piece);
      } else {
        o->add_result(value);
      }
      o->run_callback();
    } catch (const CLI::Error& e) {
      throw BadConfig("config key '" + key + "': " + e.what());
    }
  }
}

json effective_config(const CLI::App* sub) {
  json j = json::object();
  for (const CLI::Option* o : sub->get_options()) {
    const std::string name = o->get_single_name();
    if (name.empty() || name == "help" || name == "config") continue;
    if (o->count() > 0) {
      const auto& r = o->results();
      std::string s;
      for (std::size_t i = 0; i < r.size(); ++i) s += (i ? "," : "") + r[i];
      j[name] = s;
    } else {
      j[name] = o->get_default_str();
    }
  }
  return j;
}

// ---- shared inputs --------------------------------------------------------------

struct Sym2Delta {
  std::vector<Newform> delta;
  SymSquareForm F;
};

Sym2Delta sym2_delta(std::int64_t n_max) {
  Sym2Delta s;
  s.delta = eigenforms(12, n_max, EigenformOptions{std::nullopt, false});
  s.F = make_symsq(s.delta.at(0), n_max);
  return s;
}

json identity_row(const IdentityReport& r, double tol) {
  json j = to_json(r);
  j["tolerance"] = tol;
  return j;
}

// ---- subcommands ------------------------------------------------------------------

struct KloostermanArgs {
  std::string mode = "batch";
  std::int64_t m = 1, n = 1, c = 1;
  std::size_t count = 10000;
  std::int64_t c_max = 10000;
  std::uint64_t seed = 1;
};

void run_kloosterman(const KloostermanArgs& a, Run& run) {
  if (a.mode == "single") {
    const double s = kloosterman_real(a.m, a.n, a.c);
    const double w = weil_bound(a.m, a.n, a.c);
    run.check(std::abs(s) <= w + 1e-7, "S(" + std::to_string(a.m) + "," + std::to_string(a.n) + ";" + std::to_string(a.c) + ") = " + fmt(s, 12) + " within Weil bound " + fmt(w, 6),
              {{"m", a.m}, {"n", a.n}, {"c", a.c}, {"value", s}, {"weil_bound", w}});
  } else if (a.mode == "batch") {
    const auto r = kloosterman_properties(a.count, a.c_max, a.seed);
    std::map<std::string, int> bad;
    for (const auto& v : r.violations) {
      ++bad[v.property];
      run.emit({{"record", "violation"}, {"m", v.m}, {"n", v.n}, {"c", v.c}, {"property", v.property}, {"detail", v.detail}});
    }
    const json base = {{"tuples", r.tuples}, {"c_max", a.c_max}, {"seed", a.seed}};
    json w = base; w["max_weil_ratio"] = r.max_weil_ratio;
    run.check(bad["weil"] == 0, "Weil bound on " + std::to_string(r.tuples) + " tuples (max ratio " + fmt(r.max_weil_ratio) + ")", w);
    json s = base; s["max_gap"] = r.max_symmetry_gap;
    run.check(bad["symmetry"] == 0, "symmetry (max gap " + fmt(r.max_symmetry_gap) + ")", s);
    json c = base; c["max_gap_over_c"] = r.max_crt_gap;
    run.check(bad["crt"] == 0, "CRT multiplicativity (max gap/c " + fmt(r.max_crt_gap) + ")", c);
  } else if (a.mode == "reciprocity") {
    const auto r = reciprocity_check(a.count, a.seed);
    for (const auto& t : r.failing) run.emit({{"record", "violation"}, {"tuple", t}});
    run.check(r.violations == 0, "reciprocity identity on " + std::to_string(r.tuples) + " coprime tuples",
              {{"tuples", r.tuples}, {"violations", r.violations}, {"seed", a.seed}});
  } else {
    throw BadConfig("kloosterman: mode must be single, batch or reciprocity");
  }
}

struct PeterssonArgs {
  std::vector<int> k{12};
  std::int64_t m = 0, n = 0;
  std::int64_t mn_max = 50;
  double tol = 1e-8;
};

void run_petersson(const PeterssonArgs& a, Run& run) {
  for (int k : a.k) {
    if (a.m > 0 && a.n > 0) {
      const std::int64_t cmax = petersson_cmax(k, a.m, a.n, 1e-12);
      const auto r = petersson_two_sided(k, a.m, a.n, cmax);
      run.check(r.pass(a.tol), "petersson k=" + std::to_string(k) + " m=" + std::to_string(a.m) + " n=" + std::to_string(a.n) + " rel_gap " + fmt(r.rel_gap), identity_row(r, a.tol));
      continue;
    }
    KloostermanCache cache;
    const auto grid = petersson_grid(k, a.mn_max, 1e-12, &cache);
    std::size_t bad = 0;
    double worst = 0.0;
    for (const auto& r : grid) {
      json row = identity_row(r, a.tol);
      row["record"] = "tuple";
      row["pass"] = r.pass(a.tol);
      run.emit(row);
      if (!r.pass(a.tol)) ++bad;
      worst = std::max(worst, r.rel_gap);
    }
    run.check(bad == 0, "petersson grid k=" + std::to_string(k) + " (" + std::to_string(grid.size()) + " pairs, worst rel_gap " + fmt(worst) + ")",
              {{"k", k}, {"pairs", grid.size()}, {"failed", bad}, {"worst_rel_gap", worst}, {"tolerance", a.tol}});
  }
}

struct VoronoiArgs {
  std::int64_t c_max = 10, m_max = 3;
  std::vector<double> X{50, 200};
  std::int64_t n_max = 2000000;
  double sharpness = 8.0;
  double tol = 1e-5;
  double branch_tol = 1e-8;
};

void run_voronoi(const VoronoiArgs& a, Run& run) {
  if (a.c_max < 1 || a.m_max < 1 || a.X.empty()) return;
  const Sym2Delta s = sym2_delta(a.n_max);
  const TestFunction w = TestFunction::bump(0.5, 2.5, a.sharpness);
  const OmegaTable table(w, s.F.alpha);
  std::size_t bad = 0, bad_branch = 0, tuples = 0;
  double worst = 0.0, worst_branch = 0.0;
  for (double X : a.X)
    for (std::int64_t c = 1; c <= a.c_max; ++c)
      for (std::int64_t m = 1; m <= a.m_max; ++m)
        for (std::int64_t u = 1; u <= c; ++u) {
          if (gcd(u, c) != 1) continue;
          const auto r = voronoi_two_sided(s.F, table, w, m, u, c, X, VoronoiBranch::unramified);
          const auto r2 = voronoi_two_sided(s.F, table, w, m, u, c, X, VoronoiBranch::ramified);
          const double agree = std::abs(r.rhs - r2.rhs) / std::max(std::abs(r.rhs), 1e-300);
          ++tuples;
          const bool ok = r.pass(a.tol), ok_b = agree <= a.branch_tol;
          bad += !ok;
          bad_branch += !ok_b;
          worst = std::max(worst, r.rel_gap);
          worst_branch = std::max(worst_branch, agree);
          json row = identity_row(r, a.tol);
          row["record"] = "tuple";
          row["branch_agreement"] = agree;
          row["pass"] = ok && ok_b;
          run.emit(row);
        }
  run.check(bad == 0, "voronoi two-sided on " + std::to_string(tuples) + " tuples (worst rel_gap " + fmt(worst) + ")",
            {{"tuples", tuples}, {"failed", bad}, {"worst_rel_gap", worst}, {"tolerance", a.tol}});
  run.check(bad_branch == 0, "voronoi branch agreement (worst " + fmt(worst_branch) + ")",
            {{"tuples", tuples}, {"failed", bad_branch}, {"worst", worst_branch}, {"tolerance", a.branch_tol}});
}

struct BesselArgs {
  std::string mode = "twisted";
  std::vector<double> K{50, 100, 200};
  double ratio = 0.25;
  int iota = 0;
  int points = 20;
  double min_exponent = 3.5;
};

void run_bessel(const BesselArgs& a, Run& run) {
  if (a.K.size() < 2) throw BadConfig("bessel-avg: need at least two K values");
  const BesselAverageMode mode = a.mode == "mod4" ? BesselAverageMode::mod4 : BesselAverageMode::even_twisted;
  if (a.mode != "mod4" && a.mode != "twisted") throw BadConfig("bessel-avg: mode must be twisted or mod4");
  const auto d = bessel_decay(TestFunction::bump(), a.K, a.ratio, mode, a.iota, a.points);
  for (std::size_t i = 0; i < d.K.size(); ++i)
    run.emit({{"record", "tuple"}, {"K", d.K[i]}, {"x_over_K2", a.ratio}, {"max_residual", d.max_residual[i]}});
  run.check(d.exponent >= a.min_exponent, "averaged Bessel (" + a.mode + ") decay exponent " + fmt(d.exponent) + " >= " + fmt(a.min_exponent),
            {{"mode", a.mode}, {"iota", a.iota}, {"exponent", d.exponent}, {"min_exponent", a.min_exponent}, {"x_over_K2", a.ratio}});
}

struct BilinearArgs {
  std::string lemma = "2.7";
  int h_count = 8;
  std::vector<std::int64_t> q{101, 404, 1616};
  double X = 200, Y = 200;
  double Z = 1, Z1 = 1, Z2 = 1;
  double max_slope = 0.8;
  std::int64_t n_max = 20000;
};

void run_bilinear(const BilinearArgs& a, Run& run) {
  if (a.lemma != "2.7" && a.lemma != "2.8") throw BadConfig("bilinear: lemma must be 2.7 or 2.8");
  const BilinearMethod method = a.lemma == "2.7" ? BilinearMethod::kloosterman_shift : BilinearMethod::poisson;
  const Sym2Delta s = sym2_delta(std::max<std::int64_t>(a.n_max, static_cast<std::int64_t>(3 * a.Y) + 1));
  const TestFunction w = TestFunction::bump();
  std::vector<double> qs, rms;
  for (std::int64_t q : a.q) {
    double sum = 0.0, worst = 0.0;
    int used = 0;
    for (std::int64_t h = 1; h <= a.h_count; ++h) {
      if (method == BilinearMethod::poisson && gcd(h, q) != 1) continue;
      const auto r = bilinear_form(s.F, h, q, a.X, a.Y, w, w, method, {a.Z, a.Z1, a.Z2});
      json row = to_json(r);
      row["record"] = "tuple";
      row["h"] = h;
      row["q"] = q;
      run.emit(row);
      sum += r.ratio * r.ratio;
      worst = std::max(worst, r.ratio);
      ++used;
    }
    if (used == 0) continue;
    qs.push_back(static_cast<double>(q));
    rms.push_back(std::sqrt(sum / used));
    run.note("q=" + std::to_string(q) + " rms ratio " + fmt(rms.back()) + " max ratio " + fmt(worst));
  }
  if (qs.size() >= 2) {
    const double slope = loglog_slope(qs, rms);
    run.check(slope <= a.max_slope, "bilinear (" + a.lemma + ") ratio slope in q " + fmt(slope) + " <= " + fmt(a.max_slope),
              {{"slope", slope}, {"q", qs}, {"rms_ratio", rms}, {"max_slope", a.max_slope}});
  }
}

struct LvalueArgs {
  int k = 24;
  int f_index = 0;
  std::string kind = "both";
  bool printed_sign = false;
  double min_value = -1e-6;
};

void run_lvalue(const LvalueArgs& a, Run& run) {
  CentralValueOptions opt;
  opt.printed_sign = a.printed_sign;
  const Sym2Delta s = sym2_delta(200000);
  CentralValueCache cache(s.F, opt);
  const auto& forms = cache.forms(a.k);
  if (forms.empty()) {
    run.note("no cusp forms of weight " + std::to_string(a.k));
    return;
  }
  if (a.f_index < 0 || a.f_index >= static_cast<int>(forms.size())) throw BadConfig("lvalue: f-index out of range");
  json row = {{"record", "lvalue"}, {"k", a.k}, {"f_index", a.f_index}};
  if (a.kind == "gl2" || a.kind == "both") {
    const auto cv = central_value_gl2(forms[a.f_index], opt);
    row["L_gl2"] = cv.value;
    row["gl2_root_number"] = cv.root_number;
    row["gl2_length"] = cv.length;
    run.note("L(1/2, f) = " + fmt(cv.value, 15));
  }
  if (a.kind == "rs" || a.kind == "both") {
    const auto cv = central_value_rs(s.F, forms[a.f_index], opt);
    row["L_rs"] = cv.value;
    row["rs_root_number"] = cv.root_number;
    row["rs_length"] = cv.length;
    run.note("L(1/2, F x f) = " + fmt(cv.value, 15) + " (sign " + fmt(cv.root_number) + ")");
    run.emit(row);
    run.check(cv.value >= a.min_value, "L(1/2, F x f) >= " + fmt(a.min_value),
              {{"k", a.k}, {"f_index", a.f_index}, {"value", cv.value}, {"min_value", a.min_value}});
    return;
  }
  if (a.kind != "gl2") throw BadConfig("lvalue: kind must be rs, gl2 or both");
  run.emit(row);
}

struct MomentArgs {
  double K = 20;
  std::string theorem = "1.4";
  std::int64_t ell = 1;
  std::string csv;
  bool diagnostics = false;
  double Y_exponent = 2.9;
  bool printed_sign = false;
};

void run_moment(const MomentArgs& a, Run& run) {
  if (a.theorem != "1.3" && a.theorem != "1.4") throw BadConfig("moment: theorem must be 1.3 or 1.4");
  const Sym2Delta s = sym2_delta(200000);
  MomentOptions opt;
  opt.central.printed_sign = a.printed_sign;
  opt.diagnostics = a.diagnostics;
  opt.Y_exponent = a.Y_exponent;
  const auto r = weight_moment(s.F, a.K, TestFunction::bump(), a.ell, a.theorem == "1.3", opt);
  json row = to_json(r);
  row["record"] = "moment";
  run.emit(row);
  if (!a.csv.empty()) {
    std::ofstream os(a.csv);
    if (!os) throw BadConfig("cannot open csv file " + a.csv);
    write_csv(os, r);
  }
  run.note("moment " + fmt(r.moment, 10) + "  main_term " + fmt(r.main_term, 10) + "  gap " + fmt(r.gap, 6) +
           "  diagonal " + fmt(r.diagonal_sum, 10));
  std::size_t leaks = 0;
  for (const auto& e : r.per_weight)
    if (e.root_number == -1.0 && e.L_rs != 0.0) ++leaks;
  run.check(leaks == 0, "sign -1 weights contribute exactly 0", {{"entries", r.per_weight.size()}, {"nonzero", leaks}});
  const double resum = r.resum();
  run.check(std::abs(resum - r.moment) <= 1e-12 * std::max(1.0, std::abs(r.moment)), "per-weight breakdown sums to the moment",
            {{"moment", r.moment}, {"resum", resum}, {"tolerance", 1e-12}});
}

struct AmplifierArgs {
  std::vector<std::int64_t> L{5, 11, 23};
  int f0_weight = 12;
  int f0_index = 0;
  int f_weight = 24;
  double tol = 1e-10;
};

void run_amplifier(const AmplifierArgs& a, Run& run) {
  std::int64_t top = 2;
  for (auto L : a.L) top = std::max(top, 2 * L);
  const std::int64_t n_max = std::max<std::int64_t>(2000, top + 1);
  const auto f0s = eigenforms(a.f0_weight, n_max, EigenformOptions{std::nullopt, false});
  if (a.f0_index < 0 || a.f0_index >= static_cast<int>(f0s.size())) throw BadConfig("amplifier: f0 not available");
  const Newform& f0 = f0s[a.f0_index];
  std::vector<Newform> others = eigenforms(a.f_weight, n_max, EigenformOptions{std::nullopt, false});
  others.insert(others.begin(), f0);
  for (std::int64_t L : a.L) {
    const Amplifier amp(f0, L);
    for (const auto& f : others) {
      const double v = amp.evaluate(f);
      const auto e = amp.expand(f);
      const std::string who = "k=" + std::to_string(f.weight) + " f" + std::to_string(f.index);
      run.check(std::abs(v - e.value) <= a.tol * std::max(1.0, std::abs(v)) && v >= 0,
                "amplifier L=" + std::to_string(L) + " " + who + " expansion gap " + fmt(std::abs(v - e.value)),
                {{"L", L}, {"weight", f.weight}, {"f_index", f.index}, {"direct", v}, {"expanded", e.value}, {"tolerance", a.tol}});
    }
    const double v0 = amp.evaluate(f0);
    run.check(v0 >= amp.self_lower_bound(), "amplifier L=" + std::to_string(L) + " self value " + fmt(v0, 6) + " >= |P|^2/2 = " + fmt(amp.self_lower_bound(), 6),
              {{"L", L}, {"primes", amp.primes()}, {"value", v0}, {"lower_bound", amp.self_lower_bound()}});
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical checks of trace formulas, Voronoi summation and weight-aspect moments"};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();
  std::string config, output;
  int threads = 1;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", config, "key = value file; command-line flags take precedence");
    sub->add_option("--output", output, "JSON-lines output ('-' for stdout)");
    sub->add_option("--threads", threads, "worker count (results do not depend on it)");
  };

  KloostermanArgs ka;
  auto* k_sub = app.add_subcommand("kloosterman", "Kloosterman sums: single value, property batch, reciprocity");
  common(k_sub);
  k_sub->add_option("--mode", ka.mode, "single | batch | reciprocity");
  k_sub->add_option("--m", ka.m);
  k_sub->add_option("--n", ka.n);
  k_sub->add_option("--c", ka.c);
  k_sub->add_option("--count", ka.count);
  k_sub->add_option("--c-max", ka.c_max);
  k_sub->add_option("--seed", ka.seed);

  PeterssonArgs pa;
  auto* p_sub = app.add_subcommand("petersson", "two-sided Petersson formula");
  common(p_sub);
  p_sub->add_option("--k", pa.k)->delimiter(',');
  p_sub->add_option("--m", pa.m, "single pair (with --n); otherwise the grid");
  p_sub->add_option("--n", pa.n);
  p_sub->add_option("--mn-max", pa.mn_max);
  p_sub->add_option("--tol", pa.tol);

  VoronoiArgs va;
  auto* v_sub = app.add_subcommand("voronoi", "two-sided GL(3) Voronoi formula for sym^2 Delta");
  common(v_sub);
  v_sub->add_option("--c-max", va.c_max);
  v_sub->add_option("--m-max", va.m_max);
  v_sub->add_option("--X", va.X)->delimiter(',');
  v_sub->add_option("--n-max", va.n_max);
  v_sub->add_option("--sharpness", va.sharpness);
  v_sub->add_option("--tol", va.tol);
  v_sub->add_option("--branch-tol", va.branch_tol);

  BesselArgs ba;
  auto* b_sub = app.add_subcommand("bessel-avg", "weight-averaged Bessel sums against their asymptotics");
  common(b_sub);
  b_sub->add_option("--mode", ba.mode, "twisted | mod4");
  b_sub->add_option("--K", ba.K)->delimiter(',');
  b_sub->add_option("--ratio", ba.ratio, "x / K^2");
  b_sub->add_option("--iota", ba.iota);
  b_sub->add_option("--points", ba.points);
  b_sub->add_option("--min-exponent", ba.min_exponent);

  BilinearArgs bla;
  auto* bl_sub = app.add_subcommand("bilinear", "bilinear Kloosterman forms against their bounds");
  common(bl_sub);
  bl_sub->add_option("--lemma", bla.lemma, "2.7 (shift) | 2.8 (Poisson)");
  bl_sub->add_option("--h-count", bla.h_count);
  bl_sub->add_option("--q", bla.q)->delimiter(',');
  bl_sub->add_option("--X", bla.X);
  bl_sub->add_option("--Y", bla.Y);
  bl_sub->add_option("--Z", bla.Z);
  bl_sub->add_option("--Z1", bla.Z1);
  bl_sub->add_option("--Z2", bla.Z2);
  bl_sub->add_option("--max-slope", bla.max_slope);

  LvalueArgs la;
  auto* l_sub = app.add_subcommand("lvalue", "central values L(1/2, f) and L(1/2, sym^2 Delta x f)");
  common(l_sub);
  l_sub->add_option("--k", la.k);
  l_sub->add_option("--f-index", la.f_index);
  l_sub->add_option("--kind", la.kind, "rs | gl2 | both");
  l_sub->add_flag("--printed-sign", la.printed_sign, "use i^k as the sign for every k");
  l_sub->add_option("--min-value", la.min_value);

  MomentArgs ma;
  auto* m_sub = app.add_subcommand("moment", "weight-aspect first moment");
  common(m_sub);
  m_sub->add_option("--K", ma.K);
  m_sub->add_option("--theorem", ma.theorem, "1.4 (L(1/2, F x f)) | 1.3 (times L(1/2, f))");
  m_sub->add_option("--ell", ma.ell);
  m_sub->add_option("--csv", ma.csv, "per-form table");
  m_sub->add_flag("--diagnostics", ma.diagnostics, "also evaluate T, T-hat and the error bounds");
  m_sub->add_option("--Y-exponent", ma.Y_exponent);
  m_sub->add_flag("--printed-sign", ma.printed_sign);

  AmplifierArgs aa;
  auto* a_sub = app.add_subcommand("amplifier", "amplifier expansion and self-amplification");
  common(a_sub);
  a_sub->add_option("--L", aa.L)->delimiter(',');
  a_sub->add_option("--f0-weight", aa.f0_weight);
  a_sub->add_option("--f0-index", aa.f0_index);
  a_sub->add_option("--f-weight", aa.f_weight);
  a_sub->add_option("--tol", aa.tol);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  CLI::App* sub = app.get_subcommands().front();
  try {
    if (!config.empty()) apply_config(sub, read_config(config));
    Run run(sub->get_name(), output, effective_config(sub));
    const std::string name = sub->get_name();
    if (name == "kloosterman") run_kloosterman(ka, run);
    else if (name == "petersson") run_petersson(pa, run);
    else if (name == "voronoi") run_voronoi(va, run);
    else if (name == "bessel-avg") run_bessel(ba, run);
    else if (name == "bilinear") run_bilinear(bla, run);
    else if (name == "lvalue") run_lvalue(la, run);
    else if (name == "moment") run_moment(ma, run);
    else if (name == "amplifier") run_amplifier(aa, run);
    return run.finish();
  } catch (const BadConfig& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const PreconditionError& e) {
    std::cerr << "invalid parameters: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}

#include "momentlab/report.hpp"

#include <iomanip>
#include <ostream>

namespace momentlab {

namespace {

nlohmann::json complex_json(std::complex<double> z) { return {z.real(), z.imag()}; }

}  // namespace

nlohmann::json to_json(const IdentityReport& r) {
  nlohmann::json j;
  j["lhs"] = complex_json(r.lhs);
  j["rhs"] = complex_json(r.rhs);
  j["abs_gap"] = r.abs_gap;
  j["rel_gap"] = r.rel_gap;
  j["truncation_bound"] = r.truncation_bound;
  j["quadrature_error"] = r.quadrature_error;
  j["parameters"] = r.parameters;
  return j;
}

nlohmann::json to_json(const BilinearBoundReport& r) {
  return {{"lhs_value", r.lhs_value},
          {"stated_bound", r.stated_bound},
          {"ratio", r.ratio},
          {"regime", r.regime}};
}

nlohmann::json to_json(const MomentReport& r) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& e : r.per_weight)
    rows.push_back({{"k", e.k},
                    {"f_index", e.f_index},
                    {"lambda_l", e.lambda_l},
                    {"L_gl2", e.L_gl2},
                    {"L_rs", e.L_rs},
                    {"root_number", e.root_number},
                    {"weight", e.weight},
                    {"contribution", e.contribution}});
  return {{"K", r.K},
          {"ell", r.ell},
          {"include_gl2", r.include_gl2},
          {"moment", r.moment},
          {"main_term", r.main_term},
          {"diagonal_sum", r.diagonal_sum},
          {"gap", r.gap},
          {"diag_T", r.diag_T},
          {"diag_That", r.diag_That},
          {"err_flat_bound", r.err_flat_bound},
          {"err_natural_bound", r.err_natural_bound},
          {"Y", r.Y},
          {"per_weight", rows}};
}

nlohmann::json to_json(const OffDiagonal& r) {
  return {{"T", complex_json(r.T)},
          {"T_hat", r.T_hat},
          {"err_flat", r.err_flat},
          {"err_natural", r.err_natural},
          {"T_vacuous", r.T_vacuous},
          {"T_c_max", r.T_c_max},
          {"That_c_range", {r.That_c_min, r.That_c_max}},
          {"n_cut", r.n_cut},
          {"T_bound", r.T_bound},
          {"T_ratio", r.T_ratio},
          {"k_ref", r.k_ref}};
}

nlohmann::json to_json(const AmplifierExpansion& e) {
  nlohmann::json c = nlohmann::json::object();
  for (const auto& [n, v] : e.coefficients) c[std::to_string(n)] = v;
  return {{"constant", e.constant}, {"value", e.value}, {"coefficients", c}};
}

void write_csv(std::ostream& os, const MomentReport& r) {
  const auto old = os.precision(17);
  os << "k,f_index,lambda_l,L_gl2,L_rs,weight\n";
  for (const auto& e : r.per_weight)
    os << e.k << ',' << e.f_index << ',' << e.lambda_l << ',' << e.L_gl2 << ',' << e.L_rs
       << ',' << e.weight << '\n';
  os.precision(old);
}

void JsonLines::write(const nlohmann::json& j) { *os_ << j.dump() << '\n'; }

}  // namespace momentlab

#include "funceq/report_io.hpp"

#include <cmath>

#include "json.hpp"

#include "funceq/expr.hpp"

namespace funceq {

namespace {

using ordered_json = nlohmann::ordered_json;

const char* yesno(bool b) { return b ? "yes" : "no"; }

// JSON has no representation for non-finite numbers; encode them as strings
// so reports stay lossless.
ordered_json json_number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

ordered_json json_numbers(const std::vector<double>& vs) {
  ordered_json arr = ordered_json::array();
  for (double v : vs) arr.push_back(json_number(v));
  return arr;
}

bool usable_hint(const SolveResult& r) {
  return r.c_hint.has_value() && std::isfinite(*r.c_hint) && *r.c_hint >= 0.0 &&
         *r.c_hint < 1.0;
}

}  // namespace

std::string render_text(const HypothesisReport& r) {
  std::string out;
  out += "K = " + std::to_string(r.K) + "\n";
  out += "L = " + std::to_string(r.L) + "\n";
  out += "C = " + format_double(r.C_est) + "\n";
  out += "contraction (C < 1): " + std::string(yesno(r.holds_C)) + "\n";
  out += "strict nodewise bound: " + std::string(yesno(r.holds_C1)) + "\n";
  out += "sum of integrals of |g_n| = " + format_double(r.sum_int_gn) + "\n";
  out += "coefficients sum to 1: " + std::string(yesno(r.sum_gn_is_one)) + "\n";
  if (r.degenerate_series) out += "degenerate series: yes\n";
  out += "per-map certificates:\n";
  for (const auto& c : r.per_map) {
    out += "  map " + std::to_string(c.m) + ": C_m = " + format_double(c.C_m) +
           ", inf ratio = " + format_double(c.inf_ratio) + " (at k = " +
           std::to_string(c.min_k) + "), alpha = " + format_double(c.alpha) +
           ", witness: " + yesno(c.witness) + "\n";
  }
  for (const auto& n : r.notes) out += "note: " + n + "\n";
  return out;
}

std::string render_text(const SolveResult& r) {
  std::string out;
  out += "status = " + std::string(to_string(r.status)) + "\n";
  out += "m_stop = " + std::to_string(r.m_stop) + "\n";
  out += "terms = " + std::to_string(r.term_norms.size()) + "\n";
  out += "|g| = " + format_double(r.inhom_norm) + "\n";
  out += "|solution| = " +
         format_double(r.partial_norms.empty() ? 0.0 : r.partial_norms.back()) + "\n";
  out += "residual = " + format_double(r.residual_l1) + "\n";
  if (r.c_hint) out += "C hint = " + format_double(*r.c_hint) + "\n";
  if (r.apriori_bound) out += "tail bound = " + format_double(*r.apriori_bound) + "\n";
  out += "detail: " + r.detail + "\n";
  return out;
}

namespace {

ordered_json hypothesis_json(const HypothesisReport& r) {
  ordered_json j;
  j["K"] = r.K;
  j["L"] = r.L;
  j["C_est"] = json_number(r.C_est);
  j["holds_C"] = r.holds_C;
  j["holds_C1"] = r.holds_C1;
  j["sum_int_gn"] = json_number(r.sum_int_gn);
  j["sum_gn_is_one"] = r.sum_gn_is_one;
  j["degenerate_series"] = r.degenerate_series;
  ordered_json maps = ordered_json::array();
  for (const auto& c : r.per_map) {
    ordered_json m;
    m["m"] = c.m;
    m["C_m"] = json_number(c.C_m);
    m["inf_ratio"] = json_number(c.inf_ratio);
    m["min_k"] = c.min_k;
    m["alpha"] = json_number(c.alpha);
    m["witness"] = c.witness;
    maps.push_back(std::move(m));
  }
  j["per_map"] = std::move(maps);
  j["notes"] = r.notes;
  return j;
}

ordered_json solve_json(const SolveResult& r) {
  ordered_json j;
  j["status"] = to_string(r.status);
  j["m_stop"] = r.m_stop;
  j["term_norms"] = json_numbers(r.term_norms);
  j["partial_norms"] = json_numbers(r.partial_norms);
  j["c_hint"] = r.c_hint ? json_number(*r.c_hint) : ordered_json(nullptr);
  j["apriori_bound"] = r.apriori_bound ? json_number(*r.apriori_bound) : ordered_json(nullptr);
  j["inhom_norm"] = json_number(r.inhom_norm);
  j["residual_l1"] = json_number(r.residual_l1);
  j["detail"] = r.detail;
  ordered_json sol;
  sol["resolution"] = r.solution.resolution();
  ordered_json samples = ordered_json::array();
  for (double v : r.solution.samples()) samples.push_back(json_number(v));
  sol["samples"] = std::move(samples);
  j["solution"] = std::move(sol);
  return j;
}

ordered_json row_json(const CorpusRunRow& row) {
  ordered_json j;
  j["name"] = row.name;
  ordered_json params;
  for (const auto& [k, v] : row.params) params[k] = json_number(v);
  j["params"] = std::move(params);
  j["status"] = to_string(row.status);
  j["reference_error"] =
      row.reference_error ? json_number(*row.reference_error) : ordered_json(nullptr);
  j["ok"] = row.ok;
  j["detail"] = row.detail;
  return j;
}

}  // namespace

std::string to_json_text(const HypothesisReport& r, int indent) {
  return hypothesis_json(r).dump(indent) + "\n";
}

std::string to_json_text(const SolveResult& r, int indent) {
  return solve_json(r).dump(indent) + "\n";
}

std::string to_json_text(const std::vector<CorpusRunRow>& rows, int indent) {
  ordered_json arr = ordered_json::array();
  for (const auto& row : rows) arr.push_back(row_json(row));
  return arr.dump(indent) + "\n";
}

std::string trace_csv(const SolveResult& r) {
  std::string out = "k,term_norm,partial_norm,apriori_bound\n";
  const bool with_bound = usable_hint(r);
  for (std::size_t k = 0; k < r.term_norms.size(); ++k) {
    out += std::to_string(k);
    out += ',';
    out += format_double(r.term_norms[k]);
    out += ',';
    out += format_double(k < r.partial_norms.size() ? r.partial_norms[k] : 0.0);
    out += ',';
    if (with_bound) {
      out += format_double(apriori_error(*r.c_hint, static_cast<int>(k), r.inhom_norm));
    }
    out += '\n';
  }
  return out;
}

std::string solution_csv(const GridFunction& phi) {
  std::string out = "x,value\n";
  const int m = phi.resolution();
  for (int i = 0; i <= m; ++i) {
    out += format_double(static_cast<double>(i) / m);
    out += ',';
    out += format_double(phi[i]);
    out += '\n';
  }
  return out;
}

}  // namespace funceq

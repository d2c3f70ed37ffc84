// Command-line front end: spec-file checks and solves, change-of-variables
// verification, and the built-in example corpus.
//
// Exit codes
//   check   0 contraction, 2 per-map witness only, 3 neither
//   solve   0 converged/finite, 4 divergent, 5 iteration cap
//   verify  0 reference satisfies the equation (residual <= 1e-3), 1 otherwise
//   cov     0 identity holds to 1e-6, 1 mismatch, 65 negative density
//   corpus  0 all entries pass, 1 otherwise
//   64      usage or input errors; 1 internal errors

#include <charconv>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "funceq/corpus.hpp"
#include "funceq/errors.hpp"
#include "funceq/hypotheses.hpp"
#include "funceq/report_io.hpp"
#include "funceq/solver.hpp"
#include "funceq/spec_file.hpp"

namespace {

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << content)) {
    throw std::runtime_error("cannot write " + path);
  }
}

std::vector<double> parse_real_list(const std::string& text, const std::string& flag) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = text.find(',', pos);
    const std::string tok =
        text.substr(pos, comma == std::string::npos ? comma : comma - pos);
    double v = 0.0;
    const auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || p != tok.data() + tok.size()) {
      throw CLI::ValidationError(flag, "'" + tok + "' is not a real number");
    }
    out.push_back(v);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

std::string params_text(const funceq::Params& params) {
  if (params.empty()) return "-";
  std::string out;
  for (const auto& [key, value] : params) {
    if (!out.empty()) out += ' ';
    out += key + "=" + funceq::format_double(value);
  }
  return out;
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() >= width) return s + " ";
  s.append(width - s.size(), ' ');
  return s;
}

int run_check(const std::string& path, bool as_json) {
  const funceq::LoadedSpec loaded = funceq::load_spec_file(path);
  const funceq::HypothesisReport report = funceq::analyze_hypotheses(loaded.equation);
  std::cout << (as_json ? funceq::to_json_text(report) : funceq::render_text(report));
  if (report.holds_C) return 0;
  for (const auto& c : report.per_map) {
    if (c.witness) return 2;
  }
  return 3;
}

int run_solve(const std::string& path, double tol, int max_iter, const std::string& trace_path,
              const std::string& solution_path, bool as_json) {
  const funceq::LoadedSpec loaded = funceq::load_spec_file(path);
  const funceq::SolveResult result =
      funceq::neumann_solve(loaded.equation, tol, max_iter, loaded.c_hint);
  std::cout << (as_json ? funceq::to_json_text(result) : funceq::render_text(result));
  if (!trace_path.empty()) write_file(trace_path, funceq::trace_csv(result));
  if (!solution_path.empty()) write_file(solution_path, funceq::solution_csv(result.solution));
  switch (result.status) {
    case funceq::SolveStatus::Converged:
    case funceq::SolveStatus::FiniteSum:
      return 0;
    case funceq::SolveStatus::DivergentOscillating:
    case funceq::SolveStatus::DivergentGrowing:
      return 4;
    case funceq::SolveStatus::MaxIterReached:
      return 5;
  }
  return 5;
}

int run_verify(const std::string& path, const std::string& reference, double tol,
               int max_iter) {
  const funceq::LoadedSpec loaded = funceq::load_spec_file(path);
  const funceq::Expr ref = funceq::Expr::parse(reference);
  const funceq::GridFunction sampled =
      funceq::GridFunction::sample(ref, loaded.equation.resolution());
  const double res = funceq::residual(loaded.equation, sampled);
  std::cout << "residual = " << funceq::format_double(res) << "\n";
  const funceq::SolveResult solve =
      funceq::neumann_solve(loaded.equation, tol, max_iter, loaded.c_hint);
  std::cout << "solver status = " << funceq::to_string(solve.status) << "\n";
  if (solve.status == funceq::SolveStatus::Converged ||
      solve.status == funceq::SolveStatus::FiniteSum) {
    std::cout << "l1 distance = "
              << funceq::format_double(funceq::l1_distance(solve.solution, sampled)) << "\n";
  }
  return res <= 1e-3 ? 0 : 1;
}

int run_cov(const std::string& f_text, const std::string& h_text,
            const std::string& breakpoints_text, const std::string& interval_text,
            int resolution) {
  std::vector<double> breakpoints;
  if (!breakpoints_text.empty()) {
    breakpoints = parse_real_list(breakpoints_text, "--breakpoints");
  }
  funceq::Interval window{0.0, 1.0};
  if (!interval_text.empty()) {
    const auto ab = parse_real_list(interval_text, "--interval");
    if (ab.size() != 2 || !(ab[0] >= 0.0) || !(ab[0] < ab[1]) || !(ab[1] <= 1.0)) {
      throw CLI::ValidationError("--interval",
                                 "expected a,b with 0 <= a < b <= 1, got '" + interval_text +
                                     "'");
    }
    window = {ab[0], ab[1]};
  }
  const funceq::MapSpec f = funceq::MapSpec::make(funceq::Expr::parse(f_text), breakpoints);
  const funceq::Expr h = funceq::Expr::parse(h_text);
  funceq::CovCheck check{};
  try {
    check = funceq::verify_change_of_variables(f, h, window, resolution);
  } catch (const funceq::DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 65;
  }
  std::cout << "domain side = " << funceq::format_double(check.integral_over_domain) << "\n";
  std::cout << "range side  = " << funceq::format_double(check.integral_over_range) << "\n";
  std::cout << "|difference| = " << funceq::format_double(check.abs_difference()) << "\n";
  return check.abs_difference() <= 1e-6 ? 0 : 1;
}

int run_corpus_list() {
  for (const auto& e : funceq::corpus_entries()) {
    std::cout << e.name() << " (" << e.provenance() << "): " << e.summary() << "\n";
  }
  return 0;
}

int run_corpus(double tol, int max_iter, int resolution, double reference_shift,
               bool as_json) {
  const auto rows = funceq::run_corpus(tol, max_iter, resolution, reference_shift);
  bool all_ok = true;
  if (as_json) {
    std::cout << funceq::to_json_text(rows);
    for (const auto& r : rows) all_ok = all_ok && r.ok;
    return all_ok ? 0 : 1;
  }
  std::cout << pad("ENTRY", 10) << pad("PARAMS", 16) << pad("STATUS", 21)
            << pad("REF_ERROR", 13) << "RESULT\n";
  for (const auto& r : rows) {
    all_ok = all_ok && r.ok;
    std::cout << pad(r.name, 10) << pad(params_text(r.params), 16)
              << pad(funceq::to_string(r.status), 21)
              << pad(r.reference_error ? funceq::format_double(*r.reference_error) : "-", 13)
              << (r.ok ? "pass" : "FAIL: " + r.detail) << "\n";
  }
  return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"piecewise-substitution functional equation toolkit"};
  app.require_subcommand(1);

  auto* check = app.add_subcommand("check", "contraction hypotheses of a spec file");
  std::string check_path;
  bool check_json = false;
  check->add_option("path", check_path, "spec file")->required();
  check->add_flag("--json", check_json, "emit JSON instead of text");

  auto* solve = app.add_subcommand("solve", "sum the series for a spec file");
  std::string solve_path;
  double solve_tol = 1e-6;
  int solve_max_iter = 400;
  std::string trace_path;
  std::string solution_path;
  bool solve_json = false;
  solve->add_option("path", solve_path, "spec file")->required();
  solve->add_option("--tol", solve_tol, "L1 stopping tolerance")
      ->check(CLI::PositiveNumber);
  solve->add_option("--max-iter", solve_max_iter, "iteration cap")
      ->check(CLI::PositiveNumber);
  solve->add_option("--trace", trace_path, "write per-iteration CSV here");
  solve->add_option("--solution", solution_path, "write solution CSV here");
  solve->add_flag("--json", solve_json, "emit JSON instead of text");

  auto* verify = app.add_subcommand("verify", "residual of a closed-form candidate");
  std::string verify_path;
  std::string verify_reference;
  double verify_tol = 1e-6;
  int verify_max_iter = 400;
  verify->add_option("path", verify_path, "spec file")->required();
  verify->add_option("--reference", verify_reference, "candidate solution expression")
      ->required();
  verify->add_option("--tol", verify_tol, "solver tolerance")->check(CLI::PositiveNumber);
  verify->add_option("--max-iter", verify_max_iter, "solver iteration cap")
      ->check(CLI::PositiveNumber);

  auto* cov = app.add_subcommand("cov", "substitution identity check for one map");
  // --h is part of the documented interface; it needs the short help slot.
  cov->set_help_flag("--help", "print help");
  std::string cov_f;
  std::string cov_h;
  std::string cov_breakpoints;
  std::string cov_interval;
  int cov_resolution = 4096;
  cov->add_option("--f", cov_f, "map expression")->required();
  cov->add_option("--h", cov_h, "nonnegative density expression")->required();
  cov->add_option("--breakpoints", cov_breakpoints, "comma-separated map breakpoints");
  cov->add_option("--interval", cov_interval, "restrict to a,b inside [0,1]");
  cov->add_option("--resolution", cov_resolution, "quadrature resolution")
      ->check(CLI::Range(64, 1 << 22));

  auto* corpus = app.add_subcommand("corpus", "built-in example families");
  bool corpus_list = false;
  bool corpus_run = false;
  bool corpus_json = false;
  double corpus_tol = 1e-6;
  int corpus_max_iter = 400;
  int corpus_resolution = funceq::EquationSpec::kDefaultResolution;
  double corpus_shift = 0.0;
  corpus->add_flag("--list", corpus_list, "list entries");
  corpus->add_flag("--run", corpus_run, "solve every entry at defaults");
  corpus->add_flag("--json", corpus_json, "emit JSON instead of text");
  corpus->add_option("--tol", corpus_tol, "solver tolerance")->check(CLI::PositiveNumber);
  corpus->add_option("--max-iter", corpus_max_iter, "iteration cap")
      ->check(CLI::PositiveNumber);
  corpus->add_option("--resolution", corpus_resolution, "grid resolution")
      ->check(CLI::Range(16, 1 << 22));
  // Testing hook: offsets every reference so a wrong oracle is provably caught.
  corpus->add_option("--reference-shift", corpus_shift)->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 64;
  }

  try {
    if (check->parsed()) return run_check(check_path, check_json);
    if (solve->parsed()) {
      return run_solve(solve_path, solve_tol, solve_max_iter, trace_path, solution_path,
                       solve_json);
    }
    if (verify->parsed()) {
      return run_verify(verify_path, verify_reference, verify_tol, verify_max_iter);
    }
    if (cov->parsed()) {
      return run_cov(cov_f, cov_h, cov_breakpoints, cov_interval, cov_resolution);
    }
    if (corpus->parsed()) {
      if (corpus_list == corpus_run) {
        std::cerr << "error: pass exactly one of --list or --run\n";
        return 64;
      }
      if (corpus_list) return run_corpus_list();
      return run_corpus(corpus_tol, corpus_max_iter, corpus_resolution, corpus_shift,
                        corpus_json);
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 64;
  } catch (const funceq::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 64;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 64;
}

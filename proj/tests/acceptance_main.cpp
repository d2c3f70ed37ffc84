// Acceptance gate for the library: ten criteria, one [PASS]/[FAIL] line each,
// exit code equal to the number of failures. Everything runs at the desk
// scale used throughout: resolution 4096, tolerance 1e-6.

#include <cmath>
#include <functional>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "funceq/corpus.hpp"
#include "funceq/hypotheses.hpp"
#include "funceq/solver.hpp"

#include "test_support.hpp"

namespace {

constexpr int kResolution = 4096;
constexpr double kTol = 1e-6;
constexpr int kMaxIter = 400;

bool expect(bool ok, const std::string& what) {
  if (!ok) std::cerr << "  failed: " << what << "\n";
  return ok;
}

bool expect_near(double got, double want, double tol, const std::string& what) {
  return expect(std::fabs(got - want) <= tol,
                what + " (got " + funceq::format_double(got) + ", want " +
                    funceq::format_double(want) + " within " + funceq::format_double(tol) + ")");
}

funceq::EquationSpec build_entry(const std::string& name, const funceq::Params& overrides,
                                 funceq::Params* merged = nullptr,
                                 std::optional<double>* bound = nullptr) {
  const funceq::CorpusEntry& entry = funceq::corpus_entry(name);
  const funceq::Params params = entry.merged_params(overrides);
  if (merged) *merged = params;
  if (bound) *bound = entry.contraction_bound(params);
  return entry.build(params, kResolution);
}

// Criterion 1: the halving pair with constant weight a and constant
// inhomogeneity b sums to the constant b/(1-2a) whenever |a| < 1/2.
bool constant_family() {
  bool ok = true;
  const struct {
    double a, b;
  } cases[] = {{0.4, 1.0}, {0.25, 1.0}, {-0.3, 2.0}};
  for (const auto& c : cases) {
    std::optional<double> bound;
    const funceq::EquationSpec spec =
        build_entry("sec5", {{"a", c.a}, {"b", c.b}}, nullptr, &bound);
    const funceq::SolveResult r = funceq::neumann_solve(spec, kTol, kMaxIter, bound);
    const std::string tag =
        "a=" + funceq::format_double(c.a) + " b=" + funceq::format_double(c.b);
    ok &= expect(r.status == funceq::SolveStatus::Converged, tag + ": converges");
    const funceq::GridFunction exact =
        funceq::GridFunction::constant(c.b / (1.0 - 2.0 * c.a), kResolution);
    ok &= expect(funceq::l1_distance(r.solution, exact) <= 1e-5,
                 tag + ": L1 error vs b/(1-2a) <= 1e-5");
  }
  return ok;
}

// Criterion 2: the identity-map pair with weights x/2, x/3 has the closed
// form 6/(6-5x); the series must land on it and the closed form itself must
// leave a tiny residual.
bool rational_family() {
  bool ok = true;
  funceq::Params params;
  std::optional<double> bound;
  const funceq::EquationSpec spec =
      build_entry("ex3_7", {{"a", 3.0}, {"b", 1.0}}, &params, &bound);
  const funceq::SolveResult r = funceq::neumann_solve(spec, kTol, kMaxIter, bound);
  ok &= expect(r.status == funceq::SolveStatus::Converged, "series converges");
  const funceq::GridFunction oracle = funceq::GridFunction::sample(
      *funceq::corpus_entry("ex3_7").reference(params), kResolution);
  ok &= expect(funceq::l1_distance(r.solution, oracle) <= 1e-3,
               "L1 error vs 6/(6-5x) <= 1e-3");
  ok &= expect(funceq::residual(spec, oracle) <= 5e-4, "oracle residual <= 5e-4");
  return ok;
}

// Criterion 3: the near-critical dyadic family has solution norm exactly
// 1/eps, which blows up as eps -> 0 while the data stay bounded.
bool blowup_family() {
  bool ok = true;
  for (const double eps : {0.5, 0.25, 0.125, 0.0625}) {
    std::optional<double> bound;
    const funceq::EquationSpec spec = build_entry("ex4_2", {{"eps", eps}}, nullptr, &bound);
    const funceq::SolveResult r = funceq::neumann_solve(spec, kTol, kMaxIter, bound);
    const std::string tag = "eps=" + funceq::format_double(eps);
    ok &= expect(r.status == funceq::SolveStatus::Converged, tag + ": converges");
    ok &= expect_near(r.solution.l1_norm(), 1.0 / eps, 1e-4 / eps, tag + ": ||solution||");
  }
  return ok;
}

// Criterion 4: the three divergent families are flagged, with the predicted
// term and partial-sum profiles.
bool divergence_detection() {
  bool ok = true;
  {
    const funceq::EquationSpec spec = build_entry("ex1_5", {{"c", 1.0}});
    const funceq::SolveResult r = funceq::neumann_solve(spec, kTol, kMaxIter);
    ok &= expect(r.status == funceq::SolveStatus::DivergentOscillating,
                 "ex1_5: DivergentOscillating");
    for (int k = 0; k <= r.m_stop; ++k) {
      const double want = (k % 2 == 0) ? 1.0 : 0.0;
      if (std::fabs(r.partial_norms[static_cast<std::size_t>(k)] - want) > 1e-12) {
        ok &= expect(false, "ex1_5: ||S_" + std::to_string(k) + "|| alternates 1/0");
        break;
      }
    }
  }
  {
    const funceq::EquationSpec spec = build_entry("sec5", {{"a", 0.6}, {"b", 1.0}});
    const funceq::SolveResult r = funceq::neumann_solve(spec, kTol, kMaxIter);
    ok &= expect(r.status == funceq::SolveStatus::DivergentGrowing, "sec5 a=0.6: DivergentGrowing");
    ok &= expect(r.m_stop >= 30, "sec5 a=0.6: at least 30 terms recorded");
    for (int k = 0; k <= std::min(r.m_stop, 30); ++k) {
      const double want = std::pow(1.2, k);
      if (std::fabs(r.term_norms[static_cast<std::size_t>(k)] - want) > 1e-9 * want) {
        ok &= expect(false, "sec5 a=0.6: ||t_" + std::to_string(k) + "|| = 1.2^k to 1e-9");
        break;
      }
    }
  }
  {
    const funceq::EquationSpec spec = build_entry("ex3_3", {{"b", 1.0}});
    const funceq::SolveResult r = funceq::neumann_solve(spec, kTol, kMaxIter);
    ok &= expect(r.status != funceq::SolveStatus::Converged &&
                     r.status != funceq::SolveStatus::FiniteSum,
                 "ex3_3: flagged non-convergent");
    ok &= expect(r.m_stop <= kMaxIter, "ex3_3: flagged within 400 iterations");
    ok &= expect(r.m_stop >= 50, "ex3_3: at least 50 terms recorded");
    for (int k = 0; k <= std::min(r.m_stop, 50); ++k) {
      const double want = 1.0 / (k + 1);  // ||x^k||_1
      if (std::fabs(r.term_norms[static_cast<std::size_t>(k)] - want) > 2e-3 * want) {
        ok &= expect(false, "ex3_3: ||t_" + std::to_string(k) + "|| = 1/(k+1) to 2e-3");
        break;
      }
    }
  }
  return ok;
}

// Criterion 5: partial sums of the contracting constant family obey the
// geometric tail bound against the near-limit sum S_60.
bool tail_bound() {
  const funceq::EquationSpec spec = build_entry("sec5", {{"a", 0.4}, {"b", 1.0}});
  const funceq::TransferOperator op(spec);
  funceq::GridFunction term = spec.inhom();
  funceq::GridFunction sum = term;
  std::vector<funceq::GridFunction> snapshots;
  snapshots.reserve(30);
  for (int m = 1; m <= 60; ++m) {
    term = op.apply(term);
    sum = funceq::GridFunction::combine(1.0, sum, 1.0, term);
    if (m <= 30) snapshots.push_back(sum);
  }
  bool ok = true;
  for (int m = 1; m <= 30; ++m) {
    const double gap = funceq::l1_distance(sum, snapshots[static_cast<std::size_t>(m - 1)]);
    const double cap = std::pow(0.8, m + 1) / 0.2 + 1e-4;
    if (!(gap <= cap)) {
      ok &= expect(false, "||S_60 - S_" + std::to_string(m) + "|| = " +
                              funceq::format_double(gap) + " exceeds " +
                              funceq::format_double(cap));
    }
  }
  return ok;
}

// Criterion 6: the checker recovers the constants K, L, C of each family and
// the per-map certificate of the identity pair.
bool hypothesis_constants() {
  bool ok = true;
  const struct {
    const char* name;
    int K, L;
  } kl_cases[] = {{"sec5", 1, 1},   {"dyadic_fp", 1, 1}, {"ex4_2", 1, 1},
                  {"ex3_3", 1, 2},  {"ex3_7", 1, 2},     {"ex4_3", 1, 2}};
  for (const auto& c : kl_cases) {
    funceq::Params params;
    const funceq::EquationSpec spec = build_entry(c.name, {}, &params);
    const int K = funceq::estimate_K(spec);
    const int L = funceq::compute_L(spec);
    const std::string tag = std::string(c.name) + ": ";
    ok &= expect(K == c.K && L == c.L,
                 tag + "(K,L) = (" + std::to_string(K) + "," + std::to_string(L) + "), want (" +
                     std::to_string(c.K) + "," + std::to_string(c.L) + ")");
    const double C = funceq::estimate_C(spec, K, L);
    if (std::string(c.name) == "sec5") {
      ok &= expect_near(C, 2.0 * std::fabs(params.at("a")), 1e-9, tag + "C = 2|a|");
    } else if (std::string(c.name) == "ex4_2") {
      ok &= expect_near(C, 1.0 - params.at("eps"), 1e-9, tag + "C = 1-eps");
    } else if (std::string(c.name) == "ex4_3") {
      ok &= expect_near(C, 1.0 / (1.0 + params.at("eps")), 1e-9, tag + "C = 1/(1+eps)");
    } else if (std::string(c.name) == "ex3_3") {
      ok &= expect(C >= 1.0, tag + "C >= 1");
      ok &= expect(funceq::check_C1(spec, K, L), tag + "strict nodewise bound holds");
    }
  }
  {
    const funceq::EquationSpec spec = build_entry("ex3_7", {{"a", 3.0}, {"b", 1.0}});
    const auto certs = funceq::per_map_certificates(spec, 1, 2);
    ok &= expect(certs.size() == 2, "ex3_7: two certificates");
    ok &= expect(!certs[0].witness, "ex3_7: map 1 is no witness");
    ok &= expect(certs[1].witness, "ex3_7: map 2 is a witness");
    ok &= expect_near(certs[1].C_m, 2.0 / 3.0, 1e-9, "ex3_7: C_2 = 2/3");
    ok &= expect(certs[1].inf_ratio == 1.0, "ex3_7: inf ratio = 1 for a full-image map");
  }
  return ok;
}

// Criterion 7: both evaluations of the substitution identity agree for a grid
// of maps and densities, including the hand-computed doubling-map case.
bool change_of_variables() {
  bool ok = true;
  const struct {
    const char* f;
    std::vector<double> breakpoints;
  } maps[] = {{"x", {}}, {"x/2", {}}, {"(x + 1)/2", {}}, {"mod1(2*x)", {0.5}}, {"x^1.25", {}}};
  const char* densities[] = {"1", "x", "x^2"};
  for (const auto& m : maps) {
    const funceq::MapSpec f = funceq::MapSpec::make(funceq::Expr::parse(m.f), m.breakpoints);
    for (const char* h : densities) {
      const funceq::CovCheck check = funceq::verify_change_of_variables(
          f, funceq::Expr::parse(h), {0.0, 1.0}, kResolution);
      if (!(check.abs_difference() <= 1e-6)) {
        ok &= expect(false, std::string("f=") + m.f + ", h=" + h + ": |difference| = " +
                                funceq::format_double(check.abs_difference()));
      }
    }
  }
  const funceq::MapSpec doubling =
      funceq::MapSpec::make(funceq::Expr::parse("mod1(2*x)"), {0.5});
  const funceq::CovCheck hand = funceq::verify_change_of_variables(
      doubling, funceq::Expr::parse("x^2"), {0.0, 1.0}, kResolution);
  ok &= expect_near(hand.integral_over_domain, 2.0 / 3.0, 1e-8, "doubling/square: domain side");
  ok &= expect_near(hand.integral_over_range, 2.0 / 3.0, 1e-8, "doubling/square: range side");
  return ok;
}

// Criterion 8: the operator is linear to rounding noise and its norm obeys
// the coefficient bound up to the grid term 10/M.
bool operator_properties() {
  bool ok = true;
  std::mt19937 rng(20260825);
  std::uniform_real_distribution<double> scale(-2.0, 2.0);
  for (const funceq::CorpusEntry& entry : funceq::corpus_entries()) {
    const funceq::EquationSpec spec = entry.build(entry.defaults(), kResolution);
    const funceq::TransferOperator op(spec);
    double worst_defect = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
      const funceq::GridFunction u = test_support::random_piecewise_linear(rng, kResolution);
      const funceq::GridFunction v = test_support::random_piecewise_linear(rng, kResolution);
      const double a = scale(rng);
      const double b = scale(rng);
      const funceq::GridFunction lhs = op.apply(funceq::GridFunction::combine(a, u, b, v));
      const funceq::GridFunction rhs =
          funceq::GridFunction::combine(a, op.apply(u), b, op.apply(v));
      worst_defect = std::max(worst_defect, funceq::l1_distance(lhs, rhs));
    }
    if (!(worst_defect <= 1e-10)) {
      ok &= expect(false, entry.name() + ": linearity defect " +
                              funceq::format_double(worst_defect));
    }

    const int K = funceq::estimate_K(spec);
    const int L = funceq::compute_L(spec);
    const double C = funceq::estimate_C(spec, K, L);
    if (!std::isfinite(C)) continue;
    const double cap = C + 10.0 / kResolution;
    for (int trial = 0; trial < 50; ++trial) {
      const funceq::GridFunction h = test_support::random_piecewise_linear(rng, kResolution);
      const double lhs = op.apply(h).l1_norm();
      if (!(lhs <= cap * h.l1_norm())) {
        ok &= expect(false, entry.name() + ": ||Ph|| = " + funceq::format_double(lhs) +
                                " exceeds (C + 10/M)||h|| = " +
                                funceq::format_double(cap * h.l1_norm()));
        break;
      }
    }
  }
  return ok;
}

// Criterion 9: the fixed-point iteration reproduces the series iterates, and
// every start converges to the same limit.
bool picard_equivalence_and_uniqueness() {
  bool ok = true;
  const funceq::EquationSpec spec = build_entry("sec5", {{"a", 0.4}, {"b", 1.0}});
  {
    const funceq::SolveResult series = funceq::neumann_solve(spec, 1e-300, 60, 0.8);
    const funceq::SolveResult fixed = funceq::picard_solve(spec, spec.inhom(), 0.8, 1e-300, 60);
    ok &= expect(series.status == funceq::SolveStatus::MaxIterReached &&
                     fixed.status == funceq::SolveStatus::MaxIterReached,
                 "both runs reach the 60-iteration cap");
    ok &= expect(funceq::l1_distance(series.solution, fixed.solution) <= 1e-12,
                 "60th iterate matches the 60th partial sum to 1e-12");
    ok &= expect(series.term_norms.size() == fixed.term_norms.size(), "same term count");
    for (std::size_t k = 0; k < series.term_norms.size(); ++k) {
      if (std::fabs(series.term_norms[k] - fixed.term_norms[k]) > 1e-12) {
        ok &= expect(false, "step norms match term norms up to k = " + std::to_string(k));
        break;
      }
    }
  }
  {
    const funceq::GridFunction limit = funceq::neumann_solve(spec, kTol, kMaxIter, 0.8).solution;
    std::mt19937 rng(97);
    for (int trial = 0; trial < 5; ++trial) {
      const funceq::GridFunction start = test_support::random_piecewise_linear(rng, kResolution);
      const funceq::SolveResult r = funceq::picard_solve(spec, start, 0.8, kTol, kMaxIter);
      ok &= expect(r.status == funceq::SolveStatus::Converged,
                   "start " + std::to_string(trial) + " converges");
      ok &= expect(funceq::l1_distance(r.solution, limit) <= 2.0 * kTol + 1e-4,
                   "start " + std::to_string(trial) + " lands on the same limit");
    }
  }
  return ok;
}

// Criterion 10: symbolic derivatives of every corpus map agree with central
// differences away from declared breakpoints.
bool symbolic_derivatives() {
  bool ok = true;
  constexpr double kStep = 1e-5;
  for (const funceq::CorpusEntry& entry : funceq::corpus_entries()) {
    const funceq::EquationSpec spec = entry.build(entry.defaults(), 256);
    for (int j = 0; j < spec.map_count(); ++j) {
      const funceq::MapSpec& m = spec.maps()[static_cast<std::size_t>(j)];
      int checked = 0;
      double worst = 0.0;
      for (int i = 1; i <= 97; ++i) {
        const double x = static_cast<double>(i) / 98.0;
        bool near_kink = false;
        for (const double b : m.breakpoints()) {
          if (std::fabs(x - b) <= 1e-3) near_kink = true;
        }
        if (near_kink) continue;
        const double numeric = (m.map()(x + kStep) - m.map()(x - kStep)) / (2.0 * kStep);
        worst = std::max(worst, std::fabs(m.derivative()(x) - numeric));
        ++checked;
      }
      if (!(worst <= 1e-6) || checked < 90) {
        ok &= expect(false, entry.name() + " map " + std::to_string(j + 1) +
                                ": worst gap " + funceq::format_double(worst) + " over " +
                                std::to_string(checked) + " points");
      }
    }
  }
  return ok;
}

bool guarded(const std::function<bool()>& fn) {
  try {
    return fn();
  } catch (const std::exception& e) {
    std::cerr << "  failed: unexpected exception: " << e.what() << "\n";
    return false;
  }
}

}  // namespace

int main() {
  int failures = 0;
  const auto criterion = [&](int index, const char* name, const std::function<bool()>& fn) {
    const bool ok = guarded(fn);
    std::cout << (ok ? "[PASS] " : "[FAIL] ") << index << ". " << name << "\n";
    if (!ok) ++failures;
  };

  criterion(1, "constant family: solutions match b/(1-2a)", constant_family);
  criterion(2, "rational family: series matches 6/(6-5x) and the oracle residual is small",
            rational_family);
  criterion(3, "blow-up family: solution norm tracks 1/eps", blowup_family);
  criterion(4, "divergence detection: oscillating, growing, and slowly-decaying families",
            divergence_detection);
  criterion(5, "geometric tail bound dominates ||S_60 - S_m|| for m <= 30", tail_bound);
  criterion(6, "hypothesis constants K, L, C and the per-map witness", hypothesis_constants);
  criterion(7, "change-of-variables identity holds across the map/density grid",
            change_of_variables);
  criterion(8, "operator linearity and the norm bound ||Ph|| <= (C + 10/M)||h||",
            operator_properties);
  criterion(9, "fixed-point iteration matches the series and the limit is unique",
            picard_equivalence_and_uniqueness);
  criterion(10, "symbolic derivatives agree with central differences", symbolic_derivatives);

  std::cout << (10 - failures) << "/10 criteria passed\n";
  return failures;
}

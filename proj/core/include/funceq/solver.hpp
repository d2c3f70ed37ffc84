#pragma once

#include <optional>
#include <string>
#include <vector>

#include "funceq/transfer_operator.hpp"

namespace funceq {

enum class SolveStatus {
  Converged,
  FiniteSum,             // a term vanished: the series is a finite sum
  DivergentOscillating,  // terms stopped decaying while partial sums stay bounded
  DivergentGrowing,      // partial-sum norm blew past the growth cap
  MaxIterReached,
};

const char* to_string(SolveStatus s);

struct SolveResult {
  GridFunction solution;  // final partial sum (or final iterate for the fixed-point run)
  SolveStatus status = SolveStatus::MaxIterReached;
  int m_stop = 0;
  std::vector<double> term_norms;     // k = 0..m_stop
  std::vector<double> partial_norms;  // k = 0..m_stop
  std::optional<double> c_hint;       // contraction bound supplied by the caller
  std::optional<double> apriori_bound;
  double inhom_norm = 0.0;
  double residual_l1 = 0.0;  // ||solution - P solution - g||_1
  std::string detail;        // stop reason, human readable
};

/// Exactly C^(m+1)/(1-C) * norm_g, the tail bound of the geometric series.
/// DomainError unless 0 <= C < 1.
double apriori_error(double C, int m, double norm_g);

/// Sums the series g + Pg + P^2 g + ... on the spec's grid.
///
/// Stopping rules, checked in this order after adding term k:
///   FiniteSum             ||t_k|| <= 1e-14 * ||g||
///   Converged (bound)     c_hint < 1 and apriori_error(c_hint, k, ||g||) <= tol
///   Converged (heuristic) no c_hint; r = max of the last 5 term ratios < 1
///                         and ||t_k|| <= tol * (1 - r)
///   DivergentGrowing      ||S_k|| > 1e6 * (1 + ||g||)
///   DivergentOscillating  last 20 term ratios all >= 0.999 while the
///                         partial-sum norm gained <= 2*(1+||g||) over
///                         those 20 steps
/// A usable c_hint (inside [0,1)) certifies convergence, so the two divergence
/// rules only run without one; a supplied but unusable hint disables the
/// heuristic convergence rule as well, leaving FiniteSum and the caps.
///   MaxIterReached        k = max_iter
SolveResult neumann_solve(const EquationSpec& spec, double tol = 1e-6, int max_iter = 400,
                          std::optional<double> c_hint = std::nullopt);

/// Fixed-point iteration phi <- P phi + g from an arbitrary start; contraction
/// regime only (NotContraction unless 0 <= c_hint < 1). Stops when a step
/// moves by at most tol * (1 - c_hint). With start = g the iterates equal the
/// series partial sums. term_norms[k] holds the step size ||phi_k - phi_{k-1}||
/// (term_norms[0] = ||start||).
SolveResult picard_solve(const EquationSpec& spec, const GridFunction& start, double c_hint,
                         double tol = 1e-6, int max_iter = 400);

/// ||phi - P phi - g||_1 on the spec's grid.
double residual(const EquationSpec& spec, const GridFunction& phi);

struct RegularityReport {
  bool applicable = false;  // maps, coefficients and inhomogeneity all
                            // nondecreasing and nonnegative on the grid
  std::string reason;       // first precondition failure, when not applicable
  bool preserved = false;   // every tracked iterate stayed nondecreasing
  int violation_k = -1;
  int violation_node = -1;
};

/// Tracks whether P^k g stays nondecreasing for k <= k_max (tolerance 1e-10
/// per cell). Monotonicity propagates when all data are nondecreasing and
/// nonnegative; the report says "not applicable" otherwise.
RegularityReport check_regularity_preservation(const EquationSpec& spec, int k_max = 20);

}  // namespace funceq

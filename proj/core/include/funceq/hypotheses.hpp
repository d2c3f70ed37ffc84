#pragma once

#include <string>
#include <utility>
#include <vector>

#include "funceq/transfer_operator.hpp"

namespace funceq {

/// Contraction certificate for a single map: C_m is the coefficient bound
/// computed for that map alone, inf_ratio the smallest observed share of an
/// iterate's mass that lands inside that map's image, alpha the resulting
/// geometric factor 1 - (1-C_m)/L * inf_ratio.
struct PerMapCertificate {
  int m = 0;  // 1-based map index
  double C_m = 0.0;
  double inf_ratio = 0.0;
  int min_k = 0;  // iterate attaining inf_ratio
  double alpha = 0.0;
  bool witness = false;  // C_m < 1 and inf_ratio > 0
};

struct HypothesisReport {
  int K = 1;              // preimage-count bound (essential sup of the indicatrix)
  int L = 1;              // largest number of map images sharing positive measure
  double C_est = 0.0;     // coefficient bound; +inf if some g_n survives where f_n' = 0
  bool holds_C = false;   // C_est < 1: global contraction regime
  bool holds_C1 = false;  // strict nodewise bound K*L*|g_n| < |f_n'| away from breakpoints
  double sum_int_gn = 0.0;
  bool sum_gn_is_one = false;
  bool degenerate_series = false;  // an iterate vanished: finite-sum shortcut applies
  std::vector<PerMapCertificate> per_map;
  std::vector<std::string> notes;
};

/// Largest m such that m of the image unions f_n([0,1]) share a common set of
/// measure > 1e-12. Interval sweep over all image endpoints; supports up to
/// 20 maps (the subset bookkeeping is exponential in N).
int compute_L(const EquationSpec& spec);

/// Max over n of the essential supremum of the preimage count of f_n,
/// computed exactly from monotone-piece ranges. At least 1.
int estimate_K(const EquationSpec& spec);

/// Smallest C with |g_n| <= (C/(K*L)) |f_n'| on the sampled grid (10x the
/// spec resolution, breakpoint nodes included with their one-sided
/// derivative values); +inf if some |g_n| > 1e-12 where |f_n'| <= 1e-12.
double estimate_C(const EquationSpec& spec, int K, int L);

/// estimate_C restricted to the single map `map_index` (0-based).
double estimate_C_for_map(const EquationSpec& spec, int map_index, int K, int L);

/// True iff K*L*|g_n(x)| < |f_n'(x)| strictly at every sampled point that is
/// not a declared breakpoint, for every n.
bool check_C1(const EquationSpec& spec, int K, int L);

/// (sum of integrals of |g_n|, whether sum of g_n == 1 on the grid to 1e-9).
std::pair<double, bool> check_sum_conditions(const EquationSpec& spec);

/// Per-map contraction certificates: tracks iterates P^k g for k <= k_max and
/// measures, per map, the smallest share of mass inside that map's image.
/// Throws DegenerateInstance when an iterate's norm falls to zero (relative
/// threshold 1e-14): the series is then a finite sum and ratios carry no
/// information.
std::vector<PerMapCertificate> per_map_certificates(const EquationSpec& spec, int K, int L,
                                                    int k_max = 40);

/// Runs every check above and assembles the report. A degenerate series is
/// recorded in the report instead of escaping as an exception.
HypothesisReport analyze_hypotheses(const EquationSpec& spec, int k_max = 40);

}  // namespace funceq

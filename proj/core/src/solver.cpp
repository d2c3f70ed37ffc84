#include "funceq/solver.hpp"

#include <cmath>
#include <cstddef>
#include <utility>

#include "funceq/errors.hpp"
#include "funceq/expr.hpp"

namespace funceq {

namespace {

constexpr double kZeroFactor = 1e-14;   // relative FiniteSum threshold
constexpr double kGrowthCap = 1e6;      // on ||S_m|| / (1 + ||g||)
constexpr int kStagnationWindow = 20;   // consecutive non-decaying ratios
constexpr double kStagnationRatio = 0.999;
constexpr int kRatioWindow = 5;         // for the no-hint heuristic

void require_positive_tol(double tol) {
  if (!(tol > 0.0) || !std::isfinite(tol)) {
    throw DomainError("tolerance must be a positive finite number");
  }
}

void require_positive_iters(int max_iter) {
  if (max_iter < 1) throw DomainError("max_iter must be at least 1");
}

// Usable contraction bound: finite and inside [0,1).
bool usable_hint(const std::optional<double>& c) {
  return c.has_value() && std::isfinite(*c) && *c >= 0.0 && *c < 1.0;
}

GridFunction snapshot(int resolution, const std::vector<detail::Kahan>& acc) {
  std::vector<double> s(acc.size());
  for (std::size_t i = 0; i < acc.size(); ++i) s[i] = acc[i].sum;
  return GridFunction(resolution, std::move(s));
}

}  // namespace

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Converged: return "Converged";
    case SolveStatus::FiniteSum: return "FiniteSum";
    case SolveStatus::DivergentOscillating: return "DivergentOscillating";
    case SolveStatus::DivergentGrowing: return "DivergentGrowing";
    case SolveStatus::MaxIterReached: return "MaxIterReached";
  }
  return "unknown";
}

double apriori_error(double C, int m, double norm_g) {
  if (!std::isfinite(C) || C < 0.0 || C >= 1.0) {
    throw DomainError("a priori bound needs a contraction constant in [0,1), got " +
                      format_double(C));
  }
  if (m < 0) throw DomainError("term index must be nonnegative");
  if (!(norm_g >= 0.0)) throw DomainError("norm must be nonnegative");
  return std::pow(C, m + 1) / (1.0 - C) * norm_g;
}

double residual(const EquationSpec& spec, const GridFunction& phi) {
  const GridFunction p = apply_P(spec, phi);
  const GridFunction lhs = GridFunction::combine(1.0, phi, -1.0, p);
  return GridFunction::combine(1.0, lhs, -1.0, spec.inhom()).l1_norm();
}

SolveResult neumann_solve(const EquationSpec& spec, double tol, int max_iter,
                          std::optional<double> c_hint) {
  require_positive_tol(tol);
  require_positive_iters(max_iter);

  const TransferOperator op(spec);
  const GridFunction& g = spec.inhom();
  const int n_nodes = spec.resolution() + 1;
  const double norm_g = g.l1_norm();
  const bool with_bound = usable_hint(c_hint);
  const double growth_cap = kGrowthCap * (1.0 + norm_g);
  const double bounded_gain = 2.0 * (1.0 + norm_g);

  SolveResult r{GridFunction::zero(spec.resolution())};
  r.c_hint = c_hint;
  r.inhom_norm = norm_g;
  r.status = SolveStatus::MaxIterReached;
  r.detail = "no stopping rule fired within " + std::to_string(max_iter) + " iterations";

  std::vector<detail::Kahan> acc(static_cast<std::size_t>(n_nodes));
  GridFunction term = g;
  for (int k = 0;; ++k) {
    for (int i = 0; i < n_nodes; ++i) acc[static_cast<std::size_t>(i)].add(term[i]);
    const double term_norm = term.l1_norm();
    GridFunction partial = snapshot(spec.resolution(), acc);
    const double partial_norm = partial.l1_norm();
    r.term_norms.push_back(term_norm);
    r.partial_norms.push_back(partial_norm);
    r.m_stop = k;
    r.solution = std::move(partial);

    if (term_norm <= kZeroFactor * norm_g) {
      r.status = SolveStatus::FiniteSum;
      r.detail = "term " + std::to_string(k) + " has norm " + format_double(term_norm) +
                 ", below the zero threshold; the series is a finite sum";
      break;
    }
    if (with_bound) {
      const double bound = apriori_error(*c_hint, k, norm_g);
      if (bound <= tol) {
        r.status = SolveStatus::Converged;
        r.apriori_bound = bound;
        r.detail = "tail bound " + format_double(bound) + " <= tol after " +
                   std::to_string(k + 1) + " terms";
        break;
      }
    } else if (!c_hint.has_value() && k >= kRatioWindow) {
      double ratio_max = 0.0;
      for (int j = k - kRatioWindow + 1; j <= k; ++j) {
        const double prev = r.term_norms[static_cast<std::size_t>(j - 1)];
        const double ratio = r.term_norms[static_cast<std::size_t>(j)] / prev;
        if (ratio > ratio_max) ratio_max = ratio;
      }
      if (ratio_max < 1.0 && term_norm <= tol * (1.0 - ratio_max)) {
        r.status = SolveStatus::Converged;
        r.detail = "heuristic stop: term norm " + format_double(term_norm) +
                   " <= tol*(1-r) with observed decay ratio r=" + format_double(ratio_max) +
                   " (no contraction bound supplied)";
        break;
      }
    }
    // A usable bound certifies ||P||* < 1, so divergence is impossible and the
    // two heuristics below stay off. Otherwise grid-level stagnation (a
    // boundary fixed point whose coefficients sum to 1 pins the last node)
    // could preempt the certified tail-bound stop.
    if (!with_bound && partial_norm > growth_cap) {
      r.status = SolveStatus::DivergentGrowing;
      r.detail = "partial sum norm " + format_double(partial_norm) +
                 " exceeded the growth cap " + format_double(growth_cap);
      break;
    }
    if (!with_bound && k >= kStagnationWindow) {
      bool stagnant = true;
      for (int j = k - kStagnationWindow + 1; j <= k && stagnant; ++j) {
        const double prev = r.term_norms[static_cast<std::size_t>(j - 1)];
        stagnant = r.term_norms[static_cast<std::size_t>(j)] >= kStagnationRatio * prev;
      }
      const double gain =
          partial_norm - r.partial_norms[static_cast<std::size_t>(k - kStagnationWindow)];
      if (stagnant && gain <= bounded_gain) {
        r.status = SolveStatus::DivergentOscillating;
        r.detail = "term norms stopped decaying over " + std::to_string(kStagnationWindow) +
                   " steps while the partial sums stayed bounded";
        break;
      }
    }
    if (k == max_iter) break;
    term = op.apply(term);
  }

  if (with_bound && !r.apriori_bound.has_value()) {
    r.apriori_bound = apriori_error(*c_hint, r.m_stop, norm_g);
  }
  const GridFunction p = op.apply(r.solution);
  const GridFunction lhs = GridFunction::combine(1.0, r.solution, -1.0, p);
  r.residual_l1 = GridFunction::combine(1.0, lhs, -1.0, g).l1_norm();
  return r;
}

SolveResult picard_solve(const EquationSpec& spec, const GridFunction& start, double c_hint,
                         double tol, int max_iter) {
  if (!std::isfinite(c_hint) || c_hint < 0.0 || c_hint >= 1.0) {
    throw NotContraction("fixed-point iteration needs a contraction bound in [0,1), got " +
                         format_double(c_hint));
  }
  require_positive_tol(tol);
  require_positive_iters(max_iter);

  const TransferOperator op(spec);
  const GridFunction& g = spec.inhom();
  if (start.resolution() != spec.resolution()) {
    throw ResolutionMismatch("start lives on resolution " + std::to_string(start.resolution()) +
                             ", spec on " + std::to_string(spec.resolution()));
  }

  SolveResult r{start};
  r.c_hint = c_hint;
  r.inhom_norm = g.l1_norm();
  r.status = SolveStatus::MaxIterReached;
  r.detail = "no step fell below tol*(1-C) within " + std::to_string(max_iter) + " iterations";
  r.term_norms.push_back(start.l1_norm());
  r.partial_norms.push_back(start.l1_norm());

  const double step_goal = tol * (1.0 - c_hint);
  GridFunction phi = start;
  for (int j = 1; j <= max_iter; ++j) {
    GridFunction next = GridFunction::combine(1.0, op.apply(phi), 1.0, g);
    const double step = l1_distance(next, phi);
    r.term_norms.push_back(step);
    r.partial_norms.push_back(next.l1_norm());
    r.m_stop = j;
    phi = std::move(next);
    if (step <= step_goal) {
      r.status = SolveStatus::Converged;
      // a posteriori fixed-point bound: ||phi_j - phi*|| <= C/(1-C) * step
      r.apriori_bound = c_hint / (1.0 - c_hint) * step;
      r.detail = "step " + format_double(step) + " <= tol*(1-C) at iteration " +
                 std::to_string(j);
      break;
    }
  }
  r.solution = phi;

  const GridFunction p = op.apply(r.solution);
  const GridFunction lhs = GridFunction::combine(1.0, r.solution, -1.0, p);
  r.residual_l1 = GridFunction::combine(1.0, lhs, -1.0, g).l1_norm();
  return r;
}

namespace {

bool nondecreasing(std::span<const double> s, double slack, int* bad_node) {
  for (std::size_t i = 0; i + 1 < s.size(); ++i) {
    if (s[i + 1] < s[i] - slack) {
      if (bad_node) *bad_node = static_cast<int>(i);
      return false;
    }
  }
  return true;
}

bool nonnegative(std::span<const double> s, double slack) {
  for (double v : s) {
    if (v < -slack) return false;
  }
  return true;
}

std::vector<double> grid_samples(const Expr& e, int resolution) {
  std::vector<double> s(static_cast<std::size_t>(resolution) + 1);
  for (int i = 0; i <= resolution; ++i) {
    s[static_cast<std::size_t>(i)] = e(static_cast<double>(i) / resolution);
  }
  return s;
}

}  // namespace

RegularityReport check_regularity_preservation(const EquationSpec& spec, int k_max) {
  constexpr double kPreSlack = 1e-12;
  constexpr double kIterSlack = 1e-10;
  RegularityReport rep;
  const int m = spec.resolution();

  for (int n = 0; n < spec.map_count(); ++n) {
    const auto s = grid_samples(spec.maps()[static_cast<std::size_t>(n)].map(), m);
    if (!nondecreasing(s, kPreSlack, nullptr)) {
      rep.reason = "map " + std::to_string(n + 1) + " is not nondecreasing on the grid";
      return rep;
    }
  }
  for (int n = 0; n < spec.map_count(); ++n) {
    const auto s = grid_samples(spec.coeffs()[static_cast<std::size_t>(n)], m);
    if (!nondecreasing(s, kPreSlack, nullptr)) {
      rep.reason = "coefficient " + std::to_string(n + 1) + " is not nondecreasing on the grid";
      return rep;
    }
    if (!nonnegative(s, kPreSlack)) {
      rep.reason = "coefficient " + std::to_string(n + 1) + " takes negative values";
      return rep;
    }
  }
  {
    const auto s = spec.inhom().samples();
    if (!nondecreasing(s, kPreSlack, nullptr)) {
      rep.reason = "inhomogeneity is not nondecreasing on the grid";
      return rep;
    }
    if (!nonnegative(s, kPreSlack)) {
      rep.reason = "inhomogeneity takes negative values";
      return rep;
    }
  }

  rep.applicable = true;
  rep.preserved = true;
  const TransferOperator op(spec);
  GridFunction t = spec.inhom();
  for (int k = 0; k <= k_max; ++k) {
    int bad = -1;
    if (!nondecreasing(t.samples(), kIterSlack, &bad)) {
      rep.preserved = false;
      rep.violation_k = k;
      rep.violation_node = bad;
      rep.reason = "iterate " + std::to_string(k) + " decreases across node " +
                   std::to_string(bad);
      return rep;
    }
    if (k < k_max) t = op.apply(t);
  }
  return rep;
}

}  // namespace funceq

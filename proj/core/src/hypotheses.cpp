#include "funceq/hypotheses.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

namespace funceq {

namespace {

constexpr double kZeroTol = 1e-12;

std::vector<double> sorted_unique(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

}  // namespace

int compute_L(const EquationSpec& spec) {
  const int n = spec.map_count();
  if (n > 20)
    throw InvalidSpec("image-overlap count supports at most 20 maps, got " + std::to_string(n));
  std::vector<std::vector<Interval>> images;
  images.reserve(static_cast<std::size_t>(n));
  for (const auto& m : spec.maps()) images.push_back(m.image_intervals());

  std::vector<double> cuts{0.0, 1.0};
  for (const auto& ivs : images)
    for (const auto& iv : ivs) {
      cuts.push_back(iv.lo);
      cuts.push_back(iv.hi);
    }
  cuts = sorted_unique(std::move(cuts));

  // measure of the set covered by exactly the maps in each bitmask
  std::vector<double> len(std::size_t{1} << n, 0.0);
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double c0 = cuts[i];
    const double c1 = cuts[i + 1];
    if (!(c1 > c0)) continue;
    const double mid = 0.5 * (c0 + c1);
    unsigned mask = 0;
    for (int j = 0; j < n; ++j)
      for (const auto& iv : images[static_cast<std::size_t>(j)])
        if (mid >= iv.lo && mid <= iv.hi) {
          mask |= 1u << j;
          break;
        }
    len[mask] += c1 - c0;
  }

  // superset sums: len[s] becomes the measure covered simultaneously by all
  // maps in s (sum over supersets of the exact-cover measures)
  for (int j = 0; j < n; ++j)
    for (std::size_t s = 0; s < len.size(); ++s)
      if (!(s & (std::size_t{1} << j))) len[s] += len[s | (std::size_t{1} << j)];

  int best = 1;
  for (std::size_t s = 0; s < len.size(); ++s)
    if (len[s] > kZeroTol) best = std::max(best, std::popcount(s));
  return best;
}

int estimate_K(const EquationSpec& spec) {
  int overall = 1;
  for (const auto& mp : spec.maps()) {
    std::vector<double> cuts;
    for (const auto& pc : mp.pieces()) {
      cuts.push_back(pc.range_lo());
      cuts.push_back(pc.range_hi());
    }
    cuts = sorted_unique(std::move(cuts));
    int best = 0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      if (!(cuts[i + 1] > cuts[i])) continue;
      const double mid = 0.5 * (cuts[i] + cuts[i + 1]);
      int covering = 0;
      for (const auto& pc : mp.pieces())
        if (mid >= pc.range_lo() && mid <= pc.range_hi()) ++covering;
      best = std::max(best, covering);
    }
    overall = std::max(overall, best);
  }
  return overall;
}

namespace {

struct CoefficientScan {
  double worst = 0.0;  // sup of K*L*|g| / |f'|
  bool strict = true;  // K*L*|g| < |f'| at every non-breakpoint node
};

CoefficientScan scan_coefficient(const EquationSpec& spec, int j, int K, int L) {
  const int grid = 10 * spec.resolution();
  const MapSpec& mp = spec.maps()[static_cast<std::size_t>(j)];
  const Expr& g = spec.coeffs()[static_cast<std::size_t>(j)];
  const Expr& df = mp.derivative();
  const auto& bps = mp.breakpoints();
  const double kl = static_cast<double>(K) * L;

  CoefficientScan out;
  for (int i = 0; i <= grid; ++i) {
    const double x = static_cast<double>(i) / grid;
    const double gv = std::fabs(g(x));
    if (!std::isfinite(gv))
      throw EvaluationError("coefficient " + std::to_string(j + 1) +
                            " is non-finite at x = " + format_double(x));
    const double dv = std::fabs(df(x));
    const bool at_breakpoint =
        std::any_of(bps.begin(), bps.end(), [&](double b) { return std::fabs(x - b) <= 1e-12; });
    if (std::isnan(dv)) continue;  // isolated bad point of the derivative expression
    if (dv <= kZeroTol) {
      if (gv > kZeroTol) {
        out.worst = std::numeric_limits<double>::infinity();
        if (!at_breakpoint) out.strict = false;
      } else if (!at_breakpoint) {
        out.strict = false;  // 0 < 0 is false
      }
      continue;
    }
    if (std::isfinite(dv)) {
      const double ratio = kl * gv / dv;
      if (ratio > out.worst) out.worst = ratio;
    }
    if (!at_breakpoint && !(kl * gv < dv)) out.strict = false;
  }
  return out;
}

}  // namespace

double estimate_C(const EquationSpec& spec, int K, int L) {
  double worst = 0.0;
  for (int j = 0; j < spec.map_count(); ++j)
    worst = std::max(worst, scan_coefficient(spec, j, K, L).worst);
  return worst;
}

double estimate_C_for_map(const EquationSpec& spec, int map_index, int K, int L) {
  if (map_index < 0 || map_index >= spec.map_count())
    throw DomainError("map index out of range");
  return scan_coefficient(spec, map_index, K, L).worst;
}

bool check_C1(const EquationSpec& spec, int K, int L) {
  for (int j = 0; j < spec.map_count(); ++j)
    if (!scan_coefficient(spec, j, K, L).strict) return false;
  return true;
}

std::pair<double, bool> check_sum_conditions(const EquationSpec& spec) {
  const int m = spec.resolution();
  detail::Kahan total;
  for (const auto& g : spec.coeffs()) total.add(GridFunction::sample(g, m).l1_norm());

  bool is_one = true;
  for (int i = 0; i <= m && is_one; ++i) {
    const double x = static_cast<double>(i) / m;
    double s = 0.0;
    for (const auto& g : spec.coeffs()) s += g(x);
    if (!(std::fabs(s - 1.0) <= 1e-9)) is_one = false;
  }
  return {total.sum, is_one};
}

std::vector<PerMapCertificate> per_map_certificates(const EquationSpec& spec, int K, int L,
                                                    int k_max) {
  if (k_max < 0) throw DomainError("k_max must be nonnegative");
  const int n = spec.map_count();
  std::vector<PerMapCertificate> out(static_cast<std::size_t>(n));
  std::vector<std::vector<Interval>> images;
  images.reserve(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    out[static_cast<std::size_t>(j)].m = j + 1;
    out[static_cast<std::size_t>(j)].C_m = estimate_C_for_map(spec, j, K, L);
    out[static_cast<std::size_t>(j)].inf_ratio = std::numeric_limits<double>::infinity();
    images.push_back(spec.maps()[static_cast<std::size_t>(j)].image_intervals());
  }

  const TransferOperator op(spec);
  GridFunction t = spec.inhom();
  const double norm0 = t.l1_norm();
  for (int k = 0; k <= k_max; ++k) {
    const double nk = t.l1_norm();
    if (!(nk > 1e-14 * std::max(1.0, norm0)))
      throw DegenerateInstance("iterate " + std::to_string(k) +
                               " of the series vanished; the solution is the finite sum of "
                               "the preceding terms");
    for (int j = 0; j < n; ++j) {
      double inside = 0.0;
      for (const auto& iv : images[static_cast<std::size_t>(j)])
        inside += t.l1_norm_on(iv.lo, iv.hi);
      const double ratio = inside / nk;
      auto& cert = out[static_cast<std::size_t>(j)];
      if (ratio < cert.inf_ratio) {
        cert.inf_ratio = ratio;
        cert.min_k = k;
      }
    }
    if (k < k_max) t = op.apply(t);
  }

  for (auto& cert : out) {
    cert.witness = std::isfinite(cert.C_m) && cert.C_m < 1.0 && cert.inf_ratio > kZeroTol;
    if (std::isfinite(cert.C_m))
      cert.alpha = 1.0 - (1.0 - cert.C_m) / L * cert.inf_ratio;
    else
      cert.alpha = std::numeric_limits<double>::infinity();
  }
  return out;
}

HypothesisReport analyze_hypotheses(const EquationSpec& spec, int k_max) {
  HypothesisReport r;
  r.L = compute_L(spec);
  r.K = estimate_K(spec);
  r.C_est = estimate_C(spec, r.K, r.L);
  r.holds_C = r.C_est < 1.0;
  r.holds_C1 = check_C1(spec, r.K, r.L);
  const auto [total, is_one] = check_sum_conditions(spec);
  r.sum_int_gn = total;
  r.sum_gn_is_one = is_one;

  for (int j = 0; j < spec.map_count(); ++j)
    if (spec.maps()[static_cast<std::size_t>(j)].has_flat_piece())
      r.notes.push_back("map " + std::to_string(j + 1) +
                        " has a flat piece: preimage counts are unbounded on a null set and "
                        "the null-preimage argument does not apply");
  r.notes.push_back("monotone-piece certification: structural (piecewise C1 maps)");

  try {
    r.per_map = per_map_certificates(spec, r.K, r.L, k_max);
  } catch (const DegenerateInstance& e) {
    r.degenerate_series = true;
    r.notes.push_back(e.what());
  }

  if (r.holds_C) {
    r.notes.push_back("coefficient bound " + format_double(r.C_est) +
                      " < 1: geometric convergence with explicit tail bound");
  } else {
    for (const auto& cert : r.per_map)
      if (cert.witness)
        r.notes.push_back("map " + std::to_string(cert.m) +
                          " certifies convergence with factor alpha = " +
                          format_double(cert.alpha));
  }
  return r;
}

}  // namespace funceq

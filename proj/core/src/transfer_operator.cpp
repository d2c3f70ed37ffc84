#include "funceq/transfer_operator.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "funceq/quadrature.hpp"

namespace funceq {

namespace {

constexpr double kFlatTol = 1e-12;   // |f'| below this counts as zero
constexpr double kRangeTol = 1e-12;  // slack allowed outside [0,1] before rejecting
constexpr double kJumpTol = 1e-6;    // unexplained increment = hidden discontinuity

double checked_map_value(const Expr& f, double x) {
  const double v = f(x);
  if (!std::isfinite(v))
    throw InvalidSpec("map is non-finite at x = " + format_double(x));
  if (v < -kRangeTol || v > 1.0 + kRangeTol)
    throw InvalidSpec("map leaves [0,1] at x = " + format_double(x) + " (value " +
                      format_double(v) + ")");
  return v;
}

}  // namespace

MapSpec MapSpec::make(Expr map, std::vector<double> breakpoints, int validation_points) {
  if (validation_points < 64) validation_points = 64;
  Expr deriv = map.derivative();

  breakpoints.push_back(0.0);
  breakpoints.push_back(1.0);
  std::sort(breakpoints.begin(), breakpoints.end());
  std::vector<double> bps;
  for (double b : breakpoints) {
    if (!(b >= -kRangeTol && b <= 1.0 + kRangeTol))
      throw InvalidSpec("breakpoint outside [0,1]: " + format_double(b));
    b = std::clamp(b, 0.0, 1.0);
    if (bps.empty() || b - bps.back() > 1e-12) bps.push_back(b);
  }
  if (bps.back() != 1.0) bps.back() = 1.0;  // a breakpoint within 1e-12 of 1 absorbed it

  std::vector<MonotonePiece> pieces;
  for (std::size_t idx = 0; idx + 1 < bps.size(); ++idx) {
    const double p = bps[idx];
    const double q = bps[idx + 1];
    const double len = q - p;
    const int steps = std::max<int>(16, static_cast<int>(std::lround(len * validation_points)));
    const double h = len / steps;

    double prev = checked_map_value(map, p);
    int pos = 0, neg = 0;
    double max_abs_d = 0.0;
    for (int s = 1; s <= steps; ++s) {
      const double x = (s == steps) ? q : p + len * s / steps;
      const double fx = checked_map_value(map, x);
      const double xm = p + len * (s - 0.5) / steps;
      const double d = deriv(xm);
      if (!std::isfinite(d))
        throw InvalidSpec("derivative is non-finite inside a piece at x = " + format_double(xm));
      // The pointwise value exactly at a breakpoint may side with either
      // neighboring lap (mod1-style wraps), so the comparisons touching the
      // piece ends are not continuity evidence; one-sided limits below cover
      // the ends.
      if (s > 1 && s < steps && std::fabs(fx - prev) > 2.0 * std::fabs(d) * h + kJumpTol)
        throw InvalidSpec("map appears discontinuous near x = " + format_double(x) +
                          "; declare a breakpoint there");
      if (d > kFlatTol) ++pos;
      else if (d < -kFlatTol) ++neg;
      if (std::fabs(d) > max_abs_d) max_abs_d = std::fabs(d);
      prev = fx;
    }
    if (pos > 0 && neg > 0)
      throw InvalidSpec("derivative changes sign inside piece [" + format_double(p) + ", " +
                        format_double(q) + "]; declare a breakpoint at the turning point");

    MonotonePiece piece;
    piece.x_lo = p;
    piece.x_hi = q;
    piece.flat = max_abs_d <= kFlatTol;
    piece.increasing = pos >= neg;

    // One-sided limits at the ends: trust the pointwise value unless a
    // first-order extrapolation from just inside disagrees by more than the
    // jump tolerance (the map jumps exactly at this breakpoint).
    const double delta = std::max(len * 1e-7, 1e-12);
    const auto one_sided = [&](double end, double inner_sgn) {
      const double xi = end + inner_sgn * delta;
      const double d = deriv(xi);
      const double est = map(xi) - inner_sgn * delta * (std::isfinite(d) ? d : 0.0);
      const double at_end = map(end);
      const double v = (std::fabs(at_end - est) > kJumpTol) ? est : at_end;
      return std::clamp(v, 0.0, 1.0);
    };
    piece.v_lo = one_sided(p, +1.0);
    piece.v_hi = one_sided(q, -1.0);
    pieces.push_back(piece);
  }
  return MapSpec(std::move(map), std::move(deriv), std::move(bps), std::move(pieces));
}

bool MapSpec::has_flat_piece() const {
  return std::any_of(pieces_.begin(), pieces_.end(),
                     [](const MonotonePiece& p) { return p.flat; });
}

std::vector<Interval> MapSpec::image_intervals() const {
  std::vector<Interval> ivs;
  ivs.reserve(pieces_.size());
  for (const auto& p : pieces_) ivs.push_back({p.range_lo(), p.range_hi()});
  std::sort(ivs.begin(), ivs.end(),
            [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  std::vector<Interval> merged;
  for (const auto& iv : ivs) {
    if (!merged.empty() && iv.lo <= merged.back().hi + 1e-12)
      merged.back().hi = std::max(merged.back().hi, iv.hi);
    else
      merged.push_back(iv);
  }
  return merged;
}

int MapSpec::indicatrix(double y, Interval window) const {
  if (!(window.lo >= -kRangeTol && window.hi <= 1.0 + kRangeTol && window.lo <= window.hi))
    throw DomainError("indicatrix window must satisfy 0 <= lo <= hi <= 1");
  const double wlo = std::clamp(window.lo, 0.0, 1.0);
  const double whi = std::clamp(window.hi, 0.0, 1.0);
  int count = 0;
  for (const auto& pc : pieces_) {
    const double lo = std::max(pc.x_lo, wlo);
    const double hi = std::min(pc.x_hi, whi);
    if (!(hi - lo > 0.0)) continue;
    const double r1 = (lo == pc.x_lo) ? pc.v_lo : map_(lo);
    const double r2 = (hi == pc.x_hi) ? pc.v_hi : map_(hi);
    if (pc.flat) {
      if (std::fabs(y - 0.5 * (r1 + r2)) <= 1e-12) ++count;
      continue;
    }
    if (y >= std::min(r1, r2) && y <= std::max(r1, r2)) ++count;
  }
  return count;
}

int banach_indicatrix(const MapSpec& f, double y, Interval window) {
  return f.indicatrix(y, window);
}

EquationSpec::EquationSpec(std::vector<MapSpec> maps, std::vector<Expr> coeffs, Expr inhom,
                           int resolution)
    : maps_(std::move(maps)),
      coeffs_(std::move(coeffs)),
      inhom_expr_(inhom),
      inhom_grid_(GridFunction::sample(inhom, resolution)) {
  if (maps_.empty() || maps_.size() != coeffs_.size())
    throw InvalidSpec("need one coefficient per map, at least one map");
}

EquationSpec::EquationSpec(std::vector<MapSpec> maps, std::vector<Expr> coeffs,
                           GridFunction inhom)
    : maps_(std::move(maps)), coeffs_(std::move(coeffs)), inhom_grid_(std::move(inhom)) {
  if (maps_.empty() || maps_.size() != coeffs_.size())
    throw InvalidSpec("need one coefficient per map, at least one map");
}

TransferOperator::TransferOperator(const EquationSpec& spec) : resolution_(spec.resolution()) {
  const int m = resolution_;
  const int n = spec.map_count();
  coeff_.assign(static_cast<std::size_t>(n), {});
  map_x_.assign(static_cast<std::size_t>(n), {});
  for (int j = 0; j < n; ++j) {
    auto& cj = coeff_[static_cast<std::size_t>(j)];
    auto& mj = map_x_[static_cast<std::size_t>(j)];
    cj.resize(static_cast<std::size_t>(m) + 1);
    mj.resize(static_cast<std::size_t>(m) + 1);
    const Expr& f = spec.maps()[static_cast<std::size_t>(j)].map();
    const Expr& g = spec.coeffs()[static_cast<std::size_t>(j)];
    for (int i = 0; i <= m; ++i) {
      const double x = static_cast<double>(i) / m;
      const double y = f(x);
      if (!std::isfinite(y))
        throw EvaluationError("map " + std::to_string(j + 1) + " is non-finite at x = " +
                              format_double(x));
      if (y < -1e-12 || y > 1.0 + 1e-12)
        throw DomainError("map " + std::to_string(j + 1) + " leaves [0,1] at x = " +
                          format_double(x));
      mj[static_cast<std::size_t>(i)] = std::clamp(y, 0.0, 1.0);
      const double c = g(x);
      if (!std::isfinite(c))
        throw EvaluationError("coefficient " + std::to_string(j + 1) +
                              " is non-finite at x = " + format_double(x));
      cj[static_cast<std::size_t>(i)] = c;
    }
  }
}

GridFunction TransferOperator::apply(const GridFunction& h) const {
  if (h.resolution() != resolution_)
    throw ResolutionMismatch("operator grid " + std::to_string(resolution_) +
                             " vs function grid " + std::to_string(h.resolution()));
  std::vector<double> out(static_cast<std::size_t>(resolution_) + 1);
  for (int i = 0; i <= resolution_; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < coeff_.size(); ++j)
      acc += coeff_[j][static_cast<std::size_t>(i)] *
             h.eval(map_x_[j][static_cast<std::size_t>(i)]);
    out[static_cast<std::size_t>(i)] = acc;
  }
  return GridFunction(resolution_, std::move(out));
}

GridFunction apply_P(const EquationSpec& spec, const GridFunction& h) {
  return TransferOperator(spec).apply(h);
}

double CovCheck::abs_difference() const {
  return std::fabs(integral_over_domain - integral_over_range);
}

CovCheck verify_change_of_variables(const MapSpec& f, const Expr& h, Interval window,
                                    int resolution) {
  if (!(window.lo >= -kRangeTol && window.hi <= 1.0 + kRangeTol && window.lo <= window.hi))
    throw DomainError("window must satisfy 0 <= lo <= hi <= 1");
  const double wlo = std::clamp(window.lo, 0.0, 1.0);
  const double whi = std::clamp(window.hi, 0.0, 1.0);
  if (resolution < 64) resolution = 64;
  const auto cells = [&](double len) {
    return std::max<int>(32, static_cast<int>(std::lround(len * resolution)));
  };

  struct Restricted {
    double lo, hi, rlo, rhi;
    bool flat;
  };
  std::vector<Restricted> parts;
  for (const auto& pc : f.pieces()) {
    const double lo = std::max(pc.x_lo, wlo);
    const double hi = std::min(pc.x_hi, whi);
    if (!(hi - lo > 0.0)) continue;
    const double r1 = (lo == pc.x_lo) ? pc.v_lo : f.map()(lo);
    const double r2 = (hi == pc.x_hi) ? pc.v_hi : f.map()(hi);
    parts.push_back({lo, hi, std::min(r1, r2), std::max(r1, r2), pc.flat});
  }

  for (const auto& r : parts) {
    constexpr int kProbe = 512;
    for (int k = 0; k <= kProbe; ++k) {
      const double y = r.rlo + (r.rhi - r.rlo) * k / kProbe;
      const double hv = h(y);
      if (!std::isfinite(hv))
        throw EvaluationError("h is non-finite at y = " + format_double(y));
      if (hv < -kRangeTol)
        throw DomainError("h must be nonnegative on the image; h(" + format_double(y) +
                          ") = " + format_double(hv));
    }
  }

  const Expr& map = f.map();
  const Expr& df = f.derivative();
  detail::Kahan lhs;
  for (const auto& r : parts) {
    if (r.flat) continue;  // |f'| = 0: the piece contributes nothing
    lhs.add(detail::integrate(
        [&](double x) { return h(map(x)) * std::fabs(df(x)); }, r.lo, r.hi,
        cells(r.hi - r.lo)));
  }

  std::vector<double> cuts;
  for (const auto& r : parts) {
    cuts.push_back(r.rlo);
    cuts.push_back(r.rhi);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end(),
                         [](double a, double b) { return b - a <= 1e-14; }),
             cuts.end());

  detail::Kahan rhs;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double c0 = cuts[i];
    const double c1 = cuts[i + 1];
    if (!(c1 - c0 > 1e-15)) continue;
    const int n = f.indicatrix(0.5 * (c0 + c1), {wlo, whi});
    if (n > 0) rhs.add(n * detail::integrate(h, c0, c1, cells(c1 - c0)));
  }
  return {lhs.sum, rhs.sum};
}

}  // namespace funceq

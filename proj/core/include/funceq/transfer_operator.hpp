#pragma once

#include <optional>
#include <vector>

#include "funceq/expr.hpp"
#include "funceq/grid_function.hpp"

namespace funceq {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double length() const { return hi - lo; }
};

/// One monotone piece of a piecewise-monotone map. v_lo/v_hi are one-sided
/// limits of the map at the piece ends; they differ from pointwise values
/// when the map jumps exactly at a breakpoint (mod1(2*x) at 1/2).
struct MonotonePiece {
  double x_lo = 0.0;
  double x_hi = 0.0;
  double v_lo = 0.0;
  double v_hi = 0.0;
  bool flat = false;  // |f'| <= 1e-12 across the piece
  bool increasing = true;
  double range_lo() const { return v_lo < v_hi ? v_lo : v_hi; }
  double range_hi() const { return v_lo < v_hi ? v_hi : v_lo; }
};

/// A measurable self-map of [0,1] that is monotone between declared
/// breakpoints. Construction validates, on a fine sample grid, that the map
/// stays inside [0,1], is continuous inside each piece, and that its
/// derivative keeps one sign (or vanishes) per piece. Violations throw
/// InvalidSpec with a hint to declare the missing breakpoint.
class MapSpec {
 public:
  static MapSpec make(Expr map, std::vector<double> breakpoints = {},
                      int validation_points = 40960);

  const Expr& map() const { return map_; }
  /// Symbolic derivative, valid almost everywhere (away from breakpoints).
  const Expr& derivative() const { return derivative_; }
  /// Normalized: sorted, deduplicated, first element 0, last element 1.
  const std::vector<double>& breakpoints() const { return breakpoints_; }
  const std::vector<MonotonePiece>& pieces() const { return pieces_; }
  bool has_flat_piece() const;

  /// Disjoint closed intervals whose union is the image of [0,1], sorted.
  /// Flat pieces contribute degenerate intervals unless absorbed.
  std::vector<Interval> image_intervals() const;

  /// Number of preimages of y inside `window` (counted piece-wise, so a
  /// value hit exactly at a shared piece boundary counts once per piece;
  /// that only happens on a null set of y). A flat piece whose value is y
  /// contributes 1.
  int indicatrix(double y, Interval window = {0.0, 1.0}) const;

 private:
  MapSpec(Expr map, Expr derivative, std::vector<double> breakpoints,
          std::vector<MonotonePiece> pieces)
      : map_(map), derivative_(derivative),
        breakpoints_(std::move(breakpoints)), pieces_(std::move(pieces)) {}
  Expr map_;
  Expr derivative_;
  std::vector<double> breakpoints_;
  std::vector<MonotonePiece> pieces_;
};

/// Counts preimages: card of f^{-1}(y) intersected with the window.
int banach_indicatrix(const MapSpec& f, double y, Interval window = {0.0, 1.0});

/// The equation  phi(x) = sum_n coeff_n(x) * phi(map_n(x)) + inhom(x)
/// discretized at a fixed grid resolution.
class EquationSpec {
 public:
  static constexpr int kDefaultResolution = 4096;

  EquationSpec(std::vector<MapSpec> maps, std::vector<Expr> coeffs, Expr inhom,
               int resolution = kDefaultResolution);
  EquationSpec(std::vector<MapSpec> maps, std::vector<Expr> coeffs,
               GridFunction inhom);

  int map_count() const { return static_cast<int>(maps_.size()); }
  const std::vector<MapSpec>& maps() const { return maps_; }
  const std::vector<Expr>& coeffs() const { return coeffs_; }
  int resolution() const { return inhom_grid_.resolution(); }
  /// Inhomogeneity sampled at the grid nodes.
  const GridFunction& inhom() const { return inhom_grid_; }
  const std::optional<Expr>& inhom_expr() const { return inhom_expr_; }

 private:
  std::vector<MapSpec> maps_;
  std::vector<Expr> coeffs_;
  std::optional<Expr> inhom_expr_;
  GridFunction inhom_grid_;
};

/// The substitution operator  (P h)(x) = sum_n coeff_n(x) * h(map_n(x))
/// with maps and coefficients pre-evaluated at the grid nodes. Constructing
/// one and applying it repeatedly is much cheaper than apply_P in a loop.
class TransferOperator {
 public:
  explicit TransferOperator(const EquationSpec& spec);
  int resolution() const { return resolution_; }
  /// Throws ResolutionMismatch if h lives on a different grid.
  GridFunction apply(const GridFunction& h) const;

 private:
  int resolution_;
  std::vector<std::vector<double>> coeff_;  // [map][node]
  std::vector<std::vector<double>> map_x_;  // [map][node], clamped to [0,1]
};

/// One-shot application of the substitution operator.
GridFunction apply_P(const EquationSpec& spec, const GridFunction& h);

/// Two independent evaluations of the same area: substituting y = f(x)
/// weighs the integral of h over the range by the preimage count.
struct CovCheck {
  double integral_over_domain = 0.0;  // int_E h(f(x)) |f'(x)| dx
  double integral_over_range = 0.0;   // int h(y) * card(f^{-1}(y) ∩ E) dy
  double abs_difference() const;
};

/// Checks the change-of-variables identity for a piecewise-monotone map.
/// `h` must be nonnegative on the image of the window (DomainError).
/// Throws EvaluationError if an integrand is non-finite at a quadrature node.
CovCheck verify_change_of_variables(const MapSpec& f, const Expr& h,
                                    Interval window = {0.0, 1.0},
                                    int resolution = 4096);

}  // namespace funceq

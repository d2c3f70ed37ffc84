#pragma once

#include <span>
#include <vector>

#include "funceq/errors.hpp"
#include "funceq/expr.hpp"

namespace funceq {

namespace detail {

/// Kahan compensated accumulator. All norms and series accumulations in this
/// library go through it so long sums stay at a few ulp of error.
struct Kahan {
  double sum = 0.0;
  double c = 0.0;
  void add(double v) {
    const double y = v - c;
    const double t = sum + y;
    c = (t - sum) - y;
    sum = t;
  }
};

}  // namespace detail

/// Piecewise-linear function on [0,1]: `resolution` uniform cells and
/// resolution+1 samples. The resolution must be even and at least 16.
///
/// The L1 norm is the exact integral of the piecewise-linear interpolant of
/// the absolute samples (composite trapezoid of |s_i|), accumulated with
/// compensation. Evaluation at a point that is exactly a grid node returns
/// the stored sample bit-for-bit.
class GridFunction {
 public:
  GridFunction(int resolution, std::vector<double> samples);

  /// Samples an expression at the nodes i/resolution. Throws EvaluationError
  /// if any value is non-finite.
  static GridFunction sample(const Expr& e, int resolution);
  static GridFunction constant(double v, int resolution);
  static GridFunction zero(int resolution);

  int resolution() const noexcept { return resolution_; }
  std::span<const double> samples() const noexcept { return samples_; }
  double operator[](int i) const { return samples_[static_cast<std::size_t>(i)]; }

  /// Linear interpolation; DomainError outside [0,1].
  double eval(double x) const;

  double l1_norm() const;
  /// Integral of the interpolant of |samples| over [a,b] in [0,1].
  /// l1_norm_on(0,1) is bit-identical to l1_norm().
  double l1_norm_on(double a, double b) const;

  /// Resamples onto a grid whose resolution divides or is divisible by the
  /// current one. Coarsening keeps node values; refining interpolates.
  GridFunction refined(int new_resolution) const;

  /// a*h1 + b*h2 nodewise; resolutions must match.
  static GridFunction combine(double a, const GridFunction& h1, double b,
                              const GridFunction& h2);

 private:
  int resolution_;
  std::vector<double> samples_;
};

/// L1 norm of the nodewise difference.
double l1_distance(const GridFunction& h1, const GridFunction& h2);

}  // namespace funceq

#pragma once

#include <cmath>

#include "funceq/errors.hpp"
#include "funceq/expr.hpp"
#include "funceq/grid_function.hpp"

namespace funceq::detail {

/// Composite Simpson rule on [a,b] with `cells` uniform cells. The first and
/// last cell are subdivided dyadically toward the endpoint (48 halvings), so
/// integrands whose higher derivatives blow up at the interval ends (x^0.25
/// and friends) still integrate to ~1e-9 accuracy instead of stalling at the
/// plain composite rate. Throws EvaluationError when the integrand is
/// non-finite at a quadrature node.
template <class F>
double integrate(F&& f, double a, double b, int cells = 64) {
  if (!(b > a)) return 0.0;
  if (cells < 2) cells = 2;
  const double width = (b - a) / cells;
  Kahan acc;
  const auto simpson = [&](double lo, double hi) {
    const double mid = 0.5 * (lo + hi);
    const double v = (hi - lo) / 6.0 * (f(lo) + 4.0 * f(mid) + f(hi));
    if (!std::isfinite(v))
      throw EvaluationError("integrand is non-finite near x = " + format_double(mid));
    acc.add(v);
  };

  constexpr int kLevels = 48;
  double prev = a + width;
  for (int k = 1; k <= kLevels; ++k) {
    const double p = a + width * std::ldexp(1.0, -k);
    simpson(p, prev);
    prev = p;
  }
  simpson(a, prev);

  for (int i = 1; i + 1 < cells; ++i) simpson(a + i * width, a + (i + 1) * width);

  prev = b - width;
  for (int k = 1; k <= kLevels; ++k) {
    const double p = b - width * std::ldexp(1.0, -k);
    simpson(prev, p);
    prev = p;
  }
  simpson(prev, b);
  return acc.sum;
}

}  // namespace funceq::detail

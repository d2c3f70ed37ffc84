#include "funceq/grid_function.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace funceq {

namespace {

void validate_resolution(int m) {
  if (m < 16 || m % 2 != 0)
    throw InvalidSpec("grid resolution must be an even integer >= 16, got " +
                      std::to_string(m));
}

// Index of the node x coincides with, or -1. Uses an exact-quotient test so
// only true nodes hit the fast path.
int node_index(double x, int m) {
  const long long i = std::llround(x * m);
  if (i >= 0 && i <= m && static_cast<double>(i) / m == x) return static_cast<int>(i);
  return -1;
}

}  // namespace

GridFunction::GridFunction(int resolution, std::vector<double> samples)
    : resolution_(resolution), samples_(std::move(samples)) {
  validate_resolution(resolution_);
  if (samples_.size() != static_cast<std::size_t>(resolution_) + 1)
    throw InvalidSpec("expected " + std::to_string(resolution_ + 1) + " samples, got " +
                      std::to_string(samples_.size()));
  for (std::size_t i = 0; i < samples_.size(); ++i)
    if (!std::isfinite(samples_[i]))
      throw EvaluationError("non-finite sample at node " + std::to_string(i));
}

GridFunction GridFunction::sample(const Expr& e, int resolution) {
  validate_resolution(resolution);
  std::vector<double> s(static_cast<std::size_t>(resolution) + 1);
  for (int i = 0; i <= resolution; ++i) {
    const double x = static_cast<double>(i) / resolution;
    const double v = e(x);
    if (!std::isfinite(v))
      throw EvaluationError("expression is non-finite at x = " + format_double(x));
    s[static_cast<std::size_t>(i)] = v;
  }
  return GridFunction(resolution, std::move(s));
}

GridFunction GridFunction::constant(double v, int resolution) {
  validate_resolution(resolution);
  if (!std::isfinite(v)) throw EvaluationError("non-finite constant");
  return GridFunction(resolution,
                      std::vector<double>(static_cast<std::size_t>(resolution) + 1, v));
}

GridFunction GridFunction::zero(int resolution) { return constant(0.0, resolution); }

double GridFunction::eval(double x) const {
  if (!(x >= 0.0 && x <= 1.0))
    throw DomainError("evaluation outside [0,1]: x = " + format_double(x));
  const int hit = node_index(x, resolution_);
  if (hit >= 0) return samples_[static_cast<std::size_t>(hit)];
  const double t = x * resolution_;
  const int i = std::min(static_cast<int>(t), resolution_ - 1);
  const double w = t - i;
  const double lo = samples_[static_cast<std::size_t>(i)];
  return lo + w * (samples_[static_cast<std::size_t>(i) + 1] - lo);
}

double GridFunction::l1_norm() const { return l1_norm_on(0.0, 1.0); }

double GridFunction::l1_norm_on(double a, double b) const {
  if (!(a >= 0.0 && b <= 1.0 && a <= b))
    throw DomainError("l1_norm_on needs 0 <= a <= b <= 1");
  if (a == b) return 0.0;
  const int m = resolution_;

  const auto abs_interp = [&](double x) {
    const int hit = node_index(x, m);
    if (hit >= 0) return std::fabs(samples_[static_cast<std::size_t>(hit)]);
    const double t = x * m;
    const int i = std::min(static_cast<int>(t), m - 1);
    const double w = t - i;
    const double lo = std::fabs(samples_[static_cast<std::size_t>(i)]);
    const double hi = std::fabs(samples_[static_cast<std::size_t>(i) + 1]);
    return lo + w * (hi - lo);
  };

  int ia = node_index(a, m);
  const bool a_is_node = ia >= 0;
  if (!a_is_node) ia = static_cast<int>(std::floor(a * m)) + 1;
  int ib = node_index(b, m);
  const bool b_is_node = ib >= 0;
  if (!b_is_node) ib = static_cast<int>(std::floor(b * m));

  if (ia > ib) {  // both ends inside one cell
    return 0.5 * (abs_interp(a) + abs_interp(b)) * (b - a);
  }

  detail::Kahan acc;
  if (!a_is_node)
    acc.add(0.5 * (abs_interp(a) + std::fabs(samples_[static_cast<std::size_t>(ia)])) *
            (static_cast<double>(ia) / m - a));
  for (int i = ia; i < ib; ++i)
    acc.add((std::fabs(samples_[static_cast<std::size_t>(i)]) +
             std::fabs(samples_[static_cast<std::size_t>(i) + 1])) /
            (2.0 * m));
  if (!b_is_node)
    acc.add(0.5 * (std::fabs(samples_[static_cast<std::size_t>(ib)]) + abs_interp(b)) *
            (b - static_cast<double>(ib) / m));
  return acc.sum;
}

GridFunction GridFunction::refined(int new_resolution) const {
  validate_resolution(new_resolution);
  if (new_resolution % resolution_ != 0 && resolution_ % new_resolution != 0)
    throw ResolutionMismatch("resolutions must divide each other: " +
                             std::to_string(resolution_) + " vs " +
                             std::to_string(new_resolution));
  std::vector<double> s(static_cast<std::size_t>(new_resolution) + 1);
  for (int j = 0; j <= new_resolution; ++j)
    s[static_cast<std::size_t>(j)] = eval(static_cast<double>(j) / new_resolution);
  return GridFunction(new_resolution, std::move(s));
}

GridFunction GridFunction::combine(double a, const GridFunction& h1, double b,
                                   const GridFunction& h2) {
  if (h1.resolution_ != h2.resolution_)
    throw ResolutionMismatch("combine: " + std::to_string(h1.resolution_) + " vs " +
                             std::to_string(h2.resolution_));
  std::vector<double> s(h1.samples_.size());
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = a * h1.samples_[i] + b * h2.samples_[i];
  return GridFunction(h1.resolution_, std::move(s));
}

double l1_distance(const GridFunction& h1, const GridFunction& h2) {
  return GridFunction::combine(1.0, h1, -1.0, h2).l1_norm();
}

}  // namespace funceq

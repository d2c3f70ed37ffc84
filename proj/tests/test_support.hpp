#pragma once

#include <funceq/grid_function.hpp>

#include <random>

namespace test_support {

// Random piecewise-linear function on [0,1]: values drawn at 16 coarse knots,
// then refined to the target resolution so interpolation is exact on the fine
// grid. resolution must be a multiple of 16.
inline funceq::GridFunction random_piecewise_linear(std::mt19937& rng,
                                                    int resolution,
                                                    double lo = -1.0,
                                                    double hi = 1.0) {
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> knots(17);
  for (auto& v : knots) v = dist(rng);
  return funceq::GridFunction(16, std::move(knots)).refined(resolution);
}

}  // namespace test_support

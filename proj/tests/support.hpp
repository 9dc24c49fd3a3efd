#pragma once

#include <cmath>
#include <random>

#include "infogeom/core.hpp"

namespace testing {

inline std::mt19937_64& rng() {
  static std::mt19937_64 gen(20260916);
  return gen;
}

inline double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng()); }

inline double max_abs_diff(const infogeom::MetricTensor& a, const Eigen::MatrixXd& b) {
  return (a.matrix() - b).cwiseAbs().maxCoeff();
}

}  // namespace testing

#pragma once

#include <functional>
#include <span>

#include "infogeom/core.hpp"

namespace infogeom {

/// Change of variables used for unbounded endpoints.
enum class InfiniteMap {
  /// x = t / (1 - t^2) on (-1, 1); x = a + t / (1 - t) on (0, 1) for half lines.
  kRational,
  /// x = tan(pi t / 2) on (-1, 1); x = a + tan(pi t / 2) on (0, 1) for half lines.
  kTangent,
};

struct QuadratureSpec {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  long long max_evaluations = 1'000'000;
  InfiniteMap infinite_map = InfiniteMap::kRational;
  /// Uniform panels (in the mapped variable) the adaptive loop starts from.
  int initial_panels = 8;

  void validate() const;
};

struct IntegrationResult {
  double value = 0.0;
  double error_estimate = 0.0;
  long long evaluations = 0;
  bool converged = false;
};

class NonConvergenceError : public Error {
 public:
  NonConvergenceError(const std::string& what, IntegrationResult best)
      : Error(what), best_(best) {}
  const IntegrationResult& best_estimate() const noexcept { return best_; }

 private:
  IntegrationResult best_;
};

class NonFiniteIntegrandError : public Error {
 public:
  NonFiniteIntegrandError(const std::string& what, double x) : Error(what), x_(x) {}
  double where() const noexcept { return x_; }

 private:
  double x_;
};

/// Adaptive Gauss-Kronrod (10/21) integration of f over an open interval.
/// Unbounded endpoints go through spec.infinite_map. Returns an unconverged
/// result instead of throwing when the budget runs out.
IntegrationResult try_integrate_1d(const std::function<double(double)>& f, Interval interval,
                                   const QuadratureSpec& spec = {});

/// As try_integrate_1d, but throws NonConvergenceError carrying the best
/// estimate when the error contract is not met.
IntegrationResult integrate_1d(const std::function<double(double)>& f, Interval interval,
                               const QuadratureSpec& spec = {});

/// Nested integration over a box of dimension <= 4. The error estimate is the
/// outer estimate plus the integrated inner estimates.
IntegrationResult integrate_box(const std::function<double(std::span<const double>)>& f,
                                const SpatialDomain& box, const QuadratureSpec& spec = {});

inline constexpr std::size_t kMaxBoxDimension = 4;

}  // namespace infogeom

#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "infogeom/constructions.hpp"
#include "infogeom/core.hpp"
#include "infogeom/quadrature.hpp"

namespace infogeom {

struct GridAxis {
  double start;
  double end;
  std::size_t count;
};

struct Exclusion {
  std::string label;
  std::function<bool(const ParamPoint&)> excludes;
};

/// Cartesian grid over M, last axis varying fastest, minus excluded points.
class VerificationGrid {
 public:
  explicit VerificationGrid(std::vector<GridAxis> axes, std::vector<Exclusion> exclusions = {});

  /// Parses "start:end:count,start:end:count,...".
  static VerificationGrid parse(const std::string& spec);

  const std::vector<GridAxis>& axes() const { return axes_; }
  const std::vector<Exclusion>& exclusions() const { return exclusions_; }
  void add_exclusion(Exclusion e) { exclusions_.push_back(std::move(e)); }

  /// Points after exclusions. Throws DimensionError on an axis-count mismatch,
  /// DomainError if a remaining point lies outside `params`, and Error if
  /// nothing remains.
  std::vector<ParamPoint> points(const ParametricDomain& params) const;

 private:
  std::vector<GridAxis> axes_;
  std::vector<Exclusion> exclusions_;
};

class GridSpecError : public Error {
 public:
  using Error::Error;
};

/// Drops points within `width` of phi = 0 or phi = pi (coordinate `axis`).
Exclusion sphere_pole_bands(std::size_t axis = 1, double width = 0.05);

struct MetricComparison {
  double max_abs_err = 0.0;
  /// Relative to max(1, |b entry|).
  double max_rel_err = 0.0;
};

/// Entrywise comparison of a against reference b.
MetricComparison compare_metrics(const MetricTensor& a, const MetricTensor& b);

struct PointResult {
  std::size_t index = 0;
  ParamPoint theta;
  MetricTensor computed;
  MetricTensor target;
  Eigen::MatrixXd abs_err;
  double max_abs_err = 0.0;
  double max_rel_err = 0.0;
  double quadrature_error = 0.0;
  long long evaluations = 0;
};

struct VerificationReport {
  /// "demo" or "verify"; a part's kind is "part".
  std::string kind = "verify";
  std::string name;
  double tolerance = 0.0;
  std::vector<GridAxis> grid;
  std::vector<std::string> exclusions;
  std::vector<PointResult> points;
  /// Sub-comparisons over the same grid; they count toward the summary.
  std::vector<VerificationReport> parts;

  double max_abs_err = 0.0;
  double max_rel_err = 0.0;
  std::optional<ParamPoint> worst_point;
  long long evaluations = 0;
  double max_quadrature_error = 0.0;
  bool pass = false;

  /// Recomputes summary fields from points and parts.
  void summarize();
};

/// Thrown when an engine fails at a grid point; the message names the point.
class GridPointError : public Error {
 public:
  GridPointError(const std::string& what, std::size_t index) : Error(what), index_(index) {}
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

/// Compares `computed` against `target` at every grid point. Points are
/// evaluated concurrently and assembled in grid order.
VerificationReport compare_fields(const std::string& name, const MetricField& computed,
                                  const MetricField& target, const VerificationGrid& grid, double tol);

/// Fisher metric of `family` (direct engine) against `target` on the grid.
VerificationReport verify_construction(const DensityFamily& family, const MetricField& target,
                                       const VerificationGrid& grid, double tol,
                                       const QuadratureSpec& spec = {});
/// Same, through the decomposed engine.
VerificationReport verify_construction(const DisjointProductFamily& family, const MetricField& target,
                                       const VerificationGrid& grid, double tol,
                                       const QuadratureSpec& spec = {});

std::vector<std::string> demo_names();

/// Runs one pinned end-to-end example. `tol` overrides the pinned tolerance.
/// Throws UnknownNameError listing the valid names.
VerificationReport run_demo(const std::string& name, std::optional<double> tol = std::nullopt);

/// The component metrics g(P_1), g(P_2), g(P_3) of the mixed hyperbolic
/// example in closed form.
MetricTensor hyperbolic_component_metric(std::size_t component, const ParamPoint& theta);

}  // namespace infogeom

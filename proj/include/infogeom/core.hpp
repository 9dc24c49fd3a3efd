#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <initializer_list>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "infogeom/errors.hpp"

namespace infogeom {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Lower clamp applied to P in quotients of the form (dP)(dP)/P.
inline constexpr double kDensityFloor = 1e-300;

/// Relative central-difference step, cbrt(machine epsilon).
double default_fd_step();

/// Open interval (lower, upper); either end may be infinite.
struct Interval {
  double lower;
  double upper;

  bool contains(double x) const { return x > lower && x < upper; }
  bool is_real_line() const { return lower == -kInf && upper == kInf; }
  bool operator==(const Interval&) const = default;
};

/// Open box X = I_1 x ... x I_k.
class SpatialDomain {
 public:
  explicit SpatialDomain(std::vector<Interval> intervals);
  SpatialDomain(std::initializer_list<Interval> intervals)
      : SpatialDomain(std::vector<Interval>(intervals)) {}

  static SpatialDomain real_line() { return SpatialDomain{{-kInf, kInf}}; }
  static SpatialDomain positive_half_line() { return SpatialDomain{{0.0, kInf}}; }

  std::size_t dim() const { return intervals_.size(); }
  const Interval& operator[](std::size_t i) const { return intervals_[i]; }
  const std::vector<Interval>& intervals() const { return intervals_; }
  bool contains(std::span<const double> x) const;

  bool operator==(const SpatialDomain&) const = default;

 private:
  std::vector<Interval> intervals_;
};

/// A point theta of the parametric domain M.
class ParamPoint {
 public:
  ParamPoint() = default;
  explicit ParamPoint(std::vector<double> coords) : coords_(std::move(coords)) {}
  ParamPoint(std::initializer_list<double> coords) : coords_(coords) {}

  std::size_t size() const { return coords_.size(); }
  double operator[](std::size_t i) const { return coords_[i]; }
  double& operator[](std::size_t i) { return coords_[i]; }
  std::span<const double> coords() const { return coords_; }
  const std::vector<double>& vec() const { return coords_; }

  bool operator==(const ParamPoint&) const = default;

 private:
  std::vector<double> coords_;
};

std::string to_string(const ParamPoint& theta);

/// Parametric domain M: an open box in R^m, optionally narrowed by a predicate.
class ParametricDomain {
 public:
  using Predicate = std::function<bool(const ParamPoint&)>;

  /// Unbounded R^m.
  explicit ParametricDomain(std::size_t dim);
  explicit ParametricDomain(std::vector<Interval> box, Predicate extra = {},
                            std::string extra_label = {});

  std::size_t dim() const { return box_.size(); }
  const std::vector<Interval>& box() const { return box_; }
  bool contains(const ParamPoint& theta) const;
  void require(const ParamPoint& theta) const;

  /// Same box and same predicate label. Predicates are compared by label.
  bool same_as(const ParametricDomain& other) const;

 private:
  std::vector<Interval> box_;
  Predicate extra_;
  std::string extra_label_;
};

/// A scalar map h: M -> R with its gradient.
struct ScalarField {
  std::function<double(const ParamPoint&)> value;
  std::function<std::vector<double>(const ParamPoint&)> gradient;
};

/// A density family frozen at one parameter point. Built once per theta so
/// theta-dependent work (h(theta), its gradient) is not redone at every x.
struct DensitySlice {
  std::function<double(std::span<const double> x)> density;
  /// Writes d_a ln P for every a. Empty when the family has no analytic form.
  std::function<void(std::span<const double> x, std::span<double> out)> log_gradient;
  /// Optional closed integrand (d_a P)(d_b P)/P for families whose density has
  /// zeros where the quotient form cancels exactly.
  std::function<double(std::span<const double> x, std::size_t a, std::size_t b)> information;
};

/// A parametric family P(x; theta) of probability densities.
class DensityFamily {
 public:
  using Slicer = std::function<DensitySlice(const ParamPoint&)>;

  DensityFamily(std::string name, SpatialDomain domain, ParametricDomain params, Slicer slicer,
                bool analytic_gradient);

  const std::string& name() const { return name_; }
  const SpatialDomain& domain() const { return domain_; }
  const ParametricDomain& params() const { return params_; }
  bool has_analytic_gradient() const { return analytic_gradient_; }

  /// Slice at theta. Throws DomainError when theta is outside M.
  DensitySlice at(const ParamPoint& theta) const;
  /// Slice without the membership check; used for finite-difference probes.
  DensitySlice at_unchecked(const ParamPoint& theta) const { return slicer_(theta); }

  double evaluate_density(std::span<const double> x, const ParamPoint& theta) const;
  double evaluate_density(double x, const ParamPoint& theta) const {
    return evaluate_density(std::span<const double>(&x, 1), theta);
  }

  /// Gradient of ln P in theta; analytic when available, else central
  /// differences with per-coordinate step fd_step * (1 + |theta^a|).
  std::vector<double> log_param_gradient(std::span<const double> x, const ParamPoint& theta,
                                         std::optional<double> fd_step = std::nullopt) const;
  std::vector<double> log_param_gradient(double x, const ParamPoint& theta,
                                         std::optional<double> fd_step = std::nullopt) const {
    return log_param_gradient(std::span<const double>(&x, 1), theta, fd_step);
  }

 private:
  void require_x(std::span<const double> x) const;

  std::string name_;
  SpatialDomain domain_;
  ParametricDomain params_;
  Slicer slicer_;
  bool analytic_gradient_;
};

/// Symmetric m x m matrix g_ab. Only symmetric values can be stored.
class MetricTensor {
 public:
  explicit MetricTensor(std::size_t dim = 0);
  /// Takes the upper triangle of `m` and mirrors it.
  explicit MetricTensor(const Eigen::MatrixXd& m);
  MetricTensor(std::initializer_list<std::initializer_list<double>> rows);

  std::size_t dim() const { return static_cast<std::size_t>(entries_.rows()); }
  double operator()(std::size_t a, std::size_t b) const { return entries_(a, b); }
  void set(std::size_t a, std::size_t b, double v) {
    entries_(a, b) = v;
    entries_(b, a) = v;
  }
  const Eigen::MatrixXd& matrix() const { return entries_; }

  bool is_psd(double tol = 1e-8) const;
  double min_eigenvalue() const;

  MetricTensor& operator+=(const MetricTensor& other);
  friend MetricTensor operator*(double s, MetricTensor m);

  /// Worst-entry quadrature error estimate, when produced by an engine.
  double error_estimate = 0.0;
  long long evaluations = 0;

 private:
  Eigen::MatrixXd entries_;
};

/// A metric varying over M.
class MetricField {
 public:
  using Evaluator = std::function<MetricTensor(const ParamPoint&)>;

  MetricField(ParametricDomain params, Evaluator evaluator)
      : params_(std::move(params)), evaluator_(std::move(evaluator)) {}

  const ParametricDomain& params() const { return params_; }
  MetricTensor operator()(const ParamPoint& theta) const;

 private:
  ParametricDomain params_;
  Evaluator evaluator_;
};

}  // namespace infogeom

#pragma once

#include <Eigen/Dense>

#include <functional>
#include <string>
#include <vector>

#include "infogeom/core.hpp"

namespace infogeom {

/// A differentiable map h: M -> R^n whose pullback h*delta is the target metric.
class Embedding {
 public:
  using Map = std::function<Eigen::VectorXd(const ParamPoint&)>;
  using JacobianFn = std::function<Eigen::MatrixXd(const ParamPoint&)>;

  /// An empty `jacobian` selects central finite differences of `map`.
  Embedding(std::string name, ParametricDomain params, std::size_t ambient_dim, Map map,
            JacobianFn jacobian = {});

  const std::string& name() const { return name_; }
  const ParametricDomain& params() const { return params_; }
  std::size_t param_dim() const { return params_.dim(); }
  std::size_t ambient_dim() const { return ambient_dim_; }
  bool has_analytic_jacobian() const { return static_cast<bool>(jacobian_); }

  Eigen::VectorXd map(const ParamPoint& theta) const;
  /// n x m matrix of d_a h^i.
  Eigen::MatrixXd jacobian(const ParamPoint& theta) const;

  /// h^i with its gradient.
  ScalarField component(std::size_t i) const;

 private:
  std::string name_;
  ParametricDomain params_;
  std::size_t ambient_dim_;
  Map map_;
  JacobianFn jacobian_;
};

/// Central-difference Jacobian with per-coordinate step rel_step * (1 + |theta^a|).
Eigen::MatrixXd finite_difference_jacobian(const Embedding::Map& map, const ParamPoint& theta,
                                           double rel_step = default_fd_step());

struct Pullback {
  MetricTensor metric;
  std::size_t jacobian_rank = 0;
  /// rank(J) < m: the metric is only semidefinite here.
  bool degenerate = false;
};

/// g = J^T J at theta, plus a rank diagnosis of J.
Pullback pullback(const Embedding& embedding, const ParamPoint& theta);
MetricTensor pullback_metric(const Embedding& embedding, const ParamPoint& theta);
MetricField pullback_field(const Embedding& embedding);

/// h = (cos t sin p, sin t sin p, cos p) on (0, 2 pi) x (0, pi).
Embedding sphere2_embedding();

/// Isometric embedding of the patch beta > 1 of the half-plane metric beta^-2 delta:
/// h = (cos a / b, sin a / b, ln(b + sqrt(b^2 - 1)) - sqrt(b^2 - 1) / b).
Embedding hyperbolic_patch_embedding();

/// h = radius (cos t, sin t) on R.
Embedding circle_embedding(double radius);

/// Catalog lookup: "sphere2", "hyperbolic", "circle" (radius 1) or "circle:<radius>".
Embedding embedding_by_name(const std::string& name);
std::vector<std::string> embedding_names();
bool is_catalog_embedding(const std::string& name);

}  // namespace infogeom

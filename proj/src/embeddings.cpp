#include "infogeom/embeddings.hpp"

#include <cmath>
#include <numbers>

namespace infogeom {

Embedding::Embedding(std::string name, ParametricDomain params, std::size_t ambient_dim, Map map,
                     JacobianFn jacobian)
    : name_(std::move(name)),
      params_(std::move(params)),
      ambient_dim_(ambient_dim),
      map_(std::move(map)),
      jacobian_(std::move(jacobian)) {
  if (ambient_dim_ < params_.dim()) {
    throw DimensionError("embedding '" + name_ + "' has ambient dimension " +
                         std::to_string(ambient_dim_) + " below parameter dimension " +
                         std::to_string(params_.dim()));
  }
}

Eigen::VectorXd Embedding::map(const ParamPoint& theta) const {
  if (theta.size() != params_.dim()) throw DimensionError("embedding evaluated at wrong dimension");
  Eigen::VectorXd h = map_(theta);
  if (static_cast<std::size_t>(h.size()) != ambient_dim_) {
    throw DimensionError("embedding '" + name_ + "' returned wrong ambient dimension");
  }
  return h;
}

Eigen::MatrixXd Embedding::jacobian(const ParamPoint& theta) const {
  if (theta.size() != params_.dim()) throw DimensionError("embedding evaluated at wrong dimension");
  if (jacobian_) return jacobian_(theta);
  return finite_difference_jacobian(map_, theta);
}

ScalarField Embedding::component(std::size_t i) const {
  if (i >= ambient_dim_) throw DimensionError("embedding component index out of range");
  // Copies keep the field valid independently of this embedding's lifetime.
  return ScalarField{
      [self = *this, i](const ParamPoint& theta) { return self.map(theta)(static_cast<Eigen::Index>(i)); },
      [self = *this, i](const ParamPoint& theta) {
        const Eigen::MatrixXd j = self.jacobian(theta);
        std::vector<double> g(static_cast<std::size_t>(j.cols()));
        for (Eigen::Index a = 0; a < j.cols(); ++a) g[a] = j(static_cast<Eigen::Index>(i), a);
        return g;
      }};
}

Eigen::MatrixXd finite_difference_jacobian(const Embedding::Map& map, const ParamPoint& theta,
                                           double rel_step) {
  const std::size_t m = theta.size();
  Eigen::MatrixXd jac;
  for (std::size_t a = 0; a < m; ++a) {
    const double h = rel_step * (1.0 + std::abs(theta[a]));
    ParamPoint plus = theta;
    ParamPoint minus = theta;
    plus[a] += h;
    minus[a] -= h;
    const Eigen::VectorXd col = (map(plus) - map(minus)) / (plus[a] - minus[a]);
    if (a == 0) jac.resize(col.size(), static_cast<Eigen::Index>(m));
    jac.col(static_cast<Eigen::Index>(a)) = col;
  }
  return jac;
}

Pullback pullback(const Embedding& embedding, const ParamPoint& theta) {
  embedding.params().require(theta);
  const Eigen::MatrixXd j = embedding.jacobian(theta);
  Pullback out;
  out.metric = MetricTensor(Eigen::MatrixXd(j.transpose() * j));
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(j);
  out.jacobian_rank = static_cast<std::size_t>(qr.rank());
  out.degenerate = out.jacobian_rank < embedding.param_dim();
  return out;
}

MetricTensor pullback_metric(const Embedding& embedding, const ParamPoint& theta) {
  return pullback(embedding, theta).metric;
}

MetricField pullback_field(const Embedding& embedding) {
  return MetricField(embedding.params(),
                     [embedding](const ParamPoint& theta) { return pullback_metric(embedding, theta); });
}

Embedding sphere2_embedding() {
  ParametricDomain params({{0.0, 2.0 * std::numbers::pi}, {0.0, std::numbers::pi}});
  auto map = [](const ParamPoint& p) {
    const double t = p[0];
    const double f = p[1];
    Eigen::VectorXd h(3);
    h << std::cos(t) * std::sin(f), std::sin(t) * std::sin(f), std::cos(f);
    return h;
  };
  auto jac = [](const ParamPoint& p) {
    const double t = p[0];
    const double f = p[1];
    Eigen::MatrixXd j(3, 2);
    j << -std::sin(t) * std::sin(f), std::cos(t) * std::cos(f),
        std::cos(t) * std::sin(f), std::sin(t) * std::cos(f),
        0.0, -std::sin(f);
    return j;
  };
  return Embedding("sphere2", std::move(params), 3, map, jac);
}

Embedding hyperbolic_patch_embedding() {
  ParametricDomain params({{-kInf, kInf}, {1.0, kInf}});
  auto map = [](const ParamPoint& p) {
    const double a = p[0];
    const double b = p[1];
    const double r = std::sqrt(b * b - 1.0);
    Eigen::VectorXd h(3);
    h << std::cos(a) / b, std::sin(a) / b, std::log(b + r) - r / b;
    return h;
  };
  auto jac = [](const ParamPoint& p) {
    const double a = p[0];
    const double b = p[1];
    const double r = std::sqrt(b * b - 1.0);
    Eigen::MatrixXd j(3, 2);
    j << -std::sin(a) / b, -std::cos(a) / (b * b),
        std::cos(a) / b, -std::sin(a) / (b * b),
        0.0, r / (b * b);
    return j;
  };
  return Embedding("hyperbolic", std::move(params), 3, map, jac);
}

Embedding circle_embedding(double radius) {
  if (!(radius > 0.0)) throw DomainError("circle radius must be positive");
  auto map = [radius](const ParamPoint& p) {
    Eigen::VectorXd h(2);
    h << radius * std::cos(p[0]), radius * std::sin(p[0]);
    return h;
  };
  auto jac = [radius](const ParamPoint& p) {
    Eigen::MatrixXd j(2, 1);
    j << -radius * std::sin(p[0]), radius * std::cos(p[0]);
    return j;
  };
  return Embedding("circle", ParametricDomain(1), 2, map, jac);
}

std::vector<std::string> embedding_names() { return {"sphere2", "hyperbolic", "circle", "circle:<radius>"}; }

bool is_catalog_embedding(const std::string& name) {
  return name == "sphere2" || name == "hyperbolic" || name == "circle" || name.starts_with("circle:");
}

Embedding embedding_by_name(const std::string& name) {
  if (name == "sphere2") return sphere2_embedding();
  if (name == "hyperbolic") return hyperbolic_patch_embedding();
  if (name == "circle") return circle_embedding(1.0);
  if (name.starts_with("circle:")) {
    const std::string r = name.substr(7);
    std::size_t used = 0;
    double radius = 0.0;
    try {
      radius = std::stod(r, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != r.size()) {
      throw UnknownNameError("bad circle radius in '" + name + "'", embedding_names());
    }
    return circle_embedding(radius);
  }
  throw UnknownNameError("unknown embedding '" + name + "'", embedding_names());
}

}  // namespace infogeom

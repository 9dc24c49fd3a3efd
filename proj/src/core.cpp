#include "infogeom/core.hpp"

#include <algorithm>
#include <sstream>

namespace infogeom {

double default_fd_step() {
  static const double step = std::cbrt(std::numeric_limits<double>::epsilon());
  return step;
}

SpatialDomain::SpatialDomain(std::vector<Interval> intervals) : intervals_(std::move(intervals)) {
  if (intervals_.empty()) throw DimensionError("spatial domain needs at least one interval");
  for (const auto& iv : intervals_) {
    if (!(iv.lower < iv.upper)) throw DomainError("spatial interval needs lower < upper");
  }
}

bool SpatialDomain::contains(std::span<const double> x) const {
  if (x.size() != intervals_.size()) return false;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!intervals_[i].contains(x[i])) return false;
  }
  return true;
}

std::string to_string(const ParamPoint& theta) {
  std::ostringstream os;
  os.precision(17);
  os << '(';
  for (std::size_t i = 0; i < theta.size(); ++i) os << (i ? ", " : "") << theta[i];
  os << ')';
  return os.str();
}

ParametricDomain::ParametricDomain(std::size_t dim)
    : box_(dim, Interval{-kInf, kInf}) {
  if (dim == 0) throw DimensionError("parametric domain needs dim >= 1");
}

ParametricDomain::ParametricDomain(std::vector<Interval> box, Predicate extra,
                                   std::string extra_label)
    : box_(std::move(box)), extra_(std::move(extra)), extra_label_(std::move(extra_label)) {
  if (box_.empty()) throw DimensionError("parametric domain needs dim >= 1");
  for (const auto& iv : box_) {
    if (!(iv.lower < iv.upper)) throw DomainError("parametric interval needs lower < upper");
  }
}

bool ParametricDomain::contains(const ParamPoint& theta) const {
  if (theta.size() != box_.size()) return false;
  for (std::size_t i = 0; i < box_.size(); ++i) {
    if (!box_[i].contains(theta[i])) return false;
  }
  return !extra_ || extra_(theta);
}

void ParametricDomain::require(const ParamPoint& theta) const {
  if (theta.size() != box_.size()) {
    throw DimensionError("parameter point " + to_string(theta) + " has wrong dimension, expected " +
                         std::to_string(box_.size()));
  }
  if (!contains(theta)) {
    throw DomainError("parameter point " + to_string(theta) + " outside parametric domain");
  }
}

bool ParametricDomain::same_as(const ParametricDomain& other) const {
  return box_ == other.box_ && extra_label_ == other.extra_label_;
}

DensityFamily::DensityFamily(std::string name, SpatialDomain domain, ParametricDomain params,
                             Slicer slicer, bool analytic_gradient)
    : name_(std::move(name)),
      domain_(std::move(domain)),
      params_(std::move(params)),
      slicer_(std::move(slicer)),
      analytic_gradient_(analytic_gradient) {}

DensitySlice DensityFamily::at(const ParamPoint& theta) const {
  params_.require(theta);
  return slicer_(theta);
}

void DensityFamily::require_x(std::span<const double> x) const {
  if (!domain_.contains(x)) {
    throw DomainError("spatial point outside the domain of family '" + name_ + "'");
  }
}

double DensityFamily::evaluate_density(std::span<const double> x, const ParamPoint& theta) const {
  require_x(x);
  return at(theta).density(x);
}

std::vector<double> DensityFamily::log_param_gradient(std::span<const double> x,
                                                      const ParamPoint& theta,
                                                      std::optional<double> fd_step) const {
  require_x(x);
  const DensitySlice slice = at(theta);
  const double p = slice.density(x);
  if (p < kDensityFloor) {
    throw ZeroDensityError("ln P undefined: density below floor in family '" + name_ + "'");
  }
  std::vector<double> grad(theta.size(), 0.0);
  if (slice.log_gradient) {
    slice.log_gradient(x, grad);
    return grad;
  }
  const double rel = fd_step.value_or(default_fd_step());
  for (std::size_t a = 0; a < theta.size(); ++a) {
    const double h = rel * (1.0 + std::abs(theta[a]));
    ParamPoint plus = theta;
    ParamPoint minus = theta;
    plus[a] += h;
    minus[a] -= h;
    const double pp = slicer_(plus).density(x);
    const double pm = slicer_(minus).density(x);
    if (pp < kDensityFloor || pm < kDensityFloor) {
      throw ZeroDensityError("ln P undefined at finite-difference probe in family '" + name_ + "'");
    }
    grad[a] = (std::log(pp) - std::log(pm)) / (plus[a] - minus[a]);
  }
  return grad;
}

MetricTensor::MetricTensor(std::size_t dim)
    : entries_(Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim),
                                      static_cast<Eigen::Index>(dim))) {}

MetricTensor::MetricTensor(const Eigen::MatrixXd& m) : MetricTensor(static_cast<std::size_t>(m.rows())) {
  if (m.rows() != m.cols()) throw DimensionError("metric tensor must be square");
  for (Eigen::Index a = 0; a < m.rows(); ++a) {
    for (Eigen::Index b = a; b < m.cols(); ++b) set(a, b, m(a, b));
  }
}

MetricTensor::MetricTensor(std::initializer_list<std::initializer_list<double>> rows)
    : MetricTensor(rows.size()) {
  std::size_t a = 0;
  for (const auto& row : rows) {
    if (row.size() != rows.size()) throw DimensionError("metric tensor must be square");
    std::size_t b = 0;
    for (double v : row) {
      if (b >= a) set(a, b, v);
      ++b;
    }
    ++a;
  }
}

double MetricTensor::min_eigenvalue() const {
  if (dim() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(entries_, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

bool MetricTensor::is_psd(double tol) const { return min_eigenvalue() >= -tol; }

MetricTensor& MetricTensor::operator+=(const MetricTensor& other) {
  if (other.dim() != dim()) throw DimensionError("metric tensor dimension mismatch in sum");
  entries_ += other.entries_;
  error_estimate += other.error_estimate;
  evaluations += other.evaluations;
  return *this;
}

MetricTensor operator*(double s, MetricTensor m) {
  m.entries_ *= s;
  m.error_estimate *= std::abs(s);
  return m;
}

MetricTensor MetricField::operator()(const ParamPoint& theta) const {
  MetricTensor g = evaluator_(theta);
  if (g.dim() != params_.dim()) throw DimensionError("metric field returned wrong dimension");
  return g;
}

}  // namespace infogeom

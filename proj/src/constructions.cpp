#include "infogeom/constructions.hpp"

#include <cmath>
#include <memory>
#include <sstream>

#include "infogeom/fisher.hpp"

namespace infogeom {

DisjointProductFamily::DisjointProductFamily(std::string name, std::vector<ProductComponent> components)
    : name_(std::move(name)), components_(std::move(components)) {
  if (components_.empty()) throw DimensionError("disjoint product needs at least one component");
  const ParametricDomain& shared = components_.front().family.params();
  for (std::size_t i = 0; i < components_.size(); ++i) {
    const auto& c = components_[i];
    if (c.family.domain().dim() != 1) {
      throw DimensionError("component " + std::to_string(i) + " ('" + c.family.name() +
                           "') is not one-dimensional");
    }
    if (c.multiplicity < 1) {
      throw DimensionError("component " + std::to_string(i) + " has multiplicity < 1");
    }
    if (!c.family.params().same_as(shared)) {
      throw ParametricDomainMismatch("component " + std::to_string(i) + " ('" + c.family.name() +
                                     "') does not share the parametric domain of component 0");
    }
    spatial_dim_ += static_cast<std::size_t>(c.multiplicity);
  }
}

double DisjointProductFamily::evaluate_density(std::span<const double> x, const ParamPoint& theta) const {
  if (x.size() != spatial_dim_) throw DimensionError("product density evaluated at wrong dimension");
  double p = 1.0;
  std::size_t k = 0;
  for (const auto& c : components_) {
    for (int r = 0; r < c.multiplicity; ++r, ++k) p *= c.family.evaluate_density(x[k], theta);
  }
  return p;
}

DensityFamily DisjointProductFamily::as_family() const {
  std::vector<Interval> intervals;
  bool analytic = true;
  for (const auto& c : components_) {
    for (int r = 0; r < c.multiplicity; ++r) intervals.push_back(c.family.domain()[0]);
    analytic = analytic && c.family.has_analytic_gradient();
  }
  auto comps = components_;
  auto slicer = [comps, analytic](const ParamPoint& theta) {
    auto slices = std::make_shared<std::vector<std::pair<DensitySlice, int>>>();
    for (const auto& c : comps) slices->emplace_back(c.family.at_unchecked(theta), c.multiplicity);
    const std::size_t m = theta.size();
    DensitySlice s;
    s.density = [slices](std::span<const double> x) {
      double p = 1.0;
      std::size_t k = 0;
      for (const auto& [slice, e] : *slices) {
        for (int r = 0; r < e; ++r, ++k) p *= slice.density(x.subspan(k, 1));
      }
      return p;
    };
    if (analytic) {
      s.log_gradient = [slices, m](std::span<const double> x, std::span<double> out) {
        std::vector<double> part(m);
        std::fill(out.begin(), out.end(), 0.0);
        std::size_t k = 0;
        for (const auto& [slice, e] : *slices) {
          for (int r = 0; r < e; ++r, ++k) {
            slice.log_gradient(x.subspan(k, 1), part);
            for (std::size_t a = 0; a < m; ++a) out[a] += part[a];
          }
        }
      };
    }
    return s;
  };
  return DensityFamily(name_, SpatialDomain(std::move(intervals)), params(), slicer, analytic);
}

DisjointProductFamily disjoint_product(std::vector<ProductComponent> components, std::string name) {
  return DisjointProductFamily(std::move(name), std::move(components));
}

DensityFamily location_family(const BasePdf& base, ScalarField h, ParametricDomain params, double c) {
  if (base.domain.dim() != 1 || !base.domain[0].is_real_line()) {
    throw DomainInvarianceError("location family needs a base on the whole real line; '" +
                                base.name + "' is not translation invariant");
  }
  const std::size_t m = params.dim();
  auto slicer = [base, h, c, m](const ParamPoint& theta) {
    const double shift = c * h.value(theta);
    std::vector<double> grad = h.gradient(theta);
    if (grad.size() != m) throw DimensionError("location map gradient has wrong length");
    for (double& g : grad) g *= c;
    DensitySlice s;
    s.density = [base, shift](std::span<const double> x) { return base.density(x[0] - shift); };
    s.log_gradient = [base, shift, grad](std::span<const double> x, std::span<double> out) {
      const double l = base.log_spatial_derivative(x[0] - shift);
      for (std::size_t a = 0; a < grad.size(); ++a) out[a] = -grad[a] * l;
    };
    return s;
  };
  return DensityFamily("location(" + base.name + ")", base.domain, std::move(params), slicer, true);
}

DensityFamily scale_family(const BasePdf& base, ScalarField h, ParametricDomain params, double c) {
  const bool ok = base.domain.dim() == 1 &&
                  (base.domain[0].is_real_line() ||
                   (base.domain[0].lower == 0.0 && base.domain[0].upper == kInf));
  if (!ok) {
    throw DomainInvarianceError("scale family needs a base on R or (0, inf); '" + base.name +
                                "' is not scale invariant");
  }
  const std::size_t m = params.dim();
  auto slicer = [base, h, c, m](const ParamPoint& theta) {
    const double lambda = std::exp(c * h.value(theta));
    std::vector<double> grad = h.gradient(theta);
    if (grad.size() != m) throw DimensionError("scale map gradient has wrong length");
    for (double& g : grad) g *= c;
    DensitySlice s;
    s.density = [base, lambda](std::span<const double> x) { return lambda * base.density(x[0] * lambda); };
    s.log_gradient = [base, lambda, grad](std::span<const double> x, std::span<double> out) {
      const double y = x[0] * lambda;
      const double k = 1.0 + y * base.log_spatial_derivative(y);
      for (std::size_t a = 0; a < grad.size(); ++a) out[a] = grad[a] * k;
    };
    return s;
  };
  return DensityFamily("scale(" + base.name + ")", base.domain, std::move(params), slicer, true);
}

namespace {

/// Location components of `base` over every embedding coordinate, with the
/// given per-component multiplier on h^i.
DisjointProductFamily location_product(const Embedding& embedding, const BasePdf& base, double c,
                                       const std::string& name) {
  std::vector<ProductComponent> comps;
  for (std::size_t i = 0; i < embedding.ambient_dim(); ++i) {
    comps.push_back({location_family(base, embedding.component(i), embedding.params(), c), 1});
  }
  return disjoint_product(std::move(comps), name + "(" + embedding.name() + ")");
}

}  // namespace

DisjointProductFamily gaussian_construction(const Embedding& embedding) {
  return location_product(embedding, normal_base(), 1.0, "gaussian");
}

DisjointProductFamily sech_construction(const Embedding& embedding) {
  // D(sech / pi) = 1/2, compensated by sqrt(2).
  return location_product(embedding, sech_base(), std::sqrt(2.0), "sech");
}

DisjointProductFamily mixed_construction(const Embedding& embedding, const std::vector<BasePdf>& bases,
                                         const std::vector<SymmetryMode>& modes,
                                         const QuadratureSpec& spec) {
  if (bases.size() != embedding.ambient_dim() || modes.size() != bases.size()) {
    throw DimensionError("mixed construction needs one base and one mode per embedding component (" +
                         std::to_string(embedding.ambient_dim()) + "), got " +
                         std::to_string(bases.size()) + " bases and " + std::to_string(modes.size()) +
                         " modes");
  }
  std::vector<ProductComponent> comps;
  for (std::size_t i = 0; i < bases.size(); ++i) {
    const BasePdf& base = bases[i];
    const bool location = modes[i] == SymmetryMode::kLocation;
    const std::string label = "component " + std::to_string(i) + " (" + base.name + ", " +
                              (location ? "location" : "scale") + ")";
    double constant = 0.0;
    try {
      constant = location ? location_constant_D(base, spec).value : scale_constant_E(base, spec).value;
    } catch (const Error& e) {
      throw InadmissibleBaseError(label + ": constant does not converge: " + e.what());
    }
    if (!(constant > 0.0) || !std::isfinite(constant)) {
      throw InadmissibleBaseError(label + ": constant is not positive");
    }
    const double c = 1.0 / std::sqrt(constant);
    try {
      comps.push_back({location ? location_family(base, embedding.component(i), embedding.params(), c)
                                : scale_family(base, embedding.component(i), embedding.params(), c),
                       1});
    } catch (const DomainInvarianceError& e) {
      throw InadmissibleBaseError(label + ": " + e.what());
    }
  }
  return disjoint_product(std::move(comps), "mixed(" + embedding.name() + ")");
}

OrthonormalBasis legendre_basis(std::size_t n) {
  OrthonormalBasis basis{SpatialDomain{{-1.0, 1.0}}, {}, [](double) { return 1.0; }};
  for (std::size_t k = 0; k < n; ++k) {
    basis.functions.push_back([k](double x) {
      double p0 = 1.0;
      double p1 = x;
      if (k == 0) return std::sqrt(0.5);
      for (std::size_t j = 1; j < k; ++j) {
        const double p2 = ((2.0 * j + 1.0) * x * p1 - j * p0) / (j + 1.0);
        p0 = p1;
        p1 = p2;
      }
      return std::sqrt((2.0 * k + 1.0) / 2.0) * p1;
    });
  }
  return basis;
}

double orthonormality_defect(const OrthonormalBasis& basis, const QuadratureSpec& spec) {
  double worst = 0.0;
  const auto& fs = basis.functions;
  for (std::size_t i = 0; i < fs.size(); ++i) {
    for (std::size_t j = i; j < fs.size(); ++j) {
      const auto r = integrate_1d([&](double x) { return fs[i](x) * fs[j](x) * basis.weight(x); },
                                  basis.domain[0], spec);
      worst = std::max(worst, std::abs(r.value - (i == j ? 1.0 : 0.0)));
    }
  }
  return worst;
}

std::vector<ParamPoint> parameter_sample_grid(const ParametricDomain& params, std::size_t per_axis) {
  std::vector<std::vector<double>> axes;
  for (const auto& iv : params.box()) {
    const double lo = std::isinf(iv.lower) ? -10.0 : iv.lower;
    const double hi = std::isinf(iv.upper) ? 10.0 : iv.upper;
    std::vector<double> axis;
    for (std::size_t k = 0; k < per_axis; ++k) {
      axis.push_back(lo + (hi - lo) * static_cast<double>(k + 1) / static_cast<double>(per_axis + 1));
    }
    axes.push_back(std::move(axis));
  }
  std::vector<ParamPoint> out;
  std::vector<std::size_t> idx(axes.size(), 0);
  while (true) {
    std::vector<double> p(axes.size());
    for (std::size_t d = 0; d < axes.size(); ++d) p[d] = axes[d][idx[d]];
    ParamPoint pt(std::move(p));
    if (params.contains(pt)) out.push_back(std::move(pt));
    std::size_t d = axes.size();
    while (d > 0) {
      --d;
      if (++idx[d] < per_axis) break;
      idx[d] = 0;
      if (d == 0) return out;
    }
  }
}

DensityFamily orthonormal_construction(const OrthonormalBasis& basis, const Embedding& h,
                                       const QuadratureSpec& spec) {
  if (basis.functions.size() != h.ambient_dim()) {
    throw DimensionError("orthonormal construction needs one basis function per component of h");
  }
  const double defect = orthonormality_defect(basis, spec);
  if (defect > kConstraintTolerance) {
    std::ostringstream os;
    os << "basis is not orthonormal: max deviation " << defect;
    throw OrthonormalityError(os.str(), defect);
  }
  double worst = 0.0;
  for (const auto& theta : parameter_sample_grid(h.params(), kConstraintGridPoints)) {
    worst = std::max(worst, std::abs(h.map(theta).squaredNorm() - 4.0));
  }
  if (worst > kConstraintTolerance) {
    std::ostringstream os;
    os << "h.h = 4 violated: max |h.h - 4| = " << worst << " on the sample grid";
    throw ConstraintViolation(os.str(), worst);
  }

  auto slicer = [basis, h](const ParamPoint& theta) {
    const Eigen::VectorXd hv = h.map(theta);
    const Eigen::MatrixXd jac = h.jacobian(theta);
    const auto n = hv.size();
    const auto m = jac.cols();
    auto values = [basis, n](double x) {
      Eigen::VectorXd f(n);
      for (Eigen::Index i = 0; i < n; ++i) f(i) = basis.functions[static_cast<std::size_t>(i)](x);
      return f;
    };
    DensitySlice s;
    s.density = [values, hv, w = basis.weight](std::span<const double> x) {
      const double sum = hv.dot(values(x[0]));
      return 0.25 * sum * sum * w(x[0]);
    };
    s.log_gradient = [values, hv, jac, m](std::span<const double> x, std::span<double> out) {
      const Eigen::VectorXd f = values(x[0]);
      const double sum = hv.dot(f);
      for (Eigen::Index a = 0; a < m; ++a) out[static_cast<std::size_t>(a)] = 2.0 * jac.col(a).dot(f) / sum;
    };
    // (d_a P)(d_b P) / P with the common factor (sum h^i f_i)^2 cancelled.
    s.information = [values, jac, w = basis.weight](std::span<const double> x, std::size_t a,
                                                    std::size_t b) {
      const Eigen::VectorXd f = values(x[0]);
      return jac.col(static_cast<Eigen::Index>(a)).dot(f) * jac.col(static_cast<Eigen::Index>(b)).dot(f) *
             w(x[0]);
    };
    return s;
  };
  return DensityFamily("orthonormal(" + h.name() + ")", basis.domain, h.params(), slicer, true);
}

}  // namespace infogeom

#include "infogeom/fisher.hpp"

#include <algorithm>
#include <cmath>

namespace infogeom {

namespace {

IntegrationResult integrate_over(const SpatialDomain& domain,
                                 const std::function<double(std::span<const double>)>& f,
                                 const QuadratureSpec& spec) {
  if (domain.dim() == 1) {
    return integrate_1d([&f](double x) { return f(std::span<const double>(&x, 1)); }, domain[0], spec);
  }
  return integrate_box(f, domain, spec);
}

}  // namespace

MetricTensor fisher_metric_direct(const DensityFamily& family, const ParamPoint& theta,
                                  const QuadratureSpec& spec) {
  const std::size_t k = family.domain().dim();
  if (k > kMaxBoxDimension) {
    throw DimensionError("direct Fisher engine supports spatial dimension <= 4 (family '" +
                         family.name() + "' has " + std::to_string(k) +
                         "); use the decomposed engine for disjoint products");
  }
  const DensitySlice slice = family.at(theta);
  const std::size_t m = theta.size();

  // Without an analytic score, d_a P comes from central differences of P.
  std::vector<DensitySlice> plus;
  std::vector<DensitySlice> minus;
  std::vector<double> step(m, 0.0);
  const bool need_fd = !slice.log_gradient && !slice.information;
  if (need_fd) {
    for (std::size_t a = 0; a < m; ++a) {
      ParamPoint p = theta;
      ParamPoint q = theta;
      const double h = default_fd_step() * (1.0 + std::abs(theta[a]));
      p[a] += h;
      q[a] -= h;
      step[a] = p[a] - q[a];
      plus.push_back(family.at_unchecked(p));
      minus.push_back(family.at_unchecked(q));
    }
  }

  MetricTensor g(m);
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = a; b < m; ++b) {
      std::vector<double> score(m, 0.0);
      auto integrand = [&, a, b](std::span<const double> x) mutable -> double {
        if (slice.information) return slice.information(x, a, b);
        const double p = slice.density(x);
        double dpa = 0.0;
        double dpb = 0.0;
        if (slice.log_gradient) {
          if (p == 0.0) return 0.0;
          slice.log_gradient(x, score);
          dpa = p * score[a];
          dpb = p * score[b];
        } else {
          dpa = (plus[a].density(x) - minus[a].density(x)) / step[a];
          dpb = (plus[b].density(x) - minus[b].density(x)) / step[b];
        }
        return dpa * dpb / std::max(p, kDensityFloor);
      };
      const IntegrationResult r = integrate_over(family.domain(), integrand, spec);
      g.set(a, b, r.value);
      g.error_estimate = std::max(g.error_estimate, r.error_estimate);
      g.evaluations += r.evaluations;
    }
  }
  return g;
}

std::vector<MetricTensor> component_metrics(const DisjointProductFamily& product, const ParamPoint& theta,
                                            const QuadratureSpec& spec) {
  std::vector<MetricTensor> out;
  const auto& comps = product.components();
  for (std::size_t i = 0; i < comps.size(); ++i) {
    try {
      out.push_back(static_cast<double>(comps[i].multiplicity) *
                    fisher_metric_direct(comps[i].family, theta, spec));
    } catch (const Error& e) {
      throw ComponentError("component " + std::to_string(i) + " ('" + comps[i].family.name() +
                               "'): " + e.what(),
                           i);
    }
  }
  return out;
}

MetricTensor fisher_metric_decomposed(const DisjointProductFamily& product, const ParamPoint& theta,
                                      const QuadratureSpec& spec) {
  product.params().require(theta);
  // operator+= adds the per-component error estimates.
  MetricTensor total(theta.size());
  for (const auto& g : component_metrics(product, theta, spec)) total += g;
  return total;
}

DiffeoFamily location_diffeo(ScalarField h) {
  DiffeoFamily d;
  d.f = [h](double x, const ParamPoint& t) { return x - h.value(t); };
  d.f_x = [](double, const ParamPoint&) { return 1.0; };
  d.f_a = [h](double, const ParamPoint& t, std::span<double> out) {
    const auto g = h.gradient(t);
    for (std::size_t a = 0; a < out.size(); ++a) out[a] = -g[a];
  };
  d.f_ax = [](double, const ParamPoint&, std::span<double> out) { std::fill(out.begin(), out.end(), 0.0); };
  d.inverse = [h](double y, const ParamPoint& t) { return y + h.value(t); };
  return d;
}

DiffeoFamily scale_diffeo(ScalarField h) {
  DiffeoFamily d;
  d.f = [h](double x, const ParamPoint& t) { return x * std::exp(h.value(t)); };
  d.f_x = [h](double, const ParamPoint& t) { return std::exp(h.value(t)); };
  d.f_a = [h](double x, const ParamPoint& t, std::span<double> out) {
    const auto g = h.gradient(t);
    const double s = x * std::exp(h.value(t));
    for (std::size_t a = 0; a < out.size(); ++a) out[a] = g[a] * s;
  };
  d.f_ax = [h](double, const ParamPoint& t, std::span<double> out) {
    const auto g = h.gradient(t);
    const double s = std::exp(h.value(t));
    for (std::size_t a = 0; a < out.size(); ++a) out[a] = g[a] * s;
  };
  d.inverse = [h](double y, const ParamPoint& t) { return y * std::exp(-h.value(t)); };
  return d;
}

DensityFamily induced_family(const BasePdf& base, const DiffeoFamily& diffeo, ParametricDomain params) {
  const std::size_t m = params.dim();
  auto slicer = [base, diffeo, m](const ParamPoint& theta) {
    DensitySlice s;
    s.density = [base, diffeo, theta](std::span<const double> x) {
      return diffeo.f_x(x[0], theta) * base.density(diffeo.f(x[0], theta));
    };
    s.log_gradient = [base, diffeo, theta, m](std::span<const double> x, std::span<double> out) {
      std::vector<double> fa(m);
      std::vector<double> fax(m);
      diffeo.f_a(x[0], theta, fa);
      diffeo.f_ax(x[0], theta, fax);
      const double fx = diffeo.f_x(x[0], theta);
      const double l = base.log_spatial_derivative(diffeo.f(x[0], theta));
      for (std::size_t a = 0; a < m; ++a) out[a] = fax[a] / fx + l * fa[a];
    };
    return s;
  };
  return DensityFamily("induced(" + base.name + ")", base.domain, std::move(params), slicer, true);
}

MetricTensor fisher_metric_symmetry(const BasePdf& base, const DiffeoFamily& diffeo, const ParamPoint& theta,
                                    const QuadratureSpec& spec) {
  if (base.domain.dim() != 1) throw DimensionError("symmetry formula needs a one-dimensional base");
  const std::size_t m = theta.size();
  MetricTensor g(m);
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = a; b < m; ++b) {
      std::vector<double> fa(m);
      std::vector<double> fax(m);
      auto integrand = [&, a, b](double y) mutable -> double {
        const double x = diffeo.inverse(y, theta);
        const double fx = diffeo.f_x(x, theta);
        if (!(fx > 0.0)) {
          throw InvalidDiffeoError("f_x <= 0 at x = " + std::to_string(x) +
                                   "; diffeomorphism must preserve orientation");
        }
        diffeo.f_a(x, theta, fa);
        diffeo.f_ax(x, theta, fax);
        const double p = base.density(y);
        const double l = base.log_spatial_derivative(y);
        const double dp = p * l;
        const double d_fafb = (fax[a] * fa[b] + fa[a] * fax[b]) / fx;
        return fax[a] * fax[b] / (fx * fx) * p + (d_fafb + fa[a] * fa[b] * l) * dp;
      };
      const IntegrationResult r = integrate_1d(integrand, base.domain[0], spec);
      g.set(a, b, r.value);
      g.error_estimate = std::max(g.error_estimate, r.error_estimate);
      g.evaluations += r.evaluations;
    }
  }
  return g;
}

IntegrationResult location_constant_D(const BasePdf& base, const QuadratureSpec& spec) {
  if (base.domain.dim() != 1) throw DimensionError("D needs a one-dimensional base");
  return integrate_1d(
      [&base](double x) {
        const double l = base.log_spatial_derivative(x);
        return base.density(x) * l * l;
      },
      base.domain[0], spec);
}

IntegrationResult scale_constant_E(const BasePdf& base, const QuadratureSpec& spec) {
  if (base.domain.dim() != 1) throw DimensionError("E needs a one-dimensional base");
  return integrate_1d(
      [&base](double x) {
        const double k = 1.0 + x * base.log_spatial_derivative(x);
        return base.density(x) * k * k;
      },
      base.domain[0], spec);
}

IntegrationResult normalization_check(const DensityFamily& family, const ParamPoint& theta,
                                      const QuadratureSpec& spec) {
  const DensitySlice slice = family.at(theta);
  return integrate_over(family.domain(), slice.density, spec);
}

IntegrationResult normalization_check(const DisjointProductFamily& product, const ParamPoint& theta,
                                      const QuadratureSpec& spec) {
  IntegrationResult total{1.0, 0.0, 0, true};
  for (const auto& c : product.components()) {
    const IntegrationResult r = normalization_check(c.family, theta, spec);
    for (int k = 0; k < c.multiplicity; ++k) {
      total.error_estimate = total.error_estimate * std::abs(r.value) + r.error_estimate * std::abs(total.value);
      total.value *= r.value;
    }
    total.evaluations += r.evaluations;
  }
  return total;
}

}  // namespace infogeom

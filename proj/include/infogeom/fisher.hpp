#pragma once

#include <functional>
#include <span>

#include "infogeom/constructions.hpp"
#include "infogeom/core.hpp"
#include "infogeom/densities.hpp"
#include "infogeom/quadrature.hpp"

namespace infogeom {

/// g_ab = int (d_a P)(d_b P) / P dx over X, upper triangle only, mirrored.
/// P is clamped below by kDensityFloor; families without an analytic score
/// use central differences of P itself. Spatial dimension must be <= 4.
MetricTensor fisher_metric_direct(const DensityFamily& family, const ParamPoint& theta,
                                  const QuadratureSpec& spec = {});

/// Wraps a failure of component `index` in a decomposed metric.
class ComponentError : public Error {
 public:
  ComponentError(const std::string& what, std::size_t index) : Error(what), index_(index) {}
  std::size_t component() const noexcept { return index_; }

 private:
  std::size_t index_;
};

/// sum_i e_i g(P_i), each g(P_i) from the direct engine on the 1-D component.
MetricTensor fisher_metric_decomposed(const DisjointProductFamily& product, const ParamPoint& theta,
                                      const QuadratureSpec& spec = {});

/// The per-component terms e_i g(P_i) of the decomposed engine, in order.
std::vector<MetricTensor> component_metrics(const DisjointProductFamily& product,
                                            const ParamPoint& theta, const QuadratureSpec& spec = {});

/// Family of orientation-preserving diffeomorphisms y = f(x; theta) of X.
struct DiffeoFamily {
  std::function<double(double x, const ParamPoint&)> f;
  std::function<double(double x, const ParamPoint&)> f_x;
  /// d_a f, one entry per parameter.
  std::function<void(double x, const ParamPoint&, std::span<double> out)> f_a;
  /// d_a d_x f.
  std::function<void(double x, const ParamPoint&, std::span<double> out)> f_ax;
  std::function<double(double y, const ParamPoint&)> inverse;
};

/// f = x - h(theta).
DiffeoFamily location_diffeo(ScalarField h);
/// f = x e^{h(theta)}.
DiffeoFamily scale_diffeo(ScalarField h);

/// P(x; theta) = f_x P^(f(x; theta)) with its analytic score.
DensityFamily induced_family(const BasePdf& base, const DiffeoFamily& diffeo, ParametricDomain params);

/// Metric of induced_family(base, diffeo) by the symmetry formula, integrating
/// in y = f(x; theta) and mapping back through the supplied inverse.
/// Throws InvalidDiffeoError if f_x <= 0 at a node.
MetricTensor fisher_metric_symmetry(const BasePdf& base, const DiffeoFamily& diffeo,
                                    const ParamPoint& theta, const QuadratureSpec& spec = {});

/// D = int (P^')(ln P^)' dx; the location-family metric is D (d_a h)(d_b h).
IntegrationResult location_constant_D(const BasePdf& base, const QuadratureSpec& spec = {});
/// E = int P^ (1 + x (ln P^)')^2 dx; the scale-family metric is E (d_a h)(d_b h).
IntegrationResult scale_constant_E(const BasePdf& base, const QuadratureSpec& spec = {});

/// int_X P(x; theta) dx.
IntegrationResult normalization_check(const DensityFamily& family, const ParamPoint& theta,
                                      const QuadratureSpec& spec = {});
/// Product of the component integrals (Fubini), raised to their multiplicities.
IntegrationResult normalization_check(const DisjointProductFamily& product, const ParamPoint& theta,
                                      const QuadratureSpec& spec = {});

}  // namespace infogeom

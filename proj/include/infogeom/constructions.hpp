#pragma once

#include <functional>
#include <string>
#include <vector>

#include "infogeom/core.hpp"
#include "infogeom/densities.hpp"
#include "infogeom/embeddings.hpp"
#include "infogeom/quadrature.hpp"

namespace infogeom {

struct ProductComponent {
  DensityFamily family;
  int multiplicity = 1;
};

/// Spatially disjoint product of one-dimensional families on one shared M:
/// each component (repeated `multiplicity` times) owns its own coordinates.
class DisjointProductFamily {
 public:
  DisjointProductFamily(std::string name, std::vector<ProductComponent> components);

  const std::string& name() const { return name_; }
  const std::vector<ProductComponent>& components() const { return components_; }
  const ParametricDomain& params() const { return components_.front().family.params(); }
  /// Sum of multiplicities.
  std::size_t spatial_dim() const { return spatial_dim_; }

  double evaluate_density(std::span<const double> x, const ParamPoint& theta) const;
  /// The product as a single family on the concatenated coordinates.
  DensityFamily as_family() const;

 private:
  std::string name_;
  std::vector<ProductComponent> components_;
  std::size_t spatial_dim_ = 0;
};

/// Throws ParametricDomainMismatch unless all components share one M.
DisjointProductFamily disjoint_product(std::vector<ProductComponent> components,
                                       std::string name = "product");

/// P(x; theta) = P^(x - c h(theta)). Requires X = R.
DensityFamily location_family(const BasePdf& base, ScalarField h, ParametricDomain params,
                              double c = 1.0);
/// P(x; theta) = e^{c h} P^(x e^{c h}). Requires X = R or (0, inf).
DensityFamily scale_family(const BasePdf& base, ScalarField h, ParametricDomain params,
                           double c = 1.0);

/// Unit-variance Gaussians with means h^i(theta); Fisher metric h*delta.
DisjointProductFamily gaussian_construction(const Embedding& embedding);
/// sech(x^i - sqrt(2) h^i) / pi components; Fisher metric h*delta.
DisjointProductFamily sech_construction(const Embedding& embedding);

enum class SymmetryMode { kLocation, kScale };

/// Component i uses base i in the given mode with h^i rescaled by 1/sqrt(D_i)
/// (location) or 1/sqrt(E_i) (scale), so the metric is h*delta.
DisjointProductFamily mixed_construction(const Embedding& embedding,
                                         const std::vector<BasePdf>& bases,
                                         const std::vector<SymmetryMode>& modes,
                                         const QuadratureSpec& spec = {});

/// Functions orthonormal with a weight on a one-dimensional domain.
struct OrthonormalBasis {
  SpatialDomain domain;
  std::vector<std::function<double(double)>> functions;
  std::function<double(double)> weight;
};

/// First n Legendre polynomials normalized on (-1, 1) with unit weight.
OrthonormalBasis legendre_basis(std::size_t n);

/// max |int f_i f_j w - delta_ij| over all pairs.
double orthonormality_defect(const OrthonormalBasis& basis, const QuadratureSpec& spec = {});

/// Grid of `per_axis` interior points per parameter axis; infinite axes are
/// sampled on [-10, 10].
std::vector<ParamPoint> parameter_sample_grid(const ParametricDomain& params, std::size_t per_axis);

inline constexpr std::size_t kConstraintGridPoints = 17;
inline constexpr double kConstraintTolerance = 1e-8;

/// P = (1/4) (sum h^i f_i)^2 w with h.h = 4. Throws ConstraintViolation when
/// |h.h - 4| > 1e-8 on the sample grid and OrthonormalityError when the basis
/// fails its check.
DensityFamily orthonormal_construction(const OrthonormalBasis& basis, const Embedding& h,
                                       const QuadratureSpec& spec = {});

}  // namespace infogeom

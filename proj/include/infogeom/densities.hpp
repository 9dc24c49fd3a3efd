#pragma once

#include <functional>
#include <string>
#include <vector>

#include "infogeom/core.hpp"

namespace infogeom {

/// A parameter-free one-dimensional density P^ with d ln P^ / dx.
struct BasePdf {
  std::string name;
  SpatialDomain domain;
  std::function<double(double)> density;
  std::function<double(double)> log_spatial_derivative;
};

BasePdf normal_base();       // e^{-x^2/2} / sqrt(2 pi) on R
BasePdf sech_base();         // sech(x) / pi on R
BasePdf cauchy_base();       // 1 / (pi (1 + x^2)) on R
BasePdf exponential_base();  // e^{-x} on (0, inf)

/// Looks up one of the bases above by name; throws UnknownNameError.
BasePdf base_by_name(const std::string& name);
std::vector<std::string> base_names();

/// Univariate normal, theta = (mu, sigma), M = R x (0, inf).
DensityFamily normal_family();
/// Cauchy, theta = (x0, gamma), M = R x (0, inf).
DensityFamily cauchy_family();

/// Built-in families addressable by name (normal, cauchy).
DensityFamily family_by_name(const std::string& name);
std::vector<std::string> family_names();

}  // namespace infogeom

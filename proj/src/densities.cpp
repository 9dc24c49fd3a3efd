#include "infogeom/densities.hpp"

#include <cmath>
#include <numbers>

namespace infogeom {

namespace {

const double kInvSqrt2Pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);

// sech(x) = 2 e^{-|x|} / (1 + e^{-2|x|}); no overflow for large |x|.
double sech(double x) {
  const double e = std::exp(-std::abs(x));
  return 2.0 * e / (1.0 + e * e);
}

}  // namespace

BasePdf normal_base() {
  return BasePdf{"normal", SpatialDomain::real_line(),
                 [](double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); },
                 [](double x) { return -x; }};
}

BasePdf sech_base() {
  return BasePdf{"sech", SpatialDomain::real_line(),
                 [](double x) { return sech(x) / std::numbers::pi; },
                 [](double x) { return -std::tanh(x); }};
}

BasePdf cauchy_base() {
  return BasePdf{"cauchy", SpatialDomain::real_line(),
                 [](double x) { return 1.0 / (std::numbers::pi * (1.0 + x * x)); },
                 [](double x) { return -2.0 * x / (1.0 + x * x); }};
}

BasePdf exponential_base() {
  return BasePdf{"exponential", SpatialDomain::positive_half_line(),
                 [](double x) { return std::exp(-x); }, [](double) { return -1.0; }};
}

std::vector<std::string> base_names() { return {"normal", "sech", "cauchy", "exponential"}; }

BasePdf base_by_name(const std::string& name) {
  if (name == "normal") return normal_base();
  if (name == "sech") return sech_base();
  if (name == "cauchy") return cauchy_base();
  if (name == "exponential") return exponential_base();
  throw UnknownNameError("unknown base density '" + name + "'", base_names());
}

DensityFamily normal_family() {
  ParametricDomain params({{-kInf, kInf}, {0.0, kInf}});
  auto slicer = [](const ParamPoint& theta) {
    const double mu = theta[0];
    const double sigma = theta[1];
    DensitySlice s;
    s.density = [=](std::span<const double> x) {
      const double z = (x[0] - mu) / sigma;
      return kInvSqrt2Pi / sigma * std::exp(-0.5 * z * z);
    };
    s.log_gradient = [=](std::span<const double> x, std::span<double> out) {
      const double z = (x[0] - mu) / sigma;
      out[0] = z / sigma;
      out[1] = (z * z - 1.0) / sigma;
    };
    return s;
  };
  return DensityFamily("normal", SpatialDomain::real_line(), std::move(params), slicer, true);
}

DensityFamily cauchy_family() {
  ParametricDomain params({{-kInf, kInf}, {0.0, kInf}});
  auto slicer = [](const ParamPoint& theta) {
    const double x0 = theta[0];
    const double gamma = theta[1];
    DensitySlice s;
    s.density = [=](std::span<const double> x) {
      const double u = x[0] - x0;
      return gamma / (std::numbers::pi * (gamma * gamma + u * u));
    };
    s.log_gradient = [=](std::span<const double> x, std::span<double> out) {
      const double u = x[0] - x0;
      const double q = gamma * gamma + u * u;
      out[0] = 2.0 * u / q;
      out[1] = 1.0 / gamma - 2.0 * gamma / q;
    };
    return s;
  };
  return DensityFamily("cauchy", SpatialDomain::real_line(), std::move(params), slicer, true);
}

std::vector<std::string> family_names() { return {"normal", "cauchy"}; }

DensityFamily family_by_name(const std::string& name) {
  if (name == "normal") return normal_family();
  if (name == "cauchy") return cauchy_family();
  throw UnknownNameError("unknown density family '" + name + "'", family_names());
}

}  // namespace infogeom

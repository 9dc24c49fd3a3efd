#include <cmath>
#include <numbers>

#include "doctest.h"
#include "infogeom/constructions.hpp"
#include "infogeom/densities.hpp"
#include "infogeom/embeddings.hpp"
#include "infogeom/fisher.hpp"
#include "infogeom/verify.hpp"
#include "support.hpp"

using namespace infogeom;

namespace {

ScalarField identity_field() {
  return {[](const ParamPoint& t) { return t[0]; }, [](const ParamPoint&) { return std::vector<double>{1.0}; }};
}

ScalarField constant_field(double v, std::size_t m) {
  return {[v](const ParamPoint&) { return v; }, [m](const ParamPoint&) { return std::vector<double>(m, 0.0); }};
}

ScalarField wavy_field() {
  return {[](const ParamPoint& t) { return 0.7 * std::sin(t[0]) + 0.3 * t[1]; },
          [](const ParamPoint& t) { return std::vector<double>{0.7 * std::cos(t[0]), 0.3}; }};
}

/// The normal family with its score hidden, forcing the finite-difference path.
DensityFamily opaque_normal() {
  const DensityFamily n = normal_family();
  return DensityFamily("opaque-normal", n.domain(), n.params(),
                       [n](const ParamPoint& t) {
                         DensitySlice s = n.at_unchecked(t);
                         s.log_gradient = {};
                         return s;
                       },
                       false);
}

}  // namespace

TEST_CASE("direct engine on the normal family") {
  const MetricTensor g = fisher_metric_direct(normal_family(), {0.0, 1.0});
  CHECK(testing::max_abs_diff(g, Eigen::Matrix2d{{1.0, 0.0}, {0.0, 2.0}}) < 1e-9);
  const MetricTensor h = fisher_metric_direct(normal_family(), {3.0, 0.5});
  CHECK(testing::max_abs_diff(h, Eigen::Matrix2d{{4.0, 0.0}, {0.0, 8.0}}) < 1e-9);
  CHECK(h.error_estimate > 0.0);
  CHECK(h.evaluations > 0);
  CHECK(h.is_psd());
}

TEST_CASE("direct engine on the Cauchy family") {
  const MetricTensor g = fisher_metric_direct(cauchy_family(), {0.0, 1.0});
  CHECK(testing::max_abs_diff(g, Eigen::Matrix2d{{0.5, 0.0}, {0.0, 0.5}}) < 1e-9);
}

TEST_CASE("finite-difference scores give the same metric") {
  const MetricTensor g = fisher_metric_direct(opaque_normal(), {0.3, 1.4});
  const double s2 = 1.4 * 1.4;
  CHECK(testing::max_abs_diff(g, Eigen::Matrix2d{{1.0 / s2, 0.0}, {0.0, 2.0 / s2}}) < 1e-6);
}

TEST_CASE("direct engine rejects points outside M") {
  CHECK_THROWS_AS(fisher_metric_direct(normal_family(), {0.0, -1.0}), DomainError);
}

TEST_CASE("direct engine refuses more than four spatial dimensions") {
  const Embedding five("five", ParametricDomain(1), 5, [](const ParamPoint& t) {
    return Eigen::VectorXd::Constant(5, t[0]);
  });
  const DisjointProductFamily product = gaussian_construction(five);
  CHECK_THROWS_AS(fisher_metric_direct(product.as_family(), {0.2}), DimensionError);
  const MetricTensor g = fisher_metric_decomposed(product, {0.2});
  CHECK(g(0, 0) == doctest::Approx(5.0).epsilon(1e-9));
}

TEST_CASE("decomposed engine: repeated component doubles the metric") {
  const DensityFamily loc = location_family(normal_base(), identity_field(), ParametricDomain(1));
  const auto product = disjoint_product({{loc, 1}, {loc, 1}});
  const double single = fisher_metric_direct(loc, {0.4})(0, 0);
  CHECK(fisher_metric_decomposed(product, {0.4})(0, 0) == doctest::Approx(2.0 * single).epsilon(1e-14));
  const auto twice = disjoint_product({{loc, 2}});
  CHECK(fisher_metric_decomposed(twice, {0.4})(0, 0) == doctest::Approx(2.0 * single).epsilon(1e-14));
}

TEST_CASE("decomposed engine: a theta-free component contributes nothing") {
  const DensityFamily moving = location_family(sech_base(), identity_field(), ParametricDomain(1));
  const DensityFamily still = location_family(normal_base(), constant_field(0.3, 1), ParametricDomain(1));
  const auto product = disjoint_product({{moving, 1}, {still, 1}});
  const auto parts = component_metrics(product, {-0.2});
  CHECK(parts[1](0, 0) == 0.0);
  CHECK(fisher_metric_decomposed(product, {-0.2})(0, 0) == doctest::Approx(parts[0](0, 0)).epsilon(1e-15));
}

TEST_CASE("decomposed engine: hyperbolic components sum to beta^-2 delta") {
  const Embedding h = hyperbolic_patch_embedding();
  const auto family = mixed_construction(h, {normal_base(), sech_base(), cauchy_base()},
                                         {SymmetryMode::kLocation, SymmetryMode::kLocation, SymmetryMode::kLocation});
  const ParamPoint theta{0.0, 2.0};
  const MetricTensor sum = fisher_metric_decomposed(family, theta);
  CHECK(testing::max_abs_diff(sum, Eigen::Matrix2d{{0.25, 0.0}, {0.0, 0.25}}) < 1e-9);
  const auto parts = component_metrics(family, theta);
  REQUIRE(parts.size() == 3);
  CHECK(testing::max_abs_diff(parts[2], Eigen::Matrix2d{{0.0, 0.0}, {0.0, 0.1875}}) < 1e-9);
}

TEST_CASE("decomposed engine tags the failing component") {
  const DensityFamily good = location_family(normal_base(), identity_field(), ParametricDomain(1));
  const DensityFamily heavy("heavy", SpatialDomain::real_line(), ParametricDomain(1),
                            [](const ParamPoint& t) {
                              DensitySlice s;
                              s.density = [](std::span<const double> x) { return 0.5 / std::pow(1.0 + std::abs(x[0]), 2.0); };
                              s.log_gradient = [t](std::span<const double> x, std::span<double> out) {
                                out[0] = t[0] * std::sqrt(1.0 + std::abs(x[0]));
                              };
                              return s;
                            },
                            true);
  const auto product = disjoint_product({{good, 1}, {heavy, 1}});
  try {
    fisher_metric_decomposed(product, {1.0});
    FAIL("expected ComponentError");
  } catch (const ComponentError& e) {
    CHECK(e.component() == 1);
  }
}

TEST_CASE("symmetry formula examples") {
  const ScalarField id = identity_field();
  const ParametricDomain line(1);
  CHECK(fisher_metric_symmetry(normal_base(), location_diffeo(id), {0.8})(0, 0) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(fisher_metric_symmetry(exponential_base(), scale_diffeo(id), {-0.3})(0, 0) ==
        doctest::Approx(1.0).epsilon(1e-10));
  const MetricTensor zero = fisher_metric_symmetry(normal_base(), location_diffeo(constant_field(1.0, 2)), {0.1, 0.2});
  CHECK(zero.matrix().cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("symmetry formula agrees with the direct engine") {
  const ParametricDomain params(2);
  const ScalarField h = wavy_field();
  struct Case {
    BasePdf base;
    DiffeoFamily diffeo;
  };
  const std::vector<Case> cases = {{normal_base(), location_diffeo(h)},
                                   {sech_base(), location_diffeo(h)},
                                   {exponential_base(), scale_diffeo(h)},
                                   {normal_base(), scale_diffeo(h)}};
  for (const auto& c : cases) {
    const DensityFamily induced = induced_family(c.base, c.diffeo, params);
    for (int i = 0; i < 5; ++i) {
      const ParamPoint theta{testing::uniform(-2.0, 2.0), testing::uniform(-2.0, 2.0)};
      const MetricTensor s = fisher_metric_symmetry(c.base, c.diffeo, theta);
      const MetricTensor d = fisher_metric_direct(induced, theta);
      INFO(c.base.name << " at " << to_string(theta));
      CHECK(compare_metrics(s, d).max_abs_err < 1e-6);
    }
  }
}

TEST_CASE("diffeo families are bijective and orientation preserving") {
  const ScalarField h = wavy_field();
  for (const auto& d : {location_diffeo(h), scale_diffeo(h)}) {
    for (int i = 0; i < 20; ++i) {
      const ParamPoint theta{testing::uniform(-2.0, 2.0), testing::uniform(-2.0, 2.0)};
      const double x = testing::uniform(0.01, 5.0);
      CHECK(std::abs(d.inverse(d.f(x, theta), theta) - x) < 1e-10);
      CHECK(d.f_x(x, theta) > 0.0);
    }
  }
}

TEST_CASE("symmetry formula rejects orientation-reversing maps") {
  DiffeoFamily flip = location_diffeo(identity_field());
  flip.f_x = [](double, const ParamPoint&) { return -1.0; };
  CHECK_THROWS_AS(fisher_metric_symmetry(normal_base(), flip, {0.0}), InvalidDiffeoError);
}

TEST_CASE("location constants") {
  CHECK(std::abs(location_constant_D(normal_base()).value - 1.0) < 1e-10);
  CHECK(std::abs(location_constant_D(sech_base()).value - 0.5) < 1e-10);
  CHECK(std::abs(location_constant_D(cauchy_base()).value - 0.5) < 1e-10);
}

TEST_CASE("scale constants") {
  CHECK(std::abs(scale_constant_E(exponential_base()).value - 1.0) < 1e-10);
  CHECK(std::abs(scale_constant_E(normal_base()).value - 2.0) < 1e-10);
  // Reference from a 30-digit independent quadrature; equals pi^2 / 8.
  CHECK(std::abs(scale_constant_E(sech_base()).value - 1.2337005501361698) < 1e-10);
  CHECK(std::abs(scale_constant_E(cauchy_base()).value - 0.5) < 1e-10);
}

TEST_CASE("D and E are the same wherever theta sits") {
  const ScalarField shifted{[](const ParamPoint& t) { return t[0]; },
                            [](const ParamPoint&) { return std::vector<double>{1.0}; }};
  const double d = location_constant_D(sech_base()).value;
  for (double theta : {-3.0, 0.0, 2.5}) {
    const double g = fisher_metric_direct(location_family(sech_base(), shifted, ParametricDomain(1)), {theta})(0, 0);
    CHECK(g == doctest::Approx(d).epsilon(1e-9));
  }
  CHECK(location_constant_D(sech_base()).value == d);
  CHECK(scale_constant_E(normal_base()).value == scale_constant_E(normal_base()).value);
}

TEST_CASE("location scaling: metric is c^2 D grad h grad h") {
  const ParametricDomain params(2);
  const ScalarField h = wavy_field();
  for (const BasePdf& base : {normal_base(), sech_base(), cauchy_base()}) {
    const double d = location_constant_D(base).value;
    for (double c : {1.0, std::numbers::sqrt2, 2.0}) {
      const DensityFamily fam = location_family(base, h, params, c);
      const ParamPoint theta{0.4, -0.9};
      const auto grad = h.gradient(theta);
      Eigen::Matrix2d expected;
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) expected(a, b) = c * c * d * grad[a] * grad[b];
      INFO(base.name << " c=" << c);
      CHECK(testing::max_abs_diff(fisher_metric_direct(fam, theta), expected) < 1e-8);
    }
  }
}

TEST_CASE("reparameterization congruence") {
  const DensityFamily normal = normal_family();
  const DensityFamily psi_family("normal-log-sigma", normal.domain(), ParametricDomain(2),
                                 [normal](const ParamPoint& psi) {
                                   DensitySlice s = normal.at_unchecked({psi[0], std::exp(psi[1])});
                                   s.log_gradient = {};
                                   return s;
                                 },
                                 false);
  for (int i = 0; i < 10; ++i) {
    const ParamPoint psi{testing::uniform(-2.0, 2.0), testing::uniform(-1.0, 1.0)};
    const ParamPoint theta{psi[0], std::exp(psi[1])};
    const Eigen::Matrix2d j{{1.0, 0.0}, {0.0, std::exp(psi[1])}};
    const Eigen::MatrixXd pulled = j.transpose() * fisher_metric_direct(normal, theta).matrix() * j;
    CHECK(testing::max_abs_diff(fisher_metric_direct(psi_family, psi), pulled) < 1e-6);
  }
}

TEST_CASE("normalization_check") {
  CHECK(std::abs(normalization_check(normal_family(), {1.0, 0.3}).value - 1.0) < 1e-8);
  const DensityFamily doubled("doubled", SpatialDomain::real_line(), ParametricDomain(1), [](const ParamPoint&) {
    DensitySlice s;
    s.density = [](std::span<const double> x) { return 2.0 * std::exp(-0.5 * x[0] * x[0]) / std::sqrt(2.0 * std::numbers::pi); };
    return s;
  }, false);
  CHECK(std::abs(normalization_check(doubled, {0.0}).value - 2.0) < 1e-8);
  const DisjointProductFamily sphere = sech_construction(sphere2_embedding());
  const IntegrationResult r = normalization_check(sphere, {1.0, 1.0});
  CHECK(std::abs(r.value - 1.0) < 1e-8);
  const DisjointProductFamily circle = sech_construction(circle_embedding(1.5));
  CHECK(std::abs(normalization_check(circle.as_family(), {0.4}).value - 1.0) < 1e-8);
}

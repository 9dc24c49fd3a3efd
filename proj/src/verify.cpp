#include "infogeom/verify.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <numbers>
#include <sstream>
#include <thread>

#include "infogeom/densities.hpp"
#include "infogeom/embeddings.hpp"
#include "infogeom/fisher.hpp"

namespace infogeom {

VerificationGrid::VerificationGrid(std::vector<GridAxis> axes, std::vector<Exclusion> exclusions)
    : axes_(std::move(axes)), exclusions_(std::move(exclusions)) {
  if (axes_.empty()) throw GridSpecError("grid needs at least one axis");
  for (const auto& ax : axes_) {
    if (ax.count < 2) throw GridSpecError("grid axis needs count >= 2");
    if (!std::isfinite(ax.start) || !std::isfinite(ax.end)) throw GridSpecError("grid axis bounds must be finite");
  }
}

VerificationGrid VerificationGrid::parse(const std::string& spec) {
  std::vector<GridAxis> axes;
  if (!spec.empty() && spec.back() == ',') throw GridSpecError("grid specification ends with ','");
  std::stringstream all(spec);
  std::string item;
  while (std::getline(all, item, ',')) {
    std::vector<std::string> fields;
    std::stringstream parts(item);
    std::string f;
    while (std::getline(parts, f, ':')) fields.push_back(f);
    if (fields.size() != 3) {
      throw GridSpecError("grid axis '" + item + "' is not of the form start:end:count");
    }
    try {
      std::size_t used = 0;
      const double start = std::stod(fields[0], &used);
      if (used != fields[0].size()) throw std::invalid_argument("start");
      const double end = std::stod(fields[1], &used);
      if (used != fields[1].size()) throw std::invalid_argument("end");
      const long count = std::stol(fields[2], &used);
      if (used != fields[2].size() || count < 0) throw std::invalid_argument("count");
      axes.push_back({start, end, static_cast<std::size_t>(count)});
    } catch (const std::logic_error&) {
      throw GridSpecError("grid axis '" + item + "' has a malformed number");
    }
  }
  if (axes.empty()) throw GridSpecError("empty grid specification");
  return VerificationGrid(std::move(axes));
}

std::vector<ParamPoint> VerificationGrid::points(const ParametricDomain& params) const {
  if (axes_.size() != params.dim()) {
    throw DimensionError("grid has " + std::to_string(axes_.size()) + " axes but the parametric domain has " +
                         std::to_string(params.dim()) + " dimensions");
  }
  std::vector<ParamPoint> out;
  std::vector<std::size_t> idx(axes_.size(), 0);
  bool done = false;
  while (!done) {
    std::vector<double> coords(axes_.size());
    for (std::size_t d = 0; d < axes_.size(); ++d) {
      const auto& ax = axes_[d];
      coords[d] = ax.start + (ax.end - ax.start) * static_cast<double>(idx[d]) / static_cast<double>(ax.count - 1);
    }
    ParamPoint p(std::move(coords));
    const bool excluded =
        std::any_of(exclusions_.begin(), exclusions_.end(), [&p](const Exclusion& e) { return e.excludes(p); });
    if (!excluded) {
      if (!params.contains(p)) throw DomainError("grid point " + to_string(p) + " lies outside the parametric domain");
      out.push_back(std::move(p));
    }
    std::size_t d = axes_.size();
    done = true;
    while (d > 0) {
      --d;
      if (++idx[d] < axes_[d].count) {
        done = false;
        break;
      }
      idx[d] = 0;
    }
  }
  if (out.empty()) throw Error("verification grid is empty after exclusions");
  return out;
}

Exclusion sphere_pole_bands(std::size_t axis, double width) {
  std::ostringstream label;
  label << "pole bands |phi| < " << width << " or |phi - pi| < " << width << " on axis " << axis;
  return Exclusion{label.str(), [axis, width](const ParamPoint& p) {
                     return p[axis] < width || p[axis] > std::numbers::pi - width;
                   }};
}

MetricComparison compare_metrics(const MetricTensor& a, const MetricTensor& b) {
  if (a.dim() != b.dim()) {
    throw DimensionError("cannot compare metric tensors of dimension " + std::to_string(a.dim()) + " and " +
                         std::to_string(b.dim()));
  }
  MetricComparison c;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    for (std::size_t j = 0; j < a.dim(); ++j) {
      const double abs_err = std::abs(a(i, j) - b(i, j));
      c.max_abs_err = std::max(c.max_abs_err, abs_err);
      c.max_rel_err = std::max(c.max_rel_err, abs_err / std::max(1.0, std::abs(b(i, j))));
    }
  }
  return c;
}

void VerificationReport::summarize() {
  max_abs_err = 0.0;
  max_rel_err = 0.0;
  evaluations = 0;
  max_quadrature_error = 0.0;
  worst_point.reset();
  bool have_worst = false;
  auto consider = [&](double err, const std::optional<ParamPoint>& where) {
    if (!have_worst || err > max_abs_err) {
      max_abs_err = err;
      worst_point = where;
      have_worst = true;
    }
  };
  for (const auto& p : points) {
    consider(p.max_abs_err, p.theta);
    max_rel_err = std::max(max_rel_err, p.max_rel_err);
    evaluations += p.evaluations;
    max_quadrature_error = std::max(max_quadrature_error, p.quadrature_error);
  }
  bool parts_pass = true;
  for (auto& part : parts) {
    part.summarize();
    consider(part.max_abs_err, part.worst_point);
    max_rel_err = std::max(max_rel_err, part.max_rel_err);
    evaluations += part.evaluations;
    max_quadrature_error = std::max(max_quadrature_error, part.max_quadrature_error);
    parts_pass = parts_pass && part.pass;
  }
  pass = have_worst && max_abs_err <= tolerance && parts_pass;
}

namespace {

/// Runs body(i) for i in [0, n) on a small pool; the first failure by index
/// is rethrown so errors are reported deterministically.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        body(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t threads = std::min<std::size_t>(n, std::max(1u, std::thread::hardware_concurrency()));
  std::vector<std::jthread> pool;
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  pool.clear();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::vector<std::string> exclusion_labels(const VerificationGrid& grid) {
  std::vector<std::string> out;
  for (const auto& e : grid.exclusions()) out.push_back(e.label);
  return out;
}

}  // namespace

VerificationReport compare_fields(const std::string& name, const MetricField& computed, const MetricField& target,
                                  const VerificationGrid& grid, double tol) {
  if (!computed.params().same_as(target.params())) {
    throw ParametricDomainMismatch("computed and target metric fields live on different parametric domains");
  }
  const std::vector<ParamPoint> pts = grid.points(target.params());
  VerificationReport report;
  report.name = name;
  report.tolerance = tol;
  report.grid = grid.axes();
  report.exclusions = exclusion_labels(grid);
  report.points.resize(pts.size());

  parallel_for(pts.size(), [&](std::size_t i) {
    PointResult& r = report.points[i];
    r.index = i;
    r.theta = pts[i];
    try {
      r.computed = computed(pts[i]);
      r.target = target(pts[i]);
    } catch (const std::exception& e) {
      throw GridPointError("at grid point " + std::to_string(i) + " " + to_string(pts[i]) + ": " + e.what(), i);
    }
    const MetricComparison c = compare_metrics(r.computed, r.target);
    r.abs_err = (r.computed.matrix() - r.target.matrix()).cwiseAbs();
    r.max_abs_err = c.max_abs_err;
    r.max_rel_err = c.max_rel_err;
    r.quadrature_error = r.computed.error_estimate;
    r.evaluations = r.computed.evaluations;
  });
  report.summarize();
  return report;
}

VerificationReport verify_construction(const DensityFamily& family, const MetricField& target,
                                       const VerificationGrid& grid, double tol, const QuadratureSpec& spec) {
  MetricField computed(family.params(), [family, spec](const ParamPoint& theta) {
    return fisher_metric_direct(family, theta, spec);
  });
  return compare_fields(family.name(), computed, target, grid, tol);
}

VerificationReport verify_construction(const DisjointProductFamily& family, const MetricField& target,
                                       const VerificationGrid& grid, double tol, const QuadratureSpec& spec) {
  MetricField computed(family.params(), [family, spec](const ParamPoint& theta) {
    return fisher_metric_decomposed(family, theta, spec);
  });
  return compare_fields(family.name(), computed, target, grid, tol);
}

MetricTensor hyperbolic_component_metric(std::size_t component, const ParamPoint& theta) {
  const double a = theta[0];
  const double b = theta[1];
  const double s = std::sin(a);
  const double c = std::cos(a);
  const double b4 = b * b * b * b;
  switch (component) {
    case 0:
      return MetricTensor{{b * b * s * s / b4, b * s * c / b4}, {b * s * c / b4, c * c / b4}};
    case 1:
      return MetricTensor{{b * b * c * c / b4, -b * s * c / b4}, {-b * s * c / b4, s * s / b4}};
    case 2:
      return MetricTensor{{0.0, 0.0}, {0.0, (b * b - 1.0) / b4}};
    default:
      throw DimensionError("hyperbolic example has three components");
  }
}

namespace {

VerificationReport as_demo(VerificationReport r, const std::string& name) {
  r.kind = "demo";
  r.name = name;
  r.summarize();
  return r;
}

VerificationReport as_part(VerificationReport r, const std::string& name) {
  r.kind = "part";
  r.name = name;
  return r;
}

/// Identity embedding h(t) = t on R.
Embedding line_embedding() {
  return Embedding(
      "line", ParametricDomain(1), 1,
      [](const ParamPoint& p) {
        Eigen::VectorXd h(1);
        h << p[0];
        return h;
      },
      [](const ParamPoint&) { return Eigen::MatrixXd::Identity(1, 1); });
}

MetricField constant_field(ParametricDomain params, MetricTensor g) {
  return MetricField(std::move(params), [g](const ParamPoint&) { return g; });
}

// Grids stay clear of boundaries: sigma, gamma >= 0.45, sphere phi in
// [0.3, 2.8], hyperbolic beta >= 1.1.

VerificationReport demo_normal(double tol) {
  const DensityFamily family = normal_family();
  MetricField target(family.params(), [](const ParamPoint& t) {
    const double s2 = t[1] * t[1];
    return MetricTensor{{1.0 / s2, 0.0}, {0.0, 2.0 / s2}};
  });
  VerificationGrid grid({{-1.8, 1.8, 5}, {0.45, 2.9, 2}});
  return as_demo(verify_construction(family, target, grid, tol), "normal");
}

VerificationReport demo_cauchy(double tol) {
  const DensityFamily family = cauchy_family();
  MetricField target(family.params(), [](const ParamPoint& t) {
    const double v = 1.0 / (2.0 * t[1] * t[1]);
    return MetricTensor{{v, 0.0}, {0.0, v}};
  });
  VerificationGrid grid({{-1.0, 1.0, 3}, {0.5, 2.0, 4}});
  return as_demo(verify_construction(family, target, grid, tol), "cauchy");
}

VerificationReport demo_sech_location(double tol) {
  const Embedding line = line_embedding();
  const DisjointProductFamily family = sech_construction(line);
  VerificationGrid grid({{-2.0, 2.0, 5}});
  return as_demo(verify_construction(family, pullback_field(line), grid, tol), "sech-location");
}

VerificationGrid sphere_grid() {
  return VerificationGrid({{0.3, 6.0, 5}, {0.3, 2.8, 5}}, {sphere_pole_bands()});
}

VerificationReport demo_sphere(double tol, bool sech) {
  const Embedding sphere = sphere2_embedding();
  const DisjointProductFamily family = sech ? sech_construction(sphere) : gaussian_construction(sphere);
  return as_demo(verify_construction(family, pullback_field(sphere), sphere_grid(), tol),
                 sech ? "sphere-sech" : "sphere-gaussian");
}

// Quadrature at 1e-9 leaves an error floor near 8e-12, well above 1e-12.
VerificationReport demo_hyperbolic(double tol) {
  QuadratureSpec spec;
  spec.abs_tol = 1e-9;
  spec.rel_tol = 1e-9;
  const Embedding h = hyperbolic_patch_embedding();
  const DisjointProductFamily family =
      mixed_construction(h, {normal_base(), sech_base(), cauchy_base()},
                         {SymmetryMode::kLocation, SymmetryMode::kLocation, SymmetryMode::kLocation}, spec);
  MetricField target(h.params(), [](const ParamPoint& t) {
    const double v = 1.0 / (t[1] * t[1]);
    return MetricTensor{{v, 0.0}, {0.0, v}};
  });
  VerificationGrid grid({{-3.0, 3.0, 5}, {1.1, 4.0, 5}});
  VerificationReport report = verify_construction(family, target, grid, tol, spec);
  for (std::size_t i = 0; i < family.components().size(); ++i) {
    const DensityFamily& comp = family.components()[i].family;
    MetricField closed(h.params(), [i](const ParamPoint& t) { return hyperbolic_component_metric(i, t); });
    report.parts.push_back(
        as_part(verify_construction(comp, closed, grid, tol, spec), "g(P" + std::to_string(i + 1) + ")"));
  }
  return as_demo(std::move(report), "hyperbolic-mixed");
}

VerificationReport demo_circle_orthonormal(double tol) {
  const Embedding h = circle_embedding(2.0);
  const DensityFamily family = orthonormal_construction(legendre_basis(2), h);
  VerificationGrid grid({{0.1, 6.2, 7}});
  return as_demo(verify_construction(family, constant_field(h.params(), MetricTensor{{4.0}}), grid, tol),
                 "circle-orthonormal");
}

VerificationReport demo_symmetry(double tol) {
  const ParametricDomain params(2);
  const ScalarField h{[](const ParamPoint& t) { return 0.7 * std::sin(t[0]) + 0.3 * t[1]; },
                      [](const ParamPoint& t) { return std::vector<double>{0.7 * std::cos(t[0]), 0.3}; }};
  VerificationGrid grid({{-1.0, 1.0, 3}, {-1.0, 1.0, 3}});
  struct Case {
    std::string label;
    BasePdf base;
    DiffeoFamily diffeo;
  };
  const std::vector<Case> cases = {{"location-normal", normal_base(), location_diffeo(h)},
                                   {"location-sech", sech_base(), location_diffeo(h)},
                                   {"scale-exponential", exponential_base(), scale_diffeo(h)},
                                   {"scale-normal", normal_base(), scale_diffeo(h)}};
  VerificationReport report;
  report.tolerance = tol;
  report.grid = grid.axes();
  for (const auto& c : cases) {
    const DensityFamily induced = induced_family(c.base, c.diffeo, params);
    MetricField symmetry(params, [c](const ParamPoint& t) { return fisher_metric_symmetry(c.base, c.diffeo, t); });
    MetricField direct(params, [induced](const ParamPoint& t) { return fisher_metric_direct(induced, t); });
    report.parts.push_back(as_part(compare_fields(c.label, symmetry, direct, grid, tol), c.label));
  }
  return as_demo(std::move(report), "symmetry-crosscheck");
}

}  // namespace

std::vector<std::string> demo_names() {
  return {"normal",           "cauchy",          "sech-location",      "sphere-gaussian",
          "sphere-sech",      "hyperbolic-mixed", "circle-orthonormal", "symmetry-crosscheck"};
}

VerificationReport run_demo(const std::string& name, std::optional<double> tol) {
  if (name == "normal") return demo_normal(tol.value_or(1e-8));
  if (name == "cauchy") return demo_cauchy(tol.value_or(1e-6));
  if (name == "sech-location") return demo_sech_location(tol.value_or(1e-8));
  if (name == "sphere-gaussian") return demo_sphere(tol.value_or(1e-5), false);
  if (name == "sphere-sech") return demo_sphere(tol.value_or(1e-5), true);
  if (name == "hyperbolic-mixed") return demo_hyperbolic(tol.value_or(1e-5));
  if (name == "circle-orthonormal") return demo_circle_orthonormal(tol.value_or(1e-6));
  if (name == "symmetry-crosscheck") return demo_symmetry(tol.value_or(1e-6));
  throw UnknownNameError("unknown demo '" + name + "'", demo_names());
}

}  // namespace infogeom

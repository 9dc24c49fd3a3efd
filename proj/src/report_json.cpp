#include "infogeom/report_json.hpp"

#include <cstdio>
#include <sstream>

namespace infogeom {

using json = nlohmann::ordered_json;

json to_json(const MetricTensor& g) {
  json rows = json::array();
  for (std::size_t i = 0; i < g.dim(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < g.dim(); ++j) row.push_back(g(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

json to_json(const ParamPoint& p) { return json(p.vec()); }

namespace {

json matrix_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

json point_json(const PointResult& r) {
  return {{"index", r.index},
          {"theta", to_json(r.theta)},
          {"computed", to_json(r.computed)},
          {"target", to_json(r.target)},
          {"abs_err", matrix_json(r.abs_err)},
          {"max_abs_err", r.max_abs_err},
          {"max_rel_err", r.max_rel_err},
          {"quadrature_error", r.quadrature_error},
          {"evaluations", r.evaluations}};
}

std::optional<std::size_t> worst_index(const VerificationReport& r) {
  if (r.points.empty()) return std::nullopt;
  std::size_t best = 0;
  for (std::size_t i = 1; i < r.points.size(); ++i) {
    if (r.points[i].max_abs_err > r.points[best].max_abs_err) best = i;
  }
  return r.points[best].index;
}

}  // namespace

json to_json(const VerificationReport& report) {
  json j;
  j[report.kind] = report.name;
  j["pass"] = report.pass;
  j["tolerance"] = report.tolerance;

  json summary;
  summary["max_abs_err"] = report.max_abs_err;
  summary["max_rel_err"] = report.max_rel_err;
  summary["worst_point"] = report.worst_point ? to_json(*report.worst_point) : json(nullptr);
  const auto wi = worst_index(report);
  summary["worst_index"] = wi ? json(*wi) : json(nullptr);
  summary["points"] = report.points.size();
  summary["evaluations"] = report.evaluations;
  summary["max_quadrature_error"] = report.max_quadrature_error;
  j["summary"] = std::move(summary);

  json axes = json::array();
  for (const auto& ax : report.grid) axes.push_back({{"start", ax.start}, {"end", ax.end}, {"count", ax.count}});
  j["grid"] = {{"axes", std::move(axes)}, {"exclusions", report.exclusions}};

  json points = json::array();
  for (const auto& p : report.points) points.push_back(point_json(p));
  j["points"] = std::move(points);

  json parts = json::array();
  for (const auto& part : report.parts) parts.push_back(to_json(part));
  j["parts"] = std::move(parts);
  return j;
}

json constant_to_json(const std::string& kind, const std::string& base, const IntegrationResult& r) {
  return {{"constant", kind + "(" + base + ")"},
          {"kind", kind},
          {"base", base},
          {"value", r.value},
          {"error_estimate", r.error_estimate},
          {"evaluations", r.evaluations},
          {"pass", r.converged}};
}

json metric_to_json(const std::string& family, const ParamPoint& theta, const MetricTensor& g) {
  return {{"metric", family},
          {"theta", to_json(theta)},
          {"matrix", to_json(g)},
          {"error_estimate", g.error_estimate},
          {"evaluations", g.evaluations},
          {"pass", true}};
}

namespace {

void append_summary(std::ostringstream& os, const VerificationReport& r, int depth) {
  char line[256];
  std::snprintf(line, sizeof line, "%*s%-24s %-4s max_abs %.3e  max_rel %.3e  quad_err %.3e  points %zu\n",
                depth * 2, "", r.name.c_str(), r.pass ? "PASS" : "FAIL", r.max_abs_err, r.max_rel_err,
                r.max_quadrature_error, r.points.size());
  os << line;
  for (const auto& p : r.parts) append_summary(os, p, depth + 1);
}

}  // namespace

std::string pretty_summary(const VerificationReport& report) {
  std::ostringstream os;
  os << report.kind << " " << report.name << " (tol " << report.tolerance << ")\n";
  append_summary(os, report, 1);
  if (report.worst_point) os << "  worst point " << to_string(*report.worst_point) << "\n";
  return os.str();
}

}  // namespace infogeom

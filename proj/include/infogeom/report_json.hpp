#pragma once

#include <string>

#include "json.hpp"

#include "infogeom/core.hpp"
#include "infogeom/quadrature.hpp"
#include "infogeom/verify.hpp"

namespace infogeom {

nlohmann::ordered_json to_json(const MetricTensor& g);
nlohmann::ordered_json to_json(const ParamPoint& p);

/// Top-level keys: the report kind ("demo" or "verify") mapped to its name,
/// then "pass", "tolerance", "summary", "grid", "points" and "parts".
nlohmann::ordered_json to_json(const VerificationReport& report);

/// {"constant", "kind", "base", "value", "error_estimate", "evaluations", "pass"}.
nlohmann::ordered_json constant_to_json(const std::string& kind, const std::string& base, const IntegrationResult& r);

/// {"metric", "theta", "matrix", "error_estimate", "evaluations", "pass"}.
nlohmann::ordered_json metric_to_json(const std::string& family, const ParamPoint& theta, const MetricTensor& g);

/// Human-readable summary table for standard error.
std::string pretty_summary(const VerificationReport& report);

}  // namespace infogeom

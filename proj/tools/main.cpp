// infogeom: command-line front end for the Fisher metric library.
//
// Exit codes: 0 pass, 1 numeric failure, 2 usage or input error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "infogeom/constructions.hpp"
#include "infogeom/densities.hpp"
#include "infogeom/embeddings.hpp"
#include "infogeom/expression.hpp"
#include "infogeom/fisher.hpp"
#include "infogeom/report_json.hpp"
#include "infogeom/verify.hpp"

namespace {

using namespace infogeom;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

class UsageError : public Error {
 public:
  using Error::Error;
};

struct Options {
  std::string demo;
  std::optional<double> tol;
  std::string grid;
  std::string embedding;
  std::string params;
  std::string construction = "gaussian";
  std::string bases;
  std::string family;
  std::string theta;
  std::string kind;
  std::string base;
  std::string out;
  bool pretty = false;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    out.push_back(b == std::string::npos ? "" : item.substr(b, e - b + 1));
  }
  return out;
}

std::vector<double> parse_numbers(const std::string& s, const std::string& what) {
  std::vector<double> out;
  for (const auto& f : split(s, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(f, &used));
      if (used != f.size()) throw std::invalid_argument(f);
    } catch (const std::logic_error&) {
      throw UsageError("malformed number '" + f + "' in " + what);
    }
  }
  return out;
}

void emit(const nlohmann::ordered_json& j, const Options& opt) {
  const std::string text = j.dump() + "\n";
  if (opt.out.empty()) {
    std::cout << text << std::flush;
    return;
  }
  std::ofstream f(opt.out);
  if (!f) throw UsageError("cannot open output file '" + opt.out + "'");
  f << text;
}

int finish(const VerificationReport& report, const Options& opt) {
  emit(to_json(report), opt);
  if (opt.pretty) std::cerr << pretty_summary(report);
  return report.pass ? kExitPass : kExitFail;
}

int cmd_demo(const Options& opt) { return finish(run_demo(opt.demo, opt.tol), opt); }

/// "normal", "sech:location", "exponential:scale"; exponential defaults to scale.
std::pair<std::vector<BasePdf>, std::vector<SymmetryMode>> parse_bases(const std::string& spec) {
  std::vector<BasePdf> bases;
  std::vector<SymmetryMode> modes;
  for (const auto& entry : split(spec, ',')) {
    const auto parts = split(entry, ':');
    if (parts.empty() || parts.size() > 2) throw UsageError("malformed base entry '" + entry + "'");
    bases.push_back(base_by_name(parts[0]));
    SymmetryMode mode = parts[0] == "exponential" ? SymmetryMode::kScale : SymmetryMode::kLocation;
    if (parts.size() == 2) {
      if (parts[1] == "location") {
        mode = SymmetryMode::kLocation;
      } else if (parts[1] == "scale") {
        mode = SymmetryMode::kScale;
      } else {
        throw UsageError("unknown symmetry mode '" + parts[1] + "' (expected location or scale)");
      }
    }
    modes.push_back(mode);
  }
  return {bases, modes};
}

int cmd_verify(const Options& opt) {
  Embedding embedding = [&opt]() {
    if (is_catalog_embedding(opt.embedding)) {
      if (!opt.params.empty()) throw UsageError("--params applies only to expression embeddings");
      return embedding_by_name(opt.embedding);
    }
    if (opt.params.empty()) {
      throw UsageError("expression embedding '" + opt.embedding + "' needs --params");
    }
    return parse_embedding_expression(opt.embedding, split(opt.params, ','));
  }();

  VerificationGrid grid = VerificationGrid::parse(opt.grid);
  if (embedding.name() == "sphere2") grid.add_exclusion(sphere_pole_bands());
  const double tol = opt.tol.value_or(1e-6);

  if (opt.construction != "mixed" && !opt.bases.empty()) {
    throw UsageError("--bases applies only to --construction mixed");
  }
  VerificationReport report;
  if (opt.construction == "gaussian") {
    report = verify_construction(gaussian_construction(embedding), pullback_field(embedding), grid, tol);
  } else if (opt.construction == "sech") {
    report = verify_construction(sech_construction(embedding), pullback_field(embedding), grid, tol);
  } else if (opt.construction == "mixed") {
    if (opt.bases.empty()) throw UsageError("--construction mixed needs --bases");
    const auto [bases, modes] = parse_bases(opt.bases);
    report = verify_construction(mixed_construction(embedding, bases, modes), pullback_field(embedding), grid, tol);
  } else {
    throw UsageError("unknown construction '" + opt.construction + "' (expected gaussian, sech or mixed)");
  }
  report.kind = "verify";
  report.name = opt.embedding + " / " + opt.construction;
  return finish(report, opt);
}

QuadratureSpec spec_from(const Options& opt) {
  QuadratureSpec spec;
  if (opt.tol) {
    spec.abs_tol = *opt.tol;
    spec.rel_tol = *opt.tol;
  }
  try {
    spec.validate();
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  return spec;
}

int cmd_metric(const Options& opt) {
  const DensityFamily family = family_by_name(opt.family);
  const ParamPoint theta(parse_numbers(opt.theta, "--theta"));
  const MetricTensor g = fisher_metric_direct(family, theta, spec_from(opt));
  emit(metric_to_json(family.name(), theta, g), opt);
  if (opt.pretty) std::cerr << family.name() << " at " << to_string(theta) << ":\n" << g.matrix() << "\n";
  return kExitPass;
}

int cmd_constant(const Options& opt) {
  const BasePdf base = base_by_name(opt.base);
  const QuadratureSpec spec = spec_from(opt);
  IntegrationResult r;
  if (opt.kind == "D") {
    r = location_constant_D(base, spec);
  } else if (opt.kind == "E") {
    r = scale_constant_E(base, spec);
  } else {
    throw UsageError("unknown constant kind '" + opt.kind + "' (expected D or E)");
  }
  emit(constant_to_json(opt.kind, opt.base, r), opt);
  if (opt.pretty) std::fprintf(stderr, "%s(%s) = %.17g +- %.3g\n", opt.kind.c_str(), opt.base.c_str(), r.value,
                               r.error_estimate);
  return kExitPass;
}

std::string join(const std::vector<std::string>& v) {
  std::string out;
  for (const auto& s : v) out += (out.empty() ? "" : ", ") + s;
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fisher metrics of statistical manifolds built from embeddings"};
  app.require_subcommand(1);
  Options opt;

  auto add_common = [&opt](CLI::App* sub) {
    sub->add_option("--out", opt.out, "Write JSON here instead of standard output");
    sub->add_flag("--pretty", opt.pretty, "Print a human-readable summary to standard error");
  };

  auto* demo = app.add_subcommand("demo", "Run a pinned end-to-end example");
  demo->add_option("name", opt.demo, "Demo name")->required();
  demo->add_option("--tol", opt.tol, "Override the pinned tolerance");
  add_common(demo);

  auto* verify = app.add_subcommand("verify", "Verify a construction against the pullback metric");
  verify->add_option("--embedding", opt.embedding, "Catalog name or ';'-separated expressions")->required();
  verify->add_option("--params", opt.params, "Comma-separated parameter names for expressions");
  verify->add_option("--construction", opt.construction, "gaussian, sech or mixed");
  verify->add_option("--bases", opt.bases, "Comma list of base[:location|:scale] for mixed");
  verify->add_option("--grid", opt.grid, "start:end:count per parameter, comma-separated")->required();
  verify->add_option("--tol", opt.tol, "Max abs error allowed (default 1e-6)");
  add_common(verify);

  auto* metric = app.add_subcommand("metric", "Fisher metric of a named family at one point");
  metric->add_option("--family", opt.family, "normal or cauchy")->required();
  metric->add_option("--theta", opt.theta, "Comma-separated parameter values")->required();
  metric->add_option("--tol", opt.tol, "Quadrature tolerance");
  add_common(metric);

  auto* constant = app.add_subcommand("constant", "Location constant D or scale constant E of a base");
  constant->add_option("--kind", opt.kind, "D or E")->required();
  constant->add_option("--base", opt.base, "normal, sech, cauchy or exponential")->required();
  constant->add_option("--tol", opt.tol, "Quadrature tolerance");
  add_common(constant);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitUsage;
  }

  try {
    if (*demo) return cmd_demo(opt);
    if (*verify) return cmd_verify(opt);
    if (*metric) return cmd_metric(opt);
    return cmd_constant(opt);
  } catch (const UnknownNameError& e) {
    std::cerr << "error: " << e.what() << " (valid: " << join(e.valid_names()) << ")\n";
    return kExitUsage;
  } catch (const NonConvergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFail;
  } catch (const GridPointError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFail;
  } catch (const ComponentError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFail;
  } catch (const NonFiniteIntegrandError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFail;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFail;
  }
}

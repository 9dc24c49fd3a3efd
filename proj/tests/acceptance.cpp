// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.
// Usage: acceptance <path-to-infogeom-cli>

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "infogeom/constructions.hpp"
#include "infogeom/densities.hpp"
#include "infogeom/embeddings.hpp"
#include "infogeom/fisher.hpp"
#include "infogeom/report_json.hpp"
#include "infogeom/verify.hpp"

using namespace infogeom;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::mt19937_64 rng(777);

double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

MetricTensor beta_metric(const ParamPoint& t) {
  const double v = 1.0 / (t[1] * t[1]);
  return MetricTensor{{v, 0.0}, {0.0, v}};
}

Outcome normal_metric() {
  const auto start = Clock::now();
  const DensityFamily normal = normal_family();
  const MetricField target(normal.params(), [](const ParamPoint& t) {
    const double s2 = t[1] * t[1];
    return MetricTensor{{1.0 / s2, 0.0}, {0.0, 2.0 / s2}};
  });
  const auto r = verify_construction(normal, target, VerificationGrid::parse("-1.8:1.8:5,0.45:2.9:2"), 1e-8);
  const double secs = std::chrono::duration<double>(Clock::now() - start).count();
  return {r.pass && r.points.size() == 10 && secs < 5.0,
          "10 points, max_abs_err " + fmt("%.2e", r.max_abs_err) + " (tol 1e-8), " + fmt("%.3f", secs) + " s (limit 5 s)"};
}

Outcome cauchy_metric() {
  const DensityFamily cauchy = cauchy_family();
  const MetricField target(cauchy.params(), [](const ParamPoint& t) {
    const double v = 1.0 / (2.0 * t[1] * t[1]);
    return MetricTensor{{v, 0.0}, {0.0, v}};
  });
  VerificationGrid grid({{-1.0, 1.0, 3}, {0.5, 2.0, 2}});
  double worst = 0.0;
  for (double gamma : {0.5, 1.0, 2.0}) {
    for (double x0 : {-1.0, 0.0, 1.0}) {
      const ParamPoint t{x0, gamma};
      worst = std::max(worst, compare_metrics(fisher_metric_direct(cauchy, t), target(t)).max_abs_err);
    }
  }
  return {worst <= 1e-6, "gamma in {0.5, 1, 2}, max_abs_err " + fmt("%.2e", worst) + " (tol 1e-6)"};
}

Outcome constants() {
  struct Row {
    const char* label;
    IntegrationResult r;
    double exact;
  };
  const std::vector<Row> rows = {{"D(normal)", location_constant_D(normal_base()), 1.0},
                                 {"D(sech)", location_constant_D(sech_base()), 0.5},
                                 {"D(cauchy)", location_constant_D(cauchy_base()), 0.5},
                                 {"E(exponential)", scale_constant_E(exponential_base()), 1.0},
                                 {"E(normal)", scale_constant_E(normal_base()), 2.0}};
  double worst = 0.0;
  std::string detail;
  for (const auto& row : rows) {
    const double err = std::abs(row.r.value - row.exact);
    worst = std::max(worst, err);
    detail += std::string(row.label) + "=" + fmt("%.12g", row.r.value) + " ";
  }
  return {worst <= 1e-9, detail + "max err " + fmt("%.2e", worst) + " (tol 1e-9)"};
}

VerificationGrid sphere_grid() {
  VerificationGrid g = VerificationGrid::parse("0.3:6:5,0.3:2.8:5");
  g.add_exclusion(sphere_pole_bands());
  return g;
}

Outcome sphere_gaussian() {
  const Embedding s = sphere2_embedding();
  const auto r = verify_construction(gaussian_construction(s), pullback_field(s), sphere_grid(), 1e-5);
  return {r.pass && r.points.size() == 25,
          std::to_string(r.points.size()) + " points, max_abs_err " + fmt("%.2e", r.max_abs_err) + " (tol 1e-5)"};
}

Outcome sphere_sech() {
  const Embedding s = sphere2_embedding();
  const auto sech = verify_construction(sech_construction(s), pullback_field(s), sphere_grid(), 1e-5);
  const auto gauss = verify_construction(gaussian_construction(s), pullback_field(s), sphere_grid(), 1e-5);
  double pairwise = 0.0;
  for (std::size_t i = 0; i < sech.points.size(); ++i) {
    pairwise = std::max(pairwise, compare_metrics(sech.points[i].computed, gauss.points[i].computed).max_abs_err);
  }
  return {sech.pass && pairwise <= 2e-5,
          "max_abs_err " + fmt("%.2e", sech.max_abs_err) + " (tol 1e-5), gaussian vs sech " + fmt("%.2e", pairwise) +
              " (tol 2e-5)"};
}

Outcome hyperbolic() {
  const Embedding h = hyperbolic_patch_embedding();
  const auto family = mixed_construction(h, {normal_base(), sech_base(), cauchy_base()},
                                         {SymmetryMode::kLocation, SymmetryMode::kLocation, SymmetryMode::kLocation});
  double worst_part = 0.0;
  double worst_sum = 0.0;
  for (const ParamPoint& t : {ParamPoint{0.0, 2.0}, ParamPoint{0.7, 2.0}, ParamPoint{std::numbers::pi / 2, 1.5}}) {
    const auto parts = component_metrics(family, t);
    MetricTensor sum(2);
    for (std::size_t i = 0; i < parts.size(); ++i) {
      worst_part = std::max(worst_part, compare_metrics(parts[i], hyperbolic_component_metric(i, t)).max_abs_err);
      sum += parts[i];
    }
    worst_sum = std::max(worst_sum, compare_metrics(sum, beta_metric(t)).max_abs_err);
  }
  return {worst_part <= 1e-6 && worst_sum <= 1e-6,
          "components " + fmt("%.2e", worst_part) + ", sum vs beta^-2 delta " + fmt("%.2e", worst_sum) + " (tol 1e-6)"};
}

Outcome additivity() {
  const std::vector<BasePdf> bases = {normal_base(), sech_base(), cauchy_base()};
  const ParametricDomain m(2);
  auto random_field = []() {
    const double a = uniform(-1.0, 1.0);
    const double b = uniform(-1.0, 1.0);
    const double w = uniform(0.5, 2.0);
    return ScalarField{[a, b, w](const ParamPoint& t) { return a * std::sin(w * t[0]) + b * t[1]; },
                       [a, b, w](const ParamPoint& t) { return std::vector<double>{a * w * std::cos(w * t[0]), b}; }};
  };
  double vs_box = 0.0;
  double vs_sum = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const BasePdf& b1 = bases[rng() % bases.size()];
    const BasePdf& b2 = bases[rng() % bases.size()];
    const DensityFamily f1 = location_family(b1, random_field(), m);
    const DensityFamily f2 = location_family(b2, random_field(), m);
    const auto product = disjoint_product({{f1, 1}, {f2, 1}});
    const ParamPoint t{uniform(-2.0, 2.0), uniform(-2.0, 2.0)};
    const MetricTensor decomposed = fisher_metric_decomposed(product, t);
    const MetricTensor direct = fisher_metric_direct(product.as_family(), t);
    MetricTensor sum = fisher_metric_direct(f1, t);
    sum += fisher_metric_direct(f2, t);
    vs_box = std::max(vs_box, compare_metrics(decomposed, direct).max_abs_err);
    vs_sum = std::max(vs_sum, compare_metrics(decomposed, sum).max_abs_err);
  }
  return {vs_box <= 1e-5 && vs_sum <= 1e-12,
          "20 pairs, vs 2-D box " + fmt("%.2e", vs_box) + " (tol 1e-5), vs component sum " + fmt("%.2e", vs_sum) +
              " (tol 1e-12)"};
}

Outcome symmetry() {
  const ParametricDomain m(2);
  const ScalarField h{[](const ParamPoint& t) { return 0.7 * std::sin(t[0]) + 0.3 * t[1]; },
                      [](const ParamPoint& t) { return std::vector<double>{0.7 * std::cos(t[0]), 0.3}; }};
  struct Case {
    const char* label;
    BasePdf base;
    DiffeoFamily diffeo;
  };
  const std::vector<Case> cases = {{"location/normal", normal_base(), location_diffeo(h)},
                                   {"location/sech", sech_base(), location_diffeo(h)},
                                   {"scale/exponential", exponential_base(), scale_diffeo(h)},
                                   {"scale/normal", normal_base(), scale_diffeo(h)}};
  double worst = 0.0;
  for (const auto& c : cases) {
    const DensityFamily induced = induced_family(c.base, c.diffeo, m);
    for (int i = 0; i < 20; ++i) {
      const ParamPoint t{uniform(-2.0, 2.0), uniform(-2.0, 2.0)};
      worst = std::max(worst, compare_metrics(fisher_metric_symmetry(c.base, c.diffeo, t),
                                              fisher_metric_direct(induced, t))
                                  .max_abs_err);
    }
  }
  return {worst <= 1e-6, "4 diffeo/base pairs x 20 points, max_abs_err " + fmt("%.2e", worst) + " (tol 1e-6)"};
}

Outcome orthonormal() {
  const auto r = run_demo("circle-orthonormal");
  bool rejected = false;
  std::string why;
  try {
    orthonormal_construction(legendre_basis(2), circle_embedding(1.0));
  } catch (const ConstraintViolation& e) {
    rejected = true;
    why = fmt("%.3g", e.max_violation());
  }
  return {r.pass && r.max_abs_err <= 1e-6 && rejected,
          "g = 4 max_abs_err " + fmt("%.2e", r.max_abs_err) + " (tol 1e-6), radius 1 " +
              (rejected ? "rejected (|h.h - 4| = " + why + ")" : std::string("NOT rejected"))};
}

Outcome normalization() {
  const Embedding sphere = sphere2_embedding();
  const Embedding hyp = hyperbolic_patch_embedding();
  const ScalarField h{[](const ParamPoint& t) { return 0.7 * std::sin(t[0]) + 0.3 * t[1]; },
                      [](const ParamPoint& t) { return std::vector<double>{0.7 * std::cos(t[0]), 0.3}; }};
  struct Product {
    DisjointProductFamily family;
    std::function<ParamPoint()> sample;
  };
  auto sphere_pt = [] { return ParamPoint{uniform(0.1, 6.2), uniform(0.1, 3.0)}; };
  auto hyp_pt = [] { return ParamPoint{uniform(-3.0, 3.0), uniform(1.05, 4.0)}; };
  auto plane_pt = [] { return ParamPoint{uniform(-2.0, 2.0), uniform(-2.0, 2.0)}; };
  const std::vector<Product> products = {
      {gaussian_construction(sphere), sphere_pt},
      {sech_construction(sphere), sphere_pt},
      {gaussian_construction(hyp), hyp_pt},
      {sech_construction(hyp), hyp_pt},
      {mixed_construction(hyp, {normal_base(), sech_base(), cauchy_base()},
                          {SymmetryMode::kLocation, SymmetryMode::kLocation, SymmetryMode::kLocation}),
       hyp_pt},
      {mixed_construction(sphere, {exponential_base(), normal_base(), sech_base()},
                          {SymmetryMode::kScale, SymmetryMode::kScale, SymmetryMode::kLocation}),
       sphere_pt},
  };
  struct Single {
    DensityFamily family;
    std::function<ParamPoint()> sample;
  };
  const std::vector<Single> singles = {
      {orthonormal_construction(legendre_basis(2), circle_embedding(2.0)), [] { return ParamPoint{uniform(-6.0, 6.0)}; }},
      {location_family(cauchy_base(), h, ParametricDomain(2)), plane_pt},
      {scale_family(exponential_base(), h, ParametricDomain(2)), plane_pt},
      {scale_family(normal_base(), h, ParametricDomain(2)), plane_pt},
  };
  double worst = 0.0;
  int checked = 0;
  for (const auto& p : products) {
    for (int i = 0; i < 10; ++i, ++checked) {
      worst = std::max(worst, std::abs(normalization_check(p.family, p.sample()).value - 1.0));
    }
  }
  for (const auto& s : singles) {
    for (int i = 0; i < 10; ++i, ++checked) {
      worst = std::max(worst, std::abs(normalization_check(s.family, s.sample()).value - 1.0));
    }
  }
  return {worst <= 1e-8,
          std::to_string(products.size() + singles.size()) + " families x 10 points, max |int P - 1| " +
              fmt("%.2e", worst) + " (tol 1e-8)"};
}

Outcome reparameterization() {
  const DensityFamily normal = normal_family();
  const DensityFamily psi_family("normal(mu, log sigma)", normal.domain(), ParametricDomain(2),
                                 [normal](const ParamPoint& psi) {
                                   DensitySlice s = normal.at_unchecked({psi[0], std::exp(psi[1])});
                                   s.log_gradient = {};
                                   return s;
                                 },
                                 false);
  double worst = 0.0;
  for (int i = 0; i < 10; ++i) {
    const ParamPoint psi{uniform(-2.0, 2.0), uniform(-1.0, 1.0)};
    const Eigen::Matrix2d j{{1.0, 0.0}, {0.0, std::exp(psi[1])}};
    const MetricTensor pulled(
        Eigen::MatrixXd(j.transpose() * fisher_metric_direct(normal, {psi[0], std::exp(psi[1])}).matrix() * j));
    worst = std::max(worst, compare_metrics(fisher_metric_direct(psi_family, psi), pulled).max_abs_err);
  }
  return {worst <= 1e-6, "10 points, max_abs_err " + fmt("%.2e", worst) + " (tol 1e-6)"};
}

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& cmd) {
  Run r;
  FILE* p = popen((cmd + " 2>/dev/null").c_str(), "r");
  if (!p) return r;
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

Outcome cli(const std::string& exe) {
  struct Case {
    std::string args;
    int expect;
    bool json;
  };
  const std::vector<Case> cases = {
      {"demo normal", 0, true},
      {"demo hyperbolic-mixed --tol 1e-12", 1, true},
      {"demo nope", 2, false},
      {"verify --embedding sphere2 --construction gaussian --grid 0.3:6:5,0.3:2.8:5 --tol 1e-5", 0, true},
      {"verify --embedding 'cos(a);sin(a)' --params a --construction sech --grid 0:6:7 --tol 1e-5", 0, true},
      {"verify --embedding 'a+' --params a --grid 0:1:3", 2, false},
      {"constant --kind D --base sech", 0, true},
      {"constant --kind E --base exponential", 0, true},
      {"constant --kind D --base uniform", 2, false},
      {"metric --family normal --theta 0,1", 0, true},
      {"demo normal --no-such-flag", 2, false},
  };
  int ok = 0;
  std::string failures;
  for (const auto& c : cases) {
    const Run r = run("'" + exe + "' " + c.args);
    bool good = r.code == c.expect;
    if (good && c.json) {
      try {
        const auto j = nlohmann::ordered_json::parse(r.out);
        const auto again = nlohmann::ordered_json::parse(j.dump());
        good = j == again && j.dump() + "\n" == r.out && j.contains("pass");
        if (c.args.rfind("constant", 0) == 0) {
          const double want = c.args.find("sech") != std::string::npos ? 0.5 : 1.0;
          good = good && std::abs(j["value"].get<double>() - want) <= 1e-10;
        }
        if (c.args == "demo normal") good = good && j["summary"]["max_abs_err"].get<double>() <= 1e-8;
      } catch (const std::exception&) {
        good = false;
      }
    }
    if (good) {
      ++ok;
    } else {
      failures += " [" + c.args + " -> " + std::to_string(r.code) + "]";
    }
  }
  return {ok == static_cast<int>(cases.size()),
          std::to_string(ok) + "/" + std::to_string(cases.size()) + " invocations with expected exit code 0/1/2 and " +
              "round-tripping JSON" + failures};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::fprintf(stderr, "usage: %s <infogeom executable>\n", argv[0]);
    return 2;
  }
  const std::string exe = argv[1];
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"normal-family metric", normal_metric},
      {"Cauchy-family metric", cauchy_metric},
      {"location and scale constants", constants},
      {"Gaussian construction on S^2", sphere_gaussian},
      {"sech construction on S^2", sphere_sech},
      {"hyperbolic mixed components", hyperbolic},
      {"additivity of disjoint products", additivity},
      {"symmetry formula cross-check", symmetry},
      {"orthonormal construction", orthonormal},
      {"normalization of constructions", normalization},
      {"reparameterization congruence", reparameterization},
      {"CLI contract", [&exe] { return cli(exe); }},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    const auto start = Clock::now();
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(Clock::now() - start).count();
    std::printf("%s %2zu %-34s %s [%.2f s]\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                o.detail.c_str(), secs);
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}

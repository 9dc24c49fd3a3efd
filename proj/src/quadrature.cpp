#include "infogeom/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>
#include <sstream>
#include <vector>

namespace infogeom {

namespace {

using Kronrod = boost::math::quadrature::gauss_kronrod<double, 21>;
using Gauss = boost::math::quadrature::gauss<double, 10>;

constexpr double kEps = std::numeric_limits<double>::epsilon();

/// Integrand value plus a side channel integrated with the same rule but
/// ignored by the adaptive refinement (carries inner error estimates).
struct Sample {
  double value;
  double aux;
};

using SampleFn = std::function<Sample(double)>;

/// Maps the integration variable t of a panel onto x, with dx/dt.
class VariableMap {
 public:
  VariableMap(Interval iv, InfiniteMap kind) : iv_(iv), kind_(kind) {
    const bool lo_inf = std::isinf(iv.lower);
    const bool hi_inf = std::isinf(iv.upper);
    if (lo_inf && hi_inf) {
      mode_ = Mode::kBoth;
      t_lo_ = -1.0;
      t_hi_ = 1.0;
    } else if (hi_inf) {
      mode_ = Mode::kUpper;
      t_lo_ = 0.0;
      t_hi_ = 1.0;
    } else if (lo_inf) {
      mode_ = Mode::kLower;
      t_lo_ = 0.0;
      t_hi_ = 1.0;
    } else {
      mode_ = Mode::kFinite;
      t_lo_ = iv.lower;
      t_hi_ = iv.upper;
    }
  }

  double t_lower() const { return t_lo_; }
  double t_upper() const { return t_hi_; }

  /// Returns x(t) and writes |dx/dt|.
  double operator()(double t, double& jac) const {
    switch (mode_) {
      case Mode::kFinite:
        jac = 1.0;
        return t;
      case Mode::kBoth:
        if (kind_ == InfiniteMap::kRational) {
          const double d = (1.0 - t) * (1.0 + t);
          jac = (1.0 + t * t) / (d * d);
          return t / d;
        } else {
          const double c = std::cos(0.5 * std::numbers::pi * t);
          jac = 0.5 * std::numbers::pi / (c * c);
          return std::tan(0.5 * std::numbers::pi * t);
        }
      case Mode::kUpper:
      case Mode::kLower: {
        double s;
        if (kind_ == InfiniteMap::kRational) {
          const double d = 1.0 - t;
          jac = 1.0 / (d * d);
          s = t / d;
        } else {
          const double c = std::cos(0.5 * std::numbers::pi * t);
          jac = 0.5 * std::numbers::pi / (c * c);
          s = std::tan(0.5 * std::numbers::pi * t);
        }
        return mode_ == Mode::kUpper ? iv_.lower + s : iv_.upper - s;
      }
    }
    return 0.0;
  }

 private:
  enum class Mode { kFinite, kBoth, kUpper, kLower };
  Interval iv_;
  InfiniteMap kind_;
  Mode mode_ = Mode::kFinite;
  double t_lo_ = 0.0;
  double t_hi_ = 0.0;
};

struct Panel {
  double a;
  double b;
  double value;
  double error;
  double aux;
  bool splittable;
};

struct ByError {
  const std::vector<Panel>* panels;
  bool operator()(std::size_t lhs, std::size_t rhs) const {
    const auto& l = (*panels)[lhs];
    const auto& r = (*panels)[rhs];
    if (l.error != r.error) return l.error < r.error;
    return lhs > rhs;  // deterministic tie-break
  }
};

Panel evaluate_panel(const SampleFn& f, const VariableMap& map, double a, double b) {
  const auto& nodes = Kronrod::abscissa();
  const auto& kw = Kronrod::weights();
  const auto& gw = Gauss::weights();
  const double half = 0.5 * (b - a);
  const double center = 0.5 * (a + b);

  std::array<double, 21> fv{};
  double kron = 0.0;
  double gauss = 0.0;
  double aux = 0.0;
  double resabs = 0.0;

  auto sample = [&](double t) {
    double jac = 0.0;
    const double x = map(t, jac);
    if (!std::isfinite(x) || !std::isfinite(jac)) {
      throw NonFiniteIntegrandError("quadrature node mapped to a non-finite abscissa", x);
    }
    const Sample s = f(x);
    if (!std::isfinite(s.value)) {
      std::ostringstream os;
      os.precision(17);
      os << "integrand is not finite at x = " << x;
      throw NonFiniteIntegrandError(os.str(), x);
    }
    return Sample{s.value * jac, s.aux * jac};
  };

  // Node 0 is the center; odd indices carry the embedded Gauss rule.
  const Sample c = sample(center);
  fv[0] = c.value;
  kron = c.value * kw[0];
  aux = c.aux * kw[0];
  resabs = std::abs(c.value) * kw[0];
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    const double dx = half * nodes[i];
    const Sample lo = sample(center - dx);
    const Sample hi = sample(center + dx);
    fv[2 * i - 1] = lo.value;
    fv[2 * i] = hi.value;
    kron += (lo.value + hi.value) * kw[i];
    aux += (lo.aux + hi.aux) * kw[i];
    resabs += (std::abs(lo.value) + std::abs(hi.value)) * kw[i];
    if (i % 2 == 1) gauss += (lo.value + hi.value) * gw[i / 2];
  }

  const double mean = 0.5 * kron;
  double resasc = kw[0] * std::abs(fv[0] - mean);
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    resasc += kw[i] * (std::abs(fv[2 * i - 1] - mean) + std::abs(fv[2 * i] - mean));
  }

  const double scale = std::abs(half);
  double err = std::abs((kron - gauss) * half);
  resabs *= scale;
  resasc *= scale;
  if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  const double roundoff = 50.0 * kEps * resabs;
  if (resabs > std::numeric_limits<double>::min() / (50.0 * kEps)) err = std::max(roundoff, err);

  const double width = b - a;
  // Bisection stops once the children's outermost nodes would round onto the
  // panel ends; near zero that still leaves room to chase endpoint singularities.
  // A panel already at its rounding floor gains nothing from bisection.
  const bool splittable = width > 2048.0 * kEps * std::max(std::abs(a), std::abs(b)) &&
                          width > 1e3 * std::numeric_limits<double>::min() && err > roundoff;
  return Panel{a, b, kron * half, err, aux * scale, splittable};
}

long long evaluations_per_panel() { return 21; }

struct AdaptiveOutcome {
  IntegrationResult result;
  double aux = 0.0;
};

AdaptiveOutcome adaptive(const SampleFn& f, Interval iv, const QuadratureSpec& spec) {
  spec.validate();
  if (!(iv.lower < iv.upper)) throw DomainError("integration interval needs lower < upper");
  const VariableMap map(iv, spec.infinite_map);

  std::vector<Panel> panels;
  long long evals = 0;
  const int n0 = std::max(1, spec.initial_panels);
  const double t0 = map.t_lower();
  const double t1 = map.t_upper();
  for (int i = 0; i < n0; ++i) {
    const double a = t0 + (t1 - t0) * i / n0;
    const double b = (i + 1 == n0) ? t1 : t0 + (t1 - t0) * (i + 1) / n0;
    panels.push_back(evaluate_panel(f, map, a, b));
    evals += evaluations_per_panel();
  }

  auto fresh_totals = [&panels](double& value, double& err, double& aux) {
    value = err = aux = 0.0;
    for (const auto& p : panels) {
      value += p.value;
      err += p.error;
      aux += p.aux;
    }
  };

  std::priority_queue<std::size_t, std::vector<std::size_t>, ByError> heap(ByError{&panels});
  for (std::size_t i = 0; i < panels.size(); ++i) heap.push(i);

  double value = 0.0;
  double err = 0.0;
  double aux = 0.0;
  fresh_totals(value, err, aux);

  auto target = [&spec](double v) { return std::max(spec.abs_tol, spec.rel_tol * std::abs(v)); };

  bool converged = false;
  while (true) {
    if (err <= target(value)) {
      fresh_totals(value, err, aux);
      if (err <= target(value)) {
        converged = true;
        break;
      }
    }
    if (heap.empty() || evals + 2 * evaluations_per_panel() > spec.max_evaluations) break;
    const std::size_t worst = heap.top();
    heap.pop();
    const Panel p = panels[worst];
    if (!p.splittable) continue;  // stays in the totals, never refined again
    const double mid = 0.5 * (p.a + p.b);
    const Panel left = evaluate_panel(f, map, p.a, mid);
    const Panel right = evaluate_panel(f, map, mid, p.b);
    evals += 2 * evaluations_per_panel();
    value += left.value + right.value - p.value;
    err += left.error + right.error - p.error;
    aux += left.aux + right.aux - p.aux;
    panels[worst] = left;
    panels.push_back(right);
    heap.push(worst);
    heap.push(panels.size() - 1);
  }
  fresh_totals(value, err, aux);
  converged = converged && err <= target(value);
  return AdaptiveOutcome{IntegrationResult{value, err, evals, converged}, aux};
}

std::string describe_failure(const IntegrationResult& r) {
  std::ostringstream os;
  os.precision(6);
  os << "quadrature did not converge: estimate " << r.value << ", error estimate "
     << r.error_estimate << " after " << r.evaluations << " evaluations";
  return os.str();
}

}  // namespace

void QuadratureSpec::validate() const {
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) throw Error("quadrature tolerances must be positive");
  if (max_evaluations < 100) throw Error("quadrature max_evaluations must be at least 100");
}

IntegrationResult try_integrate_1d(const std::function<double(double)>& f, Interval interval,
                                   const QuadratureSpec& spec) {
  return adaptive([&f](double x) { return Sample{f(x), 0.0}; }, interval, spec).result;
}

IntegrationResult integrate_1d(const std::function<double(double)>& f, Interval interval,
                               const QuadratureSpec& spec) {
  IntegrationResult r = try_integrate_1d(f, interval, spec);
  if (!r.converged) throw NonConvergenceError(describe_failure(r), r);
  return r;
}

namespace {

constexpr double kInnerShare = 1e-3;
constexpr double kInnerRelFloor = 1e-13;

/// A positive density on the interval: uniform when finite, Cauchy-shaped
/// on unbounded sides.
double unit_weight(const Interval& iv, double x) {
  const bool lo_inf = std::isinf(iv.lower);
  const bool hi_inf = std::isinf(iv.upper);
  if (!lo_inf && !hi_inf) return 1.0 / (iv.upper - iv.lower);
  if (lo_inf && hi_inf) return 1.0 / (std::numbers::pi * (1.0 + x * x));
  const double u = lo_inf ? iv.upper - x : x - iv.lower;
  return 2.0 / (std::numbers::pi * (1.0 + u * u));
}

}  // namespace

IntegrationResult integrate_box(const std::function<double(std::span<const double>)>& f,
                                const SpatialDomain& box, const QuadratureSpec& spec) {
  const std::size_t k = box.dim();
  if (k > kMaxBoxDimension) {
    throw DimensionError("box integration limited to dimension " +
                         std::to_string(kMaxBoxDimension) + ", got " + std::to_string(k));
  }
  std::vector<double> point(k, 0.0);
  long long evals = 0;

  // Inner errors are integrated over the outer axis, which may be unbounded.
  // Each inner absolute tolerance is therefore scaled by a weight that
  // integrates to one over the outer interval, keeping their total bounded.
  std::function<AdaptiveOutcome(std::size_t, const QuadratureSpec&)> level =
      [&](std::size_t d, const QuadratureSpec& s) -> AdaptiveOutcome {
    SampleFn g = [&, d](double x) -> Sample {
      point[d] = x;
      if (d + 1 == k) {
        ++evals;
        return Sample{f(point), 0.0};
      }
      QuadratureSpec inner = s;
      inner.abs_tol = s.abs_tol * kInnerShare * unit_weight(box[d], x);
      inner.rel_tol = std::max(s.rel_tol * kInnerShare, kInnerRelFloor);
      const AdaptiveOutcome sub = level(d + 1, inner);
      return Sample{sub.result.value, sub.result.error_estimate + sub.aux};
    };
    return adaptive(g, box[d], s);
  };

  const AdaptiveOutcome out = level(0, spec);
  IntegrationResult r = out.result;
  r.error_estimate += out.aux;
  r.evaluations = evals;
  r.converged = r.converged &&
                r.error_estimate <= std::max(spec.abs_tol, spec.rel_tol * std::abs(r.value));
  if (!r.converged) throw NonConvergenceError(describe_failure(r), r);
  return r;
}

}  // namespace infogeom

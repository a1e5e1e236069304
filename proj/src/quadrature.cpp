#include "uavnoma/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <string>

#include "uavnoma/errors.hpp"

namespace uavnoma::quad {
namespace {

constexpr double kRoundoff = 64.0 * std::numeric_limits<double>::epsilon();

struct Reference {
  std::vector<double> x;
  std::vector<double> w;
};

Reference build_reference(int n) {
  Reference ref;
  ref.x.resize(n);
  ref.w.resize(n);
  for (int k = 0; k < (n + 1) / 2; ++k) {
    double x = std::cos(std::numbers::pi * (k + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = x;
      for (int m = 2; m <= n; ++m) {
        const double p2 = ((2.0 * m - 1.0) * x * p1 - (m - 1.0) * p0) / m;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // recompute derivative at the converged root
    double p0 = 1.0;
    double p1 = x;
    for (int m = 2; m <= n; ++m) {
      const double p2 = ((2.0 * m - 1.0) * x * p1 - (m - 1.0) * p0) / m;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    ref.x[k] = -x;
    ref.x[n - 1 - k] = x;
    ref.w[k] = w;
    ref.w[n - 1 - k] = w;
  }
  if (n % 2 == 1) ref.x[n / 2] = 0.0;
  return ref;
}

double apply_rule(const Fn1& f, double a, double b, std::span<const double> x, std::span<const double> w) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  double s = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) s += w[k] * f(mid + half * x[k]);
  return half * s;
}

struct Panel {
  double a;
  double b;
  double left;   // rule on [a, mid]
  double right;  // rule on [mid, b]
  double error;
  double value() const { return left + right; }
};

}  // namespace

void QuadSpec::validate() const {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) fail(ErrorCode::InvalidArgument, "quadrature tolerances must be > 0");
  if (nodes < 2) fail(ErrorCode::InvalidArgument, "quadrature needs at least 2 nodes per panel");
  if (max_subdivisions < 1) fail(ErrorCode::InvalidArgument, "quadrature needs max_subdivisions >= 1");
}

std::pair<std::span<const double>, std::span<const double>> legendre_reference(int n) {
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<Reference>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<Reference>(build_reference(n));
  return {slot->x, slot->w};
}

FixedRule FixedRule::gauss_legendre(int n, double lo, double hi) {
  const auto [x, w] = legendre_reference(n);
  FixedRule rule;
  const double half = 0.5 * (hi - lo);
  const double mid = 0.5 * (hi + lo);
  for (int k = 0; k < n; ++k) {
    rule.nodes.push_back(mid + half * x[k]);
    rule.weights.push_back(half * w[k]);
  }
  return rule;
}

QuadResult integrate_1d(const Fn1& f, double a, double b, const QuadSpec& spec) {
  if (a > b) fail(ErrorCode::InvalidArgument, "integrate_1d: lower limit exceeds upper limit");
  if (a == b) return {};
  const auto [x, w] = legendre_reference(spec.nodes);

  auto make_panel = [&](double lo, double hi, double whole) {
    const double mid = 0.5 * (lo + hi);
    Panel p{lo, hi, apply_rule(f, lo, mid, x, w), apply_rule(f, mid, hi, x, w), 0.0};
    // roundoff floor
    p.error = std::max(2.0 * std::abs(p.value() - whole), kRoundoff * (std::abs(p.left) + std::abs(p.right)));
    return p;
  };

  std::vector<Panel> panels;
  panels.push_back(make_panel(a, b, apply_rule(f, a, b, x, w)));

  auto totals = [&] {
    double v = 0.0;
    double e = 0.0;
    for (const auto& p : panels) {
      v += p.value();
      e += p.error;
    }
    return QuadResult{v, e};
  };

  QuadResult total = totals();
  int splits = 0;
  while (total.error > std::max(spec.abs_tol, spec.rel_tol * std::abs(total.value))) {
    if (splits >= spec.max_subdivisions) {
      fail(ErrorCode::QuadratureFailure, "integrate_1d: tolerance not met on [" + std::to_string(a) + ", " +
                                             std::to_string(b) + "] (error " + std::to_string(total.error) + ")");
    }
    auto worst = std::max_element(panels.begin(), panels.end(),
                                  [](const Panel& l, const Panel& r) { return l.error < r.error; });
    const Panel p = *worst;
    const double mid = 0.5 * (p.a + p.b);
    *worst = make_panel(p.a, mid, p.left);
    panels.push_back(make_panel(mid, p.b, p.right));
    ++splits;
    total = totals();
  }
  return total;
}

QuadResult integrate_2d(const Fn2& f, double outer_lo, double outer_hi, const InnerLimits& inner,
                        const QuadSpec& spec) {
  QuadSpec inner_spec = spec;
  inner_spec.rel_tol = std::max(spec.rel_tol * 1e-2, 4.0 * kRoundoff);
  inner_spec.abs_tol = spec.abs_tol * 1e-2;
  double worst_inner_error = 0.0;
  const Fn1 outer = [&](double l) {
    const auto [lo, hi] = inner(l);
    if (!(hi > lo)) return 0.0;
    const auto r = integrate_1d([&](double rr) { return f(rr, l); }, lo, hi, inner_spec);
    worst_inner_error = std::max(worst_inner_error, r.error);
    return r.value;
  };
  auto result = integrate_1d(outer, outer_lo, outer_hi, spec);
  result.error += (outer_hi - outer_lo) * worst_inner_error;
  return result;
}

QuadResult integrate_3d_theta(const Fn3& f, double theta_lo, double theta_hi, double outer_lo, double outer_hi,
                              const InnerLimits& inner, const QuadSpec& spec, int theta_nodes) {
  const auto rule = FixedRule::gauss_legendre(theta_nodes, theta_lo, theta_hi);
  return integrate_2d(
      [&](double r, double l) { return rule.apply([&](double t) { return f(t, l, r); }); }, outer_lo, outer_hi,
      inner, spec);
}

QuadResult integrate_3d_theta_factored(const Fn2& weight, const Fn3& kernel, double theta_lo, double theta_hi,
                                       double outer_lo, double outer_hi, const InnerLimits& inner,
                                       const QuadSpec& spec, int theta_nodes) {
  const auto rule = FixedRule::gauss_legendre(theta_nodes, theta_lo, theta_hi);
  return integrate_2d(
      [&](double r, double l) {
        const double wgt = weight(r, l);
        if (wgt == 0.0) return 0.0;
        return wgt * rule.apply([&](double t) { return kernel(t, l, r); });
      },
      outer_lo, outer_hi, inner, spec);
}

}  // namespace uavnoma::quad

#pragma once

#include <functional>
#include <span>
#include <utility>
#include <vector>

namespace uavnoma::quad {

struct QuadSpec {
  double rel_tol = 1e-7;
  double abs_tol = 1e-10;
  int max_subdivisions = 64;
  int nodes = 32;  // Gauss-Legendre points per panel

  void validate() const;
  bool operator==(const QuadSpec&) const = default;
};

struct QuadResult {
  double value = 0.0;
  double error = 0.0;  // estimated absolute error
};

// Gauss-Legendre nodes/weights mapped to [lo, hi].
struct FixedRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  static FixedRule gauss_legendre(int n, double lo, double hi);

  template <class F>
  double apply(F&& f) const {
    double s = 0.0;
    for (std::size_t k = 0; k < nodes.size(); ++k) s += weights[k] * f(nodes[k]);
    return s;
  }
};

// Reference nodes/weights on [-1, 1]; cached per node count.
std::pair<std::span<const double>, std::span<const double>> legendre_reference(int n);

using Fn1 = std::function<double(double)>;
using Fn2 = std::function<double(double /*r*/, double /*l*/)>;
using Fn3 = std::function<double(double /*theta*/, double /*l*/, double /*r*/)>;
using InnerLimits = std::function<std::pair<double, double>(double /*l*/)>;

// Adaptive bisection: every panel is integrated whole and as two halves; the
// difference is its error estimate and the worst panel is split until
//   error <= max(abs_tol, rel_tol * |value|)
// or max_subdivisions is exhausted (QuadratureFailure). Node placement only
// depends on the integrand values, so results are bit-reproducible.
QuadResult integrate_1d(const Fn1& f, double a, double b, const QuadSpec& spec = {});

// Iterated integral over l in [outer_lo, outer_hi], r in inner(l).
// Empty inner ranges contribute zero.
QuadResult integrate_2d(const Fn2& f, double outer_lo, double outer_hi, const InnerLimits& inner,
                        const QuadSpec& spec = {});

inline InnerLimits fixed_limits(double lo, double hi) {
  return [lo, hi](double) { return std::pair{lo, hi}; };
}

// Triple integral with a fixed theta rule (the integrand is nearly constant
// over narrow theta ranges) and the adaptive 2-D scheme over (l, r).
QuadResult integrate_3d_theta(const Fn3& f, double theta_lo, double theta_hi, double outer_lo, double outer_hi,
                              const InnerLimits& inner, const QuadSpec& spec = {}, int theta_nodes = 8);

// Same integral for integrands weight(l, r) * kernel(theta, l, r); weight is
// evaluated once per (l, r) instead of once per theta node.
QuadResult integrate_3d_theta_factored(const Fn2& weight, const Fn3& kernel, double theta_lo, double theta_hi,
                                       double outer_lo, double outer_hi, const InnerLimits& inner,
                                       const QuadSpec& spec = {}, int theta_nodes = 8);

}  // namespace uavnoma::quad

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "integrand_battery.hpp"
#include "oracles.hpp"
#include "uavnoma/errors.hpp"
#include "uavnoma/quadrature.hpp"

using namespace uavnoma;
using quad::QuadSpec;

namespace {
constexpr double pi = std::numbers::pi;
}

TEST(Quadrature, Polynomial) {
  const auto r = quad::integrate_1d([](double x) { return x * x; }, 0.0, 1.0);
  EXPECT_NEAR(r.value, 1.0 / 3.0, 1e-14);
  EXPECT_LE(r.error, 1e-10);
}

TEST(Quadrature, Sine) {
  EXPECT_NEAR(quad::integrate_1d([](double x) { return std::sin(x); }, 0.0, pi).value, 2.0, 1e-12);
}

TEST(Quadrature, EmptyInterval) {
  const auto r = quad::integrate_1d([](double) { return 1.0; }, 3.0, 3.0);
  EXPECT_EQ(r.value, 0.0);
}

TEST(Quadrature, LegendreRuleIntegratesHighDegreeExactly) {
  const auto rule = quad::FixedRule::gauss_legendre(8, -1.0, 2.0);
  // exact up to degree 15
  const double v = rule.apply([](double x) { return std::pow(x, 15) + x * x; });
  const double want = (std::pow(2.0, 16) - 1.0) / 16.0 + 3.0;
  EXPECT_NEAR(v, want, 1e-10 * want);
  double wsum = 0.0;
  for (double w : rule.weights) wsum += w;
  EXPECT_NEAR(wsum, 3.0, 1e-14);
  const auto [nodes, weights] = quad::legendre_reference(32);
  ASSERT_EQ(nodes.size(), 32u);
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    EXPECT_NEAR(nodes[k], -nodes[nodes.size() - 1 - k], 1e-15);
    EXPECT_GT(weights[k], 0.0);
  }
}

TEST(Quadrature, Rectangle) {
  const auto r = quad::integrate_2d([](double x, double y) { return x * y; }, 0.0, 2.0, quad::fixed_limits(0.0, 3.0));
  EXPECT_NEAR(r.value, 9.0, 1e-12);
}

TEST(Quadrature, Triangle) {
  // r in [0, l], l in [0, 1]
  const auto r = quad::integrate_2d([](double, double) { return 1.0; }, 0.0, 1.0,
                                    [](double l) { return std::pair{0.0, l}; });
  EXPECT_NEAR(r.value, 0.5, 1e-13);
  const auto m = quad::integrate_2d([](double r, double l) { return r * l; }, 0.0, 1.0,
                                    [](double l) { return std::pair{0.0, l}; });
  EXPECT_NEAR(m.value, 1.0 / 8.0, 1e-13);
}

TEST(Quadrature, EmptyInnerRangesContributeZero) {
  const auto r = quad::integrate_2d([](double, double) { return 1.0; }, 0.0, 2.0,
                                    [](double l) { return l < 1.0 ? std::pair{0.0, 1.0} : std::pair{5.0, 5.0}; });
  EXPECT_NEAR(r.value, 1.0, 1e-6);
}

TEST(Quadrature, ThreeDimensional) {
  const auto c = quad::integrate_3d_theta([](double, double, double) { return 2.0; }, -0.1, 0.1, 0.0, 1.0,
                                          quad::fixed_limits(0.0, 1.0));
  EXPECT_NEAR(c.value, 0.4, 1e-13);
  const auto s = quad::integrate_3d_theta([](double t, double l, double r) { return std::cos(t) * l * r * r; },
                                          -0.5, 0.5, 0.0, 2.0, quad::fixed_limits(0.0, 3.0));
  EXPECT_NEAR(s.value, 2.0 * std::sin(0.5) * 2.0 * 9.0, 1e-10);
  const auto f = quad::integrate_3d_theta_factored([](double r, double l) { return l * r * r; },
                                                   [](double t, double, double) { return std::cos(t); }, -0.5, 0.5,
                                                   0.0, 2.0, quad::fixed_limits(0.0, 3.0));
  EXPECT_NEAR(f.value, s.value, 1e-12);
}

class QuadratureBattery : public ::testing::TestWithParam<int> {};

using testing_support::battery;

TEST_P(QuadratureBattery, ErrorEstimateBoundsTrueError) {
  const auto k = battery()[GetParam()];
  const QuadSpec spec{1e-10, 1e-13, 2000, 32};
  const auto r = quad::integrate_1d(k.f, k.a, k.b, spec);
  const double err = std::abs(r.value - k.exact);
  EXPECT_LE(err, std::max(r.error, 1e-14 * std::abs(k.exact))) << k.name;
  EXPECT_LE(r.error, std::max(spec.abs_tol, spec.rel_tol * std::abs(r.value))) << k.name;
}

TEST_P(QuadratureBattery, HalvingToleranceStaysWithinEstimate) {
  const auto k = battery()[GetParam()];
  QuadSpec spec{1e-7, 1e-10, 2000, 32};
  for (int halvings = 0; halvings < 6; ++halvings) {
    QuadSpec half = spec;
    half.rel_tol /= 2.0;
    half.abs_tol /= 2.0;
    const auto a = quad::integrate_1d(k.f, k.a, k.b, spec);
    const auto b = quad::integrate_1d(k.f, k.a, k.b, half);
    EXPECT_LE(std::abs(a.value - b.value), a.error) << k.name << " rel_tol " << spec.rel_tol;
    spec = half;
  }
}

INSTANTIATE_TEST_SUITE_P(Known, QuadratureBattery, ::testing::Range(0, 20));

TEST(Quadrature, AgreesWithMidpointOracle) {
  auto g = [](double r, double l) { return std::exp(-r / l) * std::sin(l); };
  const auto r = quad::integrate_2d(g, 1.0, 3.0, quad::fixed_limits(0.0, 2.0), QuadSpec{1e-12, 1e-14, 200, 32});
  EXPECT_NEAR(r.value, oracle::midpoint_2d(g, 0.0, 2.0, 1.0, 3.0, 2000), 1e-6);
}

TEST(Quadrature, Reproducible) {
  auto f = [](double x) { return std::exp(-x) * std::cos(17 * x); };
  const auto a = quad::integrate_1d(f, 0.0, 3.0);
  const auto b = quad::integrate_1d(f, 0.0, 3.0);
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.error, b.error);
}

TEST(Quadrature, Failures) {
  auto code = [](auto fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::ValidationError;
  };
  EXPECT_EQ(code([] { quad::integrate_1d([](double x) { return 1.0 / x; }, -1.0, 1.0, QuadSpec{1e-12, 1e-14, 8, 8}); }),
            ErrorCode::QuadratureFailure);
  EXPECT_EQ(code([] { quad::integrate_1d([](double x) { return x; }, 1.0, 0.0); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code([] { QuadSpec{0.0, 1e-10, 64, 32}.validate(); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code([] { QuadSpec{1e-7, 1e-10, 64, 1}.validate(); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code([] { QuadSpec{1e-7, 1e-10, 0, 32}.validate(); }), ErrorCode::InvalidArgument);
}

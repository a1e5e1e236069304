#include <gtest/gtest.h>

#include <random>

#include "common.hpp"
#include "oracles.hpp"
#include "uavnoma/errors.hpp"
#include "uavnoma/propagation.hpp"

using namespace uavnoma;

TEST(PathLoss, DistancePower) {
  const ChannelModel m;
  EXPECT_DOUBLE_EQ(path_loss(m, 10.0), 101.0);
  EXPECT_NEAR(path_loss(m, 1e-9), 1.0, 1e-15);
  ChannelModel cubic{DistancePowerLoss{3.0}, 10, 0.0};
  EXPECT_NEAR(path_loss(cubic, 10.0), 1001.0, 1e-9);
}

TEST(PathLoss, CloseInAtReferenceDistance) {
  const ChannelModel m{CloseInLoss{30.0}, 100, 0.0};
  const double expected = std::pow(10.0, (32.4 + 20.0 * std::log10(30.0)) / 10.0);
  EXPECT_NEAR(path_loss(m, 1.0), expected, 1e-9 * expected);
  EXPECT_NEAR(path_loss(m, 1.0), 1.56402e6, 1.0);
  // 21 dB per decade
  EXPECT_NEAR(10.0 * std::log10(path_loss(m, 100.0) / path_loss(m, 10.0)), 21.0, 1e-9);
}

TEST(PathLoss, RejectsNonPositiveDistance) {
  try {
    path_loss(ChannelModel{}, 0.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonPositiveDistance);
  }
  EXPECT_THROW(path_loss(ChannelModel{}, -3.0), Error);
}

TEST(FejerKernel, BoresightAndFirstNull) {
  EXPECT_DOUBLE_EQ(fejer_kernel(10, 0.0), 10.0);
  EXPECT_NEAR(fejer_kernel(10, 0.2), 0.0, 1e-12);
  EXPECT_DOUBLE_EQ(fejer_kernel(10, 2.0), 10.0);  // grating lobe
  const double v = fejer_kernel(10, 0.01);
  EXPECT_GT(v, 0.0);
  EXPECT_LT(v, 10.0);
}

TEST(FejerKernel, MatchesSteeringVectorProduct) {
  for (int m : {1, 2, 5, 10, 64, 100}) {
    for (double x : {-0.3, -0.05, -1e-7, 0.0, 1e-9, 0.01, 0.0123, 0.2, 0.77}) {
      const double want = oracle::steering_gain(m, 0.0, -x, true);
      EXPECT_NEAR(fejer_kernel(m, x), want, 1e-10 * std::max(1.0, want)) << m << " " << x;
    }
  }
}

TEST(FejerKernel, BoundedEvenContinuous) {
  for (int m : {1, 3, 10, 50}) {
    for (double x = -3.0; x <= 3.0; x += 0.00731) {
      const double v = fejer_kernel(m, x);
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, m * (1.0 + 1e-12));
      EXPECT_NEAR(v, fejer_kernel(m, -x), 1e-9 * m);
    }
    EXPECT_NEAR(fejer_kernel(m, 1e-12), m, 1e-9);
    EXPECT_NEAR(fejer_kernel(m, -1e-12), m, 1e-9);
    EXPECT_NEAR(fejer_kernel(m, 2.0 + 1e-12), m, 1e-9);
  }
}

TEST(ArrayGain, SmallAngleApproximationInsideNarrowSector) {
  ChannelModel m;
  const double delta = testing_support::deg(0.25);
  double worst = 0.0;
  for (int k = 0; k <= 1000; ++k) {
    const double theta = -delta + 2.0 * delta * k / 1000.0;
    const double exact = array_gain_exact(m, theta);
    worst = std::max(worst, std::abs(exact - array_gain(m, theta)) / exact);
    EXPECT_NEAR(exact, oracle::steering_gain(10, 0.0, theta, false), 1e-10);
  }
  EXPECT_LT(worst, 1e-4);
}

TEST(EffectiveGainCdf, Limits) {
  const ChannelModel m;
  EXPECT_DOUBLE_EQ(effective_gain_cdf(m, 50.0, 50.0, 0.0, 0.0), 0.0);
  EXPECT_NEAR(effective_gain_cdf(m, 50.0, 50.0, 0.0, 1e6), 1.0, 1e-15);
  // in a null the user never clears any positive threshold
  EXPECT_DOUBLE_EQ(effective_gain_cdf(m, 50.0, 50.0, -0.2, 1e-12), 1.0);
}

TEST(EffectiveGainCdf, MatchesSampledGains) {
  const ChannelModel m;
  const double eta = 1e-3;
  const double p = effective_gain_cdf(m, 50.0, 50.0, 0.0, eta);
  std::mt19937_64 rng(3);
  std::exponential_distribution<double> fade(1.0);
  const double scale = fejer_kernel(10, 0.0) / (1.0 + 50.0 * 50.0 + 50.0 * 50.0);
  const int n = 1'000'000;
  int below = 0;
  for (int k = 0; k < n; ++k) below += fade(rng) * scale < eta;
  const double se = std::sqrt(p * (1.0 - p) / n);
  EXPECT_NEAR(static_cast<double>(below) / n, p, 3.0 * se);
}

TEST(EffectiveGainCdf, MonotoneInThresholdAndDistance) {
  const ChannelModel m;
  for (double theta : {0.0, 0.003}) {
    double prev = 0.0;
    for (double eta = 1e-7; eta < 1.0; eta *= 1.7) {
      const double v = effective_gain_cdf(m, 40.0, 30.0, theta, eta);
      EXPECT_GE(v, prev);
      prev = v;
    }
    prev = 0.0;
    for (double d = 25.0; d <= 100.0; d += 0.5) {
      const double v = effective_gain_cdf(m, d, 30.0, theta, 1e-4);
      EXPECT_GE(v, prev);
      prev = v;
    }
  }
}

TEST(LinkBudget, DecibelConversion) {
  const auto b = LinkBudget::from_dbm(20.0, -35.0);
  EXPECT_NEAR(b.tx_power_mw, 100.0, 1e-12);
  EXPECT_NEAR(b.noise_mw, std::pow(10.0, -3.5), 1e-18);
  EXPECT_NEAR(b.snr(), std::pow(10.0, 5.5), 1e-6);
}

TEST(ChannelModel, Validation) {
  EXPECT_THROW((ChannelModel{DistancePowerLoss{0.0}, 10, 0.0}.validate()), Error);
  EXPECT_THROW((ChannelModel{CloseInLoss{-1.0}, 10, 0.0}.validate()), Error);
  EXPECT_THROW((ChannelModel{DistancePowerLoss{2.0}, 0, 0.0}.validate()), Error);
  EXPECT_NO_THROW(ChannelModel{}.validate());
}

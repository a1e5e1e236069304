#include <gtest/gtest.h>

#include <algorithm>
#include <numbers>
#include <random>

#include "common.hpp"
#include "oracles.hpp"
#include "uavnoma/errors.hpp"
#include "uavnoma/outage.hpp"

using namespace uavnoma;
using testing_support::region_at;
using testing_support::scenario;

namespace {

oracle::AnnulusField field(const Scenario& sc) {
  const auto& g = sc.geometry();
  return {g.inner_radius, g.outer_radius, g.half_angle, sc.users.density};
}

const quad::QuadSpec kTight{1e-10, 1e-13, 400, 32};

}  // namespace

TEST(Thresholds, DefaultPair) {
  NomaPairConfig cfg;
  cfg.budget = LinkBudget::from_dbm(20.0, -35.0);
  const double rho = std::pow(10.0, 5.5);
  const double ei = std::sqrt(2.0) - 1.0;
  const auto t = sic_thresholds(cfg);
  EXPECT_NEAR(t.weak_single * rho, ei, 1e-14);
  EXPECT_NEAR(t.strong_single * rho, 63.0, 1e-12);
  EXPECT_NEAR(t.weak_noma * rho, ei / (0.75 - 0.25 * ei), 1e-14);
  EXPECT_NEAR(t.strong_noma * rho, 252.0, 1e-10);
  const auto o = oma_thresholds(cfg);
  EXPECT_NEAR(o.weak_noma * rho, 1.0, 1e-14);
  EXPECT_NEAR(o.strong_noma * rho, 4095.0, 1e-9);
  EXPECT_EQ(o.weak_single, t.weak_single);
}

TEST(Thresholds, ZeroRateMeansZeroThreshold) {
  NomaPairConfig cfg;
  cfg.rate_strong = 0.0;
  cfg.rate_weak = 0.0;
  const auto t = sic_thresholds(cfg);
  EXPECT_EQ(t.weak_single, 0.0);
  EXPECT_EQ(t.strong_single, 0.0);
  EXPECT_EQ(t.weak_noma, 0.0);
  EXPECT_EQ(t.strong_noma, 0.0);
}

TEST(Thresholds, InfeasibleSplit) {
  NomaPairConfig cfg;
  cfg.rate_weak = 2.0;  // eps_i = 3, 0.25 * 3 = 0.75
  EXPECT_FALSE(cfg.sic_feasible());
  try {
    sic_thresholds(cfg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InfeasiblePowerSplit);
  }
}

TEST(Thresholds, AgreeWithSinrDecisions) {
  NomaPairConfig cfg;
  cfg.budget = LinkBudget::from_dbm(10.0, -35.0);
  const auto t = sic_thresholds(cfg);
  const double rho = cfg.budget.snr();
  const double bj = cfg.power_strong, bi = cfg.power_weak;
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> logu(-12.0, 0.0);
  for (int n = 0; n < 100'000; ++n) {
    const double g = std::pow(10.0, logu(rng));
    const bool weak_ok = rho * bi * g / (rho * bj * g + 1.0) >= cfg.eps_weak();
    const bool strong_ok = weak_ok && rho * bj * g >= cfg.eps_strong();
    EXPECT_EQ(weak_ok, g >= t.weak_noma) << g;
    EXPECT_EQ(strong_ok, g >= t.strong_noma) << g;
    EXPECT_EQ(rho * g >= cfg.eps_weak(), g >= t.weak_single);
  }
}

TEST(Events, PartitionUnderPartialCoverage) {
  const auto sc = scenario(50.0, 20.0);
  const OrderStatDistributions d(sc.users, sc.noma.pair);
  const auto lim = boresight_limits(sc.geometry());
  for (double D = lim.inner; D <= lim.outer; D += 1.3) {
    const auto r = region_at(sc.geometry(), D);
    for (auto set : {Conditioning::OnlyStrong, Conditioning::Both}) {
      const auto p = event_probabilities(set, sc.geometry(), r, d);
      for (double v : {p.e1, p.e2, p.e3, p.e4}) {
        EXPECT_GE(v, 0.0);
        EXPECT_LE(v, 1.0);
      }
      EXPECT_NEAR(p.e1 + p.e2 + p.e3 + p.e4, 1.0, 1e-12);
      if (set == Conditioning::OnlyStrong) {
        EXPECT_EQ(p.e2, 0.0);
        EXPECT_EQ(p.e4, 0.0);
      }
    }
  }
}

TEST(Events, FullCoverageIsDeterministic) {
  const auto sc = scenario(150.0, 20.0);
  ASSERT_EQ(coverage_status(sc.geometry()), Coverage::Full);
  const OrderStatDistributions d(sc.users, sc.noma.pair);
  const auto r = full_region(sc.geometry());
  const auto s1 = event_probabilities(Conditioning::OnlyStrong, sc.geometry(), r, d);
  const auto s2 = event_probabilities(Conditioning::Both, sc.geometry(), r, d);
  EXPECT_EQ(s1.e3, 1.0);
  EXPECT_EQ(s1.e1, 0.0);
  EXPECT_EQ(s2.e4, 1.0);
  EXPECT_EQ(s2.e1 + s2.e2 + s2.e3, 0.0);
}

TEST(Events, ShiftWithBoresight) {
  // E4 grows across the whole scan; E3 first gains from the shrinking E1, then yields to E4
  const auto sc = scenario(50.0, 20.0);
  const OrderStatDistributions d(sc.users, sc.noma.pair);
  const auto lim = boresight_limits(sc.geometry());
  std::vector<double> e3, e4;
  for (double D = lim.inner; D <= lim.outer; D += 0.4) {
    const auto p = event_probabilities(Conditioning::Both, sc.geometry(), region_at(sc.geometry(), D), d);
    e3.push_back(p.e3);
    e4.push_back(p.e4);
  }
  for (std::size_t k = 1; k < e4.size(); ++k) EXPECT_GT(e4[k], e4[k - 1]) << k;
  const auto peak = static_cast<std::size_t>(std::max_element(e3.begin(), e3.end()) - e3.begin());
  for (std::size_t k = 1; k <= peak; ++k) EXPECT_GT(e3[k], e3[k - 1]) << k;
  for (std::size_t k = peak + 1; k < e3.size(); ++k) EXPECT_LT(e3[k], e3[k - 1]) << k;
  EXPECT_LT(e3.back(), 1e-3);
}

TEST(Events, MatchRiemannSumsOfOracleDensity) {
  const auto sc = scenario(50.0, 20.0);
  const auto f = field(sc);
  const auto& g = sc.geometry();
  const OrderStatDistributions d(sc.users, sc.noma.pair);
  for (double D : {44.0, 50.0, 56.0}) {
    const auto r = region_at(g, D);
    const auto p = event_probabilities(Conditioning::Both, g, r, d, kTight);
    auto joint = [&](double rj, double ri) { return oracle::joint_both(f, 20, 30, rj, ri); };
    const double e2 = oracle::midpoint_2d(joint, g.inner_radius, r.inner, r.inner, r.outer, 200);
    const double e3 = oracle::midpoint_2d(joint, r.inner, r.outer, r.outer, g.outer_radius, 200);
    EXPECT_NEAR(p.e2, e2, 1e-4) << D;
    EXPECT_NEAR(p.e3, e3, 1e-4) << D;
    const double e3_sk1 = oracle::midpoint_1d(
        [&](double x) { return oracle::marginal_only_strong(f, 20, 30, 20, x); }, r.inner, r.outer, 4000);
    EXPECT_NEAR(event_probability(Event::E3, Conditioning::OnlyStrong, g, r, d), e3_sk1, 1e-6);
  }
}

TEST(ConditionalOutage, MatchesSteeringVectorOracle) {
  const auto sc = scenario(50.0, 10.0);
  const auto f = field(sc);
  const auto& g = sc.geometry();
  const auto r = region_at(g, 50.0);
  const OrderStatDistributions d(sc.users, sc.noma.pair);
  const double eta = sc.noma.eps_strong() / sc.noma.budget.snr();
  constexpr int kTheta = 64;
  auto avg_outage = [&](double dist) {
    const double pl = 1.0 + dist * dist + g.altitude * g.altitude;
    double s = 0.0;
    for (int t = 0; t < kTheta; ++t) {
      const double theta = -g.half_angle + (t + 0.5) * 2.0 * g.half_angle / kTheta;
      s += 1.0 - std::exp(-eta * pl / oracle::steering_gain(10, 0.0, theta, true));
    }
    return s / kTheta;
  };
  auto marg = [&](double x) { return oracle::marginal_only_strong(f, 20, 30, 20, x); };
  const double num = oracle::midpoint_1d([&](double x) { return marg(x) * avg_outage(x); }, r.inner, r.outer, 2000);
  const double den = oracle::midpoint_1d(marg, r.inner, r.outer, 2000);
  EXPECT_NEAR(cond_outage_sk1(g, r, sc.noma, sc.channel, d), num / den, 1e-5);
}

TEST(ConditionalOutage, TripleIntegralMatchesRiemannSum) {
  const auto sc = scenario(50.0, 10.0);
  const auto f = field(sc);
  const auto& g = sc.geometry();
  const auto r = region_at(g, 47.0);
  const OrderStatDistributions d(sc.users, sc.noma.pair);
  const double eta = sc.noma.eps_strong() / sc.noma.budget.snr();
  constexpr int n = 200;
  const double hr = (r.outer - r.inner) / n, hl = (g.outer_radius - r.outer) / n, ht = 2.0 * g.half_angle / n;
  std::vector<double> inv_gain(n);
  for (int t = 0; t < n; ++t)
    inv_gain[t] = 1.0 / oracle::steering_gain(10, 0.0, -g.half_angle + (t + 0.5) * ht, true);
  double mass = 0.0;
  for (int a = 0; a < n; ++a) {
    const double rj = r.inner + (a + 0.5) * hr;
    const double pl = 1.0 + rj * rj + g.altitude * g.altitude;
    double avg = 0.0;
    for (int t = 0; t < n; ++t) avg += 1.0 - std::exp(-eta * pl * inv_gain[t]);
    avg *= ht / (2.0 * g.half_angle);
    double w = 0.0;
    for (int b = 0; b < n; ++b) w += oracle::joint_both(f, 20, 30, rj, r.outer + (b + 0.5) * hl);
    mass += avg * w * hl * hr;
  }
  const auto q = outage_mass_sk2(Event::E3, User::Strong, eta, g, r, sc.channel, d, kTight);
  EXPECT_NEAR(q.value / mass, 1.0, 1e-4);
}

TEST(ConditionalOutage, VanishWithZeroRate) {
  auto sc = scenario(50.0, 20.0);
  sc.noma.rate_strong = 0.0;
  sc.noma.rate_weak = 0.0;
  const auto rep = analyze(sc, region_at(sc.geometry(), 50.0));
  EXPECT_EQ(*rep.noma.strong_sk1_e3, 0.0);
  EXPECT_EQ(*rep.noma.weak_e2, 0.0);
  EXPECT_EQ(*rep.noma.strong_e4, 0.0);
  EXPECT_NEAR(rep.p_out_strong, 1.0 - (rep.prob_only_strong * rep.sk1.e3 + rep.prob_both * (rep.sk2.e3 + rep.sk2.e4)),
              1e-12);
}

TEST(ConditionalOutage, ApproachOneAtVanishingPower) {
  const auto sc = scenario(50.0, -150.0);
  const auto rep = analyze(sc, region_at(sc.geometry(), 50.0));
  EXPECT_NEAR(*rep.noma.weak_e4, 1.0, 1e-9);
  EXPECT_NEAR(*rep.noma.strong_e3, 1.0, 1e-9);
  EXPECT_NEAR(rep.p_out_strong, 1.0, 1e-9);
  EXPECT_NEAR(rep.p_out_weak, 1.0, 1e-9);
  EXPECT_NEAR(rep.sum_rate_noma, 0.0, 1e-8);
}

TEST(ConditionalOutage, EventImpossibleWhenNoMass) {
  const auto sc = scenario(150.0, 20.0);
  const auto r = full_region(sc.geometry());
  const OrderStatDistributions d(sc.users, sc.noma.pair);
  try {
    cond_outage_sk2(Event::E2, User::Weak, sc.geometry(), r, sc.noma, sc.channel, d);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EventImpossible);
  }
  EXPECT_THROW(cond_outage_sk2(Event::E2, User::Strong, sc.geometry(), r, sc.noma, sc.channel, d), Error);
}

TEST(Analyze, InfeasibleSplitLeavesWeakUserInOutageUnderE4) {
  auto sc = scenario(50.0, 20.0);
  sc.noma.rate_weak = 2.5;
  const auto rep = analyze(sc, region_at(sc.geometry(), 50.0));
  EXPECT_EQ(*rep.noma.weak_e4, 1.0);
  EXPECT_EQ(*rep.noma.strong_e4, 1.0);
  EXPECT_LT(*rep.oma.weak_e4, 1.0);
}

TEST(Analyze, DecompositionIsConsistent) {
  const auto sc = scenario(40.0, 20.0);
  const auto rep = analyze(sc, region_at(sc.geometry(), 45.0));
  const double ps1 = rep.prob_only_strong, ps2 = rep.prob_both;
  const double served_j = ps1 * rep.sk1.e3 * (1 - *rep.noma.strong_sk1_e3) +
                          ps2 * (rep.sk2.e3 * (1 - *rep.noma.strong_e3) + rep.sk2.e4 * (1 - *rep.noma.strong_e4));
  const double served_i = ps2 * (rep.sk2.e2 * (1 - *rep.noma.weak_e2) + rep.sk2.e4 * (1 - *rep.noma.weak_e4));
  EXPECT_NEAR(rep.p_out_strong, 1.0 - served_j, 1e-12);
  EXPECT_NEAR(rep.p_out_weak, 1.0 - served_i, 1e-12);
  EXPECT_NEAR(rep.sum_rate_noma, (1 - rep.p_out_strong) * 6.0 + (1 - rep.p_out_weak) * 0.5, 1e-12);
  EXPECT_EQ(rep.oma.weak_e2, rep.noma.weak_e2);
  EXPECT_EQ(rep.oma.strong_e3, rep.noma.strong_e3);
  EXPECT_NEAR(sum_rate_noma(sc, region_at(sc.geometry(), 45.0)), rep.sum_rate_noma, 0.0);
  EXPECT_THROW(analyze(sc, region_at(sc.geometry(), 45.0), Method::MonteCarlo), Error);
}

TEST(Analyze, OutageFallsWithPowerAndRisesWithRate) {
  for (double h : {20.0, 50.0, 120.0}) {
    double prev_j = 2.0, prev_i = 2.0;
    for (double p = -10.0; p <= 50.0; p += 10.0) {
      const auto sc = scenario(h, p);
      double D = 0.0;
      if (coverage_status(sc.geometry()) == Coverage::Partial) {
        const auto lim = boresight_limits(sc.geometry());
        D = 0.5 * (lim.inner + lim.outer);
      }
      const auto rep = analyze(sc, region_at(sc.geometry(), D));
      EXPECT_LE(rep.p_out_strong, prev_j + 1e-12) << h << " " << p;
      EXPECT_LE(rep.p_out_weak, prev_i + 1e-12) << h << " " << p;
      prev_j = rep.p_out_strong;
      prev_i = rep.p_out_weak;
    }
  }
  double prev = -1.0;
  for (double rate : {0.5, 1.0, 2.0, 4.0, 6.0, 8.0}) {
    auto sc = scenario(50.0, 20.0);
    sc.noma.rate_strong = rate;
    const auto rep = analyze(sc, region_at(sc.geometry(), 50.0));
    EXPECT_GE(rep.p_out_strong, prev - 1e-12);
    prev = rep.p_out_strong;
  }
}

TEST(Analyze, CloseInModelRuns) {
  auto sc = scenario(50.0, 60.0, 20, 25);
  sc.channel.path_loss = CloseInLoss{30.0};
  sc.channel.antennas = 100;
  const auto rep = analyze(sc, region_at(sc.geometry(), 50.0));
  EXPECT_GE(rep.sum_rate_noma, 0.0);
  EXPECT_LE(rep.sum_rate_noma, 6.5);
}

TEST(UniqueCount, ZeroOutageGivesMeanCount) {
  const auto users = scenario(50.0, 20.0).users;
  const double v = sum_rate_unique_count(
      users, [](int) { return 1.0; }, [](int, int) { return 0.0; }, [] { return 0.0; });
  EXPECT_NEAR(v, users.mean_count(), 1e-10);
  EXPECT_NEAR(sum_rate_unique_count(users, [](int) { return 1.0; }, [](int, int) { return 1.0; }, [] { return 1.0; }),
              0.0, 1e-15);
}

TEST(Asymptotic, AngleFactorMatchesAverage) {
  for (int m : {1, 10, 100}) {
    const double delta = testing_support::deg(0.25);
    const double want = oracle::midpoint_1d([&](double x) { return 1.0 + std::numbers::pi * std::numbers::pi * m * m * x * x / 12.0; }, -delta,
                                            delta, 100'000) /
                        (2.0 * delta);
    EXPECT_NEAR(asymptotic_angle_factor(m, delta), want, 1e-10);
  }
}

TEST(Asymptotic, ConvergesToExactAtHighPower) {
  const auto sc = scenario(50.0, 90.0);
  const auto& g = sc.geometry();
  const auto r = region_at(g, 50.0);
  const OrderStatDistributions d(sc.users, sc.noma.pair);
  const double exact = cond_outage_sk2(Event::E4, User::Strong, g, r, sc.noma, sc.channel, d, kTight);
  const double approx = asymptotic_outage(Conditioning::Both, Event::E4, User::Strong, g, r, sc.noma, sc.channel, d,
                                          kTight);
  EXPECT_NEAR(approx / exact, 1.0, 1e-2);
  const auto low = scenario(50.0, 0.0);
  EXPECT_GT(asymptotic_outage(Conditioning::Both, Event::E4, User::Strong, g, r, low.noma, low.channel, d), 1.0);
}

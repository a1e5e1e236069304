#include "uavnoma/userstats.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "uavnoma/errors.hpp"

namespace uavnoma {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// log(x^n / n!) with 0^0 = 1
double log_power_over_factorial(double x, int n) {
  if (n == 0) return 0.0;
  if (!(x > 0.0)) return kNegInf;
  return n * std::log(x) - std::lgamma(n + 1.0);
}

// Neumaier-compensated accumulator
struct CompensatedSum {
  double sum = 0.0;
  double carry = 0.0;
  void add(double v) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) {
      carry += (sum - t) + v;
    } else {
      carry += (v - t) + sum;
    }
    sum = t;
  }
  double value() const { return sum + carry; }
};

double sum_pmf(int from, int to, double mean) {
  CompensatedSum s;
  for (int k = from; k < to; ++k) s.add(std::exp(poisson::log_pmf(k, mean)));
  return s.value();
}

}  // namespace

namespace poisson {

double log_pmf(int k, double mean) {
  if (k < 0) return kNegInf;
  if (mean == 0.0) return k == 0 ? 0.0 : kNegInf;
  return -mean + log_power_over_factorial(mean, k);
}

double cdf_below(int n, double mean) {
  if (n <= 0) return 0.0;
  if (n <= mean) return sum_pmf(0, n, mean);
  return 1.0 - tail_from(n, mean);
}

double tail_from(int n, double mean) {
  if (n <= 0) return 1.0;
  if (n <= mean) return 1.0 - sum_pmf(0, n, mean);
  // Terms decrease monotonically past the mode; stop once they no longer
  // change the sum.
  CompensatedSum s;
  for (int k = n;; ++k) {
    const double term = std::exp(log_pmf(k, mean));
    s.add(term);
    if (term <= 1e-18 * s.value() || term == 0.0) break;
  }
  return s.value();
}

}  // namespace poisson

void HppConfig::validate() const {
  geometry.validate();
  if (!(density > 0.0)) fail(ErrorCode::ValidationError, "users: density must be > 0");
}

double HppConfig::mean_count() const {
  const auto& g = geometry;
  return (g.outer_radius * g.outer_radius - g.inner_radius * g.inner_radius) * g.half_angle * density;
}

void RankPair::validate() const {
  if (!(strong >= 1 && strong < weak)) {
    fail(ErrorCode::ValidationError, "users: ranks need 1 <= j < i (got j=" + std::to_string(strong) +
                                         ", i=" + std::to_string(weak) + ")");
  }
}

double prob_count_in(const CountSet& set, const HppConfig& cfg) {
  const double mu = cfg.mean_count();
  switch (set.kind) {
    case CountSet::Kind::Exactly:
      return std::exp(poisson::log_pmf(set.lo, mu));
    case CountSet::Kind::Both:
      return poisson::tail_from(set.lo, mu);
    case CountSet::Kind::OnlyStrong: {
      if (set.hi <= set.lo) return 0.0;
      // The lower side is summed directly when it is the small one.
      if (set.hi <= mu) return sum_pmf(set.lo, set.hi, mu);
      return poisson::tail_from(set.lo, mu) - poisson::tail_from(set.hi, mu);
    }
  }
  return 0.0;
}

OrderStatDistributions::OrderStatDistributions(const HppConfig& cfg, const RankPair& pair)
    : cfg_(cfg), pair_(pair) {
  cfg_.validate();
  pair_.validate();
  const auto& g = cfg_.geometry;
  scale_ = g.half_angle * cfg_.density;
  l1sq_ = g.inner_radius * g.inner_radius;
  l2sq_ = g.outer_radius * g.outer_radius;
  mu_ = cfg_.mean_count();
  c1_ = prob_count_in(CountSet::only_strong(pair_), cfg_);
  c2_ = prob_count_in(CountSet::both(pair_), cfg_);
  log_c1_ = std::log(c1_);
  log_c2_ = std::log(c2_);
  joint_log_const_ = 2.0 * std::log(2.0 * scale_) - std::lgamma(pair_.strong) -
                     std::lgamma(pair_.weak - pair_.strong) - log_c2_;
}

void OrderStatDistributions::check_radius(double r) const {
  const auto& g = cfg_.geometry;
  const double tol = 1e-12 * g.outer_radius;
  if (r < g.inner_radius - tol || r > g.outer_radius + tol) {
    fail(ErrorCode::RadiusOutOfRegion, "distance " + std::to_string(r) + " m outside the user region");
  }
}

double OrderStatDistributions::marginal_pdf_sk1(int k, double r) const {
  if (k < pair_.strong || k >= pair_.weak) {
    fail(ErrorCode::RankOutOfRange, "rank " + std::to_string(k) + " outside [j, i)");
  }
  check_radius(r);
  if (c1_ <= 0.0) return 0.0;
  const double inside = scale_ * std::max(0.0, r * r - l1sq_);
  const double outside = scale_ * std::max(0.0, l2sq_ - r * r);
  // e^{-mu} sum_{l<i-k} outside^l/l! = e^{-inside} P{Poisson(outside) < i-k}
  const double log_density = std::log(2.0 * scale_ * r) - inside + log_power_over_factorial(inside, k - 1) - log_c1_;
  return std::exp(log_density) * poisson::cdf_below(pair_.weak - k, outside);
}

double OrderStatDistributions::joint_pdf_sk2(double r_strong, double r_weak) const {
  if (r_strong > r_weak) fail(ErrorCode::OrderViolation, "joint density needs d_j <= d_i");
  check_radius(r_strong);
  check_radius(r_weak);
  if (c2_ <= 0.0) return 0.0;
  const double inner_area = scale_ * std::max(0.0, r_strong * r_strong - l1sq_);
  const double gap_area = scale_ * std::max(0.0, r_weak * r_weak - r_strong * r_strong);
  const int inner_power = pair_.strong - 1;
  const int gap_power = pair_.weak - pair_.strong - 1;
  if ((inner_power > 0 && !(inner_area > 0.0)) || (gap_power > 0 && !(gap_area > 0.0))) return 0.0;
  double log_density = joint_log_const_ + std::log(r_strong * r_weak) - scale_ * (r_weak * r_weak - l1sq_);
  if (inner_power > 0) log_density += inner_power * std::log(inner_area);
  if (gap_power > 0) log_density += gap_power * std::log(gap_area);
  return std::exp(log_density);
}

double OrderStatDistributions::strong_marginal_pdf_sk2(double r) const {
  check_radius(r);
  if (c2_ <= 0.0) return 0.0;
  const double inside = scale_ * std::max(0.0, r * r - l1sq_);
  const double outside = scale_ * std::max(0.0, l2sq_ - r * r);
  const double log_density =
      std::log(2.0 * scale_ * r) - inside + log_power_over_factorial(inside, pair_.strong - 1) - log_c2_;
  return std::exp(log_density) * poisson::tail_from(pair_.weak - pair_.strong, outside);
}

}  // namespace uavnoma

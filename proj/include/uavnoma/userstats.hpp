#pragma once

#include "uavnoma/geometry.hpp"

namespace uavnoma {

// Homogeneous PPP of users over the annular sector.
struct HppConfig {
  double density = 1.0;  // users per m^2
  RegionGeometry geometry;

  void validate() const;
  // mu = (L2^2 - L1^2) * Delta * lambda
  double mean_count() const;
  bool operator==(const HppConfig&) const = default;
};

// Distance ranks of the NOMA pair: the j-th closest (strong) and the i-th
// closest (weak) user, 1 <= j < i.
struct RankPair {
  int strong = 20;  // j
  int weak = 30;    // i

  void validate() const;
  bool operator==(const RankPair&) const = default;
};

// Sets of user counts K used to condition the order statistics.
struct CountSet {
  enum class Kind { OnlyStrong, Both, Exactly };
  Kind kind = Kind::Exactly;
  int lo = 0;  // first count in the set
  int hi = 0;  // one past the last count (unused for Both)

  static CountSet only_strong(const RankPair& p) { return {Kind::OnlyStrong, p.strong, p.weak}; }  // S_K1: j <= K < i
  static CountSet both(const RankPair& p) { return {Kind::Both, p.weak, 0}; }                      // S_K2: K >= i
  static CountSet exactly(int n) { return {Kind::Exactly, n, n + 1}; }
};

namespace poisson {
double log_pmf(int k, double mean);
// P{K < n} and P{K >= n} for K ~ Poisson(mean), each summed over whichever
// side keeps the result accurate.
double cdf_below(int n, double mean);
double tail_from(int n, double mean);
}  // namespace poisson

double prob_count_in(const CountSet& set, const HppConfig& cfg);

// Conditional distance distributions of ordered users.
class OrderStatDistributions {
 public:
  OrderStatDistributions(const HppConfig& cfg, const RankPair& pair);

  const HppConfig& config() const { return cfg_; }
  const RankPair& pair() const { return pair_; }
  double mean_count() const { return mu_; }

  // P{j <= K < i} and P{K >= i}
  double only_strong_norm() const { return c1_; }
  double both_norm() const { return c2_; }

  // Density of the k-th closest distance given j <= K < i (j <= k < i).
  // Integrates to 1 over [L1, L2] for k = j.
  double marginal_pdf_sk1(int k, double r) const;

  // Joint density of (d_j, d_i) given K >= i, for d_j <= d_i.
  double joint_pdf_sk2(double r_strong, double r_weak) const;

  // Density of d_j alone given K >= i.
  double strong_marginal_pdf_sk2(double r) const;

 private:
  void check_radius(double r) const;

  HppConfig cfg_;
  RankPair pair_;
  double scale_;  // Delta * lambda
  double l1sq_;
  double l2sq_;
  double mu_;
  double c1_;
  double c2_;
  double log_c1_;
  double log_c2_;
  double joint_log_const_;
};

}  // namespace uavnoma

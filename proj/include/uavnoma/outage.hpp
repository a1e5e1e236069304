#pragma once

#include <functional>
#include <optional>
#include <string_view>

#include "uavnoma/geometry.hpp"
#include "uavnoma/propagation.hpp"
#include "uavnoma/quadrature.hpp"
#include "uavnoma/userstats.hpp"

namespace uavnoma {

// Power-domain NOMA pair: the weak (i-th) user gets the larger power share.
struct NomaPairConfig {
  RankPair pair;
  double rate_strong = 6.0;   // target rate of the j-th user (BPCU)
  double rate_weak = 0.5;     // target rate of the i-th user (BPCU)
  double power_strong = 0.25; // beta_j^2
  double power_weak = 0.75;   // beta_i^2
  LinkBudget budget;

  void validate() const;

  double eps_strong() const;  // 2^R_j - 1
  double eps_weak() const;    // 2^R_i - 1
  // The weak user's message is decodable over its own interference floor.
  bool sic_feasible() const { return power_weak - power_strong * eps_weak() > 0.0; }
  bool operator==(const NomaPairConfig&) const = default;
};

// Gain thresholds |h^H b|^2 below which a user is in outage.
struct SicThresholds {
  double weak_single;    // E2: i-th user alone, full power
  double strong_single;  // E3: j-th user alone, full power
  double weak_noma;      // E4: i-th user decodes its own message
  double strong_noma;    // E4: j-th user decodes i's message, then its own
};

// Throws InfeasiblePowerSplit when beta_i^2 <= beta_j^2 eps_i.
SicThresholds sic_thresholds(const NomaPairConfig& cfg);

// OMA baseline: E2/E3 are single-user (same as NOMA); under E4 each user gets
// half the degrees of freedom at full power.
SicThresholds oma_thresholds(const NomaPairConfig& cfg);

enum class Event { E1 = 1, E2 = 2, E3 = 3, E4 = 4 };
enum class Conditioning { OnlyStrong, Both };  // S_K1: j <= K < i, S_K2: K >= i
enum class User { Strong, Weak };              // j-th, i-th
enum class Method { Analytic, MonteCarlo, Asymptotic };

std::string_view to_string(Method m);

struct EventProbabilities {
  double e1 = 0.0;
  double e2 = 0.0;
  double e3 = 0.0;
  double e4 = 0.0;

  double operator[](Event n) const;
};

// Everything needed to evaluate one operating point apart from the beam
// footprint: users (geometry includes the altitude), channel, and NOMA pair.
struct Scenario {
  HppConfig users;
  ChannelModel channel;
  NomaPairConfig noma;

  void validate() const;
  const RegionGeometry& geometry() const { return users.geometry; }
  bool operator==(const Scenario&) const = default;
};

// Probability of presence pattern n for the pair under conditioning `set`.
// Full coverage returns the fixed pattern (E3 for S_K1, E4 for S_K2); E1 is
// always the complement of the others.
double event_probability(Event n, Conditioning set, const RegionGeometry& geom, const RadiatedRegion& region,
                         const OrderStatDistributions& dists, const quad::QuadSpec& spec = {});
EventProbabilities event_probabilities(Conditioning set, const RegionGeometry& geom, const RadiatedRegion& region,
                                       const OrderStatDistributions& dists, const quad::QuadSpec& spec = {});

// Joint probability P{|h^H b|^2 < eta, E_n} (the numerator of a conditional
// outage) for the user that E_n serves.
quad::QuadResult outage_mass_sk1(double eta, const RegionGeometry& geom, const RadiatedRegion& region,
                                 const ChannelModel& model, const OrderStatDistributions& dists,
                                 const quad::QuadSpec& spec = {});
quad::QuadResult outage_mass_sk2(Event n, User k, double eta, const RegionGeometry& geom,
                                 const RadiatedRegion& region, const ChannelModel& model,
                                 const OrderStatDistributions& dists, const quad::QuadSpec& spec = {});

// P^{o,3}_{j|S_K1}
double cond_outage_sk1(const RegionGeometry& geom, const RadiatedRegion& region, const NomaPairConfig& cfg,
                       const ChannelModel& model, const OrderStatDistributions& dists,
                       const quad::QuadSpec& spec = {});

// P^{o,n}_{k|S_K2} for (n, k) in {(E2, Weak), (E3, Strong), (E4, Weak), (E4, Strong)}.
// Throws EventImpossible when P{E_n} = 0.
double cond_outage_sk2(Event n, User k, const RegionGeometry& geom, const RadiatedRegion& region,
                       const NomaPairConfig& cfg, const ChannelModel& model, const OrderStatDistributions& dists,
                       const quad::QuadSpec& spec = {});

struct ConditionalOutages {
  std::optional<double> strong_sk1_e3;
  std::optional<double> weak_e2;
  std::optional<double> strong_e3;
  std::optional<double> weak_e4;
  std::optional<double> strong_e4;
};

struct OutageReport {
  Method method = Method::Analytic;
  double prob_only_strong = 0.0;  // P{S_K1}
  double prob_both = 0.0;         // P{S_K2}
  EventProbabilities sk1;
  EventProbabilities sk2;
  ConditionalOutages noma;
  ConditionalOutages oma;  // only the E4 entries differ from noma
  double p_out_strong = 0.0;
  double p_out_weak = 0.0;
  double p_out_strong_oma = 0.0;
  double p_out_weak_oma = 0.0;
  double sum_rate_noma = 0.0;
  double sum_rate_oma = 0.0;
  double quad_error = 0.0;  // largest quadrature error estimate involved
};

// Full hybrid NOMA/OMA evaluation at one footprint. With Method::Asymptotic
// the conditional outages are the high-SNR approximations, capped at 1.
OutageReport analyze(const Scenario& sc, const RadiatedRegion& region, Method method = Method::Analytic,
                     const quad::QuadSpec& spec = {});

// Unconditional (P_j^o, P_i^o) from the event decomposition.
std::pair<double, double> unconditional_outage(const Scenario& sc, const RadiatedRegion& region,
                                               const quad::QuadSpec& spec = {});

// (1 - P_j^o) R_j + (1 - P_i^o) R_i
double outage_sum_rate(const NomaPairConfig& cfg, double p_out_strong, double p_out_weak);
double sum_rate_noma(const Scenario& sc, const RadiatedRegion& region, const quad::QuadSpec& spec = {});
double sum_rate_oma(const Scenario& sc, const RadiatedRegion& region, const quad::QuadSpec& spec = {});

// Outage sum rate when the number of users K is a single value drawn from
// the Poisson law and all K users are multiplexed:
//   P(K=1)(1 - P~_1) R_1 + sum_{n>=2} P(K=n) sum_{k<=n} (1 - P_k^o(n)) R_k
// Not used by the hybrid pair pipeline. The sum is truncated once the
// remaining Poisson mass is below 1e-15.
double sum_rate_unique_count(const HppConfig& users, const std::function<double(int)>& target_rate,
                             const std::function<double(int /*n*/, int /*k*/)>& noma_outage,
                             const std::function<double()>& single_user_outage);

// (1/2Delta) int_{-Delta}^{Delta} (1 + pi^2 M^2 x^2 / 12) dx = 1 + pi^2 M^2 Delta^2 / 36
double asymptotic_angle_factor(int antennas, double half_angle);

// High-SNR, narrow-sector approximation of a conditional outage:
//   (1/P{E_n}) (1 + pi^2 M^2 Delta^2 / 36) Psi eta,  Psi = E[PL/M ; E_n].
// Not capped; grows linearly in eta.
double asymptotic_outage(Conditioning set, Event n, User k, const RegionGeometry& geom,
                         const RadiatedRegion& region, const NomaPairConfig& cfg, const ChannelModel& model,
                         const OrderStatDistributions& dists, const quad::QuadSpec& spec = {});

}  // namespace uavnoma

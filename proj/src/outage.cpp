#include "uavnoma/outage.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "uavnoma/errors.hpp"

namespace uavnoma {
namespace {

constexpr double kPartitionSlack = 1e-9;

bool full_coverage(const RegionGeometry& geom) { return coverage_status(geom) == Coverage::Full; }

// Average of 1 - exp(-eta PL / F) over the sector, on a fixed angular rule.
class SectorAverage {
 public:
  SectorAverage(const ChannelModel& model, double half_angle, int nodes = 8) {
    const double c = model.beam_angle;
    const auto rule = quad::FixedRule::gauss_legendre(nodes, c - half_angle, c + half_angle);
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
      const double gain = array_gain(model, rule.nodes[k]);
      weight_.push_back(rule.weights[k] / (2.0 * half_angle));
      inv_gain_.push_back(gain > 0.0 ? 1.0 / gain : std::numeric_limits<double>::infinity());
    }
  }

  double outage(double eta_pl) const {
    if (!(eta_pl > 0.0)) return 0.0;
    double s = 0.0;
    for (std::size_t k = 0; k < weight_.size(); ++k) s += weight_[k] * -std::expm1(-eta_pl * inv_gain_[k]);
    return s;
  }

 private:
  std::vector<double> weight_;
  std::vector<double> inv_gain_;
};

// Path loss from the squared 3-D distance; skips the square root for the
// common quadratic exponent.
double path_loss_sq(const ChannelModel& model, double d3sq) {
  if (const auto* dp = std::get_if<DistancePowerLoss>(&model.path_loss)) {
    if (dp->exponent == 2.0) return 1.0 + d3sq;
  }
  return path_loss(model, std::sqrt(d3sq));
}

// Integration limits (a, b(l), u, v) of the pair events: d_j in [a, b], d_i in [u, v].
struct PairLimits {
  double a;
  double b;
  bool b_is_weak;  // b = d_i (E4)
  double u;
  double v;
};

PairLimits pair_limits(Event n, const RegionGeometry& geom, const RadiatedRegion& region) {
  const double lmin = region.inner;
  const double lmax = region.outer;
  switch (n) {
    case Event::E2:
      return {geom.inner_radius, lmin, false, lmin, lmax};
    case Event::E3:
      return {lmin, lmax, false, lmax, geom.outer_radius};
    case Event::E4:
      return {lmin, lmax, true, lmin, lmax};
    case Event::E1:
      break;
  }
  fail(ErrorCode::InvalidArgument, "E1 has no integration region; it is the complement");
}

quad::QuadResult integrate_pair(Event n, const RegionGeometry& geom, const RadiatedRegion& region,
                                const quad::Fn2& f, const quad::QuadSpec& spec) {
  const auto lim = pair_limits(n, geom, region);
  if (!(lim.v > lim.u)) return {};
  quad::InnerLimits inner = lim.b_is_weak ? quad::InnerLimits([a = lim.a](double l) { return std::pair{a, l}; })
                                          : quad::fixed_limits(lim.a, lim.b);
  if (!lim.b_is_weak && !(lim.b > lim.a)) return {};
  return quad::integrate_2d(f, lim.u, lim.v, inner, spec);
}

void check_serving(Event n, User k) {
  const bool ok = (n == Event::E2 && k == User::Weak) || (n == Event::E3 && k == User::Strong) || n == Event::E4;
  if (!ok) fail(ErrorCode::InvalidArgument, "the requested user is not served under this event");
}

double sk2_threshold(Event n, User k, const SicThresholds& t) {
  switch (n) {
    case Event::E2:
      return t.weak_single;
    case Event::E3:
      return t.strong_single;
    case Event::E4:
      return k == User::Weak ? t.weak_noma : t.strong_noma;
    case Event::E1:
      break;
  }
  fail(ErrorCode::InvalidArgument, "no threshold under E1");
}

double complement(double rest, const char* what) {
  double e1 = 1.0 - rest;
  if (e1 < 0.0) {
    if (e1 < -kPartitionSlack) fail(ErrorCode::QuadratureFailure, std::string(what) + ": event probabilities exceed 1");
    e1 = 0.0;
  }
  return e1;
}

double checked_probability(double p, const char* what) {
  if (!(p >= -kPartitionSlack && p <= 1.0 + kPartitionSlack)) {
    fail(ErrorCode::QuadratureFailure, std::string(what) + " left [0, 1]: " + std::to_string(p));
  }
  return std::clamp(p, 0.0, 1.0);
}

}  // namespace

void NomaPairConfig::validate() const {
  pair.validate();
  if (!(rate_strong >= 0.0) || !(rate_weak >= 0.0)) fail(ErrorCode::ValidationError, "target rates must be >= 0");
  if (!(power_strong > 0.0 && power_strong < 1.0) || !(power_weak > 0.0 && power_weak < 1.0))
    fail(ErrorCode::ValidationError, "power split coefficients must lie in (0, 1)");
  if (std::abs(power_strong + power_weak - 1.0) > 1e-9)
    fail(ErrorCode::ValidationError, "power split coefficients must sum to 1");
  if (power_weak < power_strong)
    fail(ErrorCode::ValidationError, "the weak user must receive at least the strong user's power share");
  if (!(budget.tx_power_mw > 0.0) || !(budget.noise_mw > 0.0))
    fail(ErrorCode::ValidationError, "transmit and noise powers must be > 0");
}

double NomaPairConfig::eps_strong() const { return std::exp2(rate_strong) - 1.0; }
double NomaPairConfig::eps_weak() const { return std::exp2(rate_weak) - 1.0; }

SicThresholds sic_thresholds(const NomaPairConfig& cfg) {
  if (!cfg.sic_feasible()) {
    fail(ErrorCode::InfeasiblePowerSplit, "beta_i^2 <= beta_j^2 eps_i: the weak user's message cannot be decoded");
  }
  const double rho = cfg.budget.snr();
  SicThresholds t;
  t.weak_single = cfg.eps_weak() / rho;
  t.strong_single = cfg.eps_strong() / rho;
  t.weak_noma = t.weak_single / (cfg.power_weak - cfg.power_strong * cfg.eps_weak());
  t.strong_noma = std::max(t.weak_noma, cfg.eps_strong() / (rho * cfg.power_strong));
  return t;
}

SicThresholds oma_thresholds(const NomaPairConfig& cfg) {
  const double rho = cfg.budget.snr();
  SicThresholds t;
  t.weak_single = cfg.eps_weak() / rho;
  t.strong_single = cfg.eps_strong() / rho;
  t.weak_noma = (std::exp2(2.0 * cfg.rate_weak) - 1.0) / rho;
  t.strong_noma = (std::exp2(2.0 * cfg.rate_strong) - 1.0) / rho;
  return t;
}

std::string_view to_string(Method m) {
  switch (m) {
    case Method::Analytic:
      return "analytic";
    case Method::MonteCarlo:
      return "montecarlo";
    case Method::Asymptotic:
      return "asymptotic";
  }
  return "unknown";
}

double EventProbabilities::operator[](Event n) const {
  switch (n) {
    case Event::E1:
      return e1;
    case Event::E2:
      return e2;
    case Event::E3:
      return e3;
    case Event::E4:
      return e4;
  }
  return 0.0;
}

void Scenario::validate() const {
  users.validate();
  channel.validate();
  noma.validate();
}

EventProbabilities event_probabilities(Conditioning set, const RegionGeometry& geom, const RadiatedRegion& region,
                                       const OrderStatDistributions& dists, const quad::QuadSpec& spec) {
  EventProbabilities p;
  if (set == Conditioning::OnlyStrong) {
    if (full_coverage(geom)) {
      p.e3 = 1.0;
    } else {
      const int j = dists.pair().strong;
      p.e3 = checked_probability(
          quad::integrate_1d([&](double r) { return dists.marginal_pdf_sk1(j, r); }, region.inner, region.outer,
                             spec)
              .value,
          "P{E3 | S_K1}");
    }
    p.e1 = complement(p.e3, "S_K1");
    return p;
  }
  if (full_coverage(geom)) {
    p.e4 = 1.0;
    return p;
  }
  const quad::Fn2 pdf = [&](double r, double l) { return dists.joint_pdf_sk2(r, l); };
  p.e2 = checked_probability(integrate_pair(Event::E2, geom, region, pdf, spec).value, "P{E2 | S_K2}");
  p.e3 = checked_probability(integrate_pair(Event::E3, geom, region, pdf, spec).value, "P{E3 | S_K2}");
  p.e4 = checked_probability(integrate_pair(Event::E4, geom, region, pdf, spec).value, "P{E4 | S_K2}");
  p.e1 = complement(p.e2 + p.e3 + p.e4, "S_K2");
  return p;
}

double event_probability(Event n, Conditioning set, const RegionGeometry& geom, const RadiatedRegion& region,
                         const OrderStatDistributions& dists, const quad::QuadSpec& spec) {
  if (set == Conditioning::OnlyStrong && (n == Event::E2 || n == Event::E4)) return 0.0;
  return event_probabilities(set, geom, region, dists, spec)[n];
}

quad::QuadResult outage_mass_sk1(double eta, const RegionGeometry& geom, const RadiatedRegion& region,
                                 const ChannelModel& model, const OrderStatDistributions& dists,
                                 const quad::QuadSpec& spec) {
  if (!(eta > 0.0) || !(region.outer > region.inner)) return {};
  const SectorAverage avg(model, geom.half_angle);
  const int j = dists.pair().strong;
  const double hsq = geom.altitude * geom.altitude;
  return quad::integrate_1d(
      [&](double r) {
        const double f = dists.marginal_pdf_sk1(j, r);
        return f == 0.0 ? 0.0 : f * avg.outage(eta * path_loss_sq(model, r * r + hsq));
      },
      region.inner, region.outer, spec);
}

quad::QuadResult outage_mass_sk2(Event n, User k, double eta, const RegionGeometry& geom,
                                 const RadiatedRegion& region, const ChannelModel& model,
                                 const OrderStatDistributions& dists, const quad::QuadSpec& spec) {
  check_serving(n, k);
  if (!(eta > 0.0)) return {};
  const SectorAverage avg(model, geom.half_angle);
  const double hsq = geom.altitude * geom.altitude;
  const bool weak = k == User::Weak;
  return integrate_pair(
      n, geom, region,
      [&](double r, double l) {
        const double f = dists.joint_pdf_sk2(r, l);
        if (f == 0.0) return 0.0;
        const double d = weak ? l : r;
        return f * avg.outage(eta * path_loss_sq(model, d * d + hsq));
      },
      spec);
}

double cond_outage_sk1(const RegionGeometry& geom, const RadiatedRegion& region, const NomaPairConfig& cfg,
                       const ChannelModel& model, const OrderStatDistributions& dists,
                       const quad::QuadSpec& spec) {
  const double pe = event_probability(Event::E3, Conditioning::OnlyStrong, geom, region, dists, spec);
  if (!(pe > 0.0)) fail(ErrorCode::EventImpossible, "P{E3 | S_K1} = 0");
  const double eta = cfg.eps_strong() / cfg.budget.snr();
  return checked_probability(outage_mass_sk1(eta, geom, region, model, dists, spec).value / pe,
                             "P^{o,3}_{j|S_K1}");
}

double cond_outage_sk2(Event n, User k, const RegionGeometry& geom, const RadiatedRegion& region,
                       const NomaPairConfig& cfg, const ChannelModel& model, const OrderStatDistributions& dists,
                       const quad::QuadSpec& spec) {
  check_serving(n, k);
  const double pe = event_probability(n, Conditioning::Both, geom, region, dists, spec);
  if (!(pe > 0.0)) fail(ErrorCode::EventImpossible, "conditioning event has zero probability");
  double eta = 0.0;
  if (n == Event::E2) {
    eta = cfg.eps_weak() / cfg.budget.snr();
  } else if (n == Event::E3) {
    eta = cfg.eps_strong() / cfg.budget.snr();
  } else {
    eta = sk2_threshold(n, k, sic_thresholds(cfg));
  }
  return checked_probability(outage_mass_sk2(n, k, eta, geom, region, model, dists, spec).value / pe,
                             "conditional outage");
}

double asymptotic_angle_factor(int antennas, double half_angle) {
  const double m = antennas;
  return 1.0 + std::numbers::pi * std::numbers::pi * m * m * half_angle * half_angle / 36.0;
}

namespace {

// E[PL / M ; E_n] for the served user
quad::QuadResult asymptotic_psi(Conditioning set, Event n, User k, const RegionGeometry& geom,
                                const RadiatedRegion& region, const ChannelModel& model,
                                const OrderStatDistributions& dists, const quad::QuadSpec& spec) {
  const double hsq = geom.altitude * geom.altitude;
  const double m = model.antennas;
  if (set == Conditioning::OnlyStrong) {
    if (n != Event::E3 || k != User::Strong)
      fail(ErrorCode::InvalidArgument, "only the j-th user under E3 is served given S_K1");
    const int j = dists.pair().strong;
    return quad::integrate_1d(
        [&](double r) { return dists.marginal_pdf_sk1(j, r) * path_loss_sq(model, r * r + hsq) / m; },
        region.inner, region.outer, spec);
  }
  check_serving(n, k);
  const bool weak = k == User::Weak;
  return integrate_pair(
      n, geom, region,
      [&](double r, double l) {
        const double d = weak ? l : r;
        return dists.joint_pdf_sk2(r, l) * path_loss_sq(model, d * d + hsq) / m;
      },
      spec);
}

double asymptotic_from_psi(double psi, double pe, double eta, const ChannelModel& model, double half_angle) {
  return asymptotic_angle_factor(model.antennas, half_angle) * psi * eta / pe;
}

}  // namespace

double asymptotic_outage(Conditioning set, Event n, User k, const RegionGeometry& geom,
                         const RadiatedRegion& region, const NomaPairConfig& cfg, const ChannelModel& model,
                         const OrderStatDistributions& dists, const quad::QuadSpec& spec) {
  const double pe = event_probability(n, set, geom, region, dists, spec);
  if (!(pe > 0.0)) fail(ErrorCode::EventImpossible, "conditioning event has zero probability");
  double eta = 0.0;
  if (n == Event::E2) {
    eta = cfg.eps_weak() / cfg.budget.snr();
  } else if (n == Event::E3) {
    eta = cfg.eps_strong() / cfg.budget.snr();
  } else {
    eta = sk2_threshold(n, k, sic_thresholds(cfg));
  }
  if (!(eta > 0.0)) return 0.0;
  const double psi = asymptotic_psi(set, n, k, geom, region, model, dists, spec).value;
  return asymptotic_from_psi(psi, pe, eta, model, geom.half_angle);
}

double outage_sum_rate(const NomaPairConfig& cfg, double p_out_strong, double p_out_weak) {
  return (1.0 - p_out_strong) * cfg.rate_strong + (1.0 - p_out_weak) * cfg.rate_weak;
}

OutageReport analyze(const Scenario& sc, const RadiatedRegion& region, Method method, const quad::QuadSpec& spec) {
  if (method == Method::MonteCarlo) {
    fail(ErrorCode::InvalidArgument, "Monte Carlo reports come from the simulator");
  }
  sc.validate();
  const auto& geom = sc.geometry();
  const auto& model = sc.channel;
  const auto& cfg = sc.noma;
  const OrderStatDistributions dists(sc.users, cfg.pair);

  OutageReport rep;
  rep.method = method;
  rep.prob_only_strong = dists.only_strong_norm();
  rep.prob_both = dists.both_norm();
  rep.sk1 = event_probabilities(Conditioning::OnlyStrong, geom, region, dists, spec);
  rep.sk2 = event_probabilities(Conditioning::Both, geom, region, dists, spec);

  double err = 0.0;
  // Joint outage mass P{outage, E_n}; the conditional outage is mass / P{E_n}.
  auto mass = [&](Conditioning set, Event n, User k, double eta, double pe) -> double {
    if (!(pe > 0.0)) return 0.0;
    if (method == Method::Asymptotic) {
      if (!(eta > 0.0)) return 0.0;
      const auto psi = asymptotic_psi(set, n, k, geom, region, model, dists, spec);
      err = std::max(err, psi.error);
      return pe * std::min(1.0, asymptotic_from_psi(psi.value, pe, eta, model, geom.half_angle));
    }
    const auto r = set == Conditioning::OnlyStrong ? outage_mass_sk1(eta, geom, region, model, dists, spec)
                                                   : outage_mass_sk2(n, k, eta, geom, region, model, dists, spec);
    err = std::max(err, r.error);
    return r.value;
  };
  auto cond = [](double m, double pe) -> std::optional<double> {
    if (!(pe > 0.0)) return std::nullopt;
    return checked_probability(m / pe, "conditional outage");
  };

  const double rho = cfg.budget.snr();
  const double eta_i = cfg.eps_weak() / rho;
  const double eta_j = cfg.eps_strong() / rho;

  const double m1 = mass(Conditioning::OnlyStrong, Event::E3, User::Strong, eta_j, rep.sk1.e3);
  const double m2i = mass(Conditioning::Both, Event::E2, User::Weak, eta_i, rep.sk2.e2);
  const double m3j = mass(Conditioning::Both, Event::E3, User::Strong, eta_j, rep.sk2.e3);

  double m4i = rep.sk2.e4;
  double m4j = rep.sk2.e4;
  if (cfg.sic_feasible()) {
    const auto t = sic_thresholds(cfg);
    m4i = mass(Conditioning::Both, Event::E4, User::Weak, t.weak_noma, rep.sk2.e4);
    m4j = mass(Conditioning::Both, Event::E4, User::Strong, t.strong_noma, rep.sk2.e4);
  }
  const auto to = oma_thresholds(cfg);
  const double m4i_oma = mass(Conditioning::Both, Event::E4, User::Weak, to.weak_noma, rep.sk2.e4);
  const double m4j_oma = mass(Conditioning::Both, Event::E4, User::Strong, to.strong_noma, rep.sk2.e4);

  rep.noma.strong_sk1_e3 = cond(m1, rep.sk1.e3);
  rep.noma.weak_e2 = cond(m2i, rep.sk2.e2);
  rep.noma.strong_e3 = cond(m3j, rep.sk2.e3);
  rep.noma.weak_e4 = cond(m4i, rep.sk2.e4);
  rep.noma.strong_e4 = cond(m4j, rep.sk2.e4);
  rep.oma = rep.noma;
  rep.oma.weak_e4 = cond(m4i_oma, rep.sk2.e4);
  rep.oma.strong_e4 = cond(m4j_oma, rep.sk2.e4);

  const double ps1 = rep.prob_only_strong;
  const double ps2 = rep.prob_both;
  const double served_j_single = ps1 * (rep.sk1.e3 - m1) + ps2 * (rep.sk2.e3 - m3j);
  const double served_i_single = ps2 * (rep.sk2.e2 - m2i);

  rep.p_out_strong = checked_probability(1.0 - (served_j_single + ps2 * (rep.sk2.e4 - m4j)), "P_j^o");
  rep.p_out_weak = checked_probability(1.0 - (served_i_single + ps2 * (rep.sk2.e4 - m4i)), "P_i^o");
  rep.p_out_strong_oma = checked_probability(1.0 - (served_j_single + ps2 * (rep.sk2.e4 - m4j_oma)), "P_j^o (OMA)");
  rep.p_out_weak_oma = checked_probability(1.0 - (served_i_single + ps2 * (rep.sk2.e4 - m4i_oma)), "P_i^o (OMA)");
  rep.sum_rate_noma = outage_sum_rate(cfg, rep.p_out_strong, rep.p_out_weak);
  rep.sum_rate_oma = outage_sum_rate(cfg, rep.p_out_strong_oma, rep.p_out_weak_oma);
  rep.quad_error = err;
  return rep;
}

std::pair<double, double> unconditional_outage(const Scenario& sc, const RadiatedRegion& region,
                                               const quad::QuadSpec& spec) {
  const auto rep = analyze(sc, region, Method::Analytic, spec);
  return {rep.p_out_strong, rep.p_out_weak};
}

double sum_rate_noma(const Scenario& sc, const RadiatedRegion& region, const quad::QuadSpec& spec) {
  return analyze(sc, region, Method::Analytic, spec).sum_rate_noma;
}

double sum_rate_oma(const Scenario& sc, const RadiatedRegion& region, const quad::QuadSpec& spec) {
  return analyze(sc, region, Method::Analytic, spec).sum_rate_oma;
}

double sum_rate_unique_count(const HppConfig& users, const std::function<double(int)>& target_rate,
                             const std::function<double(int, int)>& noma_outage,
                             const std::function<double()>& single_user_outage) {
  const double mu = users.mean_count();
  double total = std::exp(poisson::log_pmf(1, mu)) * (1.0 - single_user_outage()) * target_rate(1);
  for (int n = 2;; ++n) {
    const double pn = std::exp(poisson::log_pmf(n, mu));
    double inner = 0.0;
    for (int k = 1; k <= n; ++k) inner += (1.0 - noma_outage(n, k)) * target_rate(k);
    total += pn * inner;
    if (n > mu && poisson::tail_from(n + 1, mu) < 1e-15) break;
  }
  return total;
}

}  // namespace uavnoma

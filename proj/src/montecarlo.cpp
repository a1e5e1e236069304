#include "uavnoma/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <numeric>
#include <string>
#include <thread>

#include "uavnoma/errors.hpp"

namespace uavnoma {
namespace {

constexpr std::int64_t kBlockTrials = std::int64_t{1} << 14;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Independent generators per block: stream 0 places users, stream 1 draws fading.
std::mt19937_64 block_stream(std::uint64_t seed, std::int64_t block, int stream) {
  const std::uint64_t key = splitmix64(seed) ^ splitmix64(static_cast<std::uint64_t>(block) * 2 + stream);
  return std::mt19937_64(splitmix64(key));
}

// Runs body(block, first_trial, n_trials, tally&) over all blocks and sums the tallies.
template <class Tally, class Body>
Tally run_blocks(std::int64_t trials, Body body) {
  const std::int64_t blocks = (trials + kBlockTrials - 1) / kBlockTrials;
  const int workers = static_cast<int>(std::min<std::int64_t>(worker_count(), blocks));
  std::atomic<std::int64_t> next{0};
  std::vector<Tally> partial(std::max(workers, 1));
  auto work = [&](int w) {
    for (std::int64_t b = next++; b < blocks; b = next++) {
      const std::int64_t n = std::min(kBlockTrials, trials - b * kBlockTrials);
      body(b, n, partial[w]);
    }
  };
  if (workers <= 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  Tally total;
  for (const auto& t : partial) total += t;
  return total;
}

struct Tally {
  std::int64_t trials = 0;
  std::int64_t only_strong = 0;
  std::int64_t both = 0;
  std::array<std::int64_t, 4> sk1{};
  std::array<std::int64_t, 4> sk2{};
  std::int64_t out_sk1_e3 = 0;
  std::int64_t out_e2_weak = 0;
  std::int64_t out_e3_strong = 0;
  std::int64_t out_e4_weak = 0;
  std::int64_t out_e4_strong = 0;
  std::int64_t out_e4_weak_oma = 0;
  std::int64_t out_e4_strong_oma = 0;
  std::int64_t ok_strong = 0;
  std::int64_t ok_weak = 0;
  std::int64_t ok_both = 0;
  std::int64_t ok_strong_oma = 0;
  std::int64_t ok_weak_oma = 0;
  std::int64_t ok_both_oma = 0;

  Tally& operator+=(const Tally& o) {
    trials += o.trials;
    only_strong += o.only_strong;
    both += o.both;
    for (int n = 0; n < 4; ++n) {
      sk1[n] += o.sk1[n];
      sk2[n] += o.sk2[n];
    }
    out_sk1_e3 += o.out_sk1_e3;
    out_e2_weak += o.out_e2_weak;
    out_e3_strong += o.out_e3_strong;
    out_e4_weak += o.out_e4_weak;
    out_e4_strong += o.out_e4_strong;
    out_e4_weak_oma += o.out_e4_weak_oma;
    out_e4_strong_oma += o.out_e4_strong_oma;
    ok_strong += o.ok_strong;
    ok_weak += o.ok_weak;
    ok_both += o.ok_both;
    ok_strong_oma += o.ok_strong_oma;
    ok_weak_oma += o.ok_weak_oma;
    ok_both_oma += o.ok_both_oma;
    return *this;
  }
};

SimEstimate binomial(std::int64_t hits, std::int64_t n) {
  SimEstimate e;
  e.trials_used = n;
  if (n == 0) return e;
  e.mean = static_cast<double>(hits) / n;
  e.half_width_3sigma = 3.0 * std::sqrt(e.mean * (1.0 - e.mean) / n);
  return e;
}

std::optional<SimEstimate> conditional(std::int64_t hits, std::int64_t n) {
  if (n == 0) return std::nullopt;
  return binomial(hits, n);
}

std::optional<double> mean_of(const std::optional<SimEstimate>& e) {
  return e ? std::optional<double>(e->mean) : std::nullopt;
}

SimEstimate rate_estimate(const NomaPairConfig& cfg, std::int64_t ok_j, std::int64_t ok_i, std::int64_t ok_ji,
                          std::int64_t n) {
  const double pj = static_cast<double>(ok_j) / n;
  const double pi = static_cast<double>(ok_i) / n;
  const double pji = static_cast<double>(ok_ji) / n;
  const double rj = cfg.rate_strong;
  const double ri = cfg.rate_weak;
  SimEstimate e;
  e.trials_used = n;
  e.mean = rj * pj + ri * pi;
  const double second = rj * rj * pj + ri * ri * pi + 2.0 * rj * ri * pji;
  e.half_width_3sigma = 3.0 * std::sqrt(std::max(0.0, second - e.mean * e.mean) / n);
  return e;
}

}  // namespace

void SimSpec::validate() const {
  if (trials <= 0) fail(ErrorCode::ValidationError, "sim: trials must be > 0");
  fullcsi_ranks.validate();
}

int worker_count() {
  if (const char* env = std::getenv("UAVNOMA_WORKERS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<int>(v);
  }
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

std::vector<UserLocation> sample_field(const HppConfig& cfg, std::mt19937_64& rng, double centre) {
  const auto& g = cfg.geometry;
  std::poisson_distribution<int> count(cfg.mean_count());
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double l1sq = g.inner_radius * g.inner_radius;
  const double span = g.outer_radius * g.outer_radius - l1sq;
  const int k = count(rng);
  std::vector<UserLocation> users(k);
  for (auto& u : users) {
    u.distance = std::sqrt(l1sq + unit(rng) * span);
    u.azimuth = centre + (2.0 * unit(rng) - 1.0) * g.half_angle;
  }
  return users;
}

double effective_gain(const ChannelModel& model, double altitude, const UserLocation& u, double fading) {
  const double pl = path_loss(model, std::sqrt(u.distance * u.distance + altitude * altitude));
  return fading * array_gain(model, u.azimuth) / pl;
}

SimReport simulate_report(const Scenario& sc, const RadiatedRegion& region, const SimSpec& sim) {
  sc.validate();
  sim.validate();
  const auto& cfg = sc.noma;
  const auto& model = sc.channel;
  const double h = sc.geometry().altitude;
  const double rho = cfg.budget.snr();
  const double bi = cfg.power_weak;
  const double bj = cfg.power_strong;
  const double eps_i = cfg.eps_weak();
  const double eps_j = cfg.eps_strong();
  const double oma_i = std::exp2(2.0 * cfg.rate_weak) - 1.0;
  const double oma_j = std::exp2(2.0 * cfg.rate_strong) - 1.0;
  const bool full_csi = sim.ordering == Ordering::FullCsi;
  const int rank_j = full_csi ? sim.fullcsi_ranks.strong : cfg.pair.strong;
  const int rank_i = full_csi ? sim.fullcsi_ranks.weak : cfg.pair.weak;

  auto inside = [&](double d) { return d >= region.inner && d <= region.outer; };

  const Tally t = run_blocks<Tally>(sim.trials, [&](std::int64_t block, std::int64_t n, Tally& acc) {
    auto field_rng = block_stream(sim.seed, block, 0);
    auto fading_rng = block_stream(sim.seed, block, 1);
    std::exponential_distribution<double> fading(1.0);
    std::vector<double> gains;
    std::vector<int> order;
    for (std::int64_t trial = 0; trial < n; ++trial) {
      ++acc.trials;
      auto users = sample_field(sc.users, field_rng, model.beam_angle);
      const int k = static_cast<int>(users.size());
      if (k < rank_j) continue;

      UserLocation uj{};
      UserLocation ui{};
      double gj = 0.0;
      double gi = 0.0;
      const bool has_weak = k >= rank_i;
      if (full_csi) {
        gains.resize(k);
        for (int u = 0; u < k; ++u) gains[u] = effective_gain(model, h, users[u], fading(fading_rng));
        order.resize(k);
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](int a, int b) { return gains[a] > gains[b]; });
        uj = users[order[rank_j - 1]];
        gj = gains[order[rank_j - 1]];
        if (has_weak) {
          ui = users[order[rank_i - 1]];
          gi = gains[order[rank_i - 1]];
        }
      } else {
        auto by_distance = [](const UserLocation& a, const UserLocation& b) { return a.distance < b.distance; };
        std::nth_element(users.begin(), users.begin() + (rank_j - 1), users.end(), by_distance);
        uj = users[rank_j - 1];
        gj = effective_gain(model, h, uj, fading(fading_rng));
        if (has_weak) {
          std::nth_element(users.begin() + rank_j, users.begin() + (rank_i - 1), users.end(), by_distance);
          ui = users[rank_i - 1];
          gi = effective_gain(model, h, ui, fading(fading_rng));
        }
      }

      const bool jin = inside(uj.distance);
      if (!has_weak) {
        ++acc.only_strong;
        if (!jin) {
          ++acc.sk1[0];
          continue;
        }
        ++acc.sk1[2];
        const bool ok = rho * gj >= eps_j;
        if (ok) {
          ++acc.ok_strong;
          ++acc.ok_strong_oma;
        } else {
          ++acc.out_sk1_e3;
        }
        continue;
      }

      ++acc.both;
      const bool iin = inside(ui.distance);
      if (!jin && !iin) {
        ++acc.sk2[0];
      } else if (!jin) {
        ++acc.sk2[1];
        if (rho * gi >= eps_i) {
          ++acc.ok_weak;
          ++acc.ok_weak_oma;
        } else {
          ++acc.out_e2_weak;
        }
      } else if (!iin) {
        ++acc.sk2[2];
        if (rho * gj >= eps_j) {
          ++acc.ok_strong;
          ++acc.ok_strong_oma;
        } else {
          ++acc.out_e3_strong;
        }
      } else {
        ++acc.sk2[3];
        // weak user decodes its own message treating the strong user's as noise
        const bool ok_i = rho * bi * gi / (rho * bj * gi + 1.0) >= eps_i;
        // strong user removes the weak user's message first, then decodes its own
        const bool ok_j = rho * bi * gj / (rho * bj * gj + 1.0) >= eps_i && rho * bj * gj >= eps_j;
        acc.ok_weak += ok_i;
        acc.ok_strong += ok_j;
        acc.ok_both += ok_i && ok_j;
        acc.out_e4_weak += !ok_i;
        acc.out_e4_strong += !ok_j;
        const bool oi = rho * gi >= oma_i;
        const bool oj = rho * gj >= oma_j;
        acc.ok_weak_oma += oi;
        acc.ok_strong_oma += oj;
        acc.ok_both_oma += oi && oj;
        acc.out_e4_weak_oma += !oi;
        acc.out_e4_strong_oma += !oj;
      }
    }
  });

  SimReport r;
  const std::int64_t n = t.trials;
  r.prob_only_strong = binomial(t.only_strong, n);
  r.prob_both = binomial(t.both, n);
  for (int e = 0; e < 4; ++e) {
    r.sk1_events[e] = binomial(t.sk1[e], t.only_strong);
    r.sk2_events[e] = binomial(t.sk2[e], t.both);
  }
  r.noma.strong_sk1_e3 = conditional(t.out_sk1_e3, t.sk1[2]);
  r.noma.weak_e2 = conditional(t.out_e2_weak, t.sk2[1]);
  r.noma.strong_e3 = conditional(t.out_e3_strong, t.sk2[2]);
  r.noma.weak_e4 = conditional(t.out_e4_weak, t.sk2[3]);
  r.noma.strong_e4 = conditional(t.out_e4_strong, t.sk2[3]);
  r.oma = r.noma;
  r.oma.weak_e4 = conditional(t.out_e4_weak_oma, t.sk2[3]);
  r.oma.strong_e4 = conditional(t.out_e4_strong_oma, t.sk2[3]);
  r.p_out_strong = binomial(n - t.ok_strong, n);
  r.p_out_weak = binomial(n - t.ok_weak, n);
  r.p_out_strong_oma = binomial(n - t.ok_strong_oma, n);
  r.p_out_weak_oma = binomial(n - t.ok_weak_oma, n);
  r.sum_rate_noma = rate_estimate(cfg, t.ok_strong, t.ok_weak, t.ok_both, n);
  r.sum_rate_oma = rate_estimate(cfg, t.ok_strong_oma, t.ok_weak_oma, t.ok_both_oma, n);

  auto& rep = r.report;
  rep.method = Method::MonteCarlo;
  rep.prob_only_strong = r.prob_only_strong.mean;
  rep.prob_both = r.prob_both.mean;
  auto events = [](const std::array<SimEstimate, 4>& a) {
    return EventProbabilities{a[0].mean, a[1].mean, a[2].mean, a[3].mean};
  };
  rep.sk1 = events(r.sk1_events);
  rep.sk2 = events(r.sk2_events);
  auto means = [&](const SimConditionals& c) {
    return ConditionalOutages{mean_of(c.strong_sk1_e3), mean_of(c.weak_e2), mean_of(c.strong_e3),
                              mean_of(c.weak_e4), mean_of(c.strong_e4)};
  };
  rep.noma = means(r.noma);
  rep.oma = means(r.oma);
  rep.p_out_strong = r.p_out_strong.mean;
  rep.p_out_weak = r.p_out_weak.mean;
  rep.p_out_strong_oma = r.p_out_strong_oma.mean;
  rep.p_out_weak_oma = r.p_out_weak_oma.mean;
  rep.sum_rate_noma = r.sum_rate_noma.mean;
  rep.sum_rate_oma = r.sum_rate_oma.mean;
  return r;
}

namespace {

struct RankCounts {
  std::vector<std::int64_t> strong;
  std::vector<std::int64_t> weak;
  std::int64_t used = 0;

  RankCounts& operator+=(const RankCounts& o) {
    if (strong.size() < o.strong.size()) strong.resize(o.strong.size());
    if (weak.size() < o.weak.size()) weak.resize(o.weak.size());
    for (std::size_t k = 0; k < o.strong.size(); ++k) strong[k] += o.strong[k];
    for (std::size_t k = 0; k < o.weak.size(); ++k) weak[k] += o.weak[k];
    used += o.used;
    return *this;
  }
};

void bump(std::vector<std::int64_t>& v, int rank) {
  if (static_cast<int>(v.size()) < rank) v.resize(rank);
  ++v[rank - 1];
}

}  // namespace

OrderHistogram actual_order_histogram(const Scenario& sc, const SimSpec& sim) {
  sc.validate();
  sim.validate();
  if (sim.ordering != Ordering::Distance) {
    fail(ErrorCode::InvalidArgument, "actual-order histograms describe distance feedback");
  }
  const auto& model = sc.channel;
  const double h = sc.geometry().altitude;
  const int j = sc.noma.pair.strong;
  const int i = sc.noma.pair.weak;

  const RankCounts c = run_blocks<RankCounts>(sim.trials, [&](std::int64_t block, std::int64_t n, RankCounts& acc) {
    auto field_rng = block_stream(sim.seed, block, 0);
    auto fading_rng = block_stream(sim.seed, block, 1);
    std::exponential_distribution<double> fading(1.0);
    std::vector<double> gains;
    for (std::int64_t trial = 0; trial < n; ++trial) {
      auto users = sample_field(sc.users, field_rng, model.beam_angle);
      const int k = static_cast<int>(users.size());
      if (k < i) continue;
      std::sort(users.begin(), users.end(),
                [](const UserLocation& a, const UserLocation& b) { return a.distance < b.distance; });
      gains.resize(k);
      for (int u = 0; u < k; ++u) gains[u] = effective_gain(model, h, users[u], fading(fading_rng));
      auto rank_of = [&](int idx) {
        return 1 + static_cast<int>(std::count_if(gains.begin(), gains.end(), [&](double g) { return g > gains[idx]; }));
      };
      bump(acc.strong, rank_of(j - 1));
      bump(acc.weak, rank_of(i - 1));
      ++acc.used;
    }
  });

  OrderHistogram hist;
  hist.trials_used = c.used;
  auto normalise = [&](const std::vector<std::int64_t>& v) {
    std::vector<double> out(v.size());
    for (std::size_t k = 0; k < v.size(); ++k) out[k] = c.used ? static_cast<double>(v[k]) / c.used : 0.0;
    return out;
  };
  hist.strong = normalise(c.strong);
  hist.weak = normalise(c.weak);
  return hist;
}

}  // namespace uavnoma

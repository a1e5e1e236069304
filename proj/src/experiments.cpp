#include "uavnoma/experiments.hpp"

#include <algorithm>
#include <cmath>

#include "uavnoma/errors.hpp"

namespace uavnoma {
namespace {

Scenario at_point(const Scenario& base, double altitude, double power_dbm) {
  Scenario sc = base;
  sc.users.geometry.altitude = altitude;
  sc.noma.budget.tx_power_mw = dbm_to_mw(power_dbm);
  return sc;
}

double power_dbm_of(const Scenario& sc) { return 10.0 * std::log10(sc.noma.budget.tx_power_mw); }

}  // namespace

std::vector<double> SweepPlan::default_altitudes() {
  std::vector<double> h;
  for (int k = 0; k <= 56; ++k) h.push_back(10.0 + 2.5 * k);
  return h;
}

void SweepPlan::validate() const {
  if (altitudes.empty() || powers_dbm.empty()) fail(ErrorCode::ValidationError, "sweep: grids must be non-empty");
  if (!std::is_sorted(altitudes.begin(), altitudes.end()) || !std::is_sorted(powers_dbm.begin(), powers_dbm.end()))
    fail(ErrorCode::ValidationError, "sweep: grids must be sorted");
  if (!(altitudes.front() > 0.0)) fail(ErrorCode::ValidationError, "sweep: altitudes must be > 0");
  if (!(scan_step > 0.0)) fail(ErrorCode::ValidationError, "sweep: scan step must be > 0");
  if (methods.empty()) fail(ErrorCode::ValidationError, "sweep: at least one method is required");
  quad.validate();
}

std::vector<double> scan_grid(const BoresightLimits& lim, double step) {
  if (!(step > 0.0)) fail(ErrorCode::InvalidArgument, "scan step must be > 0");
  std::vector<double> grid;
  const double tol = 1e-9 * std::max(1.0, lim.outer);
  for (int k = 0;; ++k) {
    const double d = lim.inner + k * step;
    if (d > lim.outer - tol) break;
    grid.push_back(d);
  }
  grid.push_back(lim.outer);
  return grid;
}

ScanResult beam_scan(const Scenario& sc, double step, const quad::QuadSpec& spec) {
  const auto& geom = sc.geometry();
  ScanResult res;
  if (coverage_status(geom) == Coverage::Full) {
    res.full_coverage = true;
    res.region = full_region(geom);
    res.d_star = res.region.boresight;
    res.best_rate = analyze(sc, res.region, Method::Analytic, spec).sum_rate_noma;
    res.curve.push_back({res.d_star, res.best_rate});
    return res;
  }
  const auto grid = scan_grid(boresight_limits(geom), step);
  const auto rates = parallel_map<double>(grid.size(), [&](std::size_t k) {
    return analyze(sc, radiated_region(geom, grid[k]), Method::Analytic, spec).sum_rate_noma;
  });
  std::size_t best = 0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    res.curve.push_back({grid[k], rates[k]});
    if (rates[k] > rates[best]) best = k;
  }
  res.d_star = grid[best];
  res.best_rate = rates[best];
  res.region = radiated_region(geom, res.d_star);
  return res;
}

std::vector<SweepRow> altitude_sweep(const Scenario& base, const SweepPlan& plan, const SimSpec& sim) {
  plan.validate();
  struct Point {
    double power;
    double altitude;
  };
  std::vector<Point> points;
  for (double p : plan.powers_dbm)
    for (double h : plan.altitudes) points.push_back({p, h});

  const auto blocks = parallel_map<std::vector<SweepRow>>(points.size(), [&](std::size_t k) {
    const Scenario sc = at_point(base, points[k].altitude, points[k].power);
    const auto scan = beam_scan(sc, plan.scan_step, plan.quad);
    std::vector<SweepRow> rows;
    for (Method m : plan.methods) {
      SweepRow row;
      row.altitude = points[k].altitude;
      row.power_dbm = points[k].power;
      row.pair = sc.noma.pair;
      row.method = m;
      row.full_coverage = scan.full_coverage;
      row.d_star = scan.d_star;
      if (m == Method::MonteCarlo) {
        const auto mc = simulate_report(sc, scan.region, sim);
        row.ordering = sim.ordering;
        if (sim.ordering == Ordering::FullCsi) row.pair = sim.fullcsi_ranks;
        row.report = mc.report;
        row.err_sum_rate_noma = mc.sum_rate_noma.half_width_3sigma;
        row.err_sum_rate_oma = mc.sum_rate_oma.half_width_3sigma;
        row.err_p_out_strong = mc.p_out_strong.half_width_3sigma;
        row.err_p_out_weak = mc.p_out_weak.half_width_3sigma;
      } else {
        row.report = analyze(sc, scan.region, m, plan.quad);
        const double e = row.report.quad_error;
        row.err_sum_rate_noma = row.err_sum_rate_oma = e * (sc.noma.rate_strong + sc.noma.rate_weak);
        row.err_p_out_strong = row.err_p_out_weak = e;
      }
      rows.push_back(std::move(row));
    }
    return rows;
  });

  std::vector<SweepRow> out;
  for (const auto& b : blocks) out.insert(out.end(), b.begin(), b.end());
  return out;
}

std::vector<CoverageRow> coverage_table(const RegionGeometry& geom, const std::vector<double>& altitudes,
                                        double step) {
  std::vector<CoverageRow> rows;
  for (double h : altitudes) {
    RegionGeometry g = geom;
    g.altitude = h;
    g.validate();
    CoverageRow row{h, required_vertical_beamwidth(g), coverage_status(g), 1.0, 1.0, 1.0};
    if (row.status == Coverage::Partial) {
      const auto lim = boresight_limits(g);
      row.coverage_at_d1 = coverage_fraction(g, radiated_region(g, lim.inner));
      row.coverage_at_d2 = coverage_fraction(g, radiated_region(g, lim.outer));
      row.coverage_best = 0.0;
      for (double d : scan_grid(lim, step))
        row.coverage_best = std::max(row.coverage_best, coverage_fraction(g, radiated_region(g, d)));
    }
    rows.push_back(row);
  }
  return rows;
}

std::vector<ScanRow> scan_table(const Scenario& base, const std::vector<double>& powers_dbm, double step,
                                const quad::QuadSpec& spec) {
  const auto& geom = base.geometry();
  const auto grid = coverage_status(geom) == Coverage::Full ? std::vector<double>{full_region(geom).boresight}
                                                             : scan_grid(boresight_limits(geom), step);
  const std::size_t n = grid.size();
  return parallel_map<ScanRow>(powers_dbm.size() * n, [&](std::size_t k) {
    const double p = powers_dbm[k / n];
    const Scenario sc = at_point(base, geom.altitude, p);
    const auto region =
        coverage_status(geom) == Coverage::Full ? full_region(geom) : radiated_region(geom, grid[k % n]);
    return ScanRow{p, region.boresight, region.inner, region.outer, analyze(sc, region, Method::Analytic, spec)};
  });
}

std::vector<AsymptoticRow> asymptotic_table(const Scenario& base, const std::vector<double>& altitudes,
                                            const std::vector<double>& powers_dbm, double step,
                                            const quad::QuadSpec& spec) {
  std::vector<AsymptoticRow> rows;
  for (double h : altitudes) {
    for (double p : powers_dbm) {
      const Scenario sc = at_point(base, h, p);
      const auto scan = beam_scan(sc, step, spec);
      const auto& geom = sc.geometry();
      const OrderStatDistributions dists(sc.users, sc.noma.pair);
      const auto exact = analyze(sc, scan.region, Method::Analytic, spec);
      auto add = [&](const char* name, const std::optional<double>& ex, Conditioning set, Event n, User k) {
        if (!ex) return;
        const double approx = asymptotic_outage(set, n, k, geom, scan.region, sc.noma, sc.channel, dists, spec);
        rows.push_back({h, power_dbm_of(sc), scan.d_star, name, *ex, approx});
      };
      add("strong_sk1_e3", exact.noma.strong_sk1_e3, Conditioning::OnlyStrong, Event::E3, User::Strong);
      add("weak_e2", exact.noma.weak_e2, Conditioning::Both, Event::E2, User::Weak);
      add("strong_e3", exact.noma.strong_e3, Conditioning::Both, Event::E3, User::Strong);
      if (sc.noma.sic_feasible()) {
        add("weak_e4", exact.noma.weak_e4, Conditioning::Both, Event::E4, User::Weak);
        add("strong_e4", exact.noma.strong_e4, Conditioning::Both, Event::E4, User::Strong);
      }
    }
  }
  return rows;
}

double diversity_slope(const std::vector<double>& powers_dbm, const std::vector<double>& outages) {
  if (powers_dbm.size() != outages.size() || powers_dbm.size() < 2)
    fail(ErrorCode::InvalidArgument, "slope fit needs at least two matching points");
  double sx = 0.0;
  double sy = 0.0;
  const double n = static_cast<double>(powers_dbm.size());
  for (std::size_t k = 0; k < powers_dbm.size(); ++k) {
    if (!(outages[k] > 0.0)) fail(ErrorCode::InvalidArgument, "slope fit needs positive outages");
    sx += powers_dbm[k] / 10.0;
    sy += std::log10(outages[k]);
  }
  const double mx = sx / n;
  const double my = sy / n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t k = 0; k < powers_dbm.size(); ++k) {
    const double dx = powers_dbm[k] / 10.0 - mx;
    sxy += dx * (std::log10(outages[k]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

}  // namespace uavnoma

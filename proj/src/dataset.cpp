#include "uavnoma/dataset.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "uavnoma/errors.hpp"

namespace uavnoma {
namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string opt(const std::optional<double>& v) { return v ? num(*v) : ""; }

class Csv {
 public:
  explicit Csv(std::ostream& out) : out_(out) {}

  Csv& operator<<(const std::string& s) {
    sep();
    out_ << s;
    return *this;
  }
  Csv& operator<<(const char* s) { return *this << std::string(s); }
  Csv& operator<<(std::string_view s) { return *this << std::string(s); }
  Csv& operator<<(double v) { return *this << num(v); }
  Csv& operator<<(int v) { return *this << std::to_string(v); }
  Csv& operator<<(std::int64_t v) { return *this << std::to_string(v); }

  void end() {
    out_ << '\n';
    first_ = true;
  }

 private:
  void sep() {
    if (!first_) out_ << ',';
    first_ = false;
  }
  std::ostream& out_;
  bool first_ = true;
};

void header(Csv& c, std::initializer_list<const char*> cols) {
  for (const char* col : cols) c << col;
  c.end();
}

std::vector<SweepRow> sweep_rows(const RunConfig& cfg) {
  std::vector<int> weak = cfg.experiment.weak_ranks;
  if (weak.empty()) weak.push_back(cfg.scenario.noma.pair.weak);
  std::vector<SweepRow> rows;
  for (int i : weak) {
    Scenario sc = cfg.scenario;
    sc.noma.pair.weak = i;
    SweepPlan analytic = cfg.sweep;
    analytic.methods.clear();
    bool mc = false;
    for (Method m : cfg.sweep.methods) {
      if (m == Method::MonteCarlo) {
        mc = true;
      } else {
        analytic.methods.push_back(m);
      }
    }
    if (!analytic.methods.empty()) {
      auto r = altitude_sweep(sc, analytic, cfg.sim);
      rows.insert(rows.end(), r.begin(), r.end());
    }
    if (mc) {
      for (Ordering o : cfg.experiment.orderings) {
        SweepPlan plan = cfg.sweep;
        plan.methods = {Method::MonteCarlo};
        SimSpec sim = cfg.sim;
        sim.ordering = o;
        auto r = altitude_sweep(sc, plan, sim);
        rows.insert(rows.end(), r.begin(), r.end());
      }
    }
  }
  return rows;
}

}  // namespace

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  Csv c(out);
  header(c, {"h", "power_dbm", "j", "i", "ordering", "method", "full_coverage", "D_star", "sum_rate_noma",
             "sum_rate_oma", "p_out_i", "p_out_j", "p_out_i_oma", "p_out_j_oma", "p_sk1", "p_sk2", "p_e3_sk1",
             "p_e1", "p_e2", "p_e3", "p_e4", "p_out_j_sk1_e3", "p_out_i_e2", "p_out_j_e3", "p_out_i_e4",
             "p_out_j_e4", "err_sum_rate_noma", "err_sum_rate_oma", "err_p_out_i", "err_p_out_j"});
  for (const auto& r : rows) {
    const auto& p = r.report;
    c << r.altitude << r.power_dbm << r.pair.strong << r.pair.weak << to_string(r.ordering) << to_string(r.method)
      << (r.full_coverage ? 1 : 0) << r.d_star << p.sum_rate_noma << p.sum_rate_oma << p.p_out_weak
      << p.p_out_strong << p.p_out_weak_oma << p.p_out_strong_oma << p.prob_only_strong << p.prob_both << p.sk1.e3
      << p.sk2.e1 << p.sk2.e2 << p.sk2.e3 << p.sk2.e4 << opt(p.noma.strong_sk1_e3) << opt(p.noma.weak_e2)
      << opt(p.noma.strong_e3) << opt(p.noma.weak_e4) << opt(p.noma.strong_e4) << r.err_sum_rate_noma
      << r.err_sum_rate_oma << r.err_p_out_weak << r.err_p_out_strong;
    c.end();
  }
}

void write_coverage_csv(std::ostream& out, const std::vector<std::pair<double, CoverageRow>>& rows) {
  Csv c(out);
  header(c, {"L1", "h", "required_beamwidth_deg", "coverage", "coverage_at_D1", "coverage_at_D2", "coverage_best"});
  for (const auto& [l1, r] : rows) {
    c << l1 << r.altitude << r.required_beamwidth * 180.0 / std::numbers::pi
      << (r.status == Coverage::Full ? "full" : "partial") << r.coverage_at_d1 << r.coverage_at_d2
      << r.coverage_best;
    c.end();
  }
}

void write_scan_csv(std::ostream& out, double altitude, const std::vector<ScanRow>& rows) {
  Csv c(out);
  header(c, {"h", "power_dbm", "D", "l_min", "l_max", "sum_rate_noma", "sum_rate_oma", "p_out_i", "p_out_j",
             "p_e3_sk1", "p_e1", "p_e2", "p_e3", "p_e4"});
  for (const auto& r : rows) {
    const auto& p = r.report;
    c << altitude << r.power_dbm << r.boresight << r.inner << r.outer << p.sum_rate_noma << p.sum_rate_oma
      << p.p_out_weak << p.p_out_strong << p.sk1.e3 << p.sk2.e1 << p.sk2.e2 << p.sk2.e3 << p.sk2.e4;
    c.end();
  }
}

void write_histogram_csv(std::ostream& out, const std::vector<std::pair<double, OrderHistogram>>& rows) {
  Csv c(out);
  header(c, {"h", "rank", "p_strong", "p_weak", "fields_used"});
  for (const auto& [h, hist] : rows) {
    const std::size_t n = std::max(hist.strong.size(), hist.weak.size());
    for (std::size_t k = 0; k < n; ++k) {
      c << h << static_cast<int>(k + 1) << (k < hist.strong.size() ? hist.strong[k] : 0.0)
        << (k < hist.weak.size() ? hist.weak[k] : 0.0) << hist.trials_used;
      c.end();
    }
  }
}

void write_asymptotic_csv(std::ostream& out, const std::vector<AsymptoticRow>& rows) {
  Csv c(out);
  header(c, {"h", "power_dbm", "D_star", "quantity", "exact", "approx"});
  for (const auto& r : rows) {
    c << r.altitude << r.power_dbm << r.d_star << r.quantity << r.exact << r.approx;
    c.end();
  }
}

std::string render_dataset(const RunConfig& cfg, std::size_t* nrows) {
  cfg.validate();
  std::ostringstream out;
  std::size_t n = 0;
  switch (cfg.experiment.kind) {
    case ExperimentKind::Coverage: {
      std::vector<double> radii = cfg.experiment.inner_radii;
      if (radii.empty()) radii.push_back(cfg.scenario.geometry().inner_radius);
      std::vector<std::pair<double, CoverageRow>> rows;
      for (double l1 : radii) {
        RegionGeometry g = cfg.scenario.geometry();
        g.inner_radius = l1;
        for (const auto& r : coverage_table(g, cfg.sweep.altitudes, cfg.sweep.scan_step)) rows.emplace_back(l1, r);
      }
      write_coverage_csv(out, rows);
      n = rows.size();
      break;
    }
    case ExperimentKind::AltitudeSweep: {
      const auto rows = sweep_rows(cfg);
      write_sweep_csv(out, rows);
      n = rows.size();
      break;
    }
    case ExperimentKind::BeamScan: {
      bool first = true;
      for (double h : cfg.sweep.altitudes) {
        Scenario sc = cfg.scenario;
        sc.users.geometry.altitude = h;
        const auto rows = scan_table(sc, cfg.sweep.powers_dbm, cfg.sweep.scan_step, cfg.sweep.quad);
        std::ostringstream part;
        write_scan_csv(part, h, rows);
        std::string text = part.str();
        if (!first) text = text.substr(text.find('\n') + 1);
        out << text;
        first = false;
        n += rows.size();
      }
      break;
    }
    case ExperimentKind::OrderHistogram: {
      std::vector<std::pair<double, OrderHistogram>> rows;
      for (double h : cfg.sweep.altitudes) {
        Scenario sc = cfg.scenario;
        sc.users.geometry.altitude = h;
        SimSpec sim = cfg.sim;
        sim.ordering = Ordering::Distance;
        rows.emplace_back(h, actual_order_histogram(sc, sim));
        n += std::max(rows.back().second.strong.size(), rows.back().second.weak.size());
      }
      write_histogram_csv(out, rows);
      break;
    }
    case ExperimentKind::Asymptotic: {
      const auto rows =
          asymptotic_table(cfg.scenario, cfg.sweep.altitudes, cfg.sweep.powers_dbm, cfg.sweep.scan_step, cfg.sweep.quad);
      write_asymptotic_csv(out, rows);
      n = rows.size();
      break;
    }
  }
  if (nrows) *nrows = n;
  return out.str();
}

nlohmann::json run_manifest(const RunConfig& cfg, const RunResult& result) {
  return {{"manifest_version", 1},
          {"tool", "uavnoma"},
          {"version", kVersion},
          {"compiler", __VERSION__},
          {"workers", worker_count()},
          {"seed", cfg.sim.seed},
          {"rows", result.rows},
          {"csv", std::filesystem::path(result.csv_path).filename().string()},
          {"wall_time_s", result.wall_seconds},
          {"config", to_json(cfg)}};
}

RunResult run(const RunConfig& cfg, std::ostream& log) {
  const auto t0 = std::chrono::steady_clock::now();
  RunResult res;
  log << "running " << cfg.experiment.name << " (" << to_string(cfg.experiment.kind) << ")\n";
  const std::string data = render_dataset(cfg, &res.rows);
  res.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  const std::filesystem::path dir(cfg.output.directory);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) fail(ErrorCode::InvalidArgument, "cannot create output directory " + dir.string() + ": " + ec.message());
  res.csv_path = (dir / (cfg.experiment.name + ".csv")).string();
  res.manifest_path = (dir / (cfg.experiment.name + ".manifest.json")).string();
  {
    std::ofstream out(res.csv_path, std::ios::binary);
    if (!out) fail(ErrorCode::InvalidArgument, "cannot write " + res.csv_path);
    out << data;
  }
  {
    std::ofstream out(res.manifest_path, std::ios::binary);
    if (!out) fail(ErrorCode::InvalidArgument, "cannot write " + res.manifest_path);
    out << run_manifest(cfg, res).dump(2) << '\n';
  }
  log << "wrote " << res.rows << " rows to " << res.csv_path << " in " << res.wall_seconds << " s\n";
  return res;
}

}  // namespace uavnoma

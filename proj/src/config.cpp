#include "uavnoma/config.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "uavnoma/errors.hpp"

namespace uavnoma {
namespace {

using nlohmann::json;

double full_width_to_half_rad(double deg) { return deg * std::numbers::pi / 360.0; }
double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }

// Inverse of a unit conversion that maps back bit-exactly, preferring the
// shortest decimal so hand-written values survive a round trip unchanged.
template <class Forward>
double exact_inverse(double x, double guess, Forward forward) {
  char buf[32];
  for (int digits = 1; digits <= 17; ++digits) {
    std::snprintf(buf, sizeof buf, "%.*g", digits, guess);
    const double candidate = std::strtod(buf, nullptr);
    if (forward(candidate) == x) return candidate;
  }
  double up = guess;
  double down = guess;
  for (int k = 0; k < 64; ++k) {
    up = std::nextafter(up, HUGE_VAL);
    down = std::nextafter(down, -HUGE_VAL);
    if (forward(up) == x) return up;
    if (forward(down) == x) return down;
  }
  return guess;
}

double half_rad_to_width_deg(double rad) {
  return exact_inverse(rad, rad * 360.0 / std::numbers::pi, full_width_to_half_rad);
}
double rad_to_deg(double rad) { return exact_inverse(rad, rad * 180.0 / std::numbers::pi, deg_to_rad); }
double mw_to_dbm(double mw) { return exact_inverse(mw, 10.0 * std::log10(mw), dbm_to_mw); }

[[noreturn]] void parse_error(const std::string& path, const std::string& what) {
  fail(ErrorCode::ParseError, path + ": " + what);
}

// Reads the keys of one JSON object, remembering which ones the schema knows.
class Section {
 public:
  Section(const json& parent, const std::string& key, const std::string& path)
      : path_(path.empty() ? key : path + "." + key) {
    if (parent.contains(key)) {
      obj_ = &parent.at(key);
      if (!obj_->is_object()) parse_error(path_, "expected an object");
    }
  }

  void number(const char* key, double& out) {
    if (const json* v = find(key)) {
      if (!v->is_number()) parse_error(at(key), "expected a number");
      out = v->get<double>();
    }
  }

  void integer(const char* key, int& out) {
    if (const json* v = find(key)) {
      if (!v->is_number_integer()) parse_error(at(key), "expected an integer");
      const auto x = v->get<std::int64_t>();
      if (x < INT32_MIN || x > INT32_MAX) parse_error(at(key), "integer out of range");
      out = static_cast<int>(x);
    }
  }

  void integer64(const char* key, std::int64_t& out) {
    if (const json* v = find(key)) {
      if (!v->is_number_integer()) parse_error(at(key), "expected an integer");
      out = v->get<std::int64_t>();
    }
  }

  void unsigned64(const char* key, std::uint64_t& out) {
    if (const json* v = find(key)) {
      if (!v->is_number_unsigned()) parse_error(at(key), "expected a non-negative integer");
      out = v->get<std::uint64_t>();
    }
  }

  void text(const char* key, std::string& out) {
    if (const json* v = find(key)) {
      if (!v->is_string()) parse_error(at(key), "expected a string");
      out = v->get<std::string>();
    }
  }

  void numbers(const char* key, std::vector<double>& out) {
    if (const json* v = find(key)) {
      if (!v->is_array()) parse_error(at(key), "expected an array of numbers");
      out.clear();
      for (std::size_t k = 0; k < v->size(); ++k) {
        if (!(*v)[k].is_number()) parse_error(at(key) + "[" + std::to_string(k) + "]", "expected a number");
        out.push_back((*v)[k].get<double>());
      }
    }
  }

  void integers(const char* key, std::vector<int>& out) {
    if (const json* v = find(key)) {
      if (!v->is_array()) parse_error(at(key), "expected an array of integers");
      out.clear();
      for (std::size_t k = 0; k < v->size(); ++k) {
        if (!(*v)[k].is_number_integer())
          parse_error(at(key) + "[" + std::to_string(k) + "]", "expected an integer");
        out.push_back((*v)[k].get<int>());
      }
    }
  }

  template <class E, class Names>
  void choice(const char* key, E& out, const Names& names) {
    if (const json* v = find(key)) {
      if (!v->is_string()) parse_error(at(key), "expected a string");
      out = lookup(at(key), v->get<std::string>(), names);
    }
  }

  template <class E, class Names>
  void choices(const char* key, std::vector<E>& out, const Names& names) {
    if (const json* v = find(key)) {
      if (!v->is_array()) parse_error(at(key), "expected an array of strings");
      out.clear();
      for (std::size_t k = 0; k < v->size(); ++k) {
        const auto p = at(key) + "[" + std::to_string(k) + "]";
        if (!(*v)[k].is_string()) parse_error(p, "expected a string");
        out.push_back(lookup(p, (*v)[k].get<std::string>(), names));
      }
    }
  }

  bool has(const char* key) const { return obj_ && obj_->contains(key); }

  void finish() const {
    if (!obj_) return;
    for (const auto& [k, v] : obj_->items()) {
      if (!known_.count(k)) parse_error(path_ + "." + k, "unknown key");
    }
  }

 private:
  const json* find(const char* key) {
    known_.insert(key);
    if (!obj_ || !obj_->contains(key)) return nullptr;
    return &obj_->at(key);
  }

  std::string at(const char* key) const { return path_ + "." + key; }

  template <class Names>
  static auto lookup(const std::string& path, const std::string& s, const Names& names) {
    for (const auto& [name, value] : names)
      if (s == name) return value;
    parse_error(path, "unrecognised value \"" + s + "\"");
  }

  std::string path_;
  const json* obj_ = nullptr;
  std::set<std::string> known_;
};

const std::vector<std::pair<std::string, Method>> kMethods{
    {"analytic", Method::Analytic}, {"montecarlo", Method::MonteCarlo}, {"asymptotic", Method::Asymptotic}};
const std::vector<std::pair<std::string, Ordering>> kOrderings{{"distance", Ordering::Distance},
                                                               {"full_csi", Ordering::FullCsi}};
const std::vector<std::pair<std::string, ExperimentKind>> kKinds{{"coverage", ExperimentKind::Coverage},
                                                                 {"altitude_sweep", ExperimentKind::AltitudeSweep},
                                                                 {"beam_scan", ExperimentKind::BeamScan},
                                                                 {"order_histogram", ExperimentKind::OrderHistogram},
                                                                 {"asymptotic", ExperimentKind::Asymptotic}};
const std::vector<std::pair<std::string, Objective>> kObjectives{{"noma_sum_rate", Objective::NomaSumRate}};

template <class E>
std::string name_of(E value, const std::vector<std::pair<std::string, E>>& names) {
  for (const auto& [n, v] : names)
    if (v == value) return n;
  return "unknown";
}

std::vector<double> grid(double lo, double hi, double step) {
  std::vector<double> g;
  const int n = static_cast<int>(std::floor((hi - lo) / step + 1e-9));
  for (int k = 0; k <= n; ++k) g.push_back(lo + k * step);
  return g;
}

}  // namespace

std::string_view to_string(ExperimentKind k) {
  for (const auto& [n, v] : kKinds)
    if (v == k) return n;
  return "unknown";
}

std::string_view to_string(Ordering o) { return o == Ordering::Distance ? "distance" : "full_csi"; }

Scenario RunConfig::default_scenario() {
  Scenario sc;
  auto& g = sc.users.geometry;
  g.inner_radius = 25.0;
  g.outer_radius = 100.0;
  g.half_angle = full_width_to_half_rad(0.5);
  g.altitude = 50.0;
  g.vertical_beamwidth = deg_to_rad(28.0);
  sc.users.density = 1.0;
  sc.channel = ChannelModel{DistancePowerLoss{2.0}, 10, 0.0};
  sc.noma.pair = RankPair{20, 30};
  sc.noma.rate_strong = 6.0;
  sc.noma.rate_weak = 0.5;
  sc.noma.power_strong = 0.25;
  sc.noma.power_weak = 0.75;
  sc.noma.budget = LinkBudget::from_dbm(20.0, -35.0);
  return sc;
}

void RunConfig::validate() const {
  scenario.validate();
  sweep.validate();
  sim.validate();
  if (experiment.orderings.empty()) fail(ErrorCode::ValidationError, "experiment: orderings must be non-empty");
  for (int i : experiment.weak_ranks) {
    RankPair p{scenario.noma.pair.strong, i};
    p.validate();
  }
  for (double l1 : experiment.inner_radii) {
    RegionGeometry g = scenario.geometry();
    g.inner_radius = l1;
    g.validate();
  }
  if (output.format != "csv") fail(ErrorCode::ValidationError, "output: only the csv format is supported");
  if (output.directory.empty()) fail(ErrorCode::ValidationError, "output: directory must be non-empty");
}

RunConfig parse_config(const json& j) {
  if (!j.is_object()) parse_error("<root>", "expected an object");
  RunConfig c;
  auto& g = c.scenario.users.geometry;
  auto& ch = c.scenario.channel;
  auto& noma = c.scenario.noma;

  {
    Section s(j, "geometry", "");
    s.number("inner_radius_m", g.inner_radius);
    s.number("outer_radius_m", g.outer_radius);
    double width = half_rad_to_width_deg(g.half_angle);
    s.number("sector_width_deg", width);
    g.half_angle = full_width_to_half_rad(width);
    double vb = rad_to_deg(g.vertical_beamwidth);
    s.number("vertical_beamwidth_deg", vb);
    g.vertical_beamwidth = deg_to_rad(vb);
    s.number("altitude_m", g.altitude);
    s.number("density_per_m2", c.scenario.users.density);
    s.finish();
  }
  {
    Section s(j, "channel", "");
    std::string kind = std::holds_alternative<CloseInLoss>(ch.path_loss) ? "close_in" : "distance_power";
    s.text("path_loss", kind);
    double exponent = 2.0;
    double carrier = 30.0;
    s.number("exponent", exponent);
    s.number("carrier_ghz", carrier);
    if (kind == "distance_power") {
      ch.path_loss = DistancePowerLoss{exponent};
    } else if (kind == "close_in") {
      ch.path_loss = CloseInLoss{carrier};
    } else {
      parse_error("channel.path_loss", "unrecognised value \"" + kind + "\"");
    }
    s.integer("antennas", ch.antennas);
    double beam = rad_to_deg(ch.beam_angle);
    s.number("beam_angle_deg", beam);
    ch.beam_angle = deg_to_rad(beam);
    s.finish();
  }
  {
    Section s(j, "link", "");
    double p = mw_to_dbm(noma.budget.tx_power_mw);
    double n0 = mw_to_dbm(noma.budget.noise_mw);
    s.number("tx_power_dbm", p);
    s.number("noise_dbm", n0);
    noma.budget = LinkBudget::from_dbm(p, n0);
    s.finish();
  }
  {
    Section s(j, "users", "");
    s.integer("strong_rank", noma.pair.strong);
    s.integer("weak_rank", noma.pair.weak);
    s.number("rate_strong_bpcu", noma.rate_strong);
    s.number("rate_weak_bpcu", noma.rate_weak);
    s.number("power_strong", noma.power_strong);
    s.number("power_weak", noma.power_weak);
    s.finish();
  }
  {
    Section s(j, "sweep", "");
    s.numbers("altitudes_m", c.sweep.altitudes);
    s.numbers("powers_dbm", c.sweep.powers_dbm);
    s.number("scan_step_m", c.sweep.scan_step);
    s.choice("objective", c.sweep.objective, kObjectives);
    s.choices("methods", c.sweep.methods, kMethods);
    s.number("rel_tol", c.sweep.quad.rel_tol);
    s.number("abs_tol", c.sweep.quad.abs_tol);
    s.integer("max_subdivisions", c.sweep.quad.max_subdivisions);
    s.integer("nodes", c.sweep.quad.nodes);
    s.finish();
  }
  {
    Section s(j, "sim", "");
    s.integer64("trials", c.sim.trials);
    s.unsigned64("seed", c.sim.seed);
    s.choice("ordering", c.sim.ordering, kOrderings);
    s.integer("fullcsi_strong_rank", c.sim.fullcsi_ranks.strong);
    s.integer("fullcsi_weak_rank", c.sim.fullcsi_ranks.weak);
    s.finish();
  }
  {
    Section s(j, "experiment", "");
    s.choice("kind", c.experiment.kind, kKinds);
    s.text("name", c.experiment.name);
    s.choices("orderings", c.experiment.orderings, kOrderings);
    s.integers("weak_ranks", c.experiment.weak_ranks);
    s.numbers("inner_radii_m", c.experiment.inner_radii);
    s.finish();
  }
  {
    Section s(j, "output", "");
    s.text("directory", c.output.directory);
    s.text("format", c.output.format);
    s.finish();
  }
  static const std::set<std::string> sections{"geometry", "channel", "link",       "users",
                                              "sweep",    "sim",     "experiment", "output"};
  for (const auto& [k, v] : j.items()) {
    if (!sections.count(k)) parse_error(k, "unknown section");
  }
  c.validate();
  return c;
}

RunConfig parse_config_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorCode::ParseError, std::string("<input>: ") + e.what());
  }
  // run manifests carry the configuration under "config"
  if (j.is_object() && j.contains("config") && j.contains("manifest_version")) return parse_config(j.at("config"));
  return parse_config(j);
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::ParseError, path + ": cannot open file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

json to_json(const RunConfig& c) {
  const auto& g = c.scenario.geometry();
  const auto& ch = c.scenario.channel;
  const auto& noma = c.scenario.noma;
  json j;
  j["geometry"] = {{"inner_radius_m", g.inner_radius},
                   {"outer_radius_m", g.outer_radius},
                   {"sector_width_deg", half_rad_to_width_deg(g.half_angle)},
                   {"vertical_beamwidth_deg", rad_to_deg(g.vertical_beamwidth)},
                   {"altitude_m", g.altitude},
                   {"density_per_m2", c.scenario.users.density}};
  json chj = {{"antennas", ch.antennas}, {"beam_angle_deg", rad_to_deg(ch.beam_angle)}};
  if (const auto* dp = std::get_if<DistancePowerLoss>(&ch.path_loss)) {
    chj["path_loss"] = "distance_power";
    chj["exponent"] = dp->exponent;
  } else {
    chj["path_loss"] = "close_in";
    chj["carrier_ghz"] = std::get<CloseInLoss>(ch.path_loss).carrier_ghz;
  }
  j["channel"] = chj;
  j["link"] = {{"tx_power_dbm", mw_to_dbm(noma.budget.tx_power_mw)}, {"noise_dbm", mw_to_dbm(noma.budget.noise_mw)}};
  j["users"] = {{"strong_rank", noma.pair.strong},         {"weak_rank", noma.pair.weak},
                {"rate_strong_bpcu", noma.rate_strong},    {"rate_weak_bpcu", noma.rate_weak},
                {"power_strong", noma.power_strong},       {"power_weak", noma.power_weak}};
  json methods = json::array();
  for (Method m : c.sweep.methods) methods.push_back(name_of(m, kMethods));
  j["sweep"] = {{"altitudes_m", c.sweep.altitudes},
                {"powers_dbm", c.sweep.powers_dbm},
                {"scan_step_m", c.sweep.scan_step},
                {"objective", name_of(c.sweep.objective, kObjectives)},
                {"methods", methods},
                {"rel_tol", c.sweep.quad.rel_tol},
                {"abs_tol", c.sweep.quad.abs_tol},
                {"max_subdivisions", c.sweep.quad.max_subdivisions},
                {"nodes", c.sweep.quad.nodes}};
  j["sim"] = {{"trials", c.sim.trials},
              {"seed", c.sim.seed},
              {"ordering", name_of(c.sim.ordering, kOrderings)},
              {"fullcsi_strong_rank", c.sim.fullcsi_ranks.strong},
              {"fullcsi_weak_rank", c.sim.fullcsi_ranks.weak}};
  json orderings = json::array();
  for (Ordering o : c.experiment.orderings) orderings.push_back(name_of(o, kOrderings));
  j["experiment"] = {{"kind", name_of(c.experiment.kind, kKinds)},
                     {"name", c.experiment.name},
                     {"orderings", orderings},
                     {"weak_ranks", c.experiment.weak_ranks},
                     {"inner_radii_m", c.experiment.inner_radii}};
  j["output"] = {{"directory", c.output.directory}, {"format", c.output.format}};
  return j;
}

std::vector<std::string> preset_names() {
  return {"fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8", "fig9", "fig10", "fig11"};
}

RunConfig preset(const std::string& name) {
  RunConfig c;
  c.experiment.name = name;
  c.sim.trials = 100'000;
  c.output.directory = "out/" + name;
  auto& noma = c.scenario.noma;
  const std::vector<Method> both{Method::Analytic, Method::MonteCarlo};

  if (name == "fig2") {
    c.experiment.kind = ExperimentKind::Coverage;
    c.experiment.inner_radii = {0.0, 25.0, 85.0};
    c.sweep.altitudes = grid(1.0, 150.0, 0.5);
  } else if (name == "fig3" || name == "fig4") {
    c.sweep.powers_dbm = {10.0, 20.0, 30.0};
    c.sweep.methods = both;
  } else if (name == "fig5") {
    c.sweep.powers_dbm = {10.0};
    c.sweep.methods = both;
  } else if (name == "fig6") {
    noma.pair = RankPair{20, 25};
    c.sweep.powers_dbm = {20.0, 30.0};
    c.sweep.methods = both;
    c.experiment.orderings = {Ordering::Distance, Ordering::FullCsi};
    c.sim.fullcsi_ranks = RankPair{20, 25};
  } else if (name == "fig7") {
    c.experiment.kind = ExperimentKind::OrderHistogram;
    noma.pair = RankPair{20, 25};
    c.sweep.altitudes = {60.0, 120.0};
  } else if (name == "fig8") {
    c.sweep.powers_dbm = {20.0};
    c.sweep.methods = both;
    c.experiment.weak_ranks = {21, 25, 30};
  } else if (name == "fig9") {
    c.experiment.kind = ExperimentKind::BeamScan;
    c.sweep.altitudes = {50.0};
    c.sweep.powers_dbm = {10.0, 20.0, 30.0};
  } else if (name == "fig10") {
    c.scenario.channel = ChannelModel{CloseInLoss{30.0}, 100, 0.0};
    noma.pair = RankPair{20, 25};
    c.sweep.powers_dbm = {60.0, 70.0};
    c.sweep.methods = both;
  } else if (name == "fig11") {
    c.experiment.kind = ExperimentKind::Asymptotic;
    c.sweep.altitudes = {10.0, 50.0};
    c.sweep.powers_dbm = grid(0.0, 70.0, 5.0);
  } else {
    fail(ErrorCode::InvalidArgument, "unknown preset \"" + name + "\"");
  }
  c.validate();
  return c;
}

}  // namespace uavnoma

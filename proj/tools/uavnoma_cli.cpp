#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "uavnoma/dataset.hpp"
#include "uavnoma/errors.hpp"

using nlohmann::json;
using namespace uavnoma;

namespace {

struct Source {
  std::string config_path;
  std::string preset_name;
  std::vector<double> altitudes;
  std::vector<double> powers;
  long long trials = 0;
  std::string seed;
  std::string out_dir;
  std::vector<std::string> sets;
};

void add_source_options(CLI::App* cmd, Source& s) {
  auto* cfg = cmd->add_option("--config", s.config_path, "JSON config file or run manifest");
  cmd->add_option("--preset", s.preset_name, "figure preset (fig2 ... fig11)")->excludes(cfg);
  cmd->add_option("--altitude", s.altitudes, "altitude grid override (m)");
  cmd->add_option("--power", s.powers, "transmit power grid override (dBm)");
  cmd->add_option("--trials", s.trials, "Monte Carlo trials");
  cmd->add_option("--seed", s.seed, "Monte Carlo seed");
  cmd->add_option("--out", s.out_dir, "output directory");
  cmd->add_option("--set", s.sets, "override any config field: section.key=<json value>");
}

json parse_value(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error&) {
    return text;
  }
}

RunConfig resolve(const Source& s) {
  RunConfig base;
  if (!s.config_path.empty()) {
    base = load_config(s.config_path);
  } else if (!s.preset_name.empty()) {
    base = preset(s.preset_name);
  }
  json j = to_json(base);
  if (!s.altitudes.empty()) {
    j["sweep"]["altitudes_m"] = s.altitudes;
    if (s.altitudes.size() == 1) j["geometry"]["altitude_m"] = s.altitudes.front();
  }
  if (!s.powers.empty()) j["sweep"]["powers_dbm"] = s.powers;
  if (s.trials != 0) j["sim"]["trials"] = s.trials;
  if (!s.seed.empty()) j["sim"]["seed"] = parse_value(s.seed);
  if (!s.out_dir.empty()) j["output"]["directory"] = s.out_dir;
  for (const auto& kv : s.sets) {
    const auto eq = kv.find('=');
    const auto dot = kv.find('.');
    if (eq == std::string::npos || dot == std::string::npos || dot > eq)
      fail(ErrorCode::ParseError, "--set " + kv + ": expected section.key=value");
    j[kv.substr(0, dot)][kv.substr(dot + 1, eq - dot - 1)] = parse_value(kv.substr(eq + 1));
  }
  return parse_config(j);
}

int report_error(const std::string& code, const std::string& message) {
  std::cerr << json{{"error", {{"code", code}, {"message", message}}}}.dump() << '\n';
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Outage and sum-rate analysis of UAV NOMA/OMA downlinks over Poisson user fields"};
  app.require_subcommand(1);

  Source run_src;
  auto* run_cmd = app.add_subcommand("run", "run an experiment and write its CSV dataset and manifest");
  add_source_options(run_cmd, run_src);

  Source show_src;
  auto* show_cmd = app.add_subcommand("show-config", "print the resolved configuration as JSON");
  add_source_options(show_cmd, show_src);

  auto* list_cmd = app.add_subcommand("presets", "list the figure presets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    return report_error("ParseError", e.what());
  }

  try {
    if (*list_cmd) {
      for (const auto& n : preset_names()) std::cout << n << '\n';
    } else if (*show_cmd) {
      std::cout << to_json(resolve(show_src)).dump(2) << '\n';
    } else if (*run_cmd) {
      const auto res = run(resolve(run_src), std::cerr);
      std::cout << json{{"csv", res.csv_path}, {"manifest", res.manifest_path}, {"rows", res.rows}}.dump() << '\n';
    }
  } catch (const Error& e) {
    return report_error(std::string(to_string(e.code())), e.what());
  } catch (const std::exception& e) {
    return report_error("InternalError", e.what());
  }
  return 0;
}

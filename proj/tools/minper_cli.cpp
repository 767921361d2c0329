// Command line front end: periodic orbits with certified minimal period for
// second order systems xddot + V'(x) = 0 (direct route) and convex first
// order systems zdot = J H'(z) (Clarke dual route).

#include "minper/pipeline.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

namespace {

using nlohmann::json;

// Applies "a.b.c=value" onto the config object; the value is parsed as JSON
// when possible and kept as a string otherwise.
void apply_override(json& config, const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos)
    throw std::invalid_argument("--set expects key=value, got: " + spec);
  const std::string path = spec.substr(0, eq);
  const std::string raw = spec.substr(eq + 1);

  json value;
  try {
    value = json::parse(raw);
  } catch (const json::parse_error&) {
    value = raw;
  }

  json* node = &config;
  size_t begin = 0;
  while (true) {
    const size_t dot = path.find('.', begin);
    const std::string key = path.substr(begin, dot - begin);
    if (key.empty()) throw std::invalid_argument("--set: empty key segment in " + path);
    if (dot == std::string::npos) {
      (*node)[key] = value;
      return;
    }
    node = &((*node)[key]);
    begin = dot + 1;
  }
}

struct CliArgs {
  std::string config_path;
  std::vector<std::string> overrides;
  std::string out_dir;
  std::optional<std::int64_t> seed;
  std::optional<int> modes;
  std::optional<double> period;
};

void add_common(CLI::App* app, CliArgs& args) {
  app->add_option("--config", args.config_path, "configuration file (JSON)");
  app->add_option("--set", args.overrides, "override a config key, e.g. solver.seed=7");
  app->add_option("--out", args.out_dir, "output directory");
  app->add_option("--seed", args.seed, "solver seed");
  app->add_option("--modes", args.modes, "truncation level");
  app->add_option("--period", args.period, "period T");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"minper: periodic orbits with certified minimal period"};
  app.require_subcommand(0, 1);

  CliArgs args;
  const std::vector<std::pair<std::string, std::string>> subcommands = {
      {"solve-direct", "solve_direct"}, {"solve-dual", "solve_dual"},
      {"check-conditions", "check_conditions"}, {"fenchel", "fenchel_table"},
      {"certify", "certify"}, {"sweep", "sweep"}};
  std::string mode_from_subcommand;
  for (const auto& [cli_name, mode] : subcommands) {
    CLI::App* sub = app.add_subcommand(cli_name);
    add_common(sub, args);
    sub->callback([&mode_from_subcommand, mode = mode]() { mode_from_subcommand = mode; });
  }
  add_common(&app, args);

  CLI11_PARSE(app, argc, argv);

  try {
    json config = json::object();
    if (!args.config_path.empty()) {
      std::ifstream in(args.config_path);
      if (!in) {
        std::fprintf(stderr, "error: cannot read config %s\n", args.config_path.c_str());
        return minper::kExitUsage;
      }
      config = json::parse(in);
    }
    if (!mode_from_subcommand.empty()) config["mode"] = mode_from_subcommand;
    if (args.seed) config["solver"]["seed"] = *args.seed;
    if (args.modes) config["num_modes"] = *args.modes;
    if (args.period) config["period_T"] = *args.period;
    if (!args.out_dir.empty()) config["output"]["dir"] = args.out_dir;
    for (const auto& o : args.overrides) apply_override(config, o);

    const minper::RunConfig cfg = minper::parse_config(config);
    minper::PipelineResult result = minper::run_pipeline(cfg);
    minper::emit_outputs(cfg, result);

    if (result.document.contains("certificate")) {
      const bool ok = result.document["certificate"]["certified"].get<bool>();
      std::printf("certified: %s\n", ok ? "yes" : "no");
    }
    if (result.document.contains("conditions"))
      std::printf("conditions all_pass: %s\n",
                  result.document["conditions"]["all_pass"].get<bool>() ? "yes" : "no");
    std::printf("document: %s/%s\n", cfg.out_dir.c_str(), cfg.document_name.c_str());
    return result.exit_code;
  } catch (const nlohmann::json::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return minper::kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return minper::kExitUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return minper::kExitUsage;
  }
}

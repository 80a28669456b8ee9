// relaynet: capacity bounds for layered Gaussian relay networks.
//
//   relaynet <capacity|mincut|rate|sweep|verify|line> [--config PATH] [flags]
//
// Flags override keys from the --config file. See include/relaynet/experiment.hpp
// for the configuration keys and their defaults.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "relaynet/experiment.hpp"

namespace {

struct Flags {
  std::string config_path;
  nlohmann::json overrides = nlohmann::json::object();
};

void add_common_options(CLI::App& sub, Flags& flags) {
  auto& o = flags.overrides;
  sub.add_option("--config", flags.config_path, "JSON configuration file")->check(CLI::ExistingFile);
  sub.add_option_function<std::string>("--out", [&o](const std::string& v) { o["out"] = v; },
                                       "output path (default stdout)");
  sub.add_option_function<std::string>("--format", [&o](const std::string& v) { o["format"] = v; },
                                       "csv or json");
  sub.add_option_function<std::uint64_t>("--seed", [&o](std::uint64_t v) { o["seed"] = v; },
                                         "draw-pool seed");
  sub.add_option_function<std::int64_t>(
      "--samples", [&o](std::int64_t v) { o["num_samples"] = v; }, "Monte Carlo draws per table");
  sub.add_option_function<std::string>("--base", [&o](const std::string& v) { o["log_base"] = v; },
                                       "nats or bits");
  sub.add_option_function<std::int64_t>("--K", [&o](std::int64_t v) { o["K"] = v; },
                                        "relays per layer");
  sub.add_option_function<std::int64_t>("--D", [&o](std::int64_t v) { o["D"] = v; },
                                        "number of hops");
  sub.add_option_function<std::vector<std::int64_t>>(
         "--D-list", [&o](const std::vector<std::int64_t>& v) { o["D_list"] = v; },
         "depths for sweep")
      ->delimiter(',');
  sub.add_option_function<std::vector<double>>(
         "--snr", [&o](const std::vector<double>& v) { o["snr"] = v; }, "P / noise_var values")
      ->delimiter(',');
  sub.add_option_function<double>("--q", [&o](double v) { o["q"] = v; },
                                  "fixed quantization ratio");
  sub.add_option_function<std::vector<std::string>>(
         "--q-policy", [&o](const std::vector<std::string>& v) { o["q_policy"] = v; },
         "fixed_1, D_minus_1, optimized")
      ->delimiter(',');
  sub.add_option_function<std::vector<double>>(
         "--q-grid", [&o](const std::vector<double>& v) { o["q_grid"] = v; }, "optimizer grid")
      ->delimiter(',');
  sub.add_option_function<std::int64_t>("--workers", [&o](std::int64_t v) { o["workers"] = v; },
                                        "estimator threads");
  sub.add_option_function<double>("--penalty", [&o](double v) { o["penalty"] = v; },
                                  "node penalty for mincut");
  sub.add_option_function<std::string>("--mode", [&o](const std::string& v) { o["mode"] = v; },
                                       "per_cut_exact or split_bound");
  sub.add_option_function<std::vector<double>>(
         "--gains", [&o](const std::vector<double>& v) { o["line_gains"] = v; },
         "squared link gains for line")
      ->delimiter(',');
  sub.add_flag_function(
      "--no-dest-quant", [&o](std::int64_t) { o["destination_quantizes"] = false; },
      "destination uses its raw observation");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cutset and compress-and-forward bounds for layered Gaussian relay networks"};
  app.require_subcommand(1);
  Flags flags;
  const std::vector<std::pair<std::string, std::string>> subcommands{
      {"capacity", "ergodic capacity table C(m, n)"},
      {"mincut", "minimum cut by dynamic programming"},
      {"rate", "upper/lower bounds and gap report"},
      {"sweep", "gap versus depth for several quantization policies"},
      {"verify", "per-sample property and min-cut checks"},
      {"line", "line network analysis"}};
  for (const auto& [name, help] : subcommands) add_common_options(*app.add_subcommand(name, help), flags);

  CLI11_PARSE(app, argc, argv);

  try {
    nlohmann::json raw = nlohmann::json::object();
    if (!flags.config_path.empty()) {
      std::ifstream in(flags.config_path);
      std::stringstream buf;
      buf << in.rdbuf();
      const auto text = buf.str();
      if (text.find_first_not_of(" \t\r\n") != std::string::npos) raw = nlohmann::json::parse(text);
      if (!raw.is_object()) throw relaynet::ConfigError("<root>", "configuration must be a JSON object");
    }
    for (const auto& [key, value] : flags.overrides.items()) raw[key] = value;
    raw["subcommand"] = app.get_subcommands().front()->get_name();

    const auto config = relaynet::validate_config(raw);
    if (config.out.empty()) return relaynet::run(config, std::cout, std::cerr);
    std::ofstream file(config.out);
    if (!file) {
      std::cerr << "error: cannot open " << config.out << " for writing\n";
      return 2;
    }
    return relaynet::run(config, file, std::cerr);
  } catch (const relaynet::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

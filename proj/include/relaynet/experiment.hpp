// Experiment configuration and the subcommand driver behind the CLI.
//
// Configuration keys (JSON object; every key optional):
//   subcommand             "capacity" | "mincut" | "rate" | "sweep" | "verify" | "line"  [rate]
//   K                      relays per layer                          [2; verify: 4]
//   D                      number of hops                            [4]
//   D_list                 depths for sweep                          [2, 4, 8, 16]
//   snr                    list of P / noise_var values (>= 0)       [10]
//   q                      fixed quantization ratio (> 0); overrides q_policy
//   q_policy               list of fixed_1 | D_minus_1 | optimized   [D_minus_1; sweep: fixed_1, D_minus_1]
//   q_grid                 optimizer grid (> 0)                      [1/8 .. 128 plus D-1]
//   num_samples            Monte Carlo draws per table               [100000; verify: 10000]
//   seed                   draw-pool seed                            [0]
//   log_base               "nats" | "bits"                           [nats]
//   format                 "csv" | "json"                            [csv]
//   out                    output path, empty for stdout             [""]
//   workers                estimator threads                         [1]
//   penalty                node penalty for mincut (>= 0)            [0]
//   mode                   "per_cut_exact" | "split_bound"           [per_cut_exact]
//   destination_quantizes  bool                                      [true]
//   line_gains             squared link gains for line               [D unit gains]

#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "relaynet/cf_rates.hpp"

namespace relaynet {

enum class Subcommand { capacity, mincut, rate, sweep, verify, line };
enum class OutputFormat { csv, json };

std::string to_string(Subcommand sub);
std::string to_string(OutputFormat format);

class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string key, const std::string& message)
      : std::invalid_argument(key + ": " + message), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

struct ExperimentConfig {
  Subcommand subcommand = Subcommand::rate;
  int K = 2;
  int D = 4;
  std::vector<int> D_list{2, 4, 8, 16};
  std::vector<double> snr{10.0};
  std::optional<double> q;
  std::vector<QPolicy> q_policy{QPolicy::D_minus_1};
  std::vector<double> q_grid;
  std::uint64_t num_samples = 100000;
  std::uint64_t seed = 0;
  LogBase log_base = LogBase::nats;
  OutputFormat format = OutputFormat::csv;
  std::string out;
  unsigned workers = 1;
  double penalty = 0.0;
  NncMode mode = NncMode::per_cut_exact;
  bool destination_quantizes = true;
  std::vector<double> line_gains;
};

/// Parses and validates a configuration object. Unknown keys, type mismatches
/// and constraint violations throw ConfigError naming the key.
ExperimentConfig validate_config(const nlohmann::json& raw);
ExperimentConfig validate_config(const std::string& raw_json);

/// The resolved configuration as echoed into outputs. `workers` and `out` are
/// omitted: they do not change results.
nlohmann::json config_echo(const ExperimentConfig& config);

/// Runs the configured subcommand, writing results to `out` and diagnostics to
/// `err`. Returns 0 on success and 1 when a verify check fails.
int run(const ExperimentConfig& config, std::ostream& out, std::ostream& err);

}  // namespace relaynet

#include "relaynet/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include <fmt/core.h>

#include "relaynet/serialize.hpp"

namespace relaynet {

namespace {

using nlohmann::json;

constexpr int kMaxK = 16;

const std::set<std::string> kKnownKeys{
    "subcommand", "K",      "D",      "D_list",      "snr",     "q",
    "q_policy",   "q_grid", "num_samples", "seed",    "log_base", "format",
    "out",        "workers", "penalty", "mode",      "destination_quantizes", "line_gains"};

Subcommand parse_subcommand(const std::string& text) {
  if (text == "capacity") return Subcommand::capacity;
  if (text == "mincut") return Subcommand::mincut;
  if (text == "rate") return Subcommand::rate;
  if (text == "sweep") return Subcommand::sweep;
  if (text == "verify") return Subcommand::verify;
  if (text == "line") return Subcommand::line;
  throw ConfigError("subcommand", "unknown subcommand \"" + text + "\"");
}

std::int64_t as_integer(const json& v, const std::string& key) {
  if (!v.is_number_integer()) throw ConfigError(key, "expected an integer");
  return v.get<std::int64_t>();
}

double as_number(const json& v, const std::string& key) {
  if (!v.is_number()) throw ConfigError(key, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(key, "must be finite");
  return x;
}

std::string as_string(const json& v, const std::string& key) {
  if (!v.is_string()) throw ConfigError(key, "expected a string");
  return v.get<std::string>();
}

bool as_bool(const json& v, const std::string& key) {
  if (!v.is_boolean()) throw ConfigError(key, "expected a boolean");
  return v.get<bool>();
}

// Lists accept a bare scalar as a one-element list.
template <typename F>
auto as_list(const json& v, const std::string& key, F&& element) {
  using T = decltype(element(v, key));
  std::vector<T> out;
  if (!v.is_array()) {
    out.push_back(element(v, key));
    return out;
  }
  for (std::size_t i = 0; i < v.size(); ++i) {
    out.push_back(element(v[i], fmt::format("{}[{}]", key, i)));
  }
  if (out.empty()) throw ConfigError(key, "must not be empty");
  return out;
}

template <typename E>
E parse_enum(const json& v, const std::string& key, E (*parse)(const std::string&)) {
  const auto text = as_string(v, key);
  try {
    return parse(text);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(key, e.what());
  }
}

OutputFormat parse_format(const std::string& text) {
  if (text == "csv") return OutputFormat::csv;
  if (text == "json") return OutputFormat::json;
  throw std::invalid_argument("format must be csv or json, got \"" + text + "\"");
}

QuantizationScheme scheme_for(QPolicy policy, const NetworkParams& params, TableCache& tables,
                              const ExperimentConfig& config) {
  switch (policy) {
    case QPolicy::fixed_1: return {1.0, config.destination_quantizes};
    case QPolicy::D_minus_1: {
      auto s = QuantizationScheme::depth_scaled(params.D);
      s.destination_quantizes = s.destination_quantizes && config.destination_quantizes;
      return s;
    }
    case QPolicy::optimized: {
      auto grid = config.q_grid.empty() ? default_q_grid(params.D) : config.q_grid;
      grid.push_back(1.0);
      if (params.D >= 2) grid.push_back(static_cast<double>(params.D - 1));
      const auto best = optimize_quantization(params, grid, tables, config.destination_quantizes);
      return {best.q_star, config.destination_quantizes};
    }
  }
  return {};
}

std::string profile_text(const CutProfile& p) {
  if (p.m.empty()) return "-";
  std::string s;
  for (std::size_t i = 0; i < p.m.size(); ++i) {
    if (i) s += ';';
    s += std::to_string(p.m[i]);
  }
  return s;
}

// Collects rows and writes them in the configured format with a schema and
// config echo header.
class Emitter {
 public:
  Emitter(const ExperimentConfig& config, std::string schema, std::string csv_header)
      : config_(config), schema_(std::move(schema)), header_(std::move(csv_header)) {}

  void row(std::string csv, json doc) {
    csv_rows_.push_back(std::move(csv));
    json_rows_.push_back(std::move(doc));
  }

  void write(std::ostream& out) const {
    if (config_.format == OutputFormat::json) {
      const json doc{{"schema", schema_}, {"config", config_echo(config_)}, {"rows", json_rows_}};
      out << doc.dump(2) << '\n';
      return;
    }
    out << "# schema: " << schema_ << '\n';
    out << "# config: " << config_echo(config_).dump() << '\n';
    out << header_ << '\n';
    for (const auto& r : csv_rows_) out << r << '\n';
  }

 private:
  const ExperimentConfig& config_;
  std::string schema_;
  std::string header_;
  std::vector<std::string> csv_rows_;
  json json_rows_ = json::array();
};

TableOptions table_options(const ExperimentConfig& config, bool keep_draws = false) {
  return {config.workers, keep_draws, 0};
}

int run_capacity(const ExperimentConfig& c, std::ostream& out) {
  Emitter emit(c, "relaynet.capacity.v1", "m,n,snr,num_samples,seed,mean,std_error");
  for (double snr : c.snr) {
    const auto table = build_capacity_table(c.K, snr, c.num_samples, c.seed, table_options(c));
    for (const auto& e : table.entries()) {
      emit.row(fmt::format("{},{},{},{},{},{},{}", e.rows, e.cols, format_number(snr),
                           e.num_samples, c.seed, format_number(to_base(e.mean, c.log_base)),
                           format_number(to_base(e.std_error, c.log_base))),
               [&] {
                 auto doc = to_json(e, c.seed);
                 doc["mean"] = to_base(e.mean, c.log_base);
                 doc["std_error"] = to_base(e.std_error, c.log_base);
                 return doc;
               }());
    }
  }
  emit.write(out);
  return 0;
}

int run_mincut(const ExperimentConfig& c, std::ostream& out) {
  Emitter emit(c, "relaynet.mincut.v1",
               "K,D,snr,penalty,objective,cut_value,std_error,profile,brute_force_agrees");
  for (double snr : c.snr) {
    const NetworkParams params{c.K, c.D, snr, 1.0, c.log_base};
    const auto table = build_capacity_table(c.K, snr, c.num_samples, c.seed, table_options(c));
    const auto best = min_cut_dp(params, table, c.penalty);
    const auto cut = cut_value(best.argmin, params, table);
    std::string agrees = "skipped";
    std::uint64_t profiles = 1;
    for (int i = 0; i < c.D - 1 && profiles <= kBruteForceLimit; ++i) profiles *= c.K + 1;
    if (profiles <= kBruteForceLimit) {
      const auto brute = brute_force_min_cut(params, table, c.penalty);
      agrees = (brute.value == best.value && brute.argmin == best.argmin) ? "true" : "false";
    }
    auto doc = to_json(cut);
    doc["value"] = to_base(cut.value, c.log_base);
    doc["std_error"] = to_base(cut.std_error, c.log_base);
    for (auto& b : doc["per_block"]) {
      b["value"] = to_base(b["value"].get<double>(), c.log_base);
      b["std_error"] = to_base(b["std_error"].get<double>(), c.log_base);
    }
    doc["K"] = c.K;
    doc["D"] = c.D;
    doc["snr"] = snr;
    doc["penalty"] = c.penalty;
    doc["objective"] = to_base(best.value, c.log_base);
    doc["brute_force_agrees"] = agrees;
    emit.row(fmt::format("{},{},{},{},{},{},{},{},{}", c.K, c.D, format_number(snr),
                         format_number(c.penalty), format_number(to_base(best.value, c.log_base)),
                         format_number(to_base(cut.value, c.log_base)),
                         format_number(to_base(cut.std_error, c.log_base)),
                         profile_text(best.argmin), agrees),
             std::move(doc));
  }
  emit.write(out);
  return 0;
}

int run_rate(const ExperimentConfig& c, std::ostream& out, std::ostream& err) {
  Emitter emit(c, "relaynet.rate.v1", rate_csv_header());
  TableCache tables(c.K, c.num_samples, c.seed, table_options(c));
  for (double snr : c.snr) {
    const NetworkParams params{c.K, c.D, snr, 1.0, c.log_base};
    std::vector<QuantizationScheme> schemes;
    if (c.q) {
      schemes.push_back({*c.q, c.destination_quantizes});
    } else {
      for (QPolicy p : c.q_policy) schemes.push_back(scheme_for(p, params, tables, c));
    }
    for (const auto& scheme : schemes) {
      const auto report = rate_report(params, scheme, tables, c.mode);
      if (report.lower_clamped) {
        err << fmt::format("note: K={} D={} snr={} q={}: lower bound clamped at 0\n", c.K, c.D,
                           format_number(snr), format_number(scheme.q));
      }
      emit.row(to_csv_row(report), to_json(report));
    }
  }
  emit.write(out);
  return 0;
}

int run_sweep(const ExperimentConfig& c, std::ostream& out) {
  Emitter emit(c, "relaynet.sweep.v1", rate_csv_header() + ",q_policy");
  TableCache tables(c.K, c.num_samples, c.seed, table_options(c));
  for (double snr : c.snr) {
    for (const auto& row : gap_trend(c.K, c.D_list, snr, c.q_policy, tables, c.log_base, c.q_grid)) {
      auto doc = to_json(row.report);
      doc["q_policy"] = to_string(row.policy);
      emit.row(to_csv_row(row.report) + "," + to_string(row.policy), std::move(doc));
    }
  }
  emit.write(out);
  return 0;
}

int run_verify(const ExperimentConfig& c, std::ostream& out, std::ostream& err) {
  Emitter emit(c, "relaynet.verify.v1", "check,snr,worst_violation,passed");
  bool all_passed = true;
  auto record = [&](const std::string& check, double snr, double worst, bool passed) {
    all_passed = all_passed && passed;
    if (!passed) {
      err << fmt::format("FAILED {} at snr={}: worst violation {}\n", check, format_number(snr),
                         format_number(worst));
    }
    emit.row(fmt::format("{},{},{},{}", check, format_number(snr), format_number(worst),
                         passed ? "true" : "false"),
             json{{"check", check}, {"snr", snr}, {"worst_violation", worst}, {"passed", passed}});
  };

  const std::vector<double> penalties{0.0, std::log(1.5), 1.0};
  for (double snr : c.snr) {
    const auto table =
        build_capacity_table(c.K, snr, c.num_samples, c.seed, table_options(c, true));
    const auto props = check_capacity_properties(table, c.K, c.workers);
    record("symmetry", snr, props.worst_symmetry, props.worst_symmetry < props.tolerance);
    record("monotonicity", snr, props.worst_monotonicity,
           props.worst_monotonicity < props.tolerance);
    record("superadditivity", snr, props.worst_superadditivity,
           props.worst_superadditivity < props.tolerance);

    double worst_dp = 0.0;
    bool dp_ok = true;
    double worst_min_cut = 0.0;
    for (int k = 1; k <= std::min(c.K, 3); ++k) {
      for (int d = 1; d <= 5; ++d) {
        for (double pen : penalties) {
          const auto dp = min_cut_dp(k, d, HopTables(table), pen);
          const auto bf = brute_force_min_cut(k, d, HopTables(table), pen);
          worst_dp = std::max(worst_dp, std::abs(dp.value - bf.value));
          dp_ok = dp_ok && dp.value == bf.value && dp.argmin == bf.argmin;
          if (pen == 0.0) {
            worst_min_cut = std::max(worst_min_cut, std::abs(dp.value - table.mean(k, k)));
          }
        }
      }
    }
    record("dp_equals_brute_force", snr, worst_dp, dp_ok);
    record("min_cut_equals_C(K,K)", snr, worst_min_cut, worst_min_cut < 1e-9);
  }
  emit.write(out);
  return all_passed ? 0 : 1;
}

int run_line(const ExperimentConfig& c, std::ostream& out) {
  Emitter emit(c, "relaynet.line.v1",
               "D,snr,q,capacity,nnc_simple_cuts,nnc_all_cuts,gap,log_D_plus_1");
  std::vector<double> gains = c.line_gains;
  if (gains.empty()) gains.assign(static_cast<std::size_t>(c.D), 1.0);
  const int D = static_cast<int>(gains.size());
  for (double snr : c.snr) {
    const auto line = LineNetwork::from_power_gains(gains, snr, 1.0);
    std::vector<QuantizationScheme> schemes;
    if (c.q) {
      schemes.push_back({*c.q, c.destination_quantizes});
    } else {
      for (QPolicy p : c.q_policy) {
        auto s = p == QPolicy::fixed_1 ? QuantizationScheme{1.0, true}
                                       : QuantizationScheme::depth_scaled(D);
        s.destination_quantizes = s.destination_quantizes && c.destination_quantizes;
        schemes.push_back(s);
      }
    }
    for (const auto& s : schemes) {
      const double cap = line_capacity(line);
      const double simple = line_nnc_rate(line, s.q, LineCuts::simple_cuts, s.destination_quantizes);
      const double all = line_nnc_rate(line, s.q, LineCuts::all_cuts, s.destination_quantizes);
      const double bound = std::log(static_cast<double>(D)) + 1.0;
      const auto b = [&](double v) { return to_base(v, c.log_base); };
      emit.row(fmt::format("{},{},{},{},{},{},{},{}", D, format_number(snr), format_number(s.q),
                           format_number(b(cap)), format_number(b(simple)), format_number(b(all)),
                           format_number(b(cap - simple)), format_number(b(bound))),
               json{{"D", D},
                    {"snr", snr},
                    {"q", s.q},
                    {"capacity", b(cap)},
                    {"nnc_simple_cuts", b(simple)},
                    {"nnc_all_cuts", b(all)},
                    {"gap", b(cap - simple)},
                    {"log_D_plus_1", b(bound)}});
    }
  }
  emit.write(out);
  return 0;
}

}  // namespace

std::string to_string(Subcommand sub) {
  switch (sub) {
    case Subcommand::capacity: return "capacity";
    case Subcommand::mincut: return "mincut";
    case Subcommand::rate: return "rate";
    case Subcommand::sweep: return "sweep";
    case Subcommand::verify: return "verify";
    case Subcommand::line: return "line";
  }
  return "?";
}

std::string to_string(OutputFormat format) { return format == OutputFormat::json ? "json" : "csv"; }

ExperimentConfig validate_config(const json& raw) {
  if (raw.is_null()) return validate_config(json::object());
  if (!raw.is_object()) throw ConfigError("<root>", "configuration must be a JSON object");
  for (const auto& [key, value] : raw.items()) {
    if (!kKnownKeys.count(key)) throw ConfigError(key, "unknown configuration key");
  }

  ExperimentConfig c;
  if (raw.contains("subcommand")) {
    c.subcommand = parse_subcommand(as_string(raw["subcommand"], "subcommand"));
  }
  // Subcommand-specific defaults.
  if (c.subcommand == Subcommand::verify) {
    c.K = 4;
    c.num_samples = 10000;
  }
  if (c.subcommand == Subcommand::sweep) c.q_policy = {QPolicy::fixed_1, QPolicy::D_minus_1};

  auto int_in = [&](const char* key, std::int64_t lo, std::int64_t hi) {
    const auto v = as_integer(raw[key], key);
    if (v < lo || v > hi) throw ConfigError(key, fmt::format("must lie in [{}, {}]", lo, hi));
    return static_cast<int>(v);
  };
  if (raw.contains("K")) c.K = int_in("K", 1, kMaxK);
  if (raw.contains("D")) c.D = int_in("D", 1, 4096);
  if (raw.contains("D_list")) {
    c.D_list = as_list(raw["D_list"], "D_list", [](const json& v, const std::string& key) {
      const auto d = as_integer(v, key);
      if (d < 1 || d > 4096) throw ConfigError(key, "must lie in [1, 4096]");
      return static_cast<int>(d);
    });
  }
  if (raw.contains("snr")) {
    c.snr = as_list(raw["snr"], "snr", [](const json& v, const std::string& key) {
      const double x = as_number(v, key);
      if (x < 0.0) throw ConfigError(key, "must satisfy snr >= 0");
      return x;
    });
  }
  if (raw.contains("q") && !raw["q"].is_null()) {
    const double q = as_number(raw["q"], "q");
    if (!(q > 0.0)) throw ConfigError("q", fmt::format("must satisfy q > 0 (got {})", q));
    c.q = q;
  }
  if (raw.contains("q_policy")) {
    c.q_policy = as_list(raw["q_policy"], "q_policy", [](const json& v, const std::string& key) {
      return parse_enum(v, key, &parse_q_policy);
    });
  }
  if (raw.contains("q_grid")) {
    c.q_grid = as_list(raw["q_grid"], "q_grid", [](const json& v, const std::string& key) {
      const double q = as_number(v, key);
      if (!(q > 0.0)) throw ConfigError(key, "must satisfy q > 0");
      return q;
    });
  }
  if (raw.contains("num_samples")) {
    const auto n = as_integer(raw["num_samples"], "num_samples");
    if (n < 1) throw ConfigError("num_samples", "must be >= 1");
    c.num_samples = static_cast<std::uint64_t>(n);
  }
  if (raw.contains("seed")) {
    const auto& v = raw["seed"];
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
      throw ConfigError("seed", "expected a non-negative integer");
    }
    c.seed = v.get<std::uint64_t>();
  }
  if (raw.contains("log_base")) c.log_base = parse_enum(raw["log_base"], "log_base", &parse_log_base);
  if (raw.contains("format")) c.format = parse_enum(raw["format"], "format", &parse_format);
  if (raw.contains("out")) c.out = as_string(raw["out"], "out");
  if (raw.contains("workers")) c.workers = static_cast<unsigned>(int_in("workers", 1, 1024));
  if (raw.contains("penalty")) {
    c.penalty = as_number(raw["penalty"], "penalty");
    if (c.penalty < 0.0) throw ConfigError("penalty", "must be >= 0");
  }
  if (raw.contains("mode")) c.mode = parse_enum(raw["mode"], "mode", &parse_nnc_mode);
  if (raw.contains("destination_quantizes")) {
    c.destination_quantizes = as_bool(raw["destination_quantizes"], "destination_quantizes");
  }
  if (raw.contains("line_gains")) {
    c.line_gains = as_list(raw["line_gains"], "line_gains", [](const json& v, const std::string& key) {
      const double g = as_number(v, key);
      if (g < 0.0) throw ConfigError(key, "squared gains must be >= 0");
      return g;
    });
    const int n = static_cast<int>(c.line_gains.size());
    if (raw.contains("D") && c.D != n) {
      throw ConfigError("line_gains", fmt::format("has {} entries but D = {}", n, c.D));
    }
    c.D = n;
  }
  if (c.subcommand == Subcommand::line && !c.q &&
      std::find(c.q_policy.begin(), c.q_policy.end(), QPolicy::optimized) != c.q_policy.end()) {
    throw ConfigError("q_policy", "optimized is not supported by the line subcommand");
  }
  return c;
}

ExperimentConfig validate_config(const std::string& raw_json) {
  if (raw_json.find_first_not_of(" \t\r\n") == std::string::npos) {
    return validate_config(json::object());
  }
  json doc;
  try {
    doc = json::parse(raw_json);
  } catch (const json::parse_error& e) {
    throw ConfigError("<root>", std::string("invalid JSON: ") + e.what());
  }
  return validate_config(doc);
}

json config_echo(const ExperimentConfig& c) {
  json policies = json::array();
  for (QPolicy p : c.q_policy) policies.push_back(to_string(p));
  json doc{{"subcommand", to_string(c.subcommand)},
           {"K", c.K},
           {"D", c.D},
           {"D_list", c.D_list},
           {"snr", c.snr},
           {"q_policy", policies},
           {"num_samples", c.num_samples},
           {"seed", c.seed},
           {"log_base", to_string(c.log_base)},
           {"format", to_string(c.format)},
           {"penalty", c.penalty},
           {"mode", to_string(c.mode)},
           {"destination_quantizes", c.destination_quantizes}};
  if (c.q) doc["q"] = *c.q;
  if (!c.q_grid.empty()) doc["q_grid"] = c.q_grid;
  if (!c.line_gains.empty()) doc["line_gains"] = c.line_gains;
  return doc;
}

int run(const ExperimentConfig& config, std::ostream& out, std::ostream& err) {
  switch (config.subcommand) {
    case Subcommand::capacity: return run_capacity(config, out);
    case Subcommand::mincut: return run_mincut(config, out);
    case Subcommand::rate: return run_rate(config, out, err);
    case Subcommand::sweep: return run_sweep(config, out);
    case Subcommand::verify: return run_verify(config, out, err);
    case Subcommand::line: return run_line(config, out);
  }
  return 2;
}

}  // namespace relaynet

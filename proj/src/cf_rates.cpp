#include "relaynet/cf_rates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <fmt/core.h>

namespace relaynet {

namespace {

double log_in(double x, LogBase base) {
  return base == LogBase::bits ? std::log2(x) : std::log(x);
}

double per_relay_penalty(double q) { return std::log1p(1.0 / q); }

void require_positive_q(double q) {
  if (!std::isfinite(q) || !(q > 0.0)) {
    throw std::invalid_argument(fmt::format("q must be > 0, got {}", q));
  }
}

void require_snr_match(const CapacityTable& table, double want, const char* what) {
  if (std::abs(table.snr() - want) > 1e-12 * std::max(1.0, std::abs(want))) {
    throw std::invalid_argument(
        fmt::format("{} table is at snr {} but {} is required", what, table.snr(), want));
  }
}

}  // namespace

void QuantizationScheme::validate() const { require_positive_q(q); }

QuantizationScheme QuantizationScheme::depth_scaled(int D) {
  if (D < 1) throw std::invalid_argument("D must be >= 1");
  if (D == 1) return {1.0, false};
  return {static_cast<double>(D - 1), true};
}

std::string to_string(NncMode mode) {
  return mode == NncMode::split_bound ? "split_bound" : "per_cut_exact";
}

NncMode parse_nnc_mode(const std::string& text) {
  if (text == "per_cut_exact") return NncMode::per_cut_exact;
  if (text == "split_bound") return NncMode::split_bound;
  throw std::invalid_argument("mode must be per_cut_exact or split_bound, got \"" + text + "\"");
}

std::string to_string(QPolicy policy) {
  switch (policy) {
    case QPolicy::fixed_1: return "fixed_1";
    case QPolicy::D_minus_1: return "D_minus_1";
    case QPolicy::optimized: return "optimized";
  }
  return "?";
}

QPolicy parse_q_policy(const std::string& text) {
  if (text == "fixed_1") return QPolicy::fixed_1;
  if (text == "D_minus_1") return QPolicy::D_minus_1;
  if (text == "optimized") return QPolicy::optimized;
  throw std::invalid_argument("q policy must be fixed_1, D_minus_1 or optimized, got \"" + text +
                              "\"");
}

std::string to_string(LineCuts mode) {
  return mode == LineCuts::all_cuts ? "all_cuts" : "simple_cuts";
}

double degraded_snr(const NetworkParams& params, const QuantizationScheme& scheme) {
  scheme.validate();
  return params.snr() / (1.0 + scheme.q);
}

double penalty_bound(const NetworkParams& params, const QuantizationScheme& scheme) {
  params.validate();
  scheme.validate();
  return static_cast<double>(params.K) * static_cast<double>(params.D - 1) *
         per_relay_penalty(scheme.q);
}

NncBound nnc_lower_bound(const NetworkParams& params, const QuantizationScheme& scheme,
                         const CapacityTable& degraded, const CapacityTable& full, NncMode mode) {
  params.validate();
  scheme.validate();
  require_snr_match(degraded, degraded_snr(params, scheme), "degraded");
  require_snr_match(full, params.snr(), "full-snr");

  const HopTables tables(degraded, scheme.destination_quantizes ? degraded : full);
  NncBound out;
  if (mode == NncMode::per_cut_exact) {
    const auto best = min_cut_dp(params.K, params.D, tables, per_relay_penalty(scheme.q));
    out.unclamped = best.value;
    out.argmin = best.argmin;
  } else {
    const auto best = min_cut_dp(params.K, params.D, tables, 0.0);
    out.unclamped = best.value - penalty_bound(params, scheme);
    out.argmin = best.argmin;
  }
  out.std_error = cut_value(out.argmin, params.K, params.D, tables).std_error;
  out.rate = out.unclamped;
  if (out.unclamped < 0.0) {
    out.rate = 0.0;
    out.clamped = true;
    out.diagnostic = fmt::format(
        "quantization penalty exceeds the cut term (raw rate {:.6g} nats); reported rate clamped "
        "to 0",
        out.unclamped);
  }
  return out;
}

TableCache::TableCache(int max_dim, std::uint64_t num_samples, std::uint64_t seed,
                       TableOptions options)
    : max_dim_(max_dim), num_samples_(num_samples), seed_(seed), options_(options) {
  if (max_dim < 1) throw std::invalid_argument("max_dim must be >= 1");
  if (num_samples == 0) throw std::invalid_argument("num_samples must be >= 1");
}

const CapacityTable& TableCache::at(double snr) {
  auto it = tables_.find(snr);
  if (it == tables_.end()) {
    it = tables_
             .emplace(snr, std::make_unique<CapacityTable>(
                               build_capacity_table(max_dim_, snr, num_samples_, seed_, options_)))
             .first;
  }
  return *it->second;
}

GapConstants gap_constants(int K, int D, LogBase base) {
  if (K < 1 || D < 1) throw std::invalid_argument("K and D must be >= 1");
  const double k = K;
  const double unit = base == LogBase::bits ? std::numbers::log2e : 1.0;
  return {k * log_in(D, base) + k * unit, 1.3 * k * D, 7.0 * k * k * k + 5.0 * k * log_in(k, base)};
}

RateReport rate_report(const NetworkParams& params, const QuantizationScheme& scheme,
                       TableCache& tables, NncMode mode) {
  params.validate();
  scheme.validate();
  if (tables.max_dim() < params.K) {
    throw std::invalid_argument("table cache does not cover K");
  }
  const auto& full = tables.at(params.snr());
  const auto& degraded = tables.at(degraded_snr(params, scheme));
  const auto& upper = full.at(params.K, params.K);
  const auto lower = nnc_lower_bound(params, scheme, degraded, full, mode);
  const auto constants = gap_constants(params.K, params.D, params.log_base);
  const auto base = params.log_base;

  RateReport r;
  r.K = params.K;
  r.D = params.D;
  r.snr = params.snr();
  r.q = scheme.q;
  r.destination_quantizes = scheme.destination_quantizes;
  r.log_base = base;
  r.upper = to_base(upper.mean, base);
  r.lower = to_base(lower.rate, base);
  r.gap = to_base(upper.mean - lower.rate, base);
  r.thm_bound = constants.log_depth;
  r.prior_cf_bound = constants.prior_cf;
  r.alignment_bound = constants.alignment;
  r.std_error = to_base(upper.std_error + lower.std_error, base);
  r.lower_clamped = lower.clamped;
  r.lower_argmin = lower.argmin;
  return r;
}

RateReport rate_report(const NetworkParams& params, const QuantizationScheme& scheme,
                       std::uint64_t num_samples, std::uint64_t seed, NncMode mode,
                       const TableOptions& options) {
  TableCache tables(params.K, num_samples, seed, options);
  return rate_report(params, scheme, tables, mode);
}

std::vector<double> default_q_grid(int D) {
  std::vector<double> grid;
  for (double q = 0.125; q <= 128.0; q *= 2.0) grid.push_back(q);
  if (D >= 2) grid.push_back(static_cast<double>(D - 1));
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

QuantizationSearch optimize_quantization(const NetworkParams& params,
                                         const std::vector<double>& q_grid, TableCache& tables,
                                         bool destination_quantizes) {
  params.validate();
  if (q_grid.empty()) throw std::invalid_argument("q_grid must not be empty");
  for (double q : q_grid) require_positive_q(q);
  auto contains = [&](double v) { return std::find(q_grid.begin(), q_grid.end(), v) != q_grid.end(); };
  if (!contains(1.0)) throw std::invalid_argument("q_grid must contain q = 1");
  if (params.D >= 2 && !contains(static_cast<double>(params.D - 1))) {
    throw std::invalid_argument("q_grid must contain q = D-1");
  }

  const auto& full = tables.at(params.snr());
  QuantizationSearch out;
  std::map<double, NncBound> seen;
  auto evaluate = [&](double q) -> const NncBound& {
    auto it = seen.find(q);
    if (it != seen.end()) return it->second;
    const QuantizationScheme scheme{q, destination_quantizes};
    auto bound = nnc_lower_bound(params, scheme, tables.at(degraded_snr(params, scheme)), full,
                                 NncMode::per_cut_exact);
    out.evaluated.emplace_back(q, bound.unclamped);
    return seen.emplace(q, std::move(bound)).first->second;
  };
  // Strictly better, or equal at a smaller q.
  auto better = [&](double q, double incumbent) {
    const double a = seen.at(q).unclamped;
    const double b = seen.at(incumbent).unclamped;
    return a > b || (a == b && q < incumbent);
  };

  std::vector<double> grid = q_grid;
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  double incumbent = grid.front();
  for (double q : grid) {
    evaluate(q);
    if (better(q, incumbent)) incumbent = q;
  }

  for (int round = 0; round < 3; ++round) {
    auto right = seen.upper_bound(incumbent);
    auto here = seen.find(incumbent);
    const double left_q = here == seen.begin() ? 0.0 : std::prev(here)->first;
    std::vector<double> candidates{0.5 * (left_q + incumbent)};
    if (right != seen.end()) {
      candidates.push_back(0.5 * (incumbent + right->first));
    } else {
      candidates.push_back(incumbent + 0.5 * (incumbent - left_q));
    }
    for (double q : candidates) {
      if (!(q > 0.0)) continue;
      evaluate(q);
      if (better(q, incumbent)) incumbent = q;
    }
  }

  out.q_star = incumbent;
  out.rate = seen.at(incumbent).unclamped;
  out.std_error = seen.at(incumbent).std_error;
  return out;
}

std::vector<TrendRow> gap_trend(int K, const std::vector<int>& depths, double snr,
                                const std::vector<QPolicy>& policies, TableCache& tables,
                                LogBase base, const std::vector<double>& q_grid) {
  if (depths.empty()) throw std::invalid_argument("depth sweep must not be empty");
  if (policies.empty()) throw std::invalid_argument("q policy list must not be empty");
  std::vector<TrendRow> rows;
  for (int D : depths) {
    const NetworkParams params{K, D, snr, 1.0, base};
    params.validate();
    for (QPolicy policy : policies) {
      QuantizationScheme scheme;
      switch (policy) {
        case QPolicy::fixed_1: scheme = QuantizationScheme::noise_level(); break;
        case QPolicy::D_minus_1: scheme = QuantizationScheme::depth_scaled(D); break;
        case QPolicy::optimized: {
          auto grid = q_grid.empty() ? default_q_grid(D) : q_grid;
          grid.push_back(1.0);
          if (D >= 2) grid.push_back(static_cast<double>(D - 1));
          scheme = {optimize_quantization(params, grid, tables).q_star, true};
          break;
        }
      }
      rows.push_back({policy, rate_report(params, scheme, tables)});
    }
  }
  return rows;
}

// --- line network --------------------------------------------------------

void LineNetwork::validate() const {
  if (gains.empty()) throw std::invalid_argument("line network needs at least one link");
  for (const auto& g : gains) {
    if (!std::isfinite(g.real()) || !std::isfinite(g.imag())) {
      throw std::invalid_argument("line gains must be finite");
    }
  }
  if (!std::isfinite(power) || power < 0.0) throw std::invalid_argument("power must be >= 0");
  if (!std::isfinite(noise_var) || noise_var <= 0.0) {
    throw std::invalid_argument("noise_var must be > 0");
  }
}

LineNetwork LineNetwork::from_power_gains(const std::vector<double>& squared_gains, double power,
                                          double noise_var) {
  LineNetwork line{{}, power, noise_var};
  for (double g2 : squared_gains) {
    if (!(g2 >= 0.0)) throw std::invalid_argument("squared gains must be >= 0");
    line.gains.emplace_back(std::sqrt(g2), 0.0);
  }
  return line;
}

double line_capacity(const LineNetwork& line) {
  line.validate();
  double best = std::numeric_limits<double>::infinity();
  for (const auto& h : line.gains) {
    best = std::min(best, std::log1p(std::norm(h) * line.power / line.noise_var));
  }
  return best;
}

namespace {

// Capacity of link i (0-based) as seen through the receiver's quantizer.
double degraded_link(const LineNetwork& line, int i, double q, bool destination_quantizes) {
  const bool into_destination = i + 1 == line.depth();
  const double noise = (into_destination && !destination_quantizes) ? 1.0 : 1.0 + q;
  return std::log1p(std::norm(line.gains[static_cast<std::size_t>(i)]) * line.power /
                    (line.noise_var * noise));
}

}  // namespace

std::vector<double> line_simple_cut_values(const LineNetwork& line, double q,
                                           bool destination_quantizes) {
  line.validate();
  require_positive_q(q);
  const double pen = per_relay_penalty(q);
  std::vector<double> values;
  values.reserve(line.gains.size());
  for (int i = 0; i < line.depth(); ++i) {
    values.push_back(degraded_link(line, i, q, destination_quantizes) - i * pen);
  }
  return values;
}

double line_nnc_rate(const LineNetwork& line, double q, LineCuts mode,
                     bool destination_quantizes) {
  const auto simple = line_simple_cut_values(line, q, destination_quantizes);
  if (mode == LineCuts::simple_cuts) return *std::min_element(simple.begin(), simple.end());

  // Node-position DP over (node on source side?, relays on source side so far),
  // keeping the smallest crossing-link sum. The penalty is applied once per
  // count at the end so every cut is scored exactly like its simple-cut form.
  const int D = line.depth();
  const double pen = per_relay_penalty(q);
  const double inf = std::numeric_limits<double>::infinity();
  const auto width = static_cast<std::size_t>(D);
  std::vector<double> in(width, inf), out(width, inf);
  in[0] = 0.0;  // the source is on the source side
  for (int j = 1; j <= D; ++j) {
    const double link = degraded_link(line, j - 1, q, destination_quantizes);
    std::vector<double> next_in(width, inf), next_out(width, inf);
    for (std::size_t c = 0; c < width; ++c) {
      // node j off the source side; crossing if node j-1 was on it
      next_out[c] = std::min(out[c], in[c] == inf ? inf : in[c] + link);
      if (j < D && c + 1 < width) next_in[c + 1] = std::min(in[c], out[c]);
    }
    in.swap(next_in);
    out.swap(next_out);
  }
  double best = inf;
  for (std::size_t c = 0; c < width; ++c) {
    if (out[c] != inf) best = std::min(best, out[c] - static_cast<double>(c) * pen);
  }
  return best;
}

}  // namespace relaynet

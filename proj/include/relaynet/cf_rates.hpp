// Compress-and-forward (noisy network coding) rates for the layered network
// and the line network, as a function of the relay quantization level.
//
// A relay quantizes Y to Y + Z_q with Z_q ~ CN(0, q * noise_var). Across a cut
// this lowers the per-hop snr to snr / (1 + q) and costs log(1 + 1/q) nats for
// every relay on the source side.

#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "relaynet/mimo_capacity.hpp"
#include "relaynet/network_model.hpp"

namespace relaynet {

struct QuantizationScheme {
  double q = 1.0;
  bool destination_quantizes = true;

  void validate() const;

  /// q = D - 1 with destination quantization. A single-hop network has no
  /// relays and nothing to quantize, so D = 1 maps to an unquantized
  /// destination (q is then irrelevant and kept at 1).
  static QuantizationScheme depth_scaled(int D);
  /// Quantization at the noise level, q = 1.
  static QuantizationScheme noise_level() { return {1.0, true}; }
};

enum class NncMode { per_cut_exact, split_bound };
enum class QPolicy { fixed_1, D_minus_1, optimized };

std::string to_string(NncMode mode);
NncMode parse_nnc_mode(const std::string& text);
std::string to_string(QPolicy policy);
QPolicy parse_q_policy(const std::string& text);

double degraded_snr(const NetworkParams& params, const QuantizationScheme& scheme);

/// K (D - 1) log(1 + 1/q) nats: the quantization penalty with every relay on
/// the source side, which bounds the penalty of any cut.
double penalty_bound(const NetworkParams& params, const QuantizationScheme& scheme);

struct NncBound {
  double rate = 0.0;       // clamped at 0
  double unclamped = 0.0;  // the raw objective, possibly negative
  double std_error = 0.0;
  CutProfile argmin;
  bool clamped = false;
  std::string diagnostic;
};

/// `degraded` must be built at degraded_snr(params, scheme) and `full` at
/// params.snr(); the full table only enters through the final hop when the
/// destination does not quantize. Both tables should share a seed.
NncBound nnc_lower_bound(const NetworkParams& params, const QuantizationScheme& scheme,
                         const CapacityTable& degraded, const CapacityTable& full, NncMode mode);

/// Tables at several snr values over one shared draw pool (same seed, same
/// sample count), built on first use.
class TableCache {
 public:
  TableCache(int max_dim, std::uint64_t num_samples, std::uint64_t seed, TableOptions options = {});

  const CapacityTable& at(double snr);
  int max_dim() const { return max_dim_; }
  std::uint64_t num_samples() const { return num_samples_; }
  std::uint64_t seed() const { return seed_; }

 private:
  int max_dim_;
  std::uint64_t num_samples_;
  std::uint64_t seed_;
  TableOptions options_;
  std::map<double, std::unique_ptr<CapacityTable>> tables_;
};

struct GapConstants {
  double log_depth = 0.0;  // K log D + K
  double prior_cf = 0.0;   // 1.3 K D, base-agnostic
  double alignment = 0.0;  // 7 K^3 + 5 K log K
};
GapConstants gap_constants(int K, int D, LogBase base);

struct RateReport {
  int K = 0;
  int D = 0;
  double snr = 0.0;
  double q = 0.0;
  bool destination_quantizes = true;
  LogBase log_base = LogBase::nats;
  double upper = 0.0;
  double lower = 0.0;
  double gap = 0.0;
  double thm_bound = 0.0;
  double prior_cf_bound = 0.0;
  double alignment_bound = 0.0;
  double std_error = 0.0;
  bool lower_clamped = false;
  CutProfile lower_argmin;
};

/// Rates are reported in params.log_base. std_error adds the standard errors of
/// the upper and lower bounds.
RateReport rate_report(const NetworkParams& params, const QuantizationScheme& scheme,
                       TableCache& tables, NncMode mode = NncMode::per_cut_exact);
RateReport rate_report(const NetworkParams& params, const QuantizationScheme& scheme,
                       std::uint64_t num_samples, std::uint64_t seed,
                       NncMode mode = NncMode::per_cut_exact, const TableOptions& options = {});

struct QuantizationSearch {
  double q_star = 0.0;
  double rate = 0.0;  // unclamped per-cut objective at q_star, nats
  double std_error = 0.0;
  std::vector<std::pair<double, double>> evaluated;  // (q, rate) in evaluation order
};

/// Geometric grid 1/8 .. 128 plus D - 1.
std::vector<double> default_q_grid(int D);

/// Maximizes the exact per-cut rate over q_grid, then refines around the
/// incumbent for three rounds by bisecting toward its nearest evaluated
/// neighbours. Ties go to the smaller q. The grid must contain 1 and, for
/// D >= 2, D - 1.
QuantizationSearch optimize_quantization(const NetworkParams& params,
                                         const std::vector<double>& q_grid, TableCache& tables,
                                         bool destination_quantizes = true);

struct TrendRow {
  QPolicy policy = QPolicy::fixed_1;
  RateReport report;
};

/// One row per (D, policy), all at one snr over a single draw pool.
std::vector<TrendRow> gap_trend(int K, const std::vector<int>& depths, double snr,
                                const std::vector<QPolicy>& policies, TableCache& tables,
                                LogBase base = LogBase::nats,
                                const std::vector<double>& q_grid = {});

// --- line network --------------------------------------------------------

struct LineNetwork {
  std::vector<std::complex<double>> gains;  // h_1..h_D, link i feeds node i
  double power = 1.0;
  double noise_var = 1.0;

  int depth() const { return static_cast<int>(gains.size()); }
  void validate() const;
  static LineNetwork from_power_gains(const std::vector<double>& squared_gains, double power,
                                      double noise_var);
};

enum class LineCuts { simple_cuts, all_cuts };
std::string to_string(LineCuts mode);

/// min_i log(1 + |h_i|^2 P / noise_var), nats.
double line_capacity(const LineNetwork& line);

/// Value of each simple cut {0..i}, i = 0..D-1: the degraded capacity of link
/// i+1 minus i log(1 + 1/q). Nats.
std::vector<double> line_simple_cut_values(const LineNetwork& line, double q,
                                           bool destination_quantizes = true);

double line_nnc_rate(const LineNetwork& line, double q, LineCuts mode,
                     bool destination_quantizes = true);

}  // namespace relaynet

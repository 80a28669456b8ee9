// Ergodic capacity of i.i.d. Rayleigh MIMO channels.
//
// C(m, n) = E[log det(I + snr * H H^H)] for an m x n matrix H with i.i.d.
// CN(0, 1) entries. All rates are in nats internally; `to_base` converts for
// reporting.

#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace relaynet {

using ComplexMatrix = Eigen::MatrixXcd;

enum class LogBase { nats, bits };

double to_base(double nats, LogBase base);
std::string to_string(LogBase base);
LogBase parse_log_base(const std::string& text);

struct ChannelSample {
  ComplexMatrix entries;
  std::uint32_t hop_index = 0;
};

/// Draw `draw_index` of an m x n Rayleigh matrix, deterministic in
/// (seed, hop_index, draw_index). The draw for (m, n) with m > n is the
/// conjugate transpose of the (n, m) draw, and within one orientation smaller
/// draws are leading submatrices of larger ones.
ChannelSample sample_channel(int rows, int cols, std::uint64_t seed, std::uint64_t draw_index,
                             std::uint32_t hop_index = 0);

/// log det(I + snr * H H^H) via Cholesky of the Hermitian positive definite
/// Gram matrix. A failed factorization is retried once with 1e-12 added to the
/// diagonal. Gram matrices whose diagonal exceeds 1e6, or that still fail,
/// use the singular values of H instead.
/// Throws std::domain_error on non-finite input.
double logdet_capacity(const ComplexMatrix& h, double snr, LogBase base = LogBase::nats);

/// Diagnostics since process start: Cholesky jitter retries and SVD fallbacks.
std::uint64_t cholesky_jitter_retries();
std::uint64_t svd_fallbacks();

struct EstimatorOptions {
  unsigned workers = 1;
  std::uint32_t hop_index = 0;
};

struct CapacityEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::uint64_t num_samples = 0;
  int rows = 0;
  int cols = 0;
  double snr = 0.0;
};

CapacityEstimate estimate_ergodic_capacity(int rows, int cols, double snr, std::uint64_t num_samples,
                                           std::uint64_t seed, const EstimatorOptions& options = {});

/// Independent quadrature for C(1, 1): integral of log(1 + snr x) e^{-x} over
/// [0, inf), absolute tolerance 1e-10.
double siso_capacity_oracle(double snr);

struct TableOptions {
  unsigned workers = 1;
  bool keep_draws = false;
  std::uint32_t hop_index = 0;
};

/// Memoized C(m, n) for 0 <= m, n <= max_dim at one snr. All entries are cut
/// from the same max_dim x max_dim draws (common random numbers): entry (m, n)
/// averages the log-det of the leading min(m,n) x max(m,n) block, so (m, n)
/// and (n, m) are identical and entries are monotone draw by draw. Tables
/// built with the same seed at different snr share the draws as well.
class CapacityTable {
 public:
  CapacityTable(int max_dim, double snr, std::uint64_t num_samples, std::uint64_t seed,
                std::vector<CapacityEstimate> entries, std::vector<std::complex<double>> draws = {});

  int max_dim() const { return max_dim_; }
  double snr() const { return snr_; }
  std::uint64_t num_samples() const { return num_samples_; }
  std::uint64_t seed() const { return seed_; }

  const CapacityEstimate& at(int rows, int cols) const;
  double mean(int rows, int cols) const { return at(rows, cols).mean; }
  const std::vector<CapacityEstimate>& entries() const { return entries_; }

  bool has_draws() const { return !draws_.empty(); }
  /// Shared draw `index` as a max_dim x max_dim matrix. Requires has_draws().
  ComplexMatrix draw(std::uint64_t index) const;

 private:
  int max_dim_;
  double snr_;
  std::uint64_t num_samples_;
  std::uint64_t seed_;
  std::vector<CapacityEstimate> entries_;
  std::vector<std::complex<double>> draws_;
};

CapacityTable build_capacity_table(int max_dim, double snr, std::uint64_t num_samples,
                                   std::uint64_t seed, const TableOptions& options = {});

}  // namespace relaynet

#include "relaynet/mimo_capacity.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <boost/math/quadrature/exp_sinh.hpp>

#include "parallel.hpp"
#include "relaynet/philox.hpp"

namespace relaynet {

namespace {

std::atomic<std::uint64_t> g_jitter_retries{0};
std::atomic<std::uint64_t> g_svd_fallbacks{0};

constexpr double kCholeskyJitter = 1e-12;
constexpr double kCholeskyScaleLimit = 1e6;
constexpr int kMaxCoordinateDim = 1 << 16;

void require_snr(double snr) {
  if (!(snr >= 0.0) || !std::isfinite(snr)) {
    throw std::invalid_argument("snr must be finite and >= 0");
  }
}

void require_dims(int rows, int cols) {
  if (rows < 0 || cols < 0) throw std::invalid_argument("matrix dimensions must be >= 0");
  if (rows >= kMaxCoordinateDim || cols >= kMaxCoordinateDim) {
    throw std::invalid_argument("matrix dimensions must be < 65536");
  }
}

void fill_draw(ComplexMatrix& h, std::uint64_t seed, std::uint32_t hop, std::uint64_t draw) {
  DrawCoordinate at{seed, hop, draw, 0, 0};
  for (Eigen::Index c = 0; c < h.cols(); ++c) {
    at.col = static_cast<std::uint32_t>(c);
    for (Eigen::Index r = 0; r < h.rows(); ++r) {
      at.row = static_cast<std::uint32_t>(r);
      h(r, c) = complex_gaussian(at);
    }
  }
}

// The canonical m x n draw is the leading min x max block of the coordinate
// grid, transposed-conjugated when m > n. C(m, n) and C(n, m) therefore see
// the same samples, and growing either dimension only adds rows or columns.
Eigen::Index short_side(int rows, int cols) { return std::min(rows, cols); }
Eigen::Index long_side(int rows, int cols) { return std::max(rows, cols); }

template <typename Derived>
double logdet_nats(const Eigen::MatrixBase<Derived>& h, double snr) {
  if (!h.allFinite()) throw std::domain_error("channel matrix has non-finite entries");
  const Eigen::Index m = h.rows();
  const Eigen::Index n = h.cols();
  if (m == 0 || n == 0 || snr == 0.0) return 0.0;

  ComplexMatrix gram = ComplexMatrix::Identity(m, m);
  gram.noalias() += snr * (h * h.adjoint());
  if (!gram.allFinite()) throw std::domain_error("Gram matrix overflowed");

  // Cholesky pivots carry absolute error ~ eps * max diag, so past
  // kCholeskyScaleLimit the unit floor of I + snr H H^H is not resolved.
  if (gram.diagonal().real().maxCoeff() <= kCholeskyScaleLimit) {
    Eigen::LLT<ComplexMatrix> llt(gram);
    if (llt.info() != Eigen::Success) {
      g_jitter_retries.fetch_add(1, std::memory_order_relaxed);
      gram.diagonal().array() += kCholeskyJitter;
      llt.compute(gram);
    }
    if (llt.info() == Eigen::Success) {
      const auto& l = llt.matrixLLT();
      double acc = 0.0;
      for (Eigen::Index i = 0; i < m; ++i) acc += std::log(l(i, i).real());
      return 2.0 * acc;
    }
  }

  // sum log(1 + snr s_i^2) over the singular values of H.
  g_svd_fallbacks.fetch_add(1, std::memory_order_relaxed);
  Eigen::JacobiSVD<ComplexMatrix> svd(h);
  double acc = 0.0;
  for (double s : svd.singularValues()) acc += std::log1p(snr * s * s);
  if (!std::isfinite(acc)) throw std::domain_error("log-det is not finite");
  return acc;
}

}  // namespace

double to_base(double nats, LogBase base) {
  return base == LogBase::bits ? nats / std::numbers::ln2 : nats;
}

std::string to_string(LogBase base) { return base == LogBase::bits ? "bits" : "nats"; }

LogBase parse_log_base(const std::string& text) {
  if (text == "nats") return LogBase::nats;
  if (text == "bits") return LogBase::bits;
  throw std::invalid_argument("log base must be \"nats\" or \"bits\", got \"" + text + "\"");
}

ChannelSample sample_channel(int rows, int cols, std::uint64_t seed, std::uint64_t draw_index,
                             std::uint32_t hop_index) {
  require_dims(rows, cols);
  ComplexMatrix grid(short_side(rows, cols), long_side(rows, cols));
  fill_draw(grid, seed, hop_index, draw_index);
  if (rows > cols) return {grid.adjoint(), hop_index};
  return {std::move(grid), hop_index};
}

double logdet_capacity(const ComplexMatrix& h, double snr, LogBase base) {
  require_snr(snr);
  return to_base(logdet_nats(h, snr), base);
}

std::uint64_t cholesky_jitter_retries() { return g_jitter_retries.load(); }
std::uint64_t svd_fallbacks() { return g_svd_fallbacks.load(); }

CapacityEstimate estimate_ergodic_capacity(int rows, int cols, double snr, std::uint64_t num_samples,
                                           std::uint64_t seed, const EstimatorOptions& options) {
  require_dims(rows, cols);
  require_snr(snr);
  if (num_samples == 0) throw std::invalid_argument("num_samples must be >= 1");

  const std::uint64_t n_chunks = (num_samples + detail::kChunkDraws - 1) / detail::kChunkDraws;
  std::vector<detail::RunningStats> partial(n_chunks);
  detail::parallel_for(n_chunks, options.workers, [&](std::uint64_t chunk) {
    ComplexMatrix h(short_side(rows, cols), long_side(rows, cols));
    const std::uint64_t begin = chunk * detail::kChunkDraws;
    const std::uint64_t end = std::min(num_samples, begin + detail::kChunkDraws);
    for (std::uint64_t d = begin; d < end; ++d) {
      fill_draw(h, seed, options.hop_index, d);
      partial[chunk].add(logdet_nats(h.topLeftCorner(h.rows(), h.cols()), snr));
    }
  });

  detail::RunningStats total;
  for (const auto& p : partial) total.merge(p);
  return {total.mean(), total.std_error(), num_samples, rows, cols, snr};
}

double siso_capacity_oracle(double snr) {
  require_snr(snr);
  if (snr == 0.0) return 0.0;
  boost::math::quadrature::exp_sinh<double> integrator;
  auto integrand = [snr](double x) { return std::log1p(snr * x) * std::exp(-x); };
  double error = 0.0;
  const double value = integrator.integrate(integrand, 1e-13, &error);
  if (error > 1e-10) throw std::runtime_error("SISO quadrature did not reach 1e-10");
  return value;
}

CapacityTable::CapacityTable(int max_dim, double snr, std::uint64_t num_samples,
                             std::uint64_t seed, std::vector<CapacityEstimate> entries,
                             std::vector<std::complex<double>> draws)
    : max_dim_(max_dim),
      snr_(snr),
      num_samples_(num_samples),
      seed_(seed),
      entries_(std::move(entries)),
      draws_(std::move(draws)) {
  if (max_dim_ < 1) throw std::invalid_argument("max_dim must be >= 1");
  const auto side = static_cast<std::size_t>(max_dim_ + 1);
  if (entries_.size() != side * side) {
    throw std::invalid_argument("capacity table needs (max_dim+1)^2 entries");
  }
  if (!draws_.empty() &&
      draws_.size() != num_samples_ * static_cast<std::size_t>(max_dim_ * max_dim_)) {
    throw std::invalid_argument("shared draw pool has the wrong size");
  }
}

const CapacityEstimate& CapacityTable::at(int rows, int cols) const {
  if (rows < 0 || cols < 0 || rows > max_dim_ || cols > max_dim_) {
    throw std::out_of_range("capacity table covers dims up to " + std::to_string(max_dim_) +
                            ", requested (" + std::to_string(rows) + "," +
                            std::to_string(cols) + ")");
  }
  return entries_[static_cast<std::size_t>(rows * (max_dim_ + 1) + cols)];
}

ComplexMatrix CapacityTable::draw(std::uint64_t index) const {
  if (!has_draws()) throw std::logic_error("capacity table was built without shared draws");
  if (index >= num_samples_) throw std::out_of_range("draw index out of range");
  const auto k = static_cast<Eigen::Index>(max_dim_);
  return Eigen::Map<const ComplexMatrix>(draws_.data() + index * static_cast<std::uint64_t>(k * k),
                                         k, k);
}

CapacityTable build_capacity_table(int max_dim, double snr, std::uint64_t num_samples,
                                   std::uint64_t seed, const TableOptions& options) {
  if (max_dim < 1) throw std::invalid_argument("max_dim must be >= 1");
  require_dims(max_dim, max_dim);
  require_snr(snr);
  if (num_samples == 0) throw std::invalid_argument("num_samples must be >= 1");

  const int side = max_dim + 1;
  const auto n_entries = static_cast<std::size_t>(side * side);
  const auto k = static_cast<Eigen::Index>(max_dim);
  const std::uint64_t n_chunks = (num_samples + detail::kChunkDraws - 1) / detail::kChunkDraws;

  std::vector<std::complex<double>> pool;
  if (options.keep_draws) pool.resize(num_samples * static_cast<std::uint64_t>(k * k));

  std::vector<std::vector<detail::RunningStats>> partial(
      n_chunks, std::vector<detail::RunningStats>(n_entries));
  detail::parallel_for(n_chunks, options.workers, [&](std::uint64_t chunk) {
    ComplexMatrix h(k, k);
    auto& stats = partial[chunk];
    const std::uint64_t begin = chunk * detail::kChunkDraws;
    const std::uint64_t end = std::min(num_samples, begin + detail::kChunkDraws);
    for (std::uint64_t d = begin; d < end; ++d) {
      fill_draw(h, seed, options.hop_index, d);
      if (options.keep_draws) {
        Eigen::Map<ComplexMatrix>(pool.data() + d * static_cast<std::uint64_t>(k * k), k, k) = h;
      }
      for (int m = 0; m <= max_dim; ++m) {
        for (int n = m; n <= max_dim; ++n) {
          const double v = logdet_nats(h.topLeftCorner(m, n), snr);
          stats[static_cast<std::size_t>(m * side + n)].add(v);
          if (n != m) stats[static_cast<std::size_t>(n * side + m)].add(v);
        }
      }
    }
  });

  std::vector<CapacityEstimate> entries(n_entries);
  for (int m = 0; m <= max_dim; ++m) {
    for (int n = 0; n <= max_dim; ++n) {
      const auto idx = static_cast<std::size_t>(m * side + n);
      detail::RunningStats total;
      for (const auto& chunk : partial) total.merge(chunk[idx]);
      entries[idx] = {total.mean(), total.std_error(), num_samples, m, n, snr};
    }
  }
  return CapacityTable(max_dim, snr, num_samples, seed, std::move(entries), std::move(pool));
}

}  // namespace relaynet

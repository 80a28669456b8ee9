#include "relaynet/network_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "parallel.hpp"

namespace relaynet {

namespace {

void require_table_covers(const CapacityTable& table, int K) {
  if (table.max_dim() < K) {
    throw std::invalid_argument("capacity table covers dims up to " +
                                std::to_string(table.max_dim()) + " but K = " + std::to_string(K));
  }
}

void require_matching_snr(const CapacityTable& table, const NetworkParams& params) {
  const double want = params.snr();
  if (std::abs(table.snr() - want) > 1e-12 * std::max(1.0, std::abs(want))) {
    throw std::invalid_argument("capacity table snr " + std::to_string(table.snr()) +
                                " does not match network snr " + std::to_string(want));
  }
}

void require_shape(int K, int D, const HopTables& tables) {
  if (K < 1) throw std::invalid_argument("K must be >= 1");
  if (D < 1) throw std::invalid_argument("D must be >= 1");
  require_table_covers(tables.inner, K);
  require_table_covers(tables.last, K);
}

// Cost of hop `hop` when M_hop = from and M_{hop+1} = to. The node penalty is
// charged on entering a relay-layer state.
class HopCost {
 public:
  HopCost(int K, int D, const HopTables& tables, double penalty)
      : K_(K), D_(D), tables_(tables), penalty_(penalty) {}

  double operator()(int hop, int from, int to) const {
    const bool last = hop == D_ - 1;
    const double block = (last ? tables_.last : tables_.inner).mean(K_ - to, from);
    return last ? block : block - penalty_ * to;
  }

 private:
  int K_;
  int D_;
  const HopTables& tables_;
  double penalty_;
};

std::uint64_t profile_count(int K, int D) {
  std::uint64_t total = 1;
  for (int i = 0; i < D - 1; ++i) {
    total *= static_cast<std::uint64_t>(K + 1);
    if (total > kBruteForceLimit) return total;
  }
  return total;
}

}  // namespace

void NetworkParams::validate() const {
  if (K < 1) throw std::invalid_argument("K must be >= 1");
  if (D < 1) throw std::invalid_argument("D must be >= 1");
  if (!std::isfinite(power) || power < 0.0) throw std::invalid_argument("power must be >= 0");
  if (!std::isfinite(noise_var) || noise_var <= 0.0) {
    throw std::invalid_argument("noise_var must be > 0");
  }
  if (!std::isfinite(snr())) throw std::invalid_argument("power / noise_var must be finite");
}

int CutProfile::relays_on_source_side() const {
  int total = 0;
  for (int v : m) total += v;
  return total;
}

CutValue cut_value(const CutProfile& profile, int K, int D, const HopTables& tables) {
  require_shape(K, D, tables);
  if (static_cast<int>(profile.m.size()) != D - 1) {
    throw std::invalid_argument("cut profile has " + std::to_string(profile.m.size()) +
                                " entries, expected D-1 = " + std::to_string(D - 1));
  }
  for (int v : profile.m) {
    if (v < 0 || v > K) throw std::invalid_argument("cut profile entries must lie in [0, K]");
  }

  CutValue out;
  out.profile = profile;
  out.per_block.resize(static_cast<std::size_t>(D));
  auto layer = [&](int i) { return i == 0 ? K : (i == D ? 0 : profile.m[i - 1]); };
  for (int hop = D - 1; hop >= 0; --hop) {
    const auto& table = hop == D - 1 ? tables.last : tables.inner;
    const int rows = K - layer(hop + 1);
    const int cols = layer(hop);
    const auto& est = table.at(rows, cols);
    out.per_block[static_cast<std::size_t>(hop)] = {hop, rows, cols, est.mean, est.std_error};
    out.value = est.mean + out.value;
    out.std_error += est.std_error;
  }
  return out;
}

CutValue cut_value(const CutProfile& profile, const NetworkParams& params,
                   const CapacityTable& table) {
  params.validate();
  require_matching_snr(table, params);
  return cut_value(profile, params.K, params.D, HopTables(table));
}

MinCut min_cut_dp(int K, int D, const HopTables& tables, double node_penalty) {
  require_shape(K, D, tables);
  if (!(node_penalty >= 0.0)) throw std::invalid_argument("node_penalty must be >= 0");
  const HopCost cost(K, D, tables, node_penalty);
  const auto states = static_cast<std::size_t>(K + 1);

  // best[i][a]: cheapest completion from layer i in state a, summed from the
  // destination backwards.
  std::vector<std::vector<double>> best(static_cast<std::size_t>(D + 1),
                                        std::vector<double>(states, 0.0));
  for (int i = D - 1; i >= 0; --i) {
    for (int a = 0; a <= K; ++a) {
      double v = std::numeric_limits<double>::infinity();
      if (i + 1 == D) {
        v = cost(i, a, 0) + best[D][0];
      } else {
        for (int b = 0; b <= K; ++b) v = std::min(v, cost(i, a, b) + best[i + 1][b]);
      }
      best[i][a] = v;
    }
  }

  MinCut out;
  out.value = best[0][K];
  out.argmin.m.reserve(static_cast<std::size_t>(std::max(0, D - 1)));
  int a = K;
  for (int i = 0; i + 1 < D; ++i) {
    for (int b = 0; b <= K; ++b) {
      if (cost(i, a, b) + best[i + 1][b] == best[i][a]) {
        out.argmin.m.push_back(b);
        a = b;
        break;
      }
    }
  }
  return out;
}

MinCut min_cut_dp(const NetworkParams& params, const CapacityTable& table, double node_penalty) {
  params.validate();
  require_matching_snr(table, params);
  return min_cut_dp(params.K, params.D, HopTables(table), node_penalty);
}

MinCut brute_force_min_cut(int K, int D, const HopTables& tables, double node_penalty) {
  require_shape(K, D, tables);
  if (!(node_penalty >= 0.0)) throw std::invalid_argument("node_penalty must be >= 0");
  const std::uint64_t total = profile_count(K, D);
  if (total > kBruteForceLimit) {
    throw std::invalid_argument("brute force refuses (K+1)^(D-1) > 1e6 profiles");
  }
  const HopCost cost(K, D, tables, node_penalty);

  MinCut out{std::numeric_limits<double>::infinity(), {}};
  std::vector<int> m(static_cast<std::size_t>(D - 1), 0);
  for (std::uint64_t index = 0; index < total; ++index) {
    // Enumerate in lexicographic order, first relay layer most significant.
    std::uint64_t rest = index;
    for (int i = D - 2; i >= 0; --i) {
      m[static_cast<std::size_t>(i)] = static_cast<int>(rest % static_cast<std::uint64_t>(K + 1));
      rest /= static_cast<std::uint64_t>(K + 1);
    }
    auto layer = [&](int i) { return i == 0 ? K : (i == D ? 0 : m[i - 1]); };
    double v = 0.0;
    for (int hop = D - 1; hop >= 0; --hop) v = cost(hop, layer(hop), layer(hop + 1)) + v;
    if (v < out.value) {
      out.value = v;
      out.argmin.m = m;
    }
  }
  return out;
}

MinCut brute_force_min_cut(const NetworkParams& params, const CapacityTable& table,
                           double node_penalty) {
  params.validate();
  require_matching_snr(table, params);
  return brute_force_min_cut(params.K, params.D, HopTables(table), node_penalty);
}

double PropertyReport::worst() const {
  return std::max({worst_symmetry, worst_monotonicity, worst_superadditivity});
}

void PropertyReport::merge(const PropertyReport& other) {
  worst_symmetry = std::max(worst_symmetry, other.worst_symmetry);
  worst_monotonicity = std::max(worst_monotonicity, other.worst_monotonicity);
  worst_superadditivity = std::max(worst_superadditivity, other.worst_superadditivity);
  draws_checked += other.draws_checked;
}

PropertyReport check_capacity_properties(const ComplexMatrix& h, double snr, int K) {
  if (K < 1 || h.rows() < K || h.cols() < K) {
    throw std::invalid_argument("property check needs a draw of at least K x K");
  }
  const auto side = static_cast<std::size_t>(K + 1);
  std::vector<double> f(side * side);
  auto at = [&](int x, int y) -> double& { return f[static_cast<std::size_t>(x) * side + y]; };
  for (int x = 0; x <= K; ++x) {
    for (int y = 0; y <= K; ++y) at(x, y) = logdet_capacity(h.topLeftCorner(x, y), snr);
  }

  PropertyReport report;
  report.draws_checked = 1;
  for (int x = 0; x <= K; ++x) {
    for (int y = 0; y <= K; ++y) {
      const double adjoint = logdet_capacity(h.topLeftCorner(x, y).adjoint(), snr);
      report.worst_symmetry = std::max(report.worst_symmetry, std::abs(at(x, y) - adjoint));
      for (int z = x + 1; z <= K; ++z) {
        report.worst_monotonicity = std::max(report.worst_monotonicity, at(x, y) - at(z, y));
      }
      const double bottom = logdet_capacity(h.block(x, 0, K - x, y), snr);
      report.worst_superadditivity =
          std::max(report.worst_superadditivity, at(K, y) - at(x, y) - bottom);
    }
  }
  return report;
}

PropertyReport check_capacity_properties(const CapacityTable& table, int K, unsigned workers) {
  if (!table.has_draws()) {
    throw std::invalid_argument("property check needs a table built with shared draws");
  }
  require_table_covers(table, K);
  const std::uint64_t n = table.num_samples();
  const std::uint64_t n_chunks = (n + detail::kChunkDraws - 1) / detail::kChunkDraws;
  std::vector<PropertyReport> partial(n_chunks);
  detail::parallel_for(n_chunks, workers, [&](std::uint64_t chunk) {
    const std::uint64_t end = std::min(n, (chunk + 1) * detail::kChunkDraws);
    for (std::uint64_t d = chunk * detail::kChunkDraws; d < end; ++d) {
      partial[chunk].merge(check_capacity_properties(table.draw(d), table.snr(), K));
    }
  });
  PropertyReport total;
  for (const auto& p : partial) total.merge(p);
  return total;
}

}  // namespace relaynet

// Layered relay network: K sources, D-1 relay layers of K nodes, and a
// K-antenna destination. Cuts are parameterized by how many relays of each
// layer sit on the source side; under i.i.d. fading that count profile fully
// determines the cut value.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "relaynet/mimo_capacity.hpp"

namespace relaynet {

struct NetworkParams {
  int K = 1;
  int D = 1;
  double power = 1.0;
  double noise_var = 1.0;
  LogBase log_base = LogBase::nats;

  double snr() const { return power / noise_var; }
  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

/// M_1..M_{D-1}: source-side relay count in each relay layer. The source layer
/// is implicitly all in the cut (M_0 = K) and the destination never is (M_D = 0).
struct CutProfile {
  std::vector<int> m;

  int relays_on_source_side() const;
  bool operator==(const CutProfile&) const = default;
  auto operator<=>(const CutProfile&) const = default;
};

struct BlockContribution {
  int hop = 0;
  int rows = 0;  // receivers on the destination side
  int cols = 0;  // transmitters on the source side
  double value = 0.0;
  double std_error = 0.0;
};

struct CutValue {
  double value = 0.0;
  /// Sum of block standard errors: an upper bound on the standard error of the
  /// sum under any correlation between blocks.
  double std_error = 0.0;
  CutProfile profile;
  std::vector<BlockContribution> per_block;
};

struct MinCut {
  double value = 0.0;
  CutProfile argmin;
};

/// Per-hop tables for cut evaluation. Hops 0..D-2 use `inner`; the final hop
/// into the destination uses `last` (the same table unless the destination
/// sees a different effective snr).
struct HopTables {
  const CapacityTable& inner;
  const CapacityTable& last;

  explicit HopTables(const CapacityTable& all) : inner(all), last(all) {}
  HopTables(const CapacityTable& inner_hops, const CapacityTable& last_hop)
      : inner(inner_hops), last(last_hop) {}
};

/// Value of the block-diagonal cut channel: sum over hops of C(K - M_{i+1}, M_i).
CutValue cut_value(const CutProfile& profile, const NetworkParams& params,
                   const CapacityTable& table);
CutValue cut_value(const CutProfile& profile, int K, int D, const HopTables& tables);

/// Minimizes sum_i C(K - M_{i+1}, M_i) - node_penalty * sum_i M_i over all
/// profiles by a shortest path over layer states. Ties go to the
/// lexicographically smallest profile.
MinCut min_cut_dp(const NetworkParams& params, const CapacityTable& table, double node_penalty);
MinCut min_cut_dp(int K, int D, const HopTables& tables, double node_penalty);

/// Exhaustive minimum over all (K+1)^(D-1) profiles. Refuses instances above
/// kBruteForceLimit profiles.
inline constexpr std::uint64_t kBruteForceLimit = 1'000'000;
MinCut brute_force_min_cut(const NetworkParams& params, const CapacityTable& table,
                           double node_penalty);
MinCut brute_force_min_cut(int K, int D, const HopTables& tables, double node_penalty);

/// Worst per-sample violations of the three capacity properties:
///   symmetry          C(x, y) = C(y, x)
///   monotonicity      C(z, y) >= C(x, y) for z >= x
///   superadditivity   C(x, y) + C(K - x, y) >= C(K, y)  (rows split)
/// Violation magnitudes are max(0, deficit); passed means all are below tolerance.
struct PropertyReport {
  double worst_symmetry = 0.0;
  double worst_monotonicity = 0.0;
  double worst_superadditivity = 0.0;
  std::uint64_t draws_checked = 0;
  double tolerance = 1e-9;

  double worst() const;
  bool passed() const { return worst() < tolerance; }
  void merge(const PropertyReport& other);
};

PropertyReport check_capacity_properties(const ComplexMatrix& h, double snr, int K);
PropertyReport check_capacity_properties(const CapacityTable& table, int K, unsigned workers = 1);

}  // namespace relaynet

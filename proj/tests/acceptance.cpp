// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Runtime limits are part of each criterion.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "relaynet/cf_rates.hpp"
#include "relaynet/mimo_capacity.hpp"
#include "relaynet/network_model.hpp"

using namespace relaynet;

namespace {

constexpr double kSisoOracleSnr1 = 0.596347362323194;  // e * E1(1)

struct Outcome {
  bool passed = true;
  std::string detail;
};

NetworkParams network(int K, int D, double snr) {
  NetworkParams p;
  p.K = K;
  p.D = D;
  p.power = snr;
  return p;
}

std::string format(const char* fmt, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, fmt, args...);
  return buf;
}

// Calls f on every profile in lexicographic order.
void for_each_profile(int K, int D, const std::function<void(const CutProfile&)>& f) {
  CutProfile p{std::vector<int>(static_cast<std::size_t>(D - 1), 0)};
  while (true) {
    f(p);
    int i = D - 2;
    while (i >= 0 && p.m[static_cast<std::size_t>(i)] == K) p.m[static_cast<std::size_t>(i--)] = 0;
    if (i < 0) return;
    ++p.m[static_cast<std::size_t>(i)];
  }
}

Outcome siso_oracle() {
  const auto est = estimate_ergodic_capacity(1, 1, 1.0, 1'000'000, 1);
  const double dev = std::abs(est.mean - kSisoOracleSnr1);
  return {dev <= 3.0 * est.std_error,
          format("mean %.6f, |dev| %.2e, 3*se %.2e", est.mean, dev, 3.0 * est.std_error)};
}

Outcome min_cut_equals_full_capacity() {
  Outcome out;
  double worst_gap = 0.0;
  double worst_profile_deficit = 0.0;
  for (double snr : {1.0, 10.0, 100.0}) {
    const auto table = build_capacity_table(3, snr, 100'000, 2);
    for (int K = 1; K <= 3; ++K) {
      for (int D = 2; D <= 4; ++D) {
        const auto p = network(K, D, snr);
        const double full = table.mean(K, K);
        worst_gap = std::max(worst_gap, std::abs(brute_force_min_cut(p, table, 0.0).value - full));
        for_each_profile(K, D, [&](const CutProfile& profile) {
          worst_profile_deficit =
              std::max(worst_profile_deficit, full - cut_value(profile, p, table).value);
        });
      }
    }
  }
  out.passed = worst_gap <= 1e-9 && worst_profile_deficit <= 1e-9;
  out.detail = format("max |min-cut - C(K,K)| %.2e, max deficit %.2e", worst_gap,
                      std::max(worst_profile_deficit, 0.0));
  return out;
}

Outcome split_bound_gap() {
  Outcome out;
  TableCache cache(3, 100'000, 3);
  double worst_slack = -1e300;
  int cases = 0;
  for (int K = 1; K <= 3; ++K) {
    for (int D : {2, 4, 8}) {
      for (double snr : {1.0, 10.0, 100.0}) {
        const auto p = network(K, D, snr);
        const auto s = QuantizationScheme::depth_scaled(D);
        const auto& full = cache.at(snr);
        const auto lower =
            nnc_lower_bound(p, s, cache.at(degraded_snr(p, s)), full, NncMode::split_bound);
        const double se = lower.std_error + full.at(K, K).std_error;
        const double limit = K * std::log(static_cast<double>(D)) + K + 3.0 * se;
        worst_slack = std::max(worst_slack, full.mean(K, K) - lower.rate - limit);
        ++cases;
      }
    }
  }
  out.passed = worst_slack <= 0.0;
  out.detail = format("%d cases, max (gap - bound) %.4f", cases, worst_slack);
  return out;
}

Outcome line_network_gap() {
  std::mt19937_64 rng(4);
  std::exponential_distribution<double> fade(1.0);
  std::uniform_real_distribution<double> log_snr(-1.0, 3.0);
  double worst = -1e300;
  int instances = 0;
  for (int D : {2, 4, 8, 16, 32, 64}) {
    for (int trial = 0; trial < 100; ++trial) {
      std::vector<double> g2(static_cast<std::size_t>(D));
      for (auto& g : g2) g = fade(rng);
      const auto line = LineNetwork::from_power_gains(g2, std::pow(10.0, log_snr(rng)), 1.0);
      const double gap =
          line_capacity(line) - line_nnc_rate(line, D - 1.0, LineCuts::simple_cuts);
      worst = std::max(worst, gap - (std::log(static_cast<double>(D)) + 1.0));
      ++instances;
    }
  }
  return {worst <= 0.0, format("%d instances, max (gap - (ln D + 1)) %.4f", instances, worst)};
}

Outcome matrix_properties() {
  PropertyReport total;
  for (double snr : {0.1, 1.0, 10.0}) {
    const auto table = build_capacity_table(6, snr, 10'000, 5, {1, true, 0});
    total.merge(check_capacity_properties(table, 6));
  }
  return {total.passed(),
          format("%llu draws, worst symmetry %.2e, monotonicity %.2e, superadditivity %.2e",
                 static_cast<unsigned long long>(total.draws_checked), total.worst_symmetry,
                 total.worst_monotonicity, total.worst_superadditivity)};
}

Outcome dp_matches_brute_force() {
  int instances = 0;
  int mismatches = 0;
  for (double snr : {1.0, 10.0, 100.0}) {
    const auto inner = build_capacity_table(3, snr, 10'000, 6);
    const auto last = build_capacity_table(3, 2.0 * snr, 10'000, 6);
    for (const HopTables& tables : {HopTables(inner), HopTables(inner, last)}) {
      for (int K = 1; K <= 3; ++K) {
        for (int D = 1; D <= 5; ++D) {
          for (double penalty : {0.0, std::log(1.5), 1.0}) {
            const auto dp = min_cut_dp(K, D, tables, penalty);
            const auto bf = brute_force_min_cut(K, D, tables, penalty);
            mismatches += !(dp.value == bf.value && dp.argmin == bf.argmin);
            ++instances;
          }
        }
      }
    }
  }
  return {mismatches == 0, format("%d instances, %d mismatches", instances, mismatches)};
}

Outcome trend_separation() {
  // Gaps use the raw per-cut objective: clamping the lower bound at zero caps
  // every gap at C(K,K) and would hide the growth being compared.
  TableCache cache(2, 100'000, 7);
  const double snr = 10.0;
  auto gap = [&](int D, double q, double& se) {
    const auto p = network(2, D, snr);
    const QuantizationScheme s{q, true};
    const auto& full = cache.at(snr);
    const auto lower =
        nnc_lower_bound(p, s, cache.at(degraded_snr(p, s)), full, NncMode::per_cut_exact);
    se += lower.std_error + full.at(2, 2).std_error;
    return full.mean(2, 2) - lower.unclamped;
  };
  double se = 0.0;
  const double fixed_growth = gap(32, 1.0, se) - gap(8, 1.0, se);
  const double scaled_growth = gap(32, 31.0, se) - gap(8, 7.0, se);
  return {fixed_growth >= 2.0 * scaled_growth - 3.0 * se,
          format("q=1 growth %.4f, q=D-1 growth %.4f, combined se %.2e", fixed_growth,
                 scaled_growth, se)};
}

Outcome optimizer_sanity() {
  int cases = 0;
  int failures = 0;
  for (double snr : {1.0, 10.0, 100.0}) {
    TableCache cache(2, 20'000, 8);
    for (int K = 1; K <= 2; ++K) {
      for (int D : {2, 4, 8}) {
        const auto p = network(K, D, snr);
        const auto search = optimize_quantization(p, default_q_grid(D), cache);
        auto rate_at = [&](double q) {
          const QuantizationScheme s{q, true};
          return nnc_lower_bound(p, s, cache.at(degraded_snr(p, s)), cache.at(snr),
                                 NncMode::per_cut_exact)
              .unclamped;
        };
        failures += !(search.rate >= std::max(rate_at(1.0), rate_at(D - 1.0)));
        ++cases;
      }
    }
  }
  return {failures == 0, format("%d cases, %d below a reference level", cases, failures)};
}

Outcome penalty_bound_at_most_k() {
  double worst = -1e300;
  for (int K = 1; K <= 8; ++K) {
    for (int D = 2; D <= 128; ++D) {
      worst = std::max(worst, penalty_bound(network(K, D, 1.0), QuantizationScheme::depth_scaled(D)) - K);
    }
  }
  return {worst <= 0.0, format("max (penalty - K) %.4f", worst)};
}

struct Criterion {
  int id;
  const char* name;
  double time_limit_s;
  Outcome (*run)();
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "siso-capacity-oracle", 10.0, siso_oracle},
      {2, "min-cut-equals-full-capacity", 60.0, min_cut_equals_full_capacity},
      {3, "split-bound-gap-logarithmic", 300.0, split_bound_gap},
      {4, "line-network-gap", 5.0, line_network_gap},
      {5, "per-sample-matrix-properties", 30.0, matrix_properties},
      {6, "dp-equals-brute-force", 30.0, dp_matches_brute_force},
      {7, "trend-separation", 300.0, trend_separation},
      {8, "optimizer-sanity", 300.0, optimizer_sanity},
      {9, "penalty-bound-at-most-K", 1.0, penalty_bound_at_most_k},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = c.run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = seconds < c.time_limit_s;
    const bool passed = outcome.passed && in_time;
    failed += !passed;
    std::printf("%s  %d %-30s %7.2fs (limit %gs)  %s%s\n", passed ? "PASS" : "FAIL", c.id, c.name,
                seconds, c.time_limit_s, outcome.detail.c_str(), in_time ? "" : "  [over time]");
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}

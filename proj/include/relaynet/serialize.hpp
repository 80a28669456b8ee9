// JSON and CSV encodings of tables, cut reports and rate reports.
//
// Capacity table JSON:
//   {"schema": "relaynet.capacity_table.v1", "max_dim": K, "snr": s,
//    "num_samples": N, "seed": S,
//    "entries": [{"dims": [m, n], "snr": s, "num_samples": N, "seed": S,
//                 "mean": c, "std_error": e}, ...]}
// Entry values are nats. Shared draws are not serialized; a table loaded from
// JSON can be used for cut evaluation but not for per-sample property checks.

#pragma once

#include <string>

#include <json.hpp>

#include "relaynet/cf_rates.hpp"
#include "relaynet/mimo_capacity.hpp"
#include "relaynet/network_model.hpp"

namespace relaynet {

inline constexpr const char* kCapacityTableSchema = "relaynet.capacity_table.v1";

/// Fixed formatting for every number written by the CLI.
std::string format_number(double value);

nlohmann::json to_json(const CapacityEstimate& estimate, std::uint64_t seed);
nlohmann::json to_json(const CapacityTable& table);
CapacityTable capacity_table_from_json(const nlohmann::json& doc);

nlohmann::json to_json(const CutProfile& profile);
nlohmann::json to_json(const CutValue& cut);

nlohmann::json to_json(const RateReport& report);

/// K,D,snr,q,upper,lower,gap,thm_bound,prior_cf_bound,alignment_bound,std_error
std::string rate_csv_header();
std::string to_csv_row(const RateReport& report);

}  // namespace relaynet

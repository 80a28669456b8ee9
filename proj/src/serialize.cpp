#include "relaynet/serialize.hpp"

#include <stdexcept>

#include <fmt/core.h>

namespace relaynet {

std::string format_number(double value) { return fmt::format("{:.12g}", value); }

nlohmann::json to_json(const CapacityEstimate& estimate, std::uint64_t seed) {
  return {{"dims", {estimate.rows, estimate.cols}},
          {"snr", estimate.snr},
          {"num_samples", estimate.num_samples},
          {"seed", seed},
          {"mean", estimate.mean},
          {"std_error", estimate.std_error}};
}

nlohmann::json to_json(const CapacityTable& table) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& e : table.entries()) entries.push_back(to_json(e, table.seed()));
  return {{"schema", kCapacityTableSchema},
          {"max_dim", table.max_dim()},
          {"snr", table.snr()},
          {"num_samples", table.num_samples()},
          {"seed", table.seed()},
          {"entries", std::move(entries)}};
}

CapacityTable capacity_table_from_json(const nlohmann::json& doc) {
  if (doc.value("schema", "") != kCapacityTableSchema) {
    throw std::invalid_argument(std::string("capacity table JSON must carry schema ") +
                                kCapacityTableSchema);
  }
  const int max_dim = doc.at("max_dim").get<int>();
  const double snr = doc.at("snr").get<double>();
  const auto num_samples = doc.at("num_samples").get<std::uint64_t>();
  const auto seed = doc.at("seed").get<std::uint64_t>();
  if (max_dim < 1) throw std::invalid_argument("max_dim must be >= 1");

  const auto side = static_cast<std::size_t>(max_dim + 1);
  std::vector<CapacityEstimate> entries(side * side);
  std::vector<bool> filled(entries.size(), false);
  for (const auto& item : doc.at("entries")) {
    const auto dims = item.at("dims").get<std::vector<int>>();
    if (dims.size() != 2 || dims[0] < 0 || dims[1] < 0 || dims[0] > max_dim || dims[1] > max_dim) {
      throw std::invalid_argument("capacity table entry has invalid dims");
    }
    const auto idx = static_cast<std::size_t>(dims[0]) * side + static_cast<std::size_t>(dims[1]);
    entries[idx] = {item.at("mean").get<double>(), item.at("std_error").get<double>(),
                    item.at("num_samples").get<std::uint64_t>(), dims[0], dims[1],
                    item.at("snr").get<double>()};
    filled[idx] = true;
  }
  for (bool f : filled) {
    if (!f) throw std::invalid_argument("capacity table JSON is missing entries");
  }
  return CapacityTable(max_dim, snr, num_samples, seed, std::move(entries));
}

nlohmann::json to_json(const CutProfile& profile) { return profile.m; }

nlohmann::json to_json(const CutValue& cut) {
  nlohmann::json blocks = nlohmann::json::array();
  for (const auto& b : cut.per_block) {
    blocks.push_back({{"hop", b.hop},
                      {"dims", {b.rows, b.cols}},
                      {"value", b.value},
                      {"std_error", b.std_error}});
  }
  return {{"profile", to_json(cut.profile)},
          {"value", cut.value},
          {"std_error", cut.std_error},
          {"per_block", std::move(blocks)}};
}

nlohmann::json to_json(const RateReport& r) {
  return {{"K", r.K},
          {"D", r.D},
          {"snr", r.snr},
          {"q", r.q},
          {"destination_quantizes", r.destination_quantizes},
          {"log_base", to_string(r.log_base)},
          {"upper", r.upper},
          {"lower", r.lower},
          {"gap", r.gap},
          {"thm_bound", r.thm_bound},
          {"prior_cf_bound", r.prior_cf_bound},
          {"alignment_bound", r.alignment_bound},
          {"std_error", r.std_error},
          {"lower_clamped", r.lower_clamped},
          {"lower_argmin", to_json(r.lower_argmin)}};
}

std::string rate_csv_header() {
  return "K,D,snr,q,upper,lower,gap,thm_bound,prior_cf_bound,alignment_bound,std_error";
}

std::string to_csv_row(const RateReport& r) {
  return fmt::format("{},{},{},{},{},{},{},{},{},{},{}", r.K, r.D, format_number(r.snr),
                     format_number(r.q), format_number(r.upper), format_number(r.lower),
                     format_number(r.gap), format_number(r.thm_bound),
                     format_number(r.prior_cf_bound), format_number(r.alignment_bound),
                     format_number(r.std_error));
}

}  // namespace relaynet

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cpt/allocation.hpp"
#include "cpt/prospect.hpp"
#include "cpt/utility.hpp"
#include "cpt/weighting.hpp"

namespace cpt::cli {

using nlohmann::json;

struct SweepSpec {
  double lo_watts;
  double hi_watts;
  std::size_t steps;
  bool log_spaced;

  std::vector<double> points() const;
};

/// Fully resolved power-allocation scenario. All physical quantities are
/// linear (watts, linear SNR); `resolved` holds the manifest written into
/// every output file.
struct Scenario {
  json resolved;
  double snr0_db = 7.0;
  double n0_dbm_per_hz = -174.0;
  double bandwidth_hz = 1.0;
  double noise_watts = 0.0;
  std::vector<double> gains;
  std::vector<double> activations;
  std::vector<UtilitySpec> utilities;
  std::vector<WeightingSpec> pwfs;
  std::optional<double> p_total_watts;
  std::optional<SweepSpec> sweep;
  std::optional<Prospect> prospect;

  std::size_t size() const { return gains.size(); }
  std::vector<Agent> agents() const;
};

/// Utility from a JSON object with a "family" key. The reference point comes
/// from "x0" when present, else `x0_default`.
UtilitySpec parse_utility(const json& j, std::optional<double> x0_default = std::nullopt,
                          double domain_min = -std::numeric_limits<double>::infinity());
WeightingSpec parse_pwf(const json& j);

json utility_to_json(const UtilitySpec& u);
json pwf_to_json(const WeightingSpec& w);

/// `seed_override` replaces every seed in the file (channel and activation draws).
Scenario parse_scenario(const json& j, std::optional<std::uint64_t> seed_override = std::nullopt);

json load_json(const std::string& path);

}  // namespace cpt::cli

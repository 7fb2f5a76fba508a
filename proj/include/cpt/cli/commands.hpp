#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "cpt/allocation.hpp"
#include "cpt/cli/csv.hpp"
#include "cpt/cli/scenario.hpp"
#include "cpt/risk_split.hpp"

namespace cpt::cli {

enum class CurveKind { Utility, Pwf, PerceivedCdf };

CurveKind parse_curve_kind(const std::string& s);

/// Columns: `x,value` (utility), `p,w` (pwf), `x,F,F_perceived` (perceived-cdf).
/// Parameters come from the config's "utility", "pwf" and "distribution"
/// sections, with the case-study utility and Prelec(1, 0.5) as defaults.
void cmd_curve(CurveKind kind, const json& config, const Grid& grid, std::ostream& csv);

struct AllocateReport {
  AllocationResult result;
  std::vector<std::size_t> order;  ///< agent indices by ascending |h|^2 / N0
  std::vector<double> equal;
  std::vector<double> water;
  double equal_objective = 0.0;
  double water_objective = 0.0;
};

/// Columns `agent,gain,wp,power,snr_db,label`, rows by ascending unit-power
/// channel quality; summary and baseline comparison go to `log`.
AllocateReport cmd_allocate(const Scenario& s, std::ostream& csv, std::ostream& log);

struct SweepRow {
  double p_total = 0.0;
  double mu = 0.0;
  double objective = 0.0;
  std::size_t n_gain = 0;
  std::size_t n_pinned = 0;
  std::size_t n_loss = 0;
  std::size_t n_inactive = 0;
  std::size_t peak_rank = 0;  ///< 1-based rank of the max-power agent by ascending quality
  bool slack = false;
  std::vector<double> powers;  ///< in rank order
};

/// One row per sweep point; points are solved concurrently and written in sweep order.
std::vector<SweepRow> cmd_sweep(const Scenario& s, std::ostream& csv, std::ostream& log);

/// Reads the "risk_split" section; writes `alpha_1..alpha_m,cpt_value` and
/// prints the verdict line to `log`.
RiskSplitResult cmd_risk_split(const json& config, std::ostream& csv, std::ostream& log);

/// Runs every validator plus the loss-aversion diagnostics. Returns the
/// process exit status: 0 when the scenario is valid, 1 otherwise.
int cmd_validate(const json& config, std::optional<std::uint64_t> seed, std::ostream& log);

/// Agent indices sorted by ascending |h|^2 / N0 (stable).
std::vector<std::size_t> quality_order(const std::vector<Agent>& agents);

}  // namespace cpt::cli

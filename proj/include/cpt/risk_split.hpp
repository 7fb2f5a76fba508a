#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "cpt/prospect.hpp"

namespace cpt {

/// A source of risk paying `payoff` per unit of budget with probability `success`.
struct RiskSource {
  double payoff;
  double success;
};

enum class SplitVerdict { Corner, Uniform, Interior };

const char* verdict_name(SplitVerdict v);

struct SplitPoint {
  std::vector<double> alpha;
  double value;
};

struct RiskSplitResult {
  std::vector<SplitPoint> grid;  ///< every evaluated allocation, in enumeration order
  std::size_t best = 0;          ///< index into grid of the first maximizer
  SplitVerdict verdict = SplitVerdict::Interior;

  const SplitPoint& best_point() const { return grid[best]; }
};

inline constexpr std::size_t kMaxRiskSources = 10;

/// Outcome lottery of one split: each source independently pays
/// alpha_i * payoff_i * budget with probability success_i.
Prospect split_prospect(double budget, std::span<const RiskSource> sources,
                        std::span<const double> alpha);

/// Exhaustive search over the simplex grid with `divisions` steps per axis,
/// scoring each split by its rank-dependent value.
RiskSplitResult risk_split_search(double budget, std::span<const RiskSource> sources,
                                  const UtilitySpec& u, const WeightingSpec& w,
                                  std::size_t divisions);

}  // namespace cpt

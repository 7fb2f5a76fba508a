#pragma once

#include <cstddef>
#include <initializer_list>
#include <vector>

#include "cpt/utility.hpp"
#include "cpt/weighting.hpp"

namespace cpt {

/// Absolute tolerance on the sum of a prospect's probabilities.
inline constexpr double kProbabilitySumTol = 1e-12;

struct Outcome {
  double prob;
  double value;
};

/// Finite lottery of (probability, outcome) pairs.
///
/// Probabilities must be nonnegative and sum to 1 within kProbabilitySumTol;
/// sums inside the tolerance are renormalized, anything else throws.
class Prospect {
 public:
  explicit Prospect(std::vector<Outcome> entries);
  Prospect(std::initializer_list<Outcome> entries)
      : Prospect(std::vector<Outcome>(entries)) {}

  /// Degenerate prospect paying `value` with certainty.
  static Prospect sure(double value) { return Prospect({{1.0, value}}); }

  const std::vector<Outcome>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

 private:
  std::vector<Outcome> entries_;
};

struct DecisionWeights {
  std::vector<double> weights;      ///< indexed by rank, best outcome first
  std::vector<std::size_t> rank;    ///< rank[input index] = position in `weights`
  std::vector<std::size_t> order;   ///< order[rank] = input index
};

/// Rank-dependent decision weights: outcomes sorted in descending order
/// (stable, so ties keep input order) and weighted by differences of w over
/// the cumulative probabilities.
DecisionWeights decision_weights(const Prospect& prospect, const WeightingSpec& w);

/// Rank-dependent value: sum over ranks of weight * u(outcome).
double cpt_value(const Prospect& prospect, const UtilitySpec& u, const WeightingSpec& w);

/// Two-sided variant: outcomes >= x0 are cumulated from the best outcome
/// down through w_plus; outcomes < x0 from the worst outcome up through
/// w_minus.
double cpt_value_two_sided(const Prospect& prospect, const UtilitySpec& u,
                           const WeightingSpec& w_plus, const WeightingSpec& w_minus);

}  // namespace cpt

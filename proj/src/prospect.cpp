#include "cpt/prospect.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace cpt {

Prospect::Prospect(std::vector<Outcome> entries) : entries_(std::move(entries)) {
  if (entries_.empty()) throw std::invalid_argument("prospect must have at least one outcome");
  double sum = 0.0;
  for (const auto& e : entries_) {
    if (!(e.prob >= 0.0) || !std::isfinite(e.prob))
      throw std::invalid_argument("prospect probabilities must be nonnegative");
    if (!std::isfinite(e.value)) throw std::invalid_argument("prospect outcomes must be finite");
    sum += e.prob;
  }
  if (std::abs(sum - 1.0) > kProbabilitySumTol)
    throw std::invalid_argument("prospect probabilities must sum to 1");
  for (auto& e : entries_) e.prob /= sum;
}

DecisionWeights decision_weights(const Prospect& prospect, const WeightingSpec& w) {
  const auto& es = prospect.entries();
  const std::size_t k = es.size();
  DecisionWeights out;
  out.order.resize(k);
  std::iota(out.order.begin(), out.order.end(), std::size_t{0});
  std::stable_sort(out.order.begin(), out.order.end(),
                   [&](std::size_t a, std::size_t b) { return es[a].value > es[b].value; });
  out.rank.resize(k);
  out.weights.resize(k);
  double cum = 0.0;
  double prev = 0.0;
  for (std::size_t r = 0; r < k; ++r) {
    out.rank[out.order[r]] = r;
    cum += es[out.order[r]].prob;
    // The last cumulative probability is 1 by construction; pin it so the
    // weights telescope to exactly w(1) - w(0).
    const double c = (r + 1 == k) ? 1.0 : std::min(cum, 1.0);
    const double wc = pwf_value(w, c);
    out.weights[r] = wc - prev;
    prev = wc;
  }
  return out;
}

double cpt_value(const Prospect& prospect, const UtilitySpec& u, const WeightingSpec& w) {
  const auto dw = decision_weights(prospect, w);
  double v = 0.0;
  for (std::size_t r = 0; r < dw.weights.size(); ++r)
    v += dw.weights[r] * utility_value(u, prospect.entries()[dw.order[r]].value);
  return v;
}

namespace {

// Weighted sum over `idx`, cumulating probability in the given order.
double cumulative_side(const std::vector<Outcome>& es, const std::vector<std::size_t>& idx,
                       const UtilitySpec& u, const WeightingSpec& w) {
  double cum = 0.0;
  double prev = 0.0;
  double v = 0.0;
  for (std::size_t r = 0; r < idx.size(); ++r) {
    const std::size_t i = idx[r];
    cum = std::min(cum + es[i].prob, 1.0);
    // A side holding every outcome ends at exactly w(1), as in decision_weights.
    if (r + 1 == es.size()) cum = 1.0;
    const double wc = pwf_value(w, cum);
    v += (wc - prev) * utility_value(u, es[i].value);
    prev = wc;
  }
  return v;
}

}  // namespace

double cpt_value_two_sided(const Prospect& prospect, const UtilitySpec& u,
                           const WeightingSpec& w_plus, const WeightingSpec& w_minus) {
  const auto& es = prospect.entries();
  std::vector<std::size_t> gains;
  std::vector<std::size_t> losses;
  for (std::size_t i = 0; i < es.size(); ++i)
    (es[i].value >= u.x0() ? gains : losses).push_back(i);
  std::stable_sort(gains.begin(), gains.end(),
                   [&](std::size_t a, std::size_t b) { return es[a].value > es[b].value; });
  std::stable_sort(losses.begin(), losses.end(),
                   [&](std::size_t a, std::size_t b) { return es[a].value < es[b].value; });
  return cumulative_side(es, gains, u, w_plus) + cumulative_side(es, losses, u, w_minus);
}

}  // namespace cpt

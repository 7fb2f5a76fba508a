#include "cpt/risk_split.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace cpt {

const char* verdict_name(SplitVerdict v) {
  switch (v) {
    case SplitVerdict::Corner: return "corner";
    case SplitVerdict::Uniform: return "uniform";
    case SplitVerdict::Interior: return "interior";
  }
  return "?";
}

Prospect split_prospect(double budget, std::span<const RiskSource> sources,
                        std::span<const double> alpha) {
  const std::size_t m = sources.size();
  if (alpha.size() != m) throw std::invalid_argument("one allocation share per source expected");
  std::vector<Outcome> out;
  out.reserve(std::size_t{1} << m);
  for (std::size_t mask = 0; mask < (std::size_t{1} << m); ++mask) {
    double prob = 1.0;
    double value = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      if (mask & (std::size_t{1} << i)) {
        prob *= sources[i].success;
        value += alpha[i] * sources[i].payoff * budget;
      } else {
        prob *= 1.0 - sources[i].success;
      }
    }
    out.push_back({prob, value});
  }
  return Prospect(std::move(out));
}

namespace {

// Visit every composition of `divisions` into m nonnegative parts.
template <typename F>
void for_each_composition(std::size_t m, std::size_t divisions, std::vector<std::size_t>& parts,
                          std::size_t pos, std::size_t left, F&& f) {
  if (pos + 1 == m) {
    parts[pos] = left;
    f(parts);
    return;
  }
  for (std::size_t k = left + 1; k-- > 0;) {
    parts[pos] = k;
    for_each_composition(m, divisions, parts, pos + 1, left - k, f);
  }
}

}  // namespace

RiskSplitResult risk_split_search(double budget, std::span<const RiskSource> sources,
                                  const UtilitySpec& u, const WeightingSpec& w,
                                  std::size_t divisions) {
  const std::size_t m = sources.size();
  if (m == 0) throw std::invalid_argument("risk split needs at least one source");
  if (m > kMaxRiskSources) throw std::invalid_argument("risk split supports at most 10 sources");
  if (divisions < 10) throw std::invalid_argument("risk split grid needs at least 10 divisions");
  if (!(budget > 0.0) || !std::isfinite(budget))
    throw std::invalid_argument("risk split budget must be positive");
  for (const auto& s : sources) {
    if (!(s.success >= 0.0 && s.success <= 1.0))
      throw std::invalid_argument("source success probability outside [0, 1]");
    if (!std::isfinite(s.payoff)) throw std::invalid_argument("source payoff must be finite");
  }

  RiskSplitResult r;
  std::vector<std::size_t> parts(m);
  double best_value = -std::numeric_limits<double>::infinity();
  for_each_composition(m, divisions, parts, 0, divisions, [&](const std::vector<std::size_t>& c) {
    std::vector<double> alpha(m);
    for (std::size_t i = 0; i < m; ++i)
      alpha[i] = static_cast<double>(c[i]) / static_cast<double>(divisions);
    const double v = cpt_value(split_prospect(budget, sources, alpha), u, w);
    if (v > best_value) {
      best_value = v;
      r.best = r.grid.size();
    }
    r.grid.push_back({std::move(alpha), v});
  });

  const auto& a = r.best_point().alpha;
  const double step = 1.0 / static_cast<double>(divisions);
  bool corner = false;
  bool uniform = true;
  for (double v : a) {
    if (v == 1.0) corner = true;
    if (std::abs(v - 1.0 / static_cast<double>(m)) > step) uniform = false;
  }
  r.verdict = corner ? SplitVerdict::Corner : (uniform ? SplitVerdict::Uniform : SplitVerdict::Interior);
  return r;
}

}  // namespace cpt

#include "cpt/loss_aversion.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace cpt {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Slopes of the exponential families are c * exp(k * (x - x0)) on each branch.
struct BranchSlope {
  double c;
  double k;
};

std::optional<std::pair<BranchSlope, BranchSlope>> exponential_slopes(const UtilitySpec& spec) {
  if (const auto* kw = spec.get<KwParams>())
    return std::pair{BranchSlope{kw->lambda1, -kw->alpha}, BranchSlope{kw->lambda2, kw->beta}};
  if (const auto* g = spec.get<GeneralizedParams>())
    return std::pair{BranchSlope{-g->lambda1 / g->gamma1, g->alpha / g->gamma1},
                     BranchSlope{-g->lambda2 / g->gamma2, g->beta / g->gamma2}};
  return std::nullopt;
}

}  // namespace

LossAversionReport loss_aversion_report(const UtilitySpec& spec, std::span<const double> deltas) {
  if (deltas.empty()) throw std::invalid_argument("loss-aversion grid must be nonempty");
  const double x0 = spec.x0();
  for (double d : deltas) {
    if (!(d > 0.0) || !std::isfinite(d))
      throw std::invalid_argument("loss-aversion grid points must be positive and finite");
    if (x0 - d < spec.domain_min())
      throw std::domain_error("loss-aversion grid point x0 - delta falls below the utility domain");
  }

  LossAversionReport r;
  for (double d : deltas) {
    const double z = x0 + d;
    const double y = x0 - d;
    const double uz = utility_value(spec, z);
    const double uy = utility_value(spec, y);
    const double dz = utility_derivative(spec, z).value;
    const double dy = utility_derivative(spec, y).value;
    if (!(uz + uy < 0.0)) r.symmetric_bet_aversion = false;
    if (!(dz < dy)) r.increasing_symmetric_bet_aversion = false;
    if (!(uz / (z - x0) < uy / (y - x0))) r.weak = false;
    if (!(dz < dy)) r.strong = false;
  }

  if (auto slopes = exponential_slopes(spec)) {
    const auto [gain, loss] = *slopes;
    // Gain slope decreases in x when k < 0, so its sup is the limit at x0+.
    r.sup_gain_slope = gain.k <= 0.0 ? gain.c : kInf;
    // Loss slope over y < x0: decreasing toward -inf when k > 0.
    if (loss.k >= 0.0) {
      r.inf_loss_slope = std::isfinite(spec.domain_min())
                             ? loss.c * std::exp(loss.k * (spec.domain_min() - x0))
                             : (loss.k > 0.0 ? 0.0 : loss.c);
    } else {
      r.inf_loss_slope = loss.c;
    }
    r.strong_analytic = r.sup_gain_slope < r.inf_loss_slope;
  }
  return r;
}

}  // namespace cpt

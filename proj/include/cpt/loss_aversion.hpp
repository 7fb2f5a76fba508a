#pragma once

#include <optional>
#include <span>

#include "cpt/utility.hpp"

namespace cpt {

/// Loss-aversion diagnostics on a grid of bet sizes delta > 0.
///
/// Grid checks pair y = x0 - delta with z = x0 + delta for each delta:
///   symmetric bet aversion:            u(z) + u(y) < 0
///   increasing symmetric bet aversion: u'(z) < u'(y)
///   weak loss aversion:                u(z)/(z-x0) < u(y)/(y-x0)
///   strong loss aversion:              u'(z) < u'(y)
/// `strong_analytic` compares sup u' over gains with inf u' over losses in
/// closed form where the family allows it (exponential families).
struct LossAversionReport {
  bool symmetric_bet_aversion = true;
  bool increasing_symmetric_bet_aversion = true;
  bool weak = true;
  bool strong = true;
  std::optional<bool> strong_analytic;
  double sup_gain_slope = 0.0;  ///< only meaningful when strong_analytic is set
  double inf_loss_slope = 0.0;
};

LossAversionReport loss_aversion_report(const UtilitySpec& spec, std::span<const double> deltas);

}  // namespace cpt

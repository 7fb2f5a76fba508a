#include "cpt/weighting.hpp"

#include <cmath>
#include <stdexcept>

namespace cpt {
namespace {

void check_closed(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("probability outside [0, 1]");
}

void check_open(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw std::invalid_argument("weighting derivative requires p in the open interval (0, 1)");
}

// -ln p, using the complement when p is close to 1.
double neg_log(double p, double complement) {
  return p < 0.5 ? -std::log(p) : -std::log1p(-complement);
}

}  // namespace

WeightingSpec WeightingSpec::tk92(double delta) {
  if (!(delta >= kTk92MinDelta && delta <= 1.0))
    throw std::invalid_argument("TK92 weighting: delta must lie in [0.28, 1]");
  return WeightingSpec(Tk92Pwf{delta});
}

WeightingSpec WeightingSpec::prelec(double gamma, double theta) {
  if (!(gamma > 0.0 && std::isfinite(gamma)))
    throw std::invalid_argument("Prelec weighting: gamma must be positive");
  if (!(theta > 0.0 && std::isfinite(theta)))
    throw std::invalid_argument("Prelec weighting: theta must be positive");
  return WeightingSpec(PrelecPwf{gamma, theta});
}

std::string WeightingSpec::family_name() const {
  if (std::holds_alternative<IdentityPwf>(family_)) return "identity";
  if (std::holds_alternative<Tk92Pwf>(family_)) return "tk92";
  return "prelec";
}

double pwf_value(const WeightingSpec& w, double p) {
  check_closed(p);
  if (p == 0.0) return 0.0;
  if (p == 1.0) return 1.0;
  if (const auto* t = std::get_if<Tk92Pwf>(&w.family())) {
    const double a = std::pow(p, t->delta);
    const double b = std::pow(1.0 - p, t->delta);
    return a / std::pow(a + b, 1.0 / t->delta);
  }
  if (const auto* pr = std::get_if<PrelecPwf>(&w.family()))
    return std::exp(-pr->gamma * std::pow(-std::log(p), pr->theta));
  return p;
}

double pwf_complement(const WeightingSpec& w, double p, double complement) {
  check_closed(p);
  if (const auto* pr = std::get_if<PrelecPwf>(&w.family())) {
    if (p == 0.0) return 1.0;
    return -std::expm1(-pr->gamma * std::pow(neg_log(p, complement), pr->theta));
  }
  if (w.is_identity()) return complement;
  return 1.0 - pwf_value(w, p);
}

double pwf_derivative(const WeightingSpec& w, double p) { return pwf_derivative(w, p, 1.0 - p); }

double pwf_derivative(const WeightingSpec& w, double p, double complement) {
  // p may round to 1 in the far tail while the complement is still resolvable.
  if (!(p == 1.0 && complement > 0.0)) check_open(p);
  if (const auto* t = std::get_if<Tk92Pwf>(&w.family())) {
    const double d = t->delta;
    const double q = complement;
    const double a = std::pow(p, d);
    const double b = std::pow(q, d);
    const double s = a + b;
    // d/dp [a s^{-1/d}] = s^{-1/d-1} p^{d-1} (d s - a + p q^{d-1})
    return std::pow(s, -1.0 / d - 1.0) * std::pow(p, d - 1.0) *
           (d * s - a + p * std::pow(q, d - 1.0));
  }
  if (const auto* pr = std::get_if<PrelecPwf>(&w.family())) {
    const double L = neg_log(p, complement);
    const double wp = std::exp(-pr->gamma * std::pow(L, pr->theta));
    return wp * pr->gamma * pr->theta * std::pow(L, pr->theta - 1.0) / p;
  }
  return 1.0;
}

}  // namespace cpt

#include "cpt/utility.hpp"

#include <cmath>
#include <sstream>

namespace cpt {
namespace {

[[noreturn]] void reject(const std::string& what) { throw std::invalid_argument(what); }

bool finite(double v) { return std::isfinite(v); }

void check_x(const UtilitySpec& spec, double x) {
  if (!finite(x)) reject("utility evaluated at a non-finite point");
  if (x < spec.domain_min()) {
    std::ostringstream os;
    os << "utility evaluated at " << x << " below domain minimum " << spec.domain_min();
    throw std::domain_error(os.str());
  }
}

void validate(const KtParams& p) {
  if (!(p.alpha > 0.0 && p.alpha <= 1.0)) reject("KT utility: alpha must lie in (0, 1]");
  if (!(p.beta > 0.0 && p.beta <= 1.0)) reject("KT utility: beta must lie in (0, 1]");
  if (!(p.lambda > 0.0 && finite(p.lambda))) reject("KT utility: lambda must be positive");
}

void validate(const KwParams& p) {
  if (!(p.lambda1 > 0.0 && p.lambda2 > 0.0 && p.alpha > 0.0 && p.beta > 0.0) ||
      !finite(p.lambda1) || !finite(p.lambda2) || !finite(p.alpha) || !finite(p.beta))
    reject("KW utility: lambda1, lambda2, alpha, beta must all be positive");
}

const char* shape_name(BranchShape s) {
  switch (s) {
    case BranchShape::Concave: return "concave";
    case BranchShape::Convex: return "convex";
    case BranchShape::Linear: return "linear";
  }
  return "?";
}

// Admissible parameter signs per branch shape. Concave gain and convex loss
// need mu >= 1; convex gain and concave loss need mu <= 1.
void validate_branch(const char* branch, BranchShape shape, double lambda, double curv,
                     double gamma, double mu, bool gain) {
  std::ostringstream os;
  os << "generalized utility, " << branch << " branch declared " << shape_name(shape) << ": ";
  if (!(lambda / gamma < 0.0)) {
    os << "lambda/gamma must be negative for a strictly increasing branch";
    reject(os.str());
  }
  const double ratio = curv / gamma;
  switch (shape) {
    case BranchShape::Concave:
      if (!(ratio < 0.0)) { os << "curvature/gamma must be negative"; reject(os.str()); }
      if (gain ? !(mu >= 1.0) : !(mu <= 1.0)) {
        os << (gain ? "mu must be >= 1" : "mu must be <= 1");
        reject(os.str());
      }
      break;
    case BranchShape::Convex:
      if (!(ratio > 0.0)) { os << "curvature/gamma must be positive"; reject(os.str()); }
      if (gain ? !(mu <= 1.0) : !(mu >= 1.0)) {
        os << (gain ? "mu must be <= 1" : "mu must be >= 1");
        reject(os.str());
      }
      break;
    case BranchShape::Linear:
      if (!(std::abs(ratio) <= kLinearCurvatureTol)) {
        os << "|curvature/gamma| must be at most " << kLinearCurvatureTol;
        reject(os.str());
      }
      break;
  }
  // Limit at the reference point must sit on the correct side of zero.
  const double limit = lambda * (mu - 1.0) / curv;
  if (gain ? !(limit >= 0.0) : !(limit <= 0.0)) {
    os << "branch limit at the reference point has the wrong sign";
    reject(os.str());
  }
}

void validate(const GeneralizedParams& p) {
  for (double v : {p.lambda1, p.lambda2, p.alpha, p.beta, p.gamma1, p.gamma2, p.mu1, p.mu2})
    if (!finite(v)) reject("generalized utility: parameters must be finite");
  if (p.alpha == 0.0 || p.beta == 0.0 || p.gamma1 == 0.0 || p.gamma2 == 0.0)
    reject("generalized utility: alpha, beta, gamma1, gamma2 must be nonzero");
  validate_branch("gain", p.gain_shape, p.lambda1, p.alpha, p.gamma1, p.mu1, true);
  validate_branch("loss", p.loss_shape, p.lambda2, p.beta, p.gamma2, p.mu2, false);
}

struct Value {
  double x0;
  double operator()(const KtParams& p, double x) const {
    if (x >= x0) return std::pow(x - x0, p.alpha);
    return -p.lambda * std::pow(x0 - x, p.beta);
  }
  double operator()(const KwParams& p, double x) const {
    const double d = x - x0;
    if (d >= 0.0) return -p.lambda1 * std::expm1(-p.alpha * d) / p.alpha;
    return p.lambda2 * std::expm1(p.beta * d) / p.beta;
  }
  double operator()(const GeneralizedParams& p, double x) const {
    const double d = x - x0;
    if (d >= 0.0) return p.lambda1 * ((p.mu1 - 1.0) - std::expm1(p.alpha / p.gamma1 * d)) / p.alpha;
    return p.lambda2 * ((p.mu2 - 1.0) - std::expm1(p.beta / p.gamma2 * d)) / p.beta;
  }
};

// Derivative on the chosen branch; `gain` picks the branch explicitly so the
// same code serves one-sided derivatives at x0.
struct Deriv {
  double x0;
  bool gain;
  double operator()(const KtParams& p, double x) const {
    if (gain) {
      const double d = x - x0;
      if (d == 0.0) {
        if (p.alpha < 1.0) throw unbounded_derivative("KT utility: right derivative at x0 is unbounded");
        return 1.0;
      }
      return p.alpha * std::pow(d, p.alpha - 1.0);
    }
    const double d = x0 - x;
    if (d == 0.0) {
      if (p.beta < 1.0) throw unbounded_derivative("KT utility: left derivative at x0 is unbounded");
      return p.lambda;
    }
    return p.lambda * p.beta * std::pow(d, p.beta - 1.0);
  }
  double operator()(const KwParams& p, double x) const {
    const double d = x - x0;
    if (gain) return p.lambda1 * std::exp(-p.alpha * d);
    return p.lambda2 * std::exp(p.beta * d);
  }
  double operator()(const GeneralizedParams& p, double x) const {
    const double d = x - x0;
    if (gain) return -p.lambda1 / p.gamma1 * std::exp(p.alpha / p.gamma1 * d);
    return -p.lambda2 / p.gamma2 * std::exp(p.beta / p.gamma2 * d);
  }
};

struct Deriv2 {
  double x0;
  double operator()(const KtParams& p, double x) const {
    if (x > x0) return p.alpha * (p.alpha - 1.0) * std::pow(x - x0, p.alpha - 2.0);
    return -p.lambda * p.beta * (p.beta - 1.0) * std::pow(x0 - x, p.beta - 2.0);
  }
  double operator()(const KwParams& p, double x) const {
    const double d = x - x0;
    if (d > 0.0) return -p.alpha * p.lambda1 * std::exp(-p.alpha * d);
    return p.beta * p.lambda2 * std::exp(p.beta * d);
  }
  double operator()(const GeneralizedParams& p, double x) const {
    const double d = x - x0;
    if (d > 0.0) {
      const double a = p.alpha / p.gamma1;
      return -p.lambda1 / p.gamma1 * a * std::exp(a * d);
    }
    const double b = p.beta / p.gamma2;
    return -p.lambda2 / p.gamma2 * b * std::exp(b * d);
  }
};

}  // namespace

UtilitySpec::UtilitySpec(Family f, double x0, double domain_min)
    : family_(std::move(f)), x0_(x0), domain_min_(domain_min) {
  if (!finite(x0)) reject("utility reference point must be finite");
  if (std::isnan(domain_min) || domain_min > x0)
    reject("utility domain minimum must not exceed the reference point");
  std::visit([](const auto& p) { validate(p); }, family_);
}

UtilitySpec UtilitySpec::kt(const KtParams& p, double x0, double domain_min) {
  return UtilitySpec(p, x0, domain_min);
}
UtilitySpec UtilitySpec::kw(const KwParams& p, double x0, double domain_min) {
  return UtilitySpec(p, x0, domain_min);
}
UtilitySpec UtilitySpec::generalized(const GeneralizedParams& p, double x0, double domain_min) {
  return UtilitySpec(p, x0, domain_min);
}

UtilitySpec UtilitySpec::with_reference(double x0) const {
  return UtilitySpec(family_, x0, domain_min_);
}

std::string UtilitySpec::family_name() const {
  struct Name {
    const char* operator()(const KtParams&) const { return "kt"; }
    const char* operator()(const KwParams&) const { return "kw"; }
    const char* operator()(const GeneralizedParams&) const { return "generalized"; }
  };
  return std::visit(Name{}, family_);
}

double utility_value(const UtilitySpec& spec, double x) {
  check_x(spec, x);
  if (x == spec.x0()) return 0.0;
  return std::visit([&](const auto& p) { return Value{spec.x0()}(p, x); }, spec.family());
}

Slope utility_derivative(const UtilitySpec& spec, double x, Side side) {
  check_x(spec, x);
  bool gain = x > spec.x0();
  bool kink = false;
  if (x == spec.x0()) {
    gain = side != Side::Left;
    kink = side == Side::Auto;
  }
  const double v =
      std::visit([&](const auto& p) { return Deriv{spec.x0(), gain}(p, x); }, spec.family());
  return {v, kink};
}

double utility_second_derivative(const UtilitySpec& spec, double x) {
  check_x(spec, x);
  if (x == spec.x0()) throw std::domain_error("second derivative undefined at the reference point");
  return std::visit([&](const auto& p) { return Deriv2{spec.x0()}(p, x); }, spec.family());
}

double arrow_pratt(const UtilitySpec& spec, double x) {
  check_x(spec, x);
  if (x == spec.x0()) throw std::domain_error("Arrow-Pratt coefficient undefined at the kink");
  return -utility_second_derivative(spec, x) / utility_derivative(spec, x).value;
}

bool is_concave_loss_averse(const UtilitySpec& spec) {
  const auto* g = spec.get<GeneralizedParams>();
  if (g == nullptr) return false;
  return g->gain_shape == BranchShape::Concave && g->loss_shape == BranchShape::Concave &&
         g->mu1 == 1.0 && g->mu2 == 1.0 && g->alpha / g->gamma1 < 0.0 &&
         g->beta / g->gamma2 < 0.0 && -g->lambda1 / g->gamma1 < -g->lambda2 / g->gamma2;
}

}  // namespace cpt

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <variant>

#include "cpt/utility.hpp"
#include "cpt/weighting.hpp"

namespace cpt {

/// Univariate distribution described by its CDF, survival function, density
/// and quantile function on the support [lo, hi].
struct ScalarDistribution {
  std::function<double(double)> cdf;
  std::function<double(double)> survival;  ///< 1 - cdf, accurate in the upper tail
  std::function<double(double)> pdf;
  std::function<double(double)> quantile;  ///< inverse cdf on (0, 1)
  double lo = 0.0;
  double hi = std::numeric_limits<double>::infinity();

  /// Exponential distribution with the given mean, e.g. |h|^2 under Rayleigh fading.
  static ScalarDistribution exponential(double mean);
};

struct PerceptualTransform {
  ScalarDistribution base;
  WeightingSpec pwf;
};

using Metric = std::function<double(double)>;

struct QuadratureMethod {
  double rel_tol = 1e-11;
};

struct MonteCarloMethod {
  std::uint64_t seed = 0;
  std::size_t samples = 1'000'000;
};

using PerceptualMethod = std::variant<QuadratureMethod, MonteCarloMethod>;

struct PerceptualEstimate {
  double value = 0.0;
  double error = 0.0;  ///< quadrature error estimate, or Monte-Carlo standard error
  std::size_t evaluations = 0;
};

/// Quadrature whose error estimate exceeds 1e-6*|value| + 1e-9.
class quadrature_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// w(F(x)); points outside the support clamp to 0 or 1.
double perceived_cdf(const PerceptualTransform& t, double x);

/// w'(F(x)) f(x) for x strictly inside the support with 0 < F(x) < 1.
double perceived_pdf(const PerceptualTransform& t, double x);

/// Integrand u(M(x)) * perceived_pdf(t, x).
double soi_density(const Metric& metric, const PerceptualTransform& t, const UtilitySpec& u,
                   double x);

/// Integral of u(M(y)) against the perceived density.
///
/// Quadrature truncates the upper tail where both 1-F and 1-w(F) drop below
/// 1e-10, and integrates the lower part of the support in log-distance from
/// the lower bound so PWF singularities at F -> 0 stay resolvable.
/// Monte-Carlo draws objective samples from a counter-based stream and
/// reweights each by w'(F(y)).
PerceptualEstimate perceptual_utility(const Metric& metric, const PerceptualTransform& t,
                                      const UtilitySpec& u,
                                      const PerceptualMethod& method = QuadratureMethod{});

}  // namespace cpt

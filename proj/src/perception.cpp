#include "cpt/perception.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <sstream>

#include "cpt/counter_rng.hpp"

namespace cpt {
namespace {

constexpr double kTailTol = 1e-10;
constexpr double kLowerMassTol = 1e-13;

double density_or_zero(const PerceptualTransform& t, double x) {
  const auto& d = t.base;
  if (!(x > d.lo && x < d.hi)) return 0.0;
  const double F = d.cdf(x);
  const double S = d.survival(x);
  if (!(F > 0.0) || !(S > 0.0)) return 0.0;
  return pwf_derivative(t.pwf, F, S) * d.pdf(x);
}

double upper_cut(const PerceptualTransform& t, double median) {
  const auto& d = t.base;
  double step = std::isfinite(d.lo) ? median - d.lo : std::max(std::abs(median), 1.0);
  if (!(step > 0.0)) step = 1.0;
  for (int i = 0; i < 1100; ++i, step *= 2.0) {
    const double x = median + step;
    if (x >= d.hi) return d.hi;
    const double S = d.survival(x);
    if (S < kTailTol && pwf_complement(t.pwf, 1.0 - S, S) < kTailTol) return x;
  }
  throw quadrature_error("could not locate the upper truncation point of the support");
}

struct Integrator {
  double rel_tol;
  double value = 0.0;
  double error = 0.0;

  template <typename F>
  void add(F f, double a, double b) {
    if (!(b > a)) return;
    double err = 0.0;
    value += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 25, rel_tol,
                                                                          &err);
    error += err;
  }
};

PerceptualEstimate by_quadrature(const Metric& metric, const PerceptualTransform& t,
                                 const UtilitySpec& u, const QuadratureMethod& q) {
  const auto& d = t.base;
  const double median = d.quantile(0.5);
  const double hi = upper_cut(t, median);
  std::size_t evals = 0;
  auto integrand = [&](double x) {
    ++evals;
    const double g = density_or_zero(t, x);
    return g == 0.0 ? 0.0 : utility_value(u, metric(x)) * g;
  };

  Integrator acc{q.rel_tol};
  if (std::isfinite(d.lo)) {
    // Lower piece in tau = ln(x - lo): bounded integrand even when w' blows up at F -> 0.
    const double span = median - d.lo;
    double e = span;
    while (e > 1e-300 && pwf_value(t.pwf, d.cdf(d.lo + e)) > kLowerMassTol) e *= 0.0625;
    acc.add(
        [&](double tau) {
          const double off = std::exp(tau);
          return integrand(d.lo + off) * off;
        },
        std::log(e), std::log(span));
    // Heavy Prelec lower tails keep visible mass below any representable
    // cutoff; fold what is left into a point mass at the cutoff.
    const double residual = pwf_value(t.pwf, d.cdf(d.lo + e));
    if (residual > 0.0) acc.value += residual * utility_value(u, metric(d.lo + e));
  } else {
    double step = std::max(std::abs(median), 1.0);
    double lo = median - step;
    for (int i = 0; i < 1100; ++i, step *= 2.0) {
      lo = median - step;
      const double F = d.cdf(lo);
      if (F < kTailTol && pwf_value(t.pwf, F) < kTailTol) break;
    }
    acc.add(integrand, lo, median);
  }
  acc.add(integrand, median, hi);

  if (!(acc.error <= 1e-6 * std::abs(acc.value) + 1e-9) || !std::isfinite(acc.value)) {
    std::ostringstream os;
    os << "perceptual utility quadrature did not converge: value " << acc.value
       << ", error estimate " << acc.error;
    throw quadrature_error(os.str());
  }
  return {acc.value, acc.error, evals};
}

PerceptualEstimate by_monte_carlo(const Metric& metric, const PerceptualTransform& t,
                                  const UtilitySpec& u, const MonteCarloMethod& mc) {
  if (mc.samples < 2) throw std::invalid_argument("Monte-Carlo needs at least two samples");
  const auto& d = t.base;
  const CounterStream rng(mc.seed);
  // Welford accumulation keeps the variance stable for 1e6+ samples.
  double mean = 0.0;
  double m2 = 0.0;
  for (std::size_t k = 0; k < mc.samples; ++k) {
    const double y = d.quantile(rng.uniform(k));
    const double F = d.cdf(y);
    const double S = d.survival(y);
    double v = 0.0;
    if (F > 0.0 && S > 0.0) v = utility_value(u, metric(y)) * pwf_derivative(t.pwf, F, S);
    const double delta = v - mean;
    mean += delta / static_cast<double>(k + 1);
    m2 += delta * (v - mean);
  }
  const double n = static_cast<double>(mc.samples);
  const double sd = std::sqrt(m2 / (n - 1.0));
  return {mean, sd / std::sqrt(n), mc.samples};
}

}  // namespace

ScalarDistribution ScalarDistribution::exponential(double mean) {
  if (!(mean > 0.0) || !std::isfinite(mean))
    throw std::invalid_argument("exponential distribution needs a positive mean");
  ScalarDistribution d;
  d.cdf = [mean](double x) { return x <= 0.0 ? 0.0 : -std::expm1(-x / mean); };
  d.survival = [mean](double x) { return x <= 0.0 ? 1.0 : std::exp(-x / mean); };
  d.pdf = [mean](double x) { return x < 0.0 ? 0.0 : std::exp(-x / mean) / mean; };
  d.quantile = [mean](double p) { return -mean * std::log1p(-p); };
  d.lo = 0.0;
  return d;
}

double perceived_cdf(const PerceptualTransform& t, double x) {
  const auto& d = t.base;
  if (x <= d.lo) return 0.0;
  if (x >= d.hi) return 1.0;
  return pwf_value(t.pwf, d.cdf(x));
}

double perceived_pdf(const PerceptualTransform& t, double x) {
  const auto& d = t.base;
  if (!(x > d.lo && x < d.hi)) throw std::domain_error("perceived density requires an interior point");
  const double F = d.cdf(x);
  const double S = d.survival(x);
  if (!(F > 0.0 && S > 0.0)) throw std::domain_error("perceived density requires 0 < F(x) < 1");
  return pwf_derivative(t.pwf, F, S) * d.pdf(x);
}

double soi_density(const Metric& metric, const PerceptualTransform& t, const UtilitySpec& u,
                   double x) {
  return utility_value(u, metric(x)) * perceived_pdf(t, x);
}

PerceptualEstimate perceptual_utility(const Metric& metric, const PerceptualTransform& t,
                                      const UtilitySpec& u, const PerceptualMethod& method) {
  if (const auto* q = std::get_if<QuadratureMethod>(&method)) return by_quadrature(metric, t, u, *q);
  return by_monte_carlo(metric, t, u, std::get<MonteCarloMethod>(method));
}

}  // namespace cpt

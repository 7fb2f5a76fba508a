#include "cpt/allocation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "cpt/counter_rng.hpp"

namespace cpt {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPinnedTol = 1e-9;
constexpr double kBudgetTol = 1e-12;

void check_instance(std::span<const Agent> agents, double p_total) {
  if (agents.empty()) throw std::invalid_argument("allocation needs at least one agent");
  if (!(p_total > 0.0) || !std::isfinite(p_total))
    throw std::invalid_argument("total power budget must be positive");
}

// Slope of u on one side, with KT's unbounded slope at the reference mapped to +inf.
double slope(const UtilitySpec& u, double x, Side side) {
  try {
    return utility_derivative(u, x, side).value;
  } catch (const unbounded_derivative&) {
    return kInf;
  }
}

}  // namespace

Agent::Agent(std::size_t id, double gain, double noise, double activation, WeightingSpec pwf,
             UtilitySpec utility)
    : id_(id),
      gain_(gain),
      noise_(noise),
      activation_(activation),
      pwf_(std::move(pwf)),
      utility_(std::move(utility)),
      weight_(0.0) {
  if (!(gain > 0.0) || !std::isfinite(gain)) throw std::invalid_argument("agent gain must be positive");
  if (!(noise > 0.0) || !std::isfinite(noise)) throw std::invalid_argument("agent noise must be positive");
  if (!(activation > 0.0 && activation <= 1.0))
    throw std::invalid_argument("agent activation probability must lie in (0, 1]");
  if (utility_.domain_min() > 0.0)
    throw std::invalid_argument("agent utility domain must include SNR = 0");
  weight_ = pwf_value(pwf_, activation);
  if (!(weight_ > 0.0)) throw std::invalid_argument("agent weight w(p) underflows to zero");
}

const char* label_name(Label l) {
  switch (l) {
    case Label::Gain: return "gain";
    case Label::Pinned: return "pinned";
    case Label::Loss: return "loss";
    case Label::Inactive: return "inactive";
  }
  return "?";
}

bool closed_form_applicable(const Agent& a) { return is_concave_loss_averse(a.utility()); }

AgentThresholds agent_thresholds(const Agent& a) {
  const auto* g = a.utility().get<GeneralizedParams>();
  if (g == nullptr || !closed_form_applicable(a))
    throw std::invalid_argument("closed-form thresholds need a concave, loss-averse generalized utility");
  const double q = a.quality();
  const double gain_edge = -q * g->lambda1 / g->gamma1;
  const double loss_edge = -q * g->lambda2 / g->gamma2;
  const double zero_cut = loss_edge * std::exp(-g->beta * a.snr0() / g->gamma2);
  return {gain_edge, loss_edge, zero_cut};
}

Label classify(const Agent& a, double power) {
  if (!(power > 0.0)) return Label::Inactive;
  const double s = a.snr(power);
  const double s0 = a.snr0();
  if (std::abs(s - s0) <= kPinnedTol * std::max(1.0, std::abs(s0))) return Label::Pinned;
  return s > s0 ? Label::Gain : Label::Loss;
}

AgentPower per_agent_power(const Agent& a, double mu) {
  if (!(mu > 0.0)) throw std::invalid_argument("dual variable must be positive");
  const auto th = agent_thresholds(a);
  const auto& g = *a.utility().get<GeneralizedParams>();
  const double s0 = a.snr0();
  double snr = 0.0;
  if (mu <= th.gain_edge) {
    snr = s0 + g.gamma1 / g.alpha * std::log(mu / th.gain_edge);
  } else if (mu <= th.loss_edge) {
    snr = s0;
  } else if (mu < th.zero_cut) {
    snr = std::max(0.0, s0 + g.gamma2 / g.beta * std::log(mu / th.loss_edge));
  } else {
    return {0.0, Label::Inactive};
  }
  const double p = snr / a.unit_snr();
  return {p, classify(a, p)};
}

DualIntervals dual_intervals(std::span<const Agent> agents) {
  if (agents.empty()) throw std::invalid_argument("dual intervals need at least one agent");
  DualIntervals d{kInf, -kInf, {}};
  d.agents.reserve(agents.size());
  for (const auto& a : agents) {
    const auto th = agent_thresholds(a);
    d.mu_hat_1 = std::min(d.mu_hat_1, th.gain_edge);
    d.mu_hat_2 = std::max(d.mu_hat_2, th.loss_edge);
    d.agents.push_back(th);
  }
  return d;
}

double total_power(std::span<const Agent> agents, double mu) {
  double sum = 0.0;
  for (const auto& a : agents) sum += per_agent_power(a, mu).power;
  return sum;
}

double objective(std::span<const Agent> agents, std::span<const double> powers) {
  if (agents.size() != powers.size()) throw std::invalid_argument("one power per agent expected");
  double f = 0.0;
  for (std::size_t i = 0; i < agents.size(); ++i)
    f += agents[i].weight() * utility_value(agents[i].utility(), agents[i].snr(powers[i]));
  return f;
}

KktReport verify_kkt(std::span<const Agent> agents, std::span<const double> powers, double mu,
                     double p_total) {
  if (agents.size() != powers.size()) throw std::invalid_argument("one power per agent expected");
  KktReport r;
  r.stationarity.resize(agents.size());
  const double denom = mu > 0.0 ? mu : 1.0;
  double sum = 0.0;
  double min_p = kInf;
  for (std::size_t i = 0; i < agents.size(); ++i) {
    const auto& a = agents[i];
    const double p = powers[i];
    sum += p;
    min_p = std::min(min_p, p);
    const double q = a.quality();
    double res = 0.0;
    switch (classify(a, p)) {
      case Label::Inactive: {
        // k_i = mu - q u'(0+) must be nonnegative.
        const double m = q * slope(a.utility(), 0.0, Side::Right);
        res = std::max(0.0, m - mu) / denom;
        break;
      }
      case Label::Pinned: {
        const double right = q * slope(a.utility(), a.snr0(), Side::Right);
        const double left = q * slope(a.utility(), a.snr0(), Side::Left);
        const double lo = std::min(left, right);
        const double hi = std::max(left, right);
        res = (mu < lo ? lo - mu : (mu > hi ? mu - hi : 0.0)) / denom;
        break;
      }
      default: {
        const double m = q * slope(a.utility(), a.snr(p), Side::Auto);
        res = std::abs(mu - m) / denom;
        break;
      }
    }
    r.stationarity[i] = res;
    r.max_stationarity = std::max(r.max_stationarity, res);
  }
  r.primal_infeasibility = std::max({0.0, (sum - p_total) / p_total, -min_p / p_total});
  r.budget_slackness = mu > 0.0 ? std::abs(p_total - sum) / p_total : 0.0;
  return r;
}

namespace {

void finish(std::span<const Agent> agents, AllocationResult& r) {
  r.labels.resize(agents.size());
  for (std::size_t i = 0; i < agents.size(); ++i) r.labels[i] = classify(agents[i], r.powers[i]);
  r.objective = objective(agents, r.powers);
  r.kkt = verify_kkt(agents, r.powers, r.mu, r.p_total);
}

}  // namespace

AllocationResult solve(std::span<const Agent> agents, double p_total) {
  check_instance(agents, p_total);
  for (const auto& a : agents) {
    if (!closed_form_applicable(a)) {
      auto r = solve_numeric(agents, p_total);
      r.warnings.push_back("agent " + std::to_string(a.id()) +
                           " is outside the concave loss-averse regime; solved numerically");
      return r;
    }
  }

  const auto di = dual_intervals(agents);
  const double tol = kBudgetTol * p_total;
  double lo = di.mu_hat_1 / 1024.0;
  double hi = di.mu_hat_2 * 1024.0;
  for (int i = 0; i < 200 && total_power(agents, lo) < p_total; ++i) lo /= 1024.0;
  for (int i = 0; i < 2000 && total_power(agents, hi) > p_total; ++i) hi *= 2.0;

  AllocationResult r;
  r.p_total = p_total;
  double mu = std::sqrt(lo * hi);
  double t = total_power(agents, mu);
  std::size_t it = 0;
  for (; it < 1000; ++it) {
    mu = std::sqrt(lo * hi);
    t = total_power(agents, mu);
    if (std::abs(t - p_total) <= tol) break;
    if (t > p_total) lo = mu;
    else hi = mu;
    if (hi - lo <= 1e-14 * mu) break;
  }
  r.iterations = it;
  r.mu = mu;
  r.powers.resize(agents.size());
  for (std::size_t i = 0; i < agents.size(); ++i) r.powers[i] = per_agent_power(agents[i], mu).power;
  if (std::abs(t - p_total) > tol) {
    r.slack = true;
    r.warnings.push_back("budget falls in a flat segment of the total-power curve; reporting the "
                         "nearest attainable total " + std::to_string(t));
  }
  finish(agents, r);
  return r;
}

namespace {

// Separable objective in budget fractions x_i = P_i / P_total.
struct Problem {
  std::span<const Agent> agents;
  double p_total;
  std::vector<double> scale;  // SNR per unit fraction

  Problem(std::span<const Agent> a, double p) : agents(a), p_total(p), scale(a.size()) {
    for (std::size_t i = 0; i < a.size(); ++i) scale[i] = a[i].unit_snr() * p;
  }
  double term(std::size_t i, double x) const {
    return agents[i].weight() * utility_value(agents[i].utility(), scale[i] * std::max(x, 0.0));
  }
  double value(const std::vector<double>& x) const {
    double f = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) f += term(i, x[i]);
    return f;
  }
  double marginal(std::size_t i, double x, Side side) const {
    return agents[i].weight() * scale[i] * slope(agents[i].utility(), scale[i] * x, side);
  }
};

// Euclidean projection onto {x >= 0, sum x = 1}.
std::vector<double> project_simplex(const std::vector<double>& v) {
  std::vector<double> u = v;
  std::sort(u.begin(), u.end(), std::greater<>());
  double cum = 0.0;
  double tau = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    cum += u[k];
    const double t = (cum - 1.0) / static_cast<double>(k + 1);
    if (u[k] - t > 0.0) tau = t;
  }
  std::vector<double> x(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) x[i] = std::max(v[i] - tau, 0.0);
  return x;
}

void projected_ascent(const Problem& pb, std::vector<double>& x, std::size_t iterations) {
  const std::size_t n = x.size();
  double f = pb.value(x);
  std::vector<double> grad(n);
  for (std::size_t it = 0; it < iterations; ++it) {
    double gmax = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      grad[i] = pb.marginal(i, x[i], Side::Auto);
      if (!std::isfinite(grad[i])) grad[i] = 1e300;
      gmax = std::max(gmax, std::abs(grad[i]));
    }
    if (!(gmax > 0.0)) return;
    double step = 0.5 / gmax;
    bool moved = false;
    for (int bt = 0; bt < 60; ++bt, step *= 0.5) {
      std::vector<double> trial(n);
      for (std::size_t i = 0; i < n; ++i) trial[i] = x[i] + step * grad[i];
      trial = project_simplex(trial);
      double dir = 0.0;
      for (std::size_t i = 0; i < n; ++i) dir += grad[i] * (trial[i] - x[i]);
      const double ft = pb.value(trial);
      if (ft >= f + 1e-4 * dir && ft > f) {
        x = std::move(trial);
        f = ft;
        moved = true;
        break;
      }
    }
    if (!moved) return;
  }
}

// Maximize phi(t) = term_i(x_i + t) + term_j(x_j - t) over t in [0, x_j].
double best_transfer(const Problem& pb, const std::vector<double>& x, std::size_t i, std::size_t j) {
  const double xi = x[i];
  const double xj = x[j];
  auto phi = [&](double t) { return pb.term(i, xi + t) + pb.term(j, xj - t); };
  constexpr int kScan = 16;
  int best = 0;
  double fbest = phi(0.0);
  for (int k = 1; k <= kScan; ++k) {
    const double fk = phi(xj * k / kScan);
    if (fk > fbest) {
      fbest = fk;
      best = k;
    }
  }
  double a = xj * std::max(best - 1, 0) / kScan;
  double b = xj * std::min(best + 1, kScan) / kScan;
  const double r = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - r * (b - a);
  double d = a + r * (b - a);
  double fc = phi(c);
  double fd = phi(d);
  for (int it = 0; it < 90 && b - a > 1e-17; ++it) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - r * (b - a);
      fc = phi(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + r * (b - a);
      fd = phi(d);
    }
  }
  double t = fc >= fd ? c : d;
  double ft = std::max(fc, fd);
  if (fbest > ft) {
    t = xj * best / kScan;
    ft = fbest;
  }
  return ft > phi(0.0) ? t : 0.0;
}

// Repeatedly move power between the pair with the widest marginal gap that
// still admits an improving transfer. Stops at pairwise optimality.
void pairwise_exchange(const Problem& pb, std::vector<double>& x, std::size_t iterations) {
  const std::size_t n = x.size();
  if (n < 2) return;
  std::vector<double> right(n);
  std::vector<double> left(n);
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t it = 0; it < iterations; ++it) {
    for (std::size_t i = 0; i < n; ++i) {
      right[i] = pb.marginal(i, x[i], Side::Right);
      left[i] = x[i] > 0.0 ? pb.marginal(i, x[i], Side::Left) : kInf;
    }
    pairs.clear();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j && right[i] > left[j] * (1.0 + 1e-13)) pairs.emplace_back(i, j);
    // A kink a rounding step away can hide behind the steepest pair.
    std::sort(pairs.begin(), pairs.end(), [&](const auto& a, const auto& b) {
      return right[a.first] - left[a.second] > right[b.first] - left[b.second];
    });
    bool moved = false;
    for (const auto& [up, down] : pairs) {
      const double t = best_transfer(pb, x, up, down);
      if (!(t > 0.0)) continue;
      x[up] += t;
      x[down] -= t;
      if (x[down] < 1e-300) {
        x[up] += x[down];
        x[down] = 0.0;
      }
      moved = true;
      break;
    }
    if (!moved) return;
  }
}

double estimate_mu(const Problem& pb, const std::vector<double>& x) {
  double sum = 0.0;
  std::size_t count = 0;
  double pin_lo = 0.0;
  double pin_hi = kInf;
  bool pinned = false;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const auto& a = pb.agents[i];
    const double p = x[i] * pb.p_total;
    const double q = a.quality();
    switch (classify(a, p)) {
      case Label::Gain:
      case Label::Loss:
        sum += q * slope(a.utility(), a.snr(p), Side::Auto);
        ++count;
        break;
      case Label::Pinned: {
        const double l = q * slope(a.utility(), a.snr0(), Side::Right);
        const double h = q * slope(a.utility(), a.snr0(), Side::Left);
        pin_lo = std::max(pin_lo, std::min(l, h));
        pin_hi = std::min(pin_hi, std::max(l, h));
        pinned = true;
        break;
      }
      case Label::Inactive: break;
    }
  }
  if (count > 0) return sum / static_cast<double>(count);
  if (pinned) return std::isfinite(pin_hi) ? 0.5 * (pin_lo + pin_hi) : pin_lo;
  return 0.0;
}

}  // namespace

AllocationResult solve_numeric(std::span<const Agent> agents, double p_total,
                               const NumericOptions& opts) {
  check_instance(agents, p_total);
  const std::size_t n = agents.size();
  const Problem pb(agents, p_total);

  std::vector<std::vector<double>> starts;
  starts.emplace_back(n, 1.0 / static_cast<double>(n));
  for (std::size_t i = 0; i < n && n > 1; ++i) {
    std::vector<double> corner(n, 0.0);
    corner[i] = 1.0;
    starts.push_back(std::move(corner));
  }
  const CounterStream rng(opts.seed, 0x5EED);
  for (std::size_t s = 0; s < opts.random_starts; ++s) {
    std::vector<double> x(n);
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = -std::log(rng.uniform(s * n + i));
      sum += x[i];
    }
    for (auto& v : x) v /= sum;
    starts.push_back(std::move(x));
  }

  double best_start = -kInf;
  double best = -kInf;
  std::vector<double> best_x;
  for (auto& x : starts) {
    best_start = std::max(best_start, pb.value(x));
    projected_ascent(pb, x, opts.ascent_iterations);
    pairwise_exchange(pb, x, opts.exchange_iterations);
    const double f = pb.value(x);
    if (f > best) {
      best = f;
      best_x = x;
    }
  }

  AllocationResult r;
  r.p_total = p_total;
  r.used_numeric = true;
  r.iterations = starts.size();
  r.converged_at_start = !(best > best_start + 1e-12 * std::max(1.0, std::abs(best_start)));
  r.powers.resize(n);
  for (std::size_t i = 0; i < n; ++i) r.powers[i] = best_x[i] * p_total;
  r.mu = estimate_mu(pb, best_x);
  finish(agents, r);
  return r;
}

std::vector<double> equal_split(std::span<const Agent> agents, double p_total) {
  check_instance(agents, p_total);
  return std::vector<double>(agents.size(), p_total / static_cast<double>(agents.size()));
}

std::vector<double> water_filling(std::span<const Agent> agents, double p_total) {
  check_instance(agents, p_total);
  const std::size_t n = agents.size();
  std::vector<double> floor(n);
  for (std::size_t i = 0; i < n; ++i) floor[i] = 1.0 / agents[i].unit_snr();
  std::vector<double> sorted = floor;
  std::sort(sorted.begin(), sorted.end());
  // Largest active set k whose water level sits above the k-th floor.
  double level = 0.0;
  double cum = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    cum += sorted[k];
    const double candidate = (p_total + cum) / static_cast<double>(k + 1);
    if (k + 1 < n && candidate <= sorted[k + 1]) {
      level = candidate;
      break;
    }
    level = candidate;
  }
  std::vector<double> p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = std::max(0.0, level - floor[i]);
  return p;
}

}  // namespace cpt

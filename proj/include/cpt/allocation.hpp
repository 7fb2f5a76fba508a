#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cpt/utility.hpp"
#include "cpt/weighting.hpp"

namespace cpt {

/// One CPT agent on its own orthogonal channel.
///
/// SNR = P * gain / noise. The derived effective quality
/// q = w(activation) * gain / noise scales every dual threshold of the agent.
class Agent {
 public:
  Agent(std::size_t id, double gain, double noise, double activation, WeightingSpec pwf,
        UtilitySpec utility);

  std::size_t id() const { return id_; }
  double gain() const { return gain_; }
  double noise() const { return noise_; }
  double activation() const { return activation_; }
  const WeightingSpec& pwf() const { return pwf_; }
  const UtilitySpec& utility() const { return utility_; }

  double weight() const { return weight_; }            ///< w(p_i)
  double unit_snr() const { return gain_ / noise_; }   ///< |h|^2 / N0
  double quality() const { return weight_ * unit_snr(); }
  double snr0() const { return utility_.x0(); }

  double snr(double power) const { return power * unit_snr(); }

 private:
  std::size_t id_;
  double gain_;
  double noise_;
  double activation_;
  WeightingSpec pwf_;
  UtilitySpec utility_;
  double weight_;
};

enum class Label { Gain, Pinned, Loss, Inactive };

const char* label_name(Label l);

struct AgentPower {
  double power;
  Label label;
};

/// True when the agent's utility is in the regime the closed form covers
/// (see is_concave_loss_averse).
bool closed_form_applicable(const Agent& a);

/// Dual thresholds of one agent.
struct AgentThresholds {
  double gain_edge;  ///< mu at or below which the agent is in the gain branch
  double loss_edge;  ///< mu above which the agent is in the loss branch
  double zero_cut;   ///< mu at or above which the agent receives no power
};

AgentThresholds agent_thresholds(const Agent& a);

/// Power that maximizes w u(SNR) - mu P for a single agent. Continuous and
/// nonincreasing in mu. Requires closed_form_applicable(a).
AgentPower per_agent_power(const Agent& a, double mu);

struct DualIntervals {
  double mu_hat_1;  ///< every agent in the gain branch for mu <= mu_hat_1
  double mu_hat_2;  ///< no agent in the gain or pinned range for mu > mu_hat_2
  std::vector<AgentThresholds> agents;
};

DualIntervals dual_intervals(std::span<const Agent> agents);

double total_power(std::span<const Agent> agents, double mu);

/// Per-agent and aggregate KKT residuals. Stationarity residuals are relative
/// to mu so they are invariant to the units of power and noise.
struct KktReport {
  std::vector<double> stationarity;  ///< per agent
  double max_stationarity = 0.0;
  double primal_infeasibility = 0.0;  ///< max(0, sum P - P_total, -min P) / P_total
  double budget_slackness = 0.0;      ///< |P_total - sum P| / P_total when mu > 0
};

struct AllocationResult {
  std::vector<double> powers;
  double mu = 0.0;
  std::vector<Label> labels;
  KktReport kkt;
  double objective = 0.0;
  double p_total = 0.0;
  bool used_numeric = false;
  bool slack = false;               ///< budget not attainable by any dual value
  bool converged_at_start = false;  ///< numeric solver never beat its best start
  std::size_t iterations = 0;
  std::vector<std::string> warnings;
};

/// Sum of w(p_i) u(SNR_i).
double objective(std::span<const Agent> agents, std::span<const double> powers);

/// Label an SNR against the agent's reference (pinned within 1e-9 relative).
Label classify(const Agent& a, double power);

/// Closed-form KKT solution with dual bisection. Agents outside the
/// closed-form regime divert the whole instance to solve_numeric.
AllocationResult solve(std::span<const Agent> agents, double p_total);

struct NumericOptions {
  std::uint64_t seed = 0;
  std::size_t random_starts = 8;
  std::size_t ascent_iterations = 200;
  std::size_t exchange_iterations = 2000;
};

/// Multi-start projected ascent followed by pairwise power exchange. Uses
/// only utility values and one-sided derivatives, never the closed form.
AllocationResult solve_numeric(std::span<const Agent> agents, double p_total,
                               const NumericOptions& opts = {});

/// KKT residuals of an allocation given its dual value `mu`.
KktReport verify_kkt(std::span<const Agent> agents, std::span<const double> powers, double mu,
                     double p_total);

inline KktReport verify_kkt(std::span<const Agent> agents, const AllocationResult& r) {
  return verify_kkt(agents, r.powers, r.mu, r.p_total);
}

/// P_total / N to each agent.
std::vector<double> equal_split(std::span<const Agent> agents, double p_total);

/// Classical water-filling maximizing sum log(1 + P_i |h_i|^2 / N0).
std::vector<double> water_filling(std::span<const Agent> agents, double p_total);

}  // namespace cpt

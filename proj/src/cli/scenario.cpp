#include "cpt/cli/scenario.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include "cpt/channel.hpp"
#include "cpt/counter_rng.hpp"

namespace cpt::cli {
namespace {

BranchShape parse_shape(const std::string& s) {
  if (s == "concave") return BranchShape::Concave;
  if (s == "convex") return BranchShape::Convex;
  if (s == "linear") return BranchShape::Linear;
  throw std::invalid_argument("unknown branch shape '" + s + "'");
}

const char* shape_str(BranchShape s) {
  switch (s) {
    case BranchShape::Concave: return "concave";
    case BranchShape::Convex: return "convex";
    case BranchShape::Linear: return "linear";
  }
  return "?";
}

double number(const json& j, const char* key) {
  if (!j.contains(key)) throw std::invalid_argument(std::string("missing key '") + key + "'");
  const auto& v = j.at(key);
  if (!v.is_number()) throw std::invalid_argument(std::string("key '") + key + "' must be a number");
  return v.get<double>();
}

double number_or(const json& j, const char* key, double fallback) {
  return j.contains(key) ? number(j, key) : fallback;
}

std::uint64_t seed_or(const json& j, std::uint64_t fallback) {
  if (!j.is_object() || !j.contains("seed")) return fallback;
  return j.at("seed").get<std::uint64_t>();
}

}  // namespace

std::vector<double> SweepSpec::points() const {
  std::vector<double> p(steps);
  for (std::size_t k = 0; k < steps; ++k) {
    const double t = steps == 1 ? 0.0 : static_cast<double>(k) / static_cast<double>(steps - 1);
    p[k] = log_spaced ? lo_watts * std::pow(hi_watts / lo_watts, t)
                      : lo_watts + (hi_watts - lo_watts) * t;
  }
  return p;
}

UtilitySpec parse_utility(const json& j, std::optional<double> x0_default, double domain_min) {
  if (!j.is_object()) throw std::invalid_argument("utility must be a JSON object");
  const std::string family = j.value("family", "generalized");
  double x0 = 0.0;
  if (j.contains("x0")) x0 = number(j, "x0");
  else if (j.contains("x0_db")) x0 = db_to_linear(number(j, "x0_db"));
  else if (x0_default) x0 = *x0_default;
  if (x0_default && (j.contains("x0") || j.contains("x0_db")) && *x0_default != x0)
    throw std::invalid_argument("utility reference point conflicts with the scenario's snr0_db");
  if (family == "kt") {
    return UtilitySpec::kt({number(j, "alpha"), number(j, "beta"), number(j, "lambda")}, x0, domain_min);
  }
  if (family == "kw") {
    return UtilitySpec::kw(
        {number(j, "lambda1"), number(j, "lambda2"), number(j, "alpha"), number(j, "beta")}, x0,
        domain_min);
  }
  if (family == "generalized") {
    GeneralizedParams g;
    g.lambda1 = number_or(j, "lambda1", g.lambda1);
    g.lambda2 = number_or(j, "lambda2", g.lambda2);
    g.alpha = number_or(j, "alpha", g.alpha);
    g.beta = number_or(j, "beta", g.beta);
    g.gamma1 = number_or(j, "gamma1", g.gamma1);
    g.gamma2 = number_or(j, "gamma2", g.gamma2);
    g.mu1 = number_or(j, "mu1", g.mu1);
    g.mu2 = number_or(j, "mu2", g.mu2);
    g.gain_shape = parse_shape(j.value("gain_shape", "concave"));
    g.loss_shape = parse_shape(j.value("loss_shape", "concave"));
    return UtilitySpec::generalized(g, x0, domain_min);
  }
  throw std::invalid_argument("unknown utility family '" + family + "'");
}

WeightingSpec parse_pwf(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("pwf must be a JSON object");
  const std::string family = j.value("family", "identity");
  if (family == "identity") return WeightingSpec::identity();
  if (family == "tk92") return WeightingSpec::tk92(number(j, "delta"));
  if (family == "prelec") return WeightingSpec::prelec(number_or(j, "gamma", 1.0), number(j, "theta"));
  throw std::invalid_argument("unknown pwf family '" + family + "'");
}

json utility_to_json(const UtilitySpec& u) {
  json j;
  j["family"] = u.family_name();
  j["x0"] = u.x0();
  if (const auto* p = u.get<KtParams>()) {
    j["alpha"] = p->alpha;
    j["beta"] = p->beta;
    j["lambda"] = p->lambda;
  } else if (const auto* p = u.get<KwParams>()) {
    j["lambda1"] = p->lambda1;
    j["lambda2"] = p->lambda2;
    j["alpha"] = p->alpha;
    j["beta"] = p->beta;
  } else if (const auto* p = u.get<GeneralizedParams>()) {
    j["lambda1"] = p->lambda1;
    j["lambda2"] = p->lambda2;
    j["alpha"] = p->alpha;
    j["beta"] = p->beta;
    j["gamma1"] = p->gamma1;
    j["gamma2"] = p->gamma2;
    j["mu1"] = p->mu1;
    j["mu2"] = p->mu2;
    j["gain_shape"] = shape_str(p->gain_shape);
    j["loss_shape"] = shape_str(p->loss_shape);
  }
  return j;
}

json pwf_to_json(const WeightingSpec& w) {
  json j;
  j["family"] = w.family_name();
  if (const auto* t = std::get_if<Tk92Pwf>(&w.family())) j["delta"] = t->delta;
  if (const auto* p = std::get_if<PrelecPwf>(&w.family())) {
    j["gamma"] = p->gamma;
    j["theta"] = p->theta;
  }
  return j;
}

std::vector<Agent> Scenario::agents() const {
  std::vector<Agent> out;
  out.reserve(size());
  for (std::size_t i = 0; i < size(); ++i)
    out.emplace_back(i, gains[i], noise_watts, activations[i], pwfs[i], utilities[i]);
  return out;
}

Scenario parse_scenario(const json& j, std::optional<std::uint64_t> seed_override) {
  if (!j.is_object()) throw std::invalid_argument("scenario must be a JSON object");
  Scenario s;
  const std::uint64_t seed = seed_override.value_or(seed_or(j, 1));
  s.snr0_db = number_or(j, "snr0_db", 7.0);
  s.n0_dbm_per_hz = number_or(j, "n0_dbm_per_hz", -174.0);
  s.bandwidth_hz = number_or(j, "bandwidth_hz", 1.0);
  s.noise_watts = dbm_to_watts(s.n0_dbm_per_hz, s.bandwidth_hz);
  const double x0 = db_to_linear(s.snr0_db);

  if (!j.contains("agents")) throw std::invalid_argument("scenario needs an 'agents' section");
  const json& ag = j.at("agents");
  const json channel = j.value("channel", json::object());

  std::size_t n = 0;
  if (channel.contains("gains")) {
    s.gains = channel.at("gains").get<std::vector<double>>();
    n = s.gains.size();
    if (ag.contains("count") && ag.at("count").get<std::size_t>() != n)
      throw std::invalid_argument("agents.count disagrees with the number of channel gains");
  } else {
    if (!ag.contains("count")) throw std::invalid_argument("agents.count is required");
    n = ag.at("count").get<std::size_t>();
    const double mean = number_or(channel, "mean", 1.0);
    const std::uint64_t ch_seed = seed_override.value_or(seed_or(channel, seed));
    s.gains = draw_rayleigh_gains(n, mean, ch_seed).gains;
  }
  if (n == 0) throw std::invalid_argument("scenario needs at least one agent");

  const json act = ag.value("activation", json(1.0));
  if (act.is_number()) {
    s.activations.assign(n, act.get<double>());
  } else if (act.is_array()) {
    s.activations = act.get<std::vector<double>>();
    if (s.activations.size() != n) throw std::invalid_argument("one activation probability per agent expected");
  } else if (act.is_object() && act.contains("uniform_random")) {
    const std::uint64_t a_seed = seed_override.value_or(seed_or(act.at("uniform_random"), seed));
    const CounterStream rng(a_seed, 1);
    for (std::size_t i = 0; i < n; ++i) s.activations.push_back(rng.uniform(i));
  } else {
    throw std::invalid_argument("agents.activation must be a number, an array, or {\"uniform_random\": ...}");
  }

  const json shared_u = ag.value("utility", json::object());
  const json shared_w = ag.value("pwf", json::object());
  const json per = ag.value("per_agent", json::array());
  if (!per.is_array() || (!per.empty() && per.size() != n))
    throw std::invalid_argument("agents.per_agent must list one entry per agent");
  for (std::size_t i = 0; i < n; ++i) {
    const json& o = per.empty() ? json::object() : per.at(i);
    s.utilities.push_back(parse_utility(o.value("utility", shared_u), x0, 0.0));
    s.pwfs.push_back(parse_pwf(o.value("pwf", shared_w)));
    if (o.contains("activation")) s.activations[i] = number(o, "activation");
  }

  if (j.contains("p_total_watts")) s.p_total_watts = number(j, "p_total_watts");
  else if (j.contains("p_total_dbm")) s.p_total_watts = dbm_to_watts(number(j, "p_total_dbm"));

  if (j.contains("p_total_sweep")) {
    const json& sw = j.at("p_total_sweep");
    SweepSpec sp{};
    if (sw.contains("lo_dbm")) {
      sp.lo_watts = dbm_to_watts(number(sw, "lo_dbm"));
      sp.hi_watts = dbm_to_watts(number(sw, "hi_dbm"));
    } else {
      sp.lo_watts = number(sw, "lo_watts");
      sp.hi_watts = number(sw, "hi_watts");
    }
    sp.steps = sw.at("steps").get<std::size_t>();
    sp.log_spaced = sw.value("spacing", "log") == "log";
    if (!(sp.lo_watts > 0.0 && sp.hi_watts >= sp.lo_watts) || sp.steps == 0)
      throw std::invalid_argument("p_total_sweep needs 0 < lo <= hi and steps >= 1");
    s.sweep = sp;
  }

  if (j.contains("prospect")) {
    std::vector<Outcome> entries;
    for (const auto& e : j.at("prospect")) entries.push_back({e.at(0).get<double>(), e.at(1).get<double>()});
    s.prospect = Prospect(std::move(entries));
  }

  // Validate agents up front so every later command sees a consistent scenario.
  (void)s.agents();

  json& r = s.resolved;
  r["seed"] = seed;
  r["snr0_db"] = s.snr0_db;
  r["n0_dbm_per_hz"] = s.n0_dbm_per_hz;
  r["bandwidth_hz"] = s.bandwidth_hz;
  r["noise_watts"] = s.noise_watts;
  r["gains"] = s.gains;
  r["activations"] = s.activations;
  json us = json::array();
  json ws = json::array();
  for (std::size_t i = 0; i < n; ++i) {
    us.push_back(utility_to_json(s.utilities[i]));
    ws.push_back(pwf_to_json(s.pwfs[i]));
  }
  r["utilities"] = us;
  r["pwfs"] = ws;
  if (s.p_total_watts) r["p_total_watts"] = *s.p_total_watts;
  if (s.sweep) {
    r["p_total_sweep"] = {{"lo_watts", s.sweep->lo_watts},
                          {"hi_watts", s.sweep->hi_watts},
                          {"steps", s.sweep->steps},
                          {"spacing", s.sweep->log_spaced ? "log" : "linear"}};
  }
  return s;
}

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config '" + path + "'");
  try {
    return json::parse(in, nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("config '" + path + "' is not valid JSON: " + e.what());
  }
}

}  // namespace cpt::cli

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "cpt/allocation.hpp"
#include "cpt/channel.hpp"
#include "cpt/cli/commands.hpp"
#include "cpt/loss_aversion.hpp"
#include "cpt/perception.hpp"
#include "cpt/prospect.hpp"
#include "cpt/risk_split.hpp"

namespace py = pybind11;
using namespace cpt;

namespace {

Prospect to_prospect(const std::vector<std::pair<double, double>>& entries) {
  std::vector<Outcome> e;
  e.reserve(entries.size());
  for (const auto& [p, v] : entries) e.push_back({p, v});
  return Prospect(std::move(e));
}

std::vector<std::string> label_names(const std::vector<Label>& labels) {
  std::vector<std::string> out;
  for (auto l : labels) out.emplace_back(label_name(l));
  return out;
}

py::dict result_dict(const AllocationResult& r) {
  py::dict d;
  d["powers"] = r.powers;
  d["mu"] = r.mu;
  d["labels"] = label_names(r.labels);
  d["objective"] = r.objective;
  d["p_total"] = r.p_total;
  d["used_numeric"] = r.used_numeric;
  d["slack"] = r.slack;
  d["max_stationarity"] = r.kkt.max_stationarity;
  d["primal_infeasibility"] = r.kkt.primal_infeasibility;
  d["budget_slackness"] = r.kkt.budget_slackness;
  d["warnings"] = r.warnings;
  return d;
}

std::pair<std::string, std::string> run_scenario(const std::string& config, std::optional<std::uint64_t> seed,
                                                 bool sweep) {
  const auto s = cli::parse_scenario(cli::json::parse(config), seed);
  std::ostringstream csv, log;
  if (sweep) cli::cmd_sweep(s, csv, log);
  else cli::cmd_allocate(s, csv, log);
  return {csv.str(), log.str()};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Prospect-theoretic valuation and power allocation";

  py::enum_<BranchShape>(m, "BranchShape")
      .value("concave", BranchShape::Concave)
      .value("convex", BranchShape::Convex)
      .value("linear", BranchShape::Linear);

  py::class_<KtParams>(m, "KtParams")
      .def(py::init([](double alpha, double beta, double lambda_) { return KtParams{alpha, beta, lambda_}; }),
           py::arg("alpha") = 1.0, py::arg("beta") = 1.0, py::arg("lambda_") = 1.0)
      .def_readwrite("alpha", &KtParams::alpha)
      .def_readwrite("beta", &KtParams::beta)
      .def_readwrite("lambda_", &KtParams::lambda);

  py::class_<KwParams>(m, "KwParams")
      .def(py::init([](double l1, double l2, double a, double b) { return KwParams{l1, l2, a, b}; }),
           py::arg("lambda1") = 1.0, py::arg("lambda2") = 1.0, py::arg("alpha") = 1.0, py::arg("beta") = 1.0)
      .def_readwrite("lambda1", &KwParams::lambda1)
      .def_readwrite("lambda2", &KwParams::lambda2)
      .def_readwrite("alpha", &KwParams::alpha)
      .def_readwrite("beta", &KwParams::beta);

  py::class_<GeneralizedParams>(m, "GeneralizedParams")
      .def(py::init<>())
      .def_readwrite("lambda1", &GeneralizedParams::lambda1)
      .def_readwrite("lambda2", &GeneralizedParams::lambda2)
      .def_readwrite("alpha", &GeneralizedParams::alpha)
      .def_readwrite("beta", &GeneralizedParams::beta)
      .def_readwrite("gamma1", &GeneralizedParams::gamma1)
      .def_readwrite("gamma2", &GeneralizedParams::gamma2)
      .def_readwrite("mu1", &GeneralizedParams::mu1)
      .def_readwrite("mu2", &GeneralizedParams::mu2)
      .def_readwrite("gain_shape", &GeneralizedParams::gain_shape)
      .def_readwrite("loss_shape", &GeneralizedParams::loss_shape);

  constexpr double kNoFloor = -std::numeric_limits<double>::infinity();
  py::class_<UtilitySpec>(m, "UtilitySpec")
      .def_static("kt", &UtilitySpec::kt, py::arg("params"), py::arg("x0"), py::arg("domain_min") = kNoFloor)
      .def_static("kw", &UtilitySpec::kw, py::arg("params"), py::arg("x0"), py::arg("domain_min") = kNoFloor)
      .def_static("generalized", &UtilitySpec::generalized, py::arg("params"), py::arg("x0"),
                  py::arg("domain_min") = kNoFloor)
      .def_property_readonly("x0", &UtilitySpec::x0)
      .def_property_readonly("domain_min", &UtilitySpec::domain_min)
      .def_property_readonly("family", &UtilitySpec::family_name)
      .def("with_reference", &UtilitySpec::with_reference);

  m.def("utility_value", &utility_value, py::arg("u"), py::arg("x"));
  m.def(
      "utility_derivative",
      [](const UtilitySpec& u, double x, const std::string& side) {
        const Side s = side == "left" ? Side::Left : side == "right" ? Side::Right : Side::Auto;
        return utility_derivative(u, x, s).value;
      },
      py::arg("u"), py::arg("x"), py::arg("side") = "auto");
  m.def("arrow_pratt", &arrow_pratt, py::arg("u"), py::arg("x"));

  py::class_<WeightingSpec>(m, "WeightingSpec")
      .def_static("identity", &WeightingSpec::identity)
      .def_static("tk92", &WeightingSpec::tk92, py::arg("delta"))
      .def_static("prelec", &WeightingSpec::prelec, py::arg("gamma"), py::arg("theta"))
      .def_property_readonly("family", &WeightingSpec::family_name);

  m.def("pwf_value", &pwf_value, py::arg("w"), py::arg("p"));
  m.def("pwf_derivative", py::overload_cast<const WeightingSpec&, double>(&pwf_derivative), py::arg("w"),
        py::arg("p"));

  m.def(
      "cpt_value",
      [](const std::vector<std::pair<double, double>>& p, const UtilitySpec& u, const WeightingSpec& w) {
        return cpt_value(to_prospect(p), u, w);
      },
      py::arg("prospect"), py::arg("u"), py::arg("w"));
  m.def(
      "cpt_value_two_sided",
      [](const std::vector<std::pair<double, double>>& p, const UtilitySpec& u, const WeightingSpec& wp,
         const WeightingSpec& wm) { return cpt_value_two_sided(to_prospect(p), u, wp, wm); },
      py::arg("prospect"), py::arg("u"), py::arg("w_plus"), py::arg("w_minus"));
  m.def(
      "decision_weights",
      [](const std::vector<std::pair<double, double>>& p, const WeightingSpec& w) {
        const auto d = decision_weights(to_prospect(p), w);
        py::dict out;
        out["weights"] = d.weights;
        out["rank"] = d.rank;
        out["order"] = d.order;
        return out;
      },
      py::arg("prospect"), py::arg("w"));

  m.def(
      "loss_aversion_report",
      [](const UtilitySpec& u, const std::vector<double>& deltas) {
        const auto r = loss_aversion_report(u, deltas);
        py::dict d;
        d["symmetric_bet_aversion"] = r.symmetric_bet_aversion;
        d["increasing_symmetric_bet_aversion"] = r.increasing_symmetric_bet_aversion;
        d["weak"] = r.weak;
        d["strong"] = r.strong;
        d["strong_analytic"] = r.strong_analytic;
        d["sup_gain_slope"] = r.sup_gain_slope;
        d["inf_loss_slope"] = r.inf_loss_slope;
        return d;
      },
      py::arg("u"), py::arg("deltas"));

  m.def(
      "perceived_cdf",
      [](double x, const WeightingSpec& w, double mean) {
        return perceived_cdf({ScalarDistribution::exponential(mean), w}, x);
      },
      py::arg("x"), py::arg("w"), py::arg("mean") = 1.0);
  m.def(
      "perceptual_utility",
      [](const std::function<double(double)>& metric, const UtilitySpec& u, const WeightingSpec& w, double mean,
         std::optional<std::uint64_t> mc_seed, std::size_t samples) {
        const PerceptualTransform t{ScalarDistribution::exponential(mean), w};
        PerceptualMethod method = QuadratureMethod{};
        if (mc_seed) method = MonteCarloMethod{*mc_seed, samples};
        const auto e = perceptual_utility(metric, t, u, method);
        return std::make_pair(e.value, e.error);
      },
      py::arg("metric"), py::arg("u"), py::arg("w"), py::arg("mean") = 1.0, py::arg("mc_seed") = py::none(),
      py::arg("samples") = 1'000'000);

  m.def("db_to_linear", &db_to_linear);
  m.def("dbm_to_watts", &dbm_to_watts, py::arg("x_dbm"), py::arg("bandwidth_hz") = 1.0);
  m.def(
      "draw_rayleigh_gains", [](std::size_t n, double mean, std::uint64_t seed) {
        return draw_rayleigh_gains(n, mean, seed).gains;
      },
      py::arg("n"), py::arg("mean"), py::arg("seed"));

  py::class_<Agent>(m, "Agent")
      .def(py::init<std::size_t, double, double, double, WeightingSpec, UtilitySpec>(), py::arg("id"),
           py::arg("gain"), py::arg("noise"), py::arg("activation"), py::arg("pwf"), py::arg("utility"))
      .def_property_readonly("weight", &Agent::weight)
      .def_property_readonly("unit_snr", &Agent::unit_snr)
      .def_property_readonly("quality", &Agent::quality);

  m.def(
      "solve", [](const std::vector<Agent>& a, double p) { return result_dict(solve(a, p)); }, py::arg("agents"),
      py::arg("p_total"));
  m.def(
      "solve_numeric",
      [](const std::vector<Agent>& a, double p, std::uint64_t seed) {
        NumericOptions o;
        o.seed = seed;
        return result_dict(solve_numeric(a, p, o));
      },
      py::arg("agents"), py::arg("p_total"), py::arg("seed") = 0);
  m.def(
      "dual_intervals",
      [](const std::vector<Agent>& a) {
        const auto d = dual_intervals(a);
        return std::make_pair(d.mu_hat_1, d.mu_hat_2);
      },
      py::arg("agents"));
  m.def(
      "total_power", [](const std::vector<Agent>& a, double mu) { return total_power(a, mu); }, py::arg("agents"),
      py::arg("mu"));
  m.def(
      "equal_split", [](const std::vector<Agent>& a, double p) { return equal_split(a, p); }, py::arg("agents"),
      py::arg("p_total"));
  m.def(
      "water_filling", [](const std::vector<Agent>& a, double p) { return water_filling(a, p); },
      py::arg("agents"), py::arg("p_total"));

  m.def(
      "risk_split_search",
      [](double budget, const std::vector<std::pair<double, double>>& sources, const UtilitySpec& u,
         const WeightingSpec& w, std::size_t divisions) {
        std::vector<RiskSource> s;
        for (const auto& [payoff, success] : sources) s.push_back({payoff, success});
        const auto r = risk_split_search(budget, s, u, w, divisions);
        return std::make_tuple(r.best_point().alpha, r.best_point().value, std::string(verdict_name(r.verdict)));
      },
      py::arg("budget"), py::arg("sources"), py::arg("u"), py::arg("w"), py::arg("divisions") = 100);

  m.def(
      "allocate_csv",
      [](const std::string& config, std::optional<std::uint64_t> seed) { return run_scenario(config, seed, false); },
      py::arg("config"), py::arg("seed") = py::none());
  m.def(
      "sweep_csv",
      [](const std::string& config, std::optional<std::uint64_t> seed) { return run_scenario(config, seed, true); },
      py::arg("config"), py::arg("seed") = py::none());
}

#include "cpt/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "cpt/channel.hpp"
#include "cpt/loss_aversion.hpp"
#include "cpt/perception.hpp"

namespace cpt::cli {
namespace {

std::string join(const std::vector<double>& v, char sep = ';') {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += sep;
    s += format_number(v[i]);
  }
  return s;
}

std::string snr_db(double snr) { return snr > 0.0 ? format_number(linear_to_db(snr)) : "-inf"; }

json with_command(json manifest, const std::string& cmd) {
  manifest["command"] = cmd;
  return manifest;
}

double required_budget(const Scenario& s) {
  if (!s.p_total_watts) throw std::invalid_argument("scenario needs p_total_watts or p_total_dbm");
  return *s.p_total_watts;
}

}  // namespace

CurveKind parse_curve_kind(const std::string& s) {
  if (s == "utility") return CurveKind::Utility;
  if (s == "pwf") return CurveKind::Pwf;
  if (s == "perceived-cdf") return CurveKind::PerceivedCdf;
  throw std::invalid_argument("unknown curve kind '" + s + "' (expected utility, pwf or perceived-cdf)");
}

std::vector<std::size_t> quality_order(const std::vector<Agent>& agents) {
  std::vector<std::size_t> order(agents.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return agents[a].unit_snr() < agents[b].unit_snr();
  });
  return order;
}

void cmd_curve(CurveKind kind, const json& config, const Grid& grid, std::ostream& csv) {
  CsvWriter out(csv);
  json manifest{{"command", "curve"}, {"grid", {{"lo", grid.lo}, {"hi", grid.hi}, {"steps", grid.steps}}}};
  switch (kind) {
    case CurveKind::Utility: {
      json uj = config.value("utility", json::object());
      if (!uj.contains("x0") && !uj.contains("x0_db")) uj["x0"] = db_to_linear(7.0);
      const auto u = parse_utility(uj);
      manifest["kind"] = "utility";
      manifest["utility"] = utility_to_json(u);
      out.manifest(manifest);
      out.header({"x", "value"});
      for (double x : grid.points()) out.row({format_number(x), format_number(utility_value(u, x))});
      break;
    }
    case CurveKind::Pwf: {
      const auto w = parse_pwf(config.value("pwf", json{{"family", "prelec"}, {"gamma", 1.0}, {"theta", 0.5}}));
      if (grid.lo < 0.0 || grid.hi > 1.0) throw std::invalid_argument("pwf grid must lie inside [0, 1]");
      manifest["kind"] = "pwf";
      manifest["pwf"] = pwf_to_json(w);
      out.manifest(manifest);
      out.header({"p", "w"});
      for (double p : grid.points()) out.row({format_number(p), format_number(pwf_value(w, p))});
      break;
    }
    case CurveKind::PerceivedCdf: {
      const auto w = parse_pwf(config.value("pwf", json{{"family", "prelec"}, {"gamma", 1.0}, {"theta", 0.5}}));
      const json dist = config.value("distribution", json{{"kind", "exponential"}, {"mean", 1.0}});
      if (dist.value("kind", "exponential") != "exponential")
        throw std::invalid_argument("only the exponential distribution is available for curves");
      const double mean = dist.value("mean", 1.0);
      const PerceptualTransform t{ScalarDistribution::exponential(mean), w};
      manifest["kind"] = "perceived-cdf";
      manifest["pwf"] = pwf_to_json(w);
      manifest["distribution"] = {{"kind", "exponential"}, {"mean", mean}};
      out.manifest(manifest);
      out.header({"x", "F", "F_perceived"});
      for (double x : grid.points())
        out.row({format_number(x), format_number(t.base.cdf(x)), format_number(perceived_cdf(t, x))});
      break;
    }
  }
}

AllocateReport cmd_allocate(const Scenario& s, std::ostream& csv, std::ostream& log) {
  const double p_total = required_budget(s);
  const auto agents = s.agents();
  AllocateReport rep;
  rep.result = solve(agents, p_total);
  rep.order = quality_order(agents);
  rep.equal = equal_split(agents, p_total);
  rep.water = water_filling(agents, p_total);
  rep.equal_objective = objective(agents, rep.equal);
  rep.water_objective = objective(agents, rep.water);

  CsvWriter out(csv);
  out.manifest(with_command(s.resolved, "allocate"));
  out.header({"agent", "gain", "wp", "power", "snr_db", "label"});
  for (std::size_t i : rep.order) {
    const auto& a = agents[i];
    out.row({std::to_string(a.id()), format_number(a.gain()), format_number(a.weight()),
             format_number(rep.result.powers[i]), snr_db(a.snr(rep.result.powers[i])),
             label_name(rep.result.labels[i])});
  }

  const auto& r = rep.result;
  log << "solver=" << (r.used_numeric ? "numeric" : "closed-form") << " mu=" << format_number(r.mu)
      << " objective=" << format_number(r.objective)
      << " stationarity=" << format_number(r.kkt.max_stationarity)
      << " primal=" << format_number(r.kkt.primal_infeasibility)
      << " budget_slackness=" << format_number(r.kkt.budget_slackness)
      << " slack=" << (r.slack ? "yes" : "no") << '\n';
  for (const auto& w : r.warnings) log << "warning: " << w << '\n';
  std::vector<double> eq, wf;
  for (std::size_t i : rep.order) {
    eq.push_back(rep.equal[i]);
    wf.push_back(rep.water[i]);
  }
  log << "baseline=equal_split objective=" << format_number(rep.equal_objective) << " powers=" << join(eq) << '\n';
  log << "baseline=water_filling objective=" << format_number(rep.water_objective) << " powers=" << join(wf)
      << '\n';
  return rep;
}

std::vector<SweepRow> cmd_sweep(const Scenario& s, std::ostream& csv, std::ostream& log) {
  if (!s.sweep) throw std::invalid_argument("scenario needs a p_total_sweep section");
  const auto agents = s.agents();
  const auto order = quality_order(agents);
  const auto points = s.sweep->points();

  auto solve_point = [&](double p_total) {
    const auto r = solve(agents, p_total);
    SweepRow row;
    row.p_total = p_total;
    row.mu = r.mu;
    row.objective = r.objective;
    row.slack = r.slack;
    for (Label l : r.labels) {
      switch (l) {
        case Label::Gain: ++row.n_gain; break;
        case Label::Pinned: ++row.n_pinned; break;
        case Label::Loss: ++row.n_loss; break;
        case Label::Inactive: ++row.n_inactive; break;
      }
    }
    double best = -1.0;
    for (std::size_t k = 0; k < order.size(); ++k) {
      const double p = r.powers[order[k]];
      row.powers.push_back(p);
      if (p > best) {
        best = p;
        row.peak_rank = k + 1;
      }
    }
    return row;
  };

  std::vector<SweepRow> rows(points.size());
  const std::size_t workers = std::max<std::size_t>(1, std::thread::hardware_concurrency());
  for (std::size_t begin = 0; begin < points.size(); begin += workers) {
    const std::size_t end = std::min(points.size(), begin + workers);
    std::vector<std::future<SweepRow>> batch;
    for (std::size_t k = begin; k < end; ++k)
      batch.push_back(std::async(std::launch::async, solve_point, points[k]));
    for (std::size_t k = begin; k < end; ++k) rows[k] = batch[k - begin].get();
  }

  CsvWriter out(csv);
  out.manifest(with_command(s.resolved, "sweep"));
  out.header({"p_total", "mu", "objective", "n_gain", "n_pinned", "n_loss", "n_inactive", "peak_rank"});
  std::size_t slack = 0;
  for (const auto& r : rows) {
    out.row({format_number(r.p_total), format_number(r.mu), format_number(r.objective),
             std::to_string(r.n_gain), std::to_string(r.n_pinned), std::to_string(r.n_loss),
             std::to_string(r.n_inactive), std::to_string(r.peak_rank)});
    slack += r.slack ? 1 : 0;
  }
  log << "sweep points=" << rows.size() << " slack_points=" << slack << '\n';
  return rows;
}

RiskSplitResult cmd_risk_split(const json& config, std::ostream& csv, std::ostream& log) {
  if (!config.contains("risk_split")) throw std::invalid_argument("config needs a 'risk_split' section");
  const json& rs = config.at("risk_split");
  const double budget = rs.value("budget", 1.0);
  const auto divisions = rs.value("divisions", std::size_t{100});
  std::vector<RiskSource> sources;
  for (const auto& src : rs.at("sources"))
    sources.push_back({src.at("payoff").get<double>(), src.at("success").get<double>()});
  const auto u = parse_utility(rs.at("utility"));
  const auto w = parse_pwf(rs.value("pwf", json::object()));
  const auto result = risk_split_search(budget, sources, u, w, divisions);

  json manifest{{"command", "risk-split"}, {"budget", budget}, {"divisions", divisions},
                {"utility", utility_to_json(u)}, {"pwf", pwf_to_json(w)}};
  json js = json::array();
  for (const auto& s : sources) js.push_back({{"payoff", s.payoff}, {"success", s.success}});
  manifest["sources"] = js;

  CsvWriter out(csv);
  out.manifest(manifest);
  std::vector<std::string> head;
  for (std::size_t i = 0; i < sources.size(); ++i) head.push_back("alpha_" + std::to_string(i + 1));
  head.push_back("cpt_value");
  out.header(head);
  for (const auto& p : result.grid) {
    std::vector<std::string> cells;
    for (double a : p.alpha) cells.push_back(format_number(a));
    cells.push_back(format_number(p.value));
    out.row(cells);
  }
  log << "verdict=" << verdict_name(result.verdict) << " best_alpha=" << join(result.best_point().alpha)
      << " best_value=" << format_number(result.best_point().value) << '\n';
  return result;
}

int cmd_validate(const json& config, std::optional<std::uint64_t> seed, std::ostream& log) {
  Scenario s;
  try {
    s = parse_scenario(config, seed);
  } catch (const std::exception& e) {
    log << "invalid: " << e.what() << '\n';
    return 1;
  }
  const auto agents = s.agents();
  log << "agents=" << agents.size() << " noise_watts=" << format_number(s.noise_watts)
      << " snr0=" << format_number(db_to_linear(s.snr0_db)) << '\n';

  bool closed_form = true;
  for (std::size_t i = 0; i < agents.size(); ++i) {
    const auto& u = agents[i].utility();
    const double x0 = u.x0();
    const std::vector<double> deltas{1e-3 * x0, 1e-2 * x0, 1e-1 * x0, 0.5 * x0, x0};
    const auto la = loss_aversion_report(u, deltas);
    log << "agent " << i << " utility=" << u.family_name() << " symmetric_bet_aversion="
        << la.symmetric_bet_aversion << " increasing_symmetric_bet_aversion="
        << la.increasing_symmetric_bet_aversion << " weak_loss_aversion=" << la.weak
        << " strong_loss_aversion=" << la.strong;
    if (la.strong_analytic)
      log << " strong_loss_aversion_analytic=" << *la.strong_analytic << " ("
          << format_number(la.sup_gain_slope) << " < " << format_number(la.inf_loss_slope) << ")";
    log << '\n';
    closed_form = closed_form && closed_form_applicable(agents[i]);
  }

  if (closed_form) {
    const auto di = dual_intervals(agents);
    log << "agent,quality,gap_lo,gap_hi,zero_cut\n";
    for (std::size_t i = 0; i < agents.size(); ++i) {
      const auto& t = di.agents[i];
      log << i << ',' << format_number(agents[i].quality()) << ',' << format_number(t.gain_edge) << ','
          << format_number(t.loss_edge) << ',' << format_number(t.zero_cut) << '\n';
    }
    log << "mu_hat_1=" << format_number(di.mu_hat_1) << " mu_hat_2=" << format_number(di.mu_hat_2)
        << " p_total_1=" << format_number(total_power(agents, di.mu_hat_1))
        << " p_total_2=" << format_number(total_power(agents, di.mu_hat_2)) << '\n';
  } else {
    log << "closed form not applicable; allocation will use the numeric solver\n";
  }

  if (s.prospect) {
    log << "prospect outcomes=" << s.prospect->size()
        << " cpt_value=" << format_number(cpt_value(*s.prospect, agents[0].utility(), agents[0].pwf())) << '\n';
  }
  log << "valid\n";
  return 0;
}

}  // namespace cpt::cli

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "cpt/cli/commands.hpp"

namespace {

using cpt::cli::json;

struct Output {
  std::ofstream file;
  std::ostream* os = &std::cout;

  explicit Output(const std::string& path) {
    if (path.empty() || path == "-") return;
    file.open(path, std::ios::out | std::ios::trunc);
    if (!file) throw std::runtime_error("cannot write '" + path + "'");
    os = &file;
  }
};

json config_or_empty(const std::string& path) {
  return path.empty() ? json::object() : cpt::cli::load_json(path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Power allocation and prospect-theory utilities for CPT agents"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  std::optional<std::uint64_t> seed;
  std::string grid_text;
  std::string curve_kind;

  auto add_common = [&](CLI::App* sub, bool needs_config) {
    auto* opt = sub->add_option("--config", config_path, "JSON config file");
    if (needs_config) opt->required();
    sub->add_option("--out", out_path, "CSV output path (stdout when omitted)");
    sub->add_option("--seed", seed, "override every seed in the config");
  };

  auto* curve = app.add_subcommand("curve", "tabulate a utility, PWF or perceived CDF");
  curve->add_option("kind", curve_kind, "utility | pwf | perceived-cdf")->required();
  curve->add_option("--grid", grid_text, "lo:hi:steps")->required();
  add_common(curve, false);

  auto* allocate = app.add_subcommand("allocate", "solve one power-allocation scenario");
  add_common(allocate, true);

  auto* sweep = app.add_subcommand("sweep", "solve a scenario over a range of total power");
  add_common(sweep, true);

  auto* risk = app.add_subcommand("risk-split", "search budget splits over risk sources");
  add_common(risk, true);

  auto* validate = app.add_subcommand("validate", "check a scenario and print diagnostics");
  add_common(validate, true);

  CLI11_PARSE(app, argc, argv);

  try {
    if (curve->parsed()) {
      const auto kind = cpt::cli::parse_curve_kind(curve_kind);
      const auto grid = cpt::cli::parse_grid(grid_text);
      const json cfg = config_or_empty(config_path);
      Output out(out_path);
      cpt::cli::cmd_curve(kind, cfg, grid, *out.os);
    } else if (allocate->parsed()) {
      const auto s = cpt::cli::parse_scenario(cpt::cli::load_json(config_path), seed);
      Output out(out_path);
      cpt::cli::cmd_allocate(s, *out.os, std::cerr);
    } else if (sweep->parsed()) {
      const auto s = cpt::cli::parse_scenario(cpt::cli::load_json(config_path), seed);
      Output out(out_path);
      cpt::cli::cmd_sweep(s, *out.os, std::cerr);
    } else if (risk->parsed()) {
      const json cfg = cpt::cli::load_json(config_path);
      Output out(out_path);
      cpt::cli::cmd_risk_split(cfg, *out.os, std::cerr);
    } else if (validate->parsed()) {
      return cpt::cli::cmd_validate(cpt::cli::load_json(config_path), seed, std::cout);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

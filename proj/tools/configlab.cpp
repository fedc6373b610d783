// Command-line front end: catalog inspection and config-driven experiments.

#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "configlab/errors.hpp"
#include "configlab/experiment.hpp"
#include "configlab/log.hpp"
#include "configlab/parallel.hpp"

namespace {

using configlab::experiment::ExperimentConfig;

int run_config(ExperimentConfig cfg, std::uint64_t seed_override, bool has_seed,
               const std::string& out_override) {
  if (has_seed) cfg.kv["seed"] = std::to_string(seed_override);
  if (!out_override.empty()) cfg.kv["out"] = out_override;
  // re-parse so overrides pass validation and defaults fill consistently
  cfg = configlab::experiment::parse_config(configlab::experiment::config_to_text(cfg));
  const auto report = configlab::experiment::run_experiment(cfg);
  std::printf("%s\n", (cfg.at("out") + "/report.json").c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"configuration-set experiments: fractal measures, configuration maps, "
               "density estimation and threshold checks"};
  app.require_subcommand(1);

  int workers = 1;
  app.add_option("--workers", workers, "worker threads (never changes results)");

  std::string config_path;
  std::uint64_t seed = 0;
  bool has_seed = false;
  std::string out_dir;

  auto* thresholds = app.add_subcommand("thresholds", "print the catalog threshold table");
  auto* catalog = app.add_subcommand("catalog", "print catalog maps and parameter spaces");

  auto* run = app.add_subcommand("run", "run an experiment from a config file");
  run->add_option("config", config_path, "experiment config file")->required();
  run->add_option("--seed", seed, "override the config seed")->each([&](const std::string&) { has_seed = true; });
  run->add_option("--out", out_dir, "override the output directory");

  // single-analysis shortcuts synthesizing a config
  std::string map_name = "distance";
  int map_d = 2;
  std::string gen = "uniform";
  int n = 100000;
  double eps = 0.01;
  std::int64_t budget = 1000000;
  std::uint64_t shortcut_seed = 1;
  double xi_max = 64.0;

  const auto add_shortcut = [&](const char* name, const char* help) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--map", map_name, "catalog map name");
    sub->add_option("--d", map_d, "ambient dimension parameter");
    sub->add_option("--gen", gen, "generator kind for both measures");
    sub->add_option("--n", n, "points per measure");
    sub->add_option("--eps", eps, "mollifier bandwidth");
    sub->add_option("--budget", budget, "pair budget");
    sub->add_option("--seed", shortcut_seed, "experiment seed");
    sub->add_option("--out", out_dir, "output directory");
    return sub;
  };
  auto* density = add_shortcut("density", "estimate the configuration density");
  auto* energy = add_shortcut("energy", "s-energy diagnostics for the measures");
  auto* dimension = add_shortcut("dimension", "dimension diagnostics for the measures");
  auto* decay = add_shortcut("decay", "Fourier decay diagnostics for the measures");
  decay->add_option("--xi-max", xi_max, "largest probed frequency");

  CLI11_PARSE(app, argc, argv);
  configlab::set_workers(workers);

  try {
    if (thresholds->parsed()) {
      std::fputs(configlab::experiment::thresholds_table().c_str(), stdout);
      return 0;
    }
    if (catalog->parsed()) {
      std::fputs(configlab::experiment::catalog_table().c_str(), stdout);
      return 0;
    }
    if (run->parsed()) {
      return run_config(configlab::experiment::parse_config_file(config_path), seed, has_seed,
                        out_dir);
    }
    // shortcuts
    ExperimentConfig cfg;
    cfg.kv["map.name"] = map_name;
    cfg.kv["map.d"] = std::to_string(map_d);
    cfg.kv["mu1.kind"] = gen;
    cfg.kv["mu2.kind"] = gen;
    cfg.kv["mu1.n"] = std::to_string(n);
    cfg.kv["mu2.n"] = std::to_string(n);
    cfg.kv["eps"] = std::to_string(eps);
    cfg.kv["pair_budget"] = std::to_string(budget);
    cfg.kv["seed"] = std::to_string(shortcut_seed);
    if (density->parsed()) cfg.kv["analyses"] = "density,intervals";
    if (energy->parsed()) cfg.kv["analyses"] = "energy";
    if (dimension->parsed()) cfg.kv["analyses"] = "dimension";
    if (decay->parsed()) {
      cfg.kv["analyses"] = "decay";
      cfg.kv["decay.xi_max"] = std::to_string(xi_max);
    }
    cfg.kv["out"] = out_dir.empty() ? "." : out_dir;
    cfg = configlab::experiment::parse_config(configlab::experiment::config_to_text(cfg));
    configlab::experiment::run_experiment(cfg);
    std::printf("%s\n", (cfg.at("out") + "/report.json").c_str());
    return 0;
  } catch (const configlab::Error& e) {
    std::fprintf(stderr, "error [%s]: %s\n", configlab::error_kind_name(e.kind()), e.what());
    return e.is_config_error() ? 2 : 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return 4;
  }
}

#pragma once

#include <cstdint>
#include <map>
#include <string>

#include <json.hpp>

#include "configlab/fractal.hpp"
#include "configlab/geometry.hpp"
#include "configlab/measure.hpp"

namespace configlab::experiment {

// Flat dotted key-value config; one file describes one experiment. All
// defaults are filled at parse time, so the echoed config in a report
// reproduces the run exactly.
struct ExperimentConfig {
  std::map<std::string, std::string> kv;

  const std::string& at(const std::string& key) const;
  bool has(const std::string& key) const { return kv.count(key) > 0; }
  double number(const std::string& key) const;
  std::int64_t integer(const std::string& key) const;
  std::uint64_t uinteger(const std::string& key) const;
};

ExperimentConfig parse_config(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);
std::string config_to_text(const ExperimentConfig& cfg);

// Catalog lookup driven by map.* keys (UnknownMap for unlisted names).
geometry::ConfigurationMap map_from_config(const ExperimentConfig& cfg);

// Generator for one side; prefix is "mu1" or "mu2" (or a product child).
fractal::SampledMeasure generator_from_config(const ExperimentConfig& cfg,
                                              const geometry::ConfigurationMap& map,
                                              const std::string& prefix,
                                              geometry::Side side);

struct ExperimentReport {
  nlohmann::json body;
};

// Runs generators -> diagnostics -> analyses and writes report.json,
// density.csv (+ density.json sidecar) and measure_mu{1,2}.txt under the
// config's output directory. Wall-clock timings go to timings.json, kept
// out of report.json so reruns are byte-identical.
ExperimentReport run_experiment(const ExperimentConfig& cfg);

// One row per catalog map: name, d1, d2, k, alpha, beta, threshold.
std::string thresholds_table();
// Catalog with parameter-space detail.
std::string catalog_table();

}  // namespace configlab::experiment

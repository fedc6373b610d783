#include "configlab/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "configlab/diagnostics.hpp"
#include "configlab/errors.hpp"
#include "configlab/log.hpp"
#include "configlab/rng.hpp"

namespace configlab::experiment {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<std::string> split_list(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

const std::set<std::string> kScalarKeys = {
    "map.name", "map.d", "map.parts", "map.k",
    "eps", "pair_budget", "seed", "delta", "analyses", "out", "t",
    "grid.lo", "grid.hi", "grid.step",
    "scaling.eps_lo", "scaling.eps_hi", "scaling.points",
    "energy.s", "decay.xi_max", "decay.directions",
};

const std::set<std::string> kMuFields = {
    "kind", "n", "d", "seed", "lo", "hi", "m", "dim", "depth", "s", "q", "radius",
};

bool valid_mu_key(const std::string& rest) {
  if (kMuFields.count(rest)) return true;
  // one level of product children
  for (const char* child : {"a.", "b."}) {
    if (rest.rfind(child, 0) == 0 && kMuFields.count(rest.substr(2))) return true;
  }
  return false;
}

void check_key(const std::string& key, int line_no) {
  if (kScalarKeys.count(key)) return;
  for (const char* mu : {"mu1.", "mu2."}) {
    if (key.rfind(mu, 0) == 0 && valid_mu_key(key.substr(4))) return;
  }
  fail(ErrorKind::ParseError,
       "unknown config key '" + key + "' (line " + std::to_string(line_no) + ")");
}

void set_default(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  if (!cfg.has(key)) cfg.kv[key] = value;
}

// declared Hausdorff dimension of the generator's target measure
double declared_dim(const ExperimentConfig& cfg, const geometry::ConfigurationMap& map,
                    const std::string& prefix, geometry::Side side);

int generator_width(const ExperimentConfig& cfg, const geometry::ConfigurationMap& map,
                    const std::string& prefix, geometry::Side side) {
  const std::string kind = cfg.at(prefix + ".kind");
  const geometry::SpaceSpec& space =
      (side == geometry::Side::X) ? map.x_space : map.y_space;
  if (kind == "uniform" || kind == "ifs" || kind == "lattice")
    return static_cast<int>(cfg.integer(prefix + ".d"));
  if (kind == "circle") return 2;
  if (kind == "param" || kind == "param_ifs") return space.ambient;
  if (kind == "product")
    return generator_width(cfg, map, prefix + ".a", side) +
           generator_width(cfg, map, prefix + ".b", side);
  fail(ErrorKind::ParseError, prefix + ".kind '" + kind + "' is not a generator");
}

void fill_generator_defaults(ExperimentConfig& cfg, const geometry::ConfigurationMap& map,
                             const std::string& prefix, geometry::Side side,
                             std::uint64_t base_seed, std::uint64_t salt) {
  set_default(cfg, prefix + ".kind", "uniform");
  const std::string kind = cfg.at(prefix + ".kind");
  set_default(cfg, prefix + ".seed", std::to_string(mix_seed(base_seed, salt)));
  const geometry::SpaceSpec& space =
      (side == geometry::Side::X) ? map.x_space : map.y_space;
  if (kind == "product") {
    set_default(cfg, prefix + ".n", "100000");
    fill_generator_defaults(cfg, map, prefix + ".a", side, base_seed, salt * 16 + 1);
    fill_generator_defaults(cfg, map, prefix + ".b", side, base_seed, salt * 16 + 2);
    return;
  }
  set_default(cfg, prefix + ".n", "100000");
  if (kind == "uniform") {
    set_default(cfg, prefix + ".d", std::to_string(space.ambient));
    set_default(cfg, prefix + ".lo", "0");
    set_default(cfg, prefix + ".hi", "1");
  } else if (kind == "ifs") {
    set_default(cfg, prefix + ".d", std::to_string(space.ambient));
    set_default(cfg, prefix + ".m", "2");
    set_default(cfg, prefix + ".dim", "0.63092975357145753");  // log 2 / log 3
    set_default(cfg, prefix + ".depth", "12");
  } else if (kind == "lattice") {
    set_default(cfg, prefix + ".d", std::to_string(space.ambient));
    set_default(cfg, prefix + ".s", "0.5");
    set_default(cfg, prefix + ".q", "10");
  } else if (kind == "circle") {
    set_default(cfg, prefix + ".radius", "1");
  } else if (kind == "param") {
    set_default(cfg, prefix + ".lo", "-1");
    set_default(cfg, prefix + ".hi", "1");
  } else if (kind == "param_ifs") {
    set_default(cfg, prefix + ".lo", "-1");
    set_default(cfg, prefix + ".hi", "1");
    set_default(cfg, prefix + ".m", "2");
    set_default(cfg, prefix + ".dim", "0.63092975357145753");
    set_default(cfg, prefix + ".depth", "10");
  } else {
    fail(ErrorKind::ParseError, prefix + ".kind '" + kind + "' is not a generator");
  }
}

void check_generator(const ExperimentConfig& cfg, const geometry::ConfigurationMap& map,
                     const std::string& prefix, geometry::Side side) {
  const geometry::SpaceSpec& space =
      (side == geometry::Side::X) ? map.x_space : map.y_space;
  const std::string kind = cfg.at(prefix + ".kind");
  const bool point_kind =
      kind == "uniform" || kind == "ifs" || kind == "lattice" || kind == "circle" || kind == "product";
  if (space.kind != geometry::SpaceKind::Point && point_kind)
    fail(ErrorKind::DimensionMismatch,
         prefix + ": map side is a parameter manifold; use kind=param or param_ifs");
  const int width = generator_width(cfg, map, prefix, side);
  if (width != space.ambient)
    fail(ErrorKind::DimensionMismatch,
         prefix + " produces width " + std::to_string(width) + " but the map side needs " +
             std::to_string(space.ambient));
}

double declared_dim(const ExperimentConfig& cfg, const geometry::ConfigurationMap& map,
                    const std::string& prefix, geometry::Side side) {
  const std::string kind = cfg.at(prefix + ".kind");
  const geometry::SpaceSpec& space =
      (side == geometry::Side::X) ? map.x_space : map.y_space;
  if (kind == "uniform") return cfg.number(prefix + ".d");
  if (kind == "ifs") return cfg.number(prefix + ".dim");
  if (kind == "lattice") return cfg.number(prefix + ".s");
  if (kind == "circle") return 1.0;
  if (kind == "param") return static_cast<double>(space.manifold_dim);
  if (kind == "param_ifs") return space.manifold_dim * cfg.number(prefix + ".dim");
  if (kind == "product")
    return declared_dim(cfg, map, prefix + ".a", side) + declared_dim(cfg, map, prefix + ".b", side);
  fail(ErrorKind::ParseError, prefix + ".kind '" + kind + "' is not a generator");
}

}  // namespace

const std::string& ExperimentConfig::at(const std::string& key) const {
  const auto it = kv.find(key);
  if (it == kv.end()) fail(ErrorKind::ParseError, "missing config key '" + key + "'");
  return it->second;
}

double ExperimentConfig::number(const std::string& key) const {
  const std::string& raw = at(key);
  try {
    std::size_t used = 0;
    const double v = std::stod(raw, &used);
    if (used != raw.size()) throw std::invalid_argument(raw);
    return v;
  } catch (const std::exception&) {
    fail(ErrorKind::ParseError, "config key '" + key + "' is not a number: " + raw);
  }
}

std::int64_t ExperimentConfig::integer(const std::string& key) const {
  const std::string& raw = at(key);
  std::int64_t v = 0;
  const auto res = std::from_chars(raw.data(), raw.data() + raw.size(), v);
  if (res.ec != std::errc() || res.ptr != raw.data() + raw.size())
    fail(ErrorKind::ParseError, "config key '" + key + "' is not an integer: " + raw);
  return v;
}

std::uint64_t ExperimentConfig::uinteger(const std::string& key) const {
  const std::string& raw = at(key);
  std::uint64_t v = 0;
  const auto res = std::from_chars(raw.data(), raw.data() + raw.size(), v);
  if (res.ec != std::errc() || res.ptr != raw.data() + raw.size())
    fail(ErrorKind::ParseError, "config key '" + key + "' is not an unsigned integer: " + raw);
  return v;
}

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig cfg;
  std::stringstream ss(text);
  std::string line;
  int line_no = 0;
  while (std::getline(ss, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      fail(ErrorKind::ParseError, "expected key = value (line " + std::to_string(line_no) + ")");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      fail(ErrorKind::ParseError, "empty key or value (line " + std::to_string(line_no) + ")");
    check_key(key, line_no);
    if (cfg.has(key))
      fail(ErrorKind::ParseError, "duplicate key '" + key + "' (line " + std::to_string(line_no) + ")");
    cfg.kv[key] = value;
  }

  if (!cfg.has("map.name")) fail(ErrorKind::ParseError, "map.name is required");
  if (!cfg.has("seed")) fail(ErrorKind::ParseError, "seed is required (no implicit randomness)");

  // global defaults
  set_default(cfg, "eps", "0.01");
  set_default(cfg, "pair_budget", "1000000");
  set_default(cfg, "analyses", "density,intervals");
  set_default(cfg, "out", ".");

  const geometry::ConfigurationMap map = map_from_config(cfg);
  const std::uint64_t seed = cfg.uinteger("seed");
  fill_generator_defaults(cfg, map, "mu1", geometry::Side::X, seed, 1);
  fill_generator_defaults(cfg, map, "mu2", geometry::Side::Y, seed, 2);
  check_generator(cfg, map, "mu1", geometry::Side::X);
  check_generator(cfg, map, "mu2", geometry::Side::Y);

  for (const std::string& a : split_list(cfg.at("analyses"), ',')) {
    if (a != "density" && a != "intervals" && a != "scaling" && a != "energy" &&
        a != "dimension" && a != "decay")
      fail(ErrorKind::ParseError, "unknown analysis '" + a + "'");
  }
  return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::ParseError, "cannot open config file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string config_to_text(const ExperimentConfig& cfg) {
  std::string out;
  for (const auto& [key, value] : cfg.kv) {
    out += key;
    out += " = ";
    out += value;
    out += "\n";
  }
  return out;
}

geometry::ConfigurationMap map_from_config(const ExperimentConfig& cfg) {
  const std::string& name = cfg.at("map.name");
  const auto d = [&](int fallback) {
    return cfg.has("map.d") ? static_cast<int>(cfg.integer("map.d")) : fallback;
  };
  if (name == "distance") return geometry::make_distance_map(d(2));
  if (name == "difference") return geometry::make_difference_map(d(1));
  if (name == "multiparameter") {
    std::vector<int> parts;
    for (const std::string& p : split_list(cfg.has("map.parts") ? cfg.at("map.parts") : "2,2", ','))
      parts.push_back(std::stoi(p));
    return geometry::make_multiparameter_map(parts);
  }
  if (name == "hyperplane_point") return geometry::make_hyperplane_point_map(d(2));
  if (name == "sphere_point") return geometry::make_sphere_point_map(d(2));
  if (name == "line_point") return geometry::make_line_point_map(d(3));
  if (name == "line_line") return geometry::make_line_line_map(d(3));
  if (name == "quadratic") {
    const int dd = d(2);
    const int k = cfg.has("map.k") ? static_cast<int>(cfg.integer("map.k")) : 2;
    return geometry::make_quadratic_map(geometry::build_quadratic_ensemble(dd, k));
  }
  if (name == "heisenberg") return geometry::make_heisenberg_map();
  if (name == "moment_curve") return geometry::make_moment_curve_map(d(2));
  fail(ErrorKind::UnknownMap, "unknown map '" + name + "'");
}

fractal::SampledMeasure generator_from_config(const ExperimentConfig& cfg,
                                              const geometry::ConfigurationMap& map,
                                              const std::string& prefix,
                                              geometry::Side side) {
  const std::string kind = cfg.at(prefix + ".kind");
  const std::uint64_t seed = cfg.uinteger(prefix + ".seed");
  const int n = static_cast<int>(cfg.integer(prefix + ".n"));
  if (kind == "uniform") {
    return fractal::uniform_box_measure(static_cast<int>(cfg.integer(prefix + ".d")),
                                        cfg.number(prefix + ".lo"), cfg.number(prefix + ".hi"),
                                        n, seed);
  }
  if (kind == "ifs") {
    const fractal::IfsSpec spec = fractal::ifs_with_dimension(
        static_cast<int>(cfg.integer(prefix + ".d")),
        static_cast<int>(cfg.integer(prefix + ".m")), cfg.number(prefix + ".dim"));
    return fractal::sample_ifs(spec, static_cast<int>(cfg.integer(prefix + ".depth")), n, seed);
  }
  if (kind == "lattice") {
    return fractal::falconer_lattice_set(static_cast<int>(cfg.integer(prefix + ".d")),
                                         cfg.number(prefix + ".s"),
                                         static_cast<int>(cfg.integer(prefix + ".q")), n, seed);
  }
  if (kind == "circle") return fractal::circle_measure(n, seed, cfg.number(prefix + ".radius"));
  if (kind == "param") {
    geometry::SampleBoxes boxes;
    boxes.lo = cfg.number(prefix + ".lo");
    boxes.hi = cfg.number(prefix + ".hi");
    PointCloud cloud = geometry::sample_parameter_space(map, side, n, seed, boxes);
    const char* side_name = (side == geometry::Side::X) ? "X" : "Y";
    return fractal::measure_from_cloud(std::move(cloud),
                                       "param(map=" + map.name + ",side=" + side_name + ")", seed);
  }
  if (kind == "param_ifs") {
    geometry::SampleBoxes boxes;
    boxes.lo = cfg.number(prefix + ".lo");
    boxes.hi = cfg.number(prefix + ".hi");
    const fractal::IfsSpec spec = fractal::ifs_with_dimension(
        1, static_cast<int>(cfg.integer(prefix + ".m")), cfg.number(prefix + ".dim"));
    return fractal::ifs_on_parameter_space(map, side, spec,
                                           static_cast<int>(cfg.integer(prefix + ".depth")), n,
                                           seed, boxes);
  }
  if (kind == "product") {
    const fractal::SampledMeasure a = generator_from_config(cfg, map, prefix + ".a", side);
    const fractal::SampledMeasure b = generator_from_config(cfg, map, prefix + ".b", side);
    if (a.size() == b.size() && !cfg.has(prefix + ".n")) return fractal::product_measure(a, b);
    return fractal::product_measure(a, b, n, seed);
  }
  fail(ErrorKind::ParseError, prefix + ".kind '" + kind + "' is not a generator");
}

namespace {

// Dimension probe with radii scaled to the measure's bounding box; scales
// the radius window up when the smallest radius under-samples.
double robust_local_dimension(const fractal::SampledMeasure& mu, std::uint64_t seed) {
  double diag = 0.0;
  for (std::size_t c = 0; c < mu.meta.box_lo.size(); ++c) {
    const double w = mu.meta.box_hi[c] - mu.meta.box_lo[c];
    diag += w * w;
  }
  diag = std::sqrt(diag);
  if (!(diag > 0)) return 0.0;  // single atom
  double lo = 0.008 * diag, hi = 0.064 * diag;
  for (int attempt = 0; attempt < 4; ++attempt) {
    try {
      return diagnostics::local_dimension(mu, fractal::geometric_grid(lo, hi, 10), 128, seed);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::InsufficientResolution || attempt == 3) throw;
      lo *= 2;
      hi *= 2;
    }
  }
  return 0.0;  // unreachable
}

nlohmann::json box_to_json(const measure::Box& box) {
  nlohmann::json j;
  j["lo"] = box.lo;
  j["hi"] = box.hi;
  return j;
}

}  // namespace

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
  namespace fs = std::filesystem;
  const auto t_start = std::chrono::steady_clock::now();
  nlohmann::json timings;

  const geometry::ConfigurationMap map = map_from_config(cfg);
  const std::uint64_t seed = cfg.uinteger("seed");
  const double eps = cfg.number("eps");
  const std::int64_t budget = cfg.integer("pair_budget");
  const fs::path out_dir(cfg.at("out"));
  fs::create_directories(out_dir);

  log_info("experiment: map=%s seed=%llu out=%s", map.name.c_str(),
           static_cast<unsigned long long>(seed), out_dir.string().c_str());

  auto t_gen = std::chrono::steady_clock::now();
  const fractal::SampledMeasure mu1 = generator_from_config(cfg, map, "mu1", geometry::Side::X);
  const fractal::SampledMeasure mu2 = generator_from_config(cfg, map, "mu2", geometry::Side::Y);
  fractal::save_measure((out_dir / "measure_mu1.txt").string(), mu1);
  fractal::save_measure((out_dir / "measure_mu2.txt").string(), mu2);
  timings["generators_seconds"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_gen).count();

  nlohmann::json report;
  report["config"] = cfg.kv;
  report["map"] = {{"name", map.name},
                   {"d1", map.d1},
                   {"d2", map.d2},
                   {"k", map.k},
                   {"alpha", map.alpha.str()},
                   {"beta", map.beta.str()},
                   {"threshold", map.threshold_sum.str()},
                   {"threshold_value", map.threshold_sum.value()}};

  // measured dimensions drive the threshold verdict
  auto t_dim = std::chrono::steady_clock::now();
  const double dim1 = robust_local_dimension(mu1, mix_seed(seed, 21));
  const double dim2 = robust_local_dimension(mu2, mix_seed(seed, 22));
  timings["dimension_seconds"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_dim).count();

  report["measures"]["mu1"] = {{"generator", mu1.meta.generator},
                               {"n", mu1.size()},
                               {"seed", mu1.meta.seed},
                               {"position_error", mu1.meta.position_error},
                               {"declared_dim", declared_dim(cfg, map, "mu1", geometry::Side::X)},
                               {"dim_estimate", dim1}};
  report["measures"]["mu2"] = {{"generator", mu2.meta.generator},
                               {"n", mu2.size()},
                               {"seed", mu2.meta.seed},
                               {"position_error", mu2.meta.position_error},
                               {"declared_dim", declared_dim(cfg, map, "mu2", geometry::Side::Y)},
                               {"dim_estimate", dim2}};
  report["dimension_sum"] = dim1 + dim2;
  report["dimension_tolerance"] = 0.2;
  report["above_threshold"] = (dim1 + dim2) > map.threshold_sum.value();

  std::vector<std::string> analyses = split_list(cfg.at("analyses"), ',');
  const bool needs_density =
      std::any_of(analyses.begin(), analyses.end(), [](const std::string& a) {
        return a == "density" || a == "intervals" || a == "scaling";
      });

  std::optional<measure::DensityEstimate> density;
  if (needs_density) {
    auto t0 = std::chrono::steady_clock::now();
    std::optional<measure::GridSpec> grid;
    if (cfg.has("grid.lo") && cfg.has("grid.hi") && cfg.has("grid.step")) {
      measure::GridSpec g;
      g.k = map.k;
      const double lo = cfg.number("grid.lo"), hi = cfg.number("grid.hi"), step = cfg.number("grid.step");
      g.lo.assign(static_cast<std::size_t>(map.k), lo);
      g.step.assign(static_cast<std::size_t>(map.k), step);
      g.count.assign(static_cast<std::size_t>(map.k),
                     static_cast<int>(std::floor((hi - lo) / step)) + 1);
      grid = g;
    }
    density = measure::estimate_density(map, mu1, mu2, eps, grid, budget, seed);
    measure::save_density_csv((out_dir / "density.csv").string(), *density);
    measure::save_density_sidecar((out_dir / "density.json").string(), *density);
    timings["density_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }

  for (const std::string& analysis : analyses) {
    auto t0 = std::chrono::steady_clock::now();
    if (analysis == "density") {
      double mx = 0.0;
      for (double v : density->values) mx = std::max(mx, v);
      report["analyses"]["density"] = {{"csv", "density.csv"},
                                       {"sidecar", "density.json"},
                                       {"eps", density->eps},
                                       {"pairs_used", density->pairs_used},
                                       {"nodes", density->grid.nodes()},
                                       {"mass", measure::riemann_mass(*density)},
                                       {"max", mx}};
    } else if (analysis == "intervals") {
      const double delta =
          cfg.has("delta") ? cfg.number("delta") : measure::default_delta(*density);
      const std::vector<measure::Box> boxes = measure::detect_intervals(*density, delta);
      nlohmann::json out = nlohmann::json::array();
      for (const auto& b : boxes) out.push_back(box_to_json(b));
      report["analyses"]["intervals"] = {{"delta", delta}, {"count", boxes.size()}, {"boxes", out}};
    } else if (analysis == "scaling") {
      Vec t;
      if (cfg.has("t")) {
        for (const std::string& c : split_list(cfg.at("t"), ',')) t.push_back(std::stod(c));
        if (static_cast<int>(t.size()) != map.k)
          fail(ErrorKind::DimensionMismatch, "t needs one coordinate per codomain axis");
      } else {
        std::size_t best = 0;
        for (std::size_t i = 1; i < density->values.size(); ++i)
          if (density->values[i] > density->values[best]) best = i;
        t = density->grid.node(best);
      }
      const double eps_lo = cfg.has("scaling.eps_lo") ? cfg.number("scaling.eps_lo") : eps;
      const double eps_hi = cfg.has("scaling.eps_hi") ? cfg.number("scaling.eps_hi") : 32 * eps;
      const int points = cfg.has("scaling.points") ? static_cast<int>(cfg.integer("scaling.points")) : 6;
      const measure::ScalingFit fit = measure::fit_scaling_exponent(
          map, mu1, mu2, t, fractal::geometric_grid(eps_lo, eps_hi, points), budget, seed);
      report["analyses"]["scaling"] = {{"t", t},
                                       {"slope", fit.slope},
                                       {"rms_residual", fit.rms_residual},
                                       {"k", fit.k_reference},
                                       {"eps_grid", fit.eps_grid},
                                       {"masses", fit.masses}};
    } else if (analysis == "energy") {
      const double s = cfg.has("energy.s") ? cfg.number("energy.s") : 0.5;
      nlohmann::json out;
      const std::pair<const char*, const fractal::SampledMeasure*> sides[] = {{"mu1", &mu1},
                                                                              {"mu2", &mu2}};
      for (const auto& [label, mu] : sides) {
        const std::string prefix(label);
        if (cfg.at(prefix + ".kind") == "ifs") {
          const int depth = static_cast<int>(cfg.integer(prefix + ".depth"));
          const fractal::IfsSpec spec = fractal::ifs_with_dimension(
              static_cast<int>(cfg.integer(prefix + ".d")),
              static_cast<int>(cfg.integer(prefix + ".m")), cfg.number(prefix + ".dim"));
          std::vector<fractal::SampledMeasure> levels;
          std::vector<std::string> labels;
          for (int dd : {std::max(1, depth - 6), std::max(2, depth - 3), depth}) {
            levels.push_back(fractal::sample_ifs(spec, dd, static_cast<int>(mu->size()),
                                                 mu->meta.seed));
            labels.push_back("depth=" + std::to_string(dd));
          }
          const diagnostics::EnergyReport er =
              diagnostics::energy_report(levels, labels, s, budget, mix_seed(seed, 31));
          out[label] = {{"s", s},
                        {"estimates", er.estimates},
                        {"labels", er.labels},
                        {"verdict", diagnostics::verdict_name(er.verdict)}};
        } else {
          const double e = diagnostics::energy_integral(*mu, s, budget, mix_seed(seed, 31));
          out[label] = {{"s", s}, {"estimate", e}};
        }
      }
      report["analyses"]["energy"] = out;
    } else if (analysis == "dimension") {
      nlohmann::json out;
      const std::pair<const char*, const fractal::SampledMeasure*> sides[] = {{"mu1", &mu1},
                                                                              {"mu2", &mu2}};
      const std::pair<const char*, double> declared[] = {
          {"mu1", declared_dim(cfg, map, "mu1", geometry::Side::X)},
          {"mu2", declared_dim(cfg, map, "mu2", geometry::Side::Y)}};
      for (int i = 0; i < 2; ++i) {
        const auto& [label, mu] = sides[i];
        double diag = 0.0;
        for (std::size_t c = 0; c < mu->meta.box_lo.size(); ++c) {
          const double w = mu->meta.box_hi[c] - mu->meta.box_lo[c];
          diag += w * w;
        }
        diag = std::sqrt(std::max(diag, 1e-12));
        const fractal::FrostmanReport fr = fractal::frostman_check(
            *mu, declared[i].second, fractal::geometric_grid(0.008 * diag, 0.064 * diag, 10), 128,
            mix_seed(seed, 41 + static_cast<std::uint64_t>(i)));
        out[label] = {{"target", declared[i].second},
                      {"frostman_slope", fr.slope},
                      {"frostman_pass", fr.pass},
                      {"local_dimension", i == 0 ? dim1 : dim2}};
      }
      report["analyses"]["dimension"] = out;
    } else if (analysis == "decay") {
      const int dirs =
          cfg.has("decay.directions") ? static_cast<int>(cfg.integer("decay.directions")) : 12;
      nlohmann::json out;
      const std::pair<const char*, const fractal::SampledMeasure*> sides[] = {{"mu1", &mu1},
                                                                              {"mu2", &mu2}};
      for (const auto& [label, mu] : sides) {
        double xi_max = cfg.has("decay.xi_max") ? cfg.number("decay.xi_max") : 64.0;
        if (!cfg.has("decay.xi_max") && mu->meta.position_error > 0)
          xi_max = std::min(xi_max, 0.4 / mu->meta.position_error);
        const diagnostics::DecayFit fit =
            diagnostics::fourier_decay(*mu, xi_max, dirs, mix_seed(seed, 51));
        out[label] = {{"xi_max", xi_max}, {"exponent", fit.exponent}};
      }
      report["analyses"]["decay"] = out;
    }
    timings[analysis + "_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }

  timings["total_seconds"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();

  // report.json stays free of wall-clock data so reruns are byte-identical
  {
    std::ofstream out(out_dir / "report.json");
    out << report.dump(2) << "\n";
  }
  {
    std::ofstream out(out_dir / "timings.json");
    out << timings.dump(2) << "\n";
  }
  return ExperimentReport{std::move(report)};
}

std::string thresholds_table() {
  std::ostringstream out;
  out << "name                 d1  d2  k   alpha  beta  threshold\n";
  for (const auto& map : geometry::standard_catalog()) {
    char line[160];
    std::snprintf(line, sizeof(line), "%-20s %-3d %-3d %-3d %-6s %-5s %s (= %.6g)\n",
                  map.name.c_str(), map.d1, map.d2, map.k, map.alpha.str().c_str(),
                  map.beta.str().c_str(), map.threshold_sum.str().c_str(),
                  map.threshold_sum.value());
    out << line;
  }
  return out.str();
}

std::string catalog_table() {
  const auto space_name = [](const geometry::SpaceSpec& s) {
    switch (s.kind) {
      case geometry::SpaceKind::Point: return "points";
      case geometry::SpaceKind::Hyperplane: return "hyperplanes";
      case geometry::SpaceKind::Sphere: return "spheres";
      case geometry::SpaceKind::Line: return "lines";
    }
    return "?";
  };
  std::ostringstream out;
  out << "name                 X-space      Y-space      widths     evaluator\n";
  for (const auto& map : geometry::standard_catalog()) {
    char line[160];
    std::snprintf(line, sizeof(line), "%-20s %-12s %-12s (%d,%d)      %s\n", map.name.c_str(),
                  space_name(map.x_space), space_name(map.y_space), map.x_space.ambient,
                  map.y_space.ambient, map.eval_rule ? "yes" : "threshold-only");
    out << line;
  }
  return out.str();
}

}  // namespace configlab::experiment

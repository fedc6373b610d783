#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "configlab/geometry.hpp"
#include "configlab/vecmath.hpp"

namespace configlab::fractal {

struct MeasureMeta {
  std::string generator;
  std::uint64_t seed = 0;
  int depth = 0;
  // max distance between a sampled point and the mass it stands for
  double position_error = 0.0;
  Vec box_lo, box_hi;  // declared bounding box
};

// Weighted point cloud standing in for a probability measure.
struct SampledMeasure {
  PointCloud points;
  std::vector<double> weights;
  MeasureMeta meta;

  std::size_t size() const { return weights.size(); }
  int dim() const { return points.dim; }
};

// Normalizes weights to total 1 and checks points against the declared box.
SampledMeasure make_measure(PointCloud points, std::vector<double> weights, MeasureMeta meta);

// Self-similar IFS with a common ratio: x -> ratio * x + offsets[i].
struct IfsSpec {
  int d = 0;
  int m = 0;
  double ratio = 0.0;
  std::vector<Vec> offsets;
  double dim = 0.0;  // log m / log(1/ratio)
};

// Places m contractions of ratio m^(-1/s) at sub-cube corners of [0,1]^d.
// Open set condition is checked; touching images are allowed.
IfsSpec ifs_with_dimension(int d, int m, double s);

// n equal-weight cylinder-center points at the given depth. Point i is a
// pure function of (spec, depth, seed, i), so any worker partition of the
// index range produces the same cloud.
SampledMeasure sample_ifs(const IfsSpec& spec, int depth, int n, std::uint64_t seed);

// Single-stage Falconer-type set: uniform measure on balls of radius
// q^(-d/s) centered at the lattice (1/q)Z^d intersected with [0,1]^d.
SampledMeasure falconer_lattice_set(int d, double s, int q, int n, std::uint64_t seed);

// Product of two sampled measures. The two-argument form zips clouds of
// equal size; the budgeted form resamples indices from both factors.
SampledMeasure product_measure(const SampledMeasure& a, const SampledMeasure& b);
SampledMeasure product_measure(const SampledMeasure& a, const SampledMeasure& b,
                               int n_out, std::uint64_t seed);

// Plain generators used by experiments.
SampledMeasure uniform_box_measure(int d, double lo, double hi, int n, std::uint64_t seed);
SampledMeasure circle_measure(int n, std::uint64_t seed, double radius = 1.0);
SampledMeasure measure_from_cloud(PointCloud cloud, std::string generator, std::uint64_t seed);

// Fractal measure on a map's parameter manifold: a 1-d IFS digit
// construction applied to each chart coordinate (hemisphere chart for
// directions), then pushed through the chart.
SampledMeasure ifs_on_parameter_space(const geometry::ConfigurationMap& map,
                                      geometry::Side side, const IfsSpec& per_coordinate,
                                      int depth, int n, std::uint64_t seed,
                                      const geometry::SampleBoxes& boxes = {});

// mass[c][r] = mu(B(center_c, radius_r)) and the matching point counts,
// for `centers` centers drawn from mu itself.
struct BallMassTable {
  std::vector<std::size_t> center_index;        // indices into the cloud
  std::vector<std::vector<double>> mass;        // [center][radius]
  std::vector<std::vector<std::size_t>> count;  // [center][radius]
};

BallMassTable ball_mass_table(const SampledMeasure& mu, const std::vector<double>& radii,
                              int centers, std::uint64_t seed);

struct FrostmanReport {
  double slope = 0.0;
  bool pass = false;
  std::vector<double> radii;
  std::vector<double> mean_log_mass;
};

// Empirical Frostman check: slope of center-averaged log mu(B(x, r)) against
// log r; passes when the slope is at least s - 0.1.
FrostmanReport frostman_check(const SampledMeasure& mu, double s,
                              const std::vector<double>& radii, int centers = 128,
                              std::uint64_t seed = 1);

// Geometric grid helper (count >= 2, lo < hi).
std::vector<double> geometric_grid(double lo, double hi, int count);

// Columnar text serialization:
//   # d=<d> n=<n> seed=<seed> generator=<name>
//   w x1 ... xd     (17 significant digits)
void save_measure(const std::string& path, const SampledMeasure& mu);
SampledMeasure load_measure(const std::string& path);

}  // namespace configlab::fractal

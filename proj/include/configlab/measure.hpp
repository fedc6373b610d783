#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "configlab/fractal.hpp"
#include "configlab/geometry.hpp"

namespace configlab::measure {

using fractal::SampledMeasure;
using geometry::ConfigurationMap;

// Approximate identity on R^k: chi_eps(u) = eps^-k * c_k * (1 - |u/eps|^2)^4
// inside the eps-ball, 0 outside. c_k normalizes the integral to 1 (k <= 4).
struct Mollifier {
  int k = 1;
  double eps = 1.0;

  static double normalization(int k);

  double value(Span u) const {
    double r2 = 0.0;
    for (double c : u) r2 += c * c;
    r2 /= eps * eps;
    if (r2 >= 1.0) return 0.0;
    const double b = 1.0 - r2;
    const double b2 = b * b;
    double scale = normalization(k);
    for (int i = 0; i < k; ++i) scale /= eps;
    return scale * b2 * b2;
  }
};

// Regular lattice of t-values in R^k; node t[a] = lo[a] + i[a] * step[a],
// flattened row-major with axis 0 slowest.
struct GridSpec {
  int k = 1;
  Vec lo;
  Vec step;
  std::vector<int> count;

  std::size_t nodes() const {
    std::size_t n = 1;
    for (int c : count) n *= static_cast<std::size_t>(c);
    return n;
  }
  Vec node(std::size_t flat) const;
  double cell_volume() const {
    double v = 1.0;
    for (double s : step) v *= s;
    return v;
  }
};

struct DensityEstimate {
  GridSpec grid;
  std::vector<double> values;
  std::vector<double> std_error;
  double eps = 0.0;
  std::int64_t pairs_used = 0;
  std::uint64_t seed = 0;
  std::string map_name;
};

// Monte Carlo / exhaustive estimate of the mollified configuration density
// nu_eps(t) = sum_{i,j} w_i w'_j chi_eps(Phi(x_i, y_j) - t) on the grid.
// Uniform pair subsampling kicks in when n*n' exceeds pair_budget. Results
// are bit-identical for any worker count at a fixed seed.
DensityEstimate estimate_density(const ConfigurationMap& map, const SampledMeasure& mu1,
                                 const SampledMeasure& mu2, double eps,
                                 const std::optional<GridSpec>& grid,
                                 std::int64_t pair_budget, std::uint64_t seed);

// (mu1 x mu2)({ |Phi - t| < eps }); nondecreasing in eps on a fixed seed.
double ball_mass(const ConfigurationMap& map, const SampledMeasure& mu1,
                 const SampledMeasure& mu2, Span t, double eps,
                 std::int64_t pair_budget, std::uint64_t seed);

struct ScalingFit {
  double slope = 0.0;
  double rms_residual = 0.0;
  int k_reference = 0;  // the map's codomain dimension
  std::vector<double> eps_grid;
  std::vector<double> masses;
};

// Slope of log ball_mass against log eps over a geometric eps grid.
ScalingFit fit_scaling_exponent(const ConfigurationMap& map, const SampledMeasure& mu1,
                                const SampledMeasure& mu2, Span t,
                                const std::vector<double>& eps_grid,
                                std::int64_t pair_budget, std::uint64_t seed);

struct Box {
  Vec lo, hi;
  double length(int axis = 0) const { return hi[static_cast<std::size_t>(axis)] - lo[static_cast<std::size_t>(axis)]; }
};

// Maximal connected grid regions where value - 2*stderr exceeds delta,
// reported as bounding boxes (plain intervals for k = 1, sorted by left
// endpoint).
std::vector<Box> detect_intervals(const DensityEstimate& est, double delta);

// Default detection level: 10% of the observed density maximum.
double default_delta(const DensityEstimate& est);

struct CoverBall {
  Vec center;
  double radius = 0.0;
};

// sum_j ball_mass(t_j, eps_j) over a cover of the codomain.
double covering_mass_identity(const ConfigurationMap& map, const SampledMeasure& mu1,
                              const SampledMeasure& mu2, const std::vector<CoverBall>& cover,
                              std::int64_t pair_budget, std::uint64_t seed);

// Riemann sum of the density over its grid.
double riemann_mass(const DensityEstimate& est);

// CSV: header t1[,t2,...],value,stderr then one row per node in grid order.
void save_density_csv(const std::string& path, const DensityEstimate& est);
// JSON sidecar: {map, eps, pairs_used, seed, grid}.
void save_density_sidecar(const std::string& path, const DensityEstimate& est);

}  // namespace configlab::measure

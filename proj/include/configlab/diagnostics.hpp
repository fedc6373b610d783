#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "configlab/fractal.hpp"

namespace configlab::diagnostics {

using fractal::SampledMeasure;

// Truncated s-energy sum_{i != j} w_i w_j |x_i - x_j|^(-s), pairs closer
// than the cloud's positional error excluded, Monte Carlo over pairs when
// the index product exceeds the budget.
double energy_integral(const SampledMeasure& mu, double s, std::int64_t pair_budget,
                       std::uint64_t seed);

enum class EnergyVerdict { Converged, Diverging, Inconclusive };

struct EnergyReport {
  double s = 0.0;
  std::vector<std::string> labels;
  std::vector<double> estimates;
  EnergyVerdict verdict = EnergyVerdict::Inconclusive;
};

const char* verdict_name(EnergyVerdict v);

// Energy across a ladder of refinements of the same measure (deeper IFS
// levels or doubled sample counts). Converged: last two relative changes
// below 5%. Diverging: monotone growth with the last two changes above 20%.
EnergyReport energy_report(const std::vector<SampledMeasure>& levels,
                           const std::vector<std::string>& labels, double s,
                           std::int64_t pair_budget, std::uint64_t seed);

// Mean over centers of the per-center log-log slope of ball mass.
// Cross-checks frostman_check, which fits the center-averaged logs instead.
double local_dimension(const SampledMeasure& mu, const std::vector<double>& radii,
                       int centers, std::uint64_t seed);

struct DecayFit {
  double exponent = 0.0;            // fitted decay rate of sup |mu^(xi)|
  std::vector<double> frequency;    // abscissas used in the fit region
  std::vector<double> envelope;     // sup over directions (and phase offsets)
};

// Decay exponent of the Fourier transform along a direction set (canonical
// axes plus uniform random directions), fitted on the tail half of a
// geometric |xi| grid. Radial phase offsets tame the oscillation zeros.
DecayFit fourier_decay(const SampledMeasure& mu, double xi_max, int n_directions,
                       std::uint64_t seed);

}  // namespace configlab::diagnostics

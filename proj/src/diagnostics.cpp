#include "configlab/diagnostics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "configlab/errors.hpp"
#include "configlab/parallel.hpp"
#include "configlab/rng.hpp"

namespace configlab::diagnostics {

namespace {

constexpr int kBatches = 16;
constexpr double kPi = 3.14159265358979323846;

}  // namespace

double energy_integral(const SampledMeasure& mu, double s, std::int64_t pair_budget,
                       std::uint64_t seed) {
  if (!(s > 0)) fail(ErrorKind::InvalidArgument, "energy exponent must be positive");
  if (pair_budget < 1) fail(ErrorKind::InvalidArgument, "pair budget must be >= 1");
  const std::int64_t n = static_cast<std::int64_t>(mu.size());
  const double guard = mu.meta.position_error;
  const bool exhaustive =
      static_cast<long double>(n) * static_cast<long double>(n) <= static_cast<long double>(pair_budget);
  const std::int64_t pairs = exhaustive ? n * n : pair_budget;
  const double mc_scale =
      exhaustive ? 1.0 : static_cast<double>(n) * static_cast<double>(n) / static_cast<double>(pairs);
  const Philox rng(seed, streams::kPairSample);

  const ChunkLayout layout(pairs, 256);
  std::array<double, kBatches> batch_sum{};
  std::array<std::int64_t, kBatches> batch_used{};
  parallel_for_chunks(kBatches, [&](std::int64_t b) {
    double acc = 0.0;
    std::int64_t used = 0;
    for (std::int64_t c = b; c < layout.n_chunks; c += kBatches) {
      for (std::int64_t p = layout.begin(c); p < layout.end(c); ++p) {
        std::int64_t i, j;
        if (exhaustive) {
          i = p / n;
          j = p % n;
        } else {
          IndexStream st(rng, static_cast<std::uint64_t>(p));
          i = static_cast<std::int64_t>(st.index_below(static_cast<std::uint64_t>(n)));
          j = static_cast<std::int64_t>(st.index_below(static_cast<std::uint64_t>(n)));
        }
        if (i == j) continue;
        const double dij = dist(mu.points.point(static_cast<std::size_t>(i)),
                                mu.points.point(static_cast<std::size_t>(j)));
        if (dij <= guard) continue;  // self-distance guard
        acc += mu.weights[static_cast<std::size_t>(i)] * mu.weights[static_cast<std::size_t>(j)] *
               mc_scale * std::pow(dij, -s);
        ++used;
      }
    }
    batch_sum[static_cast<std::size_t>(b)] = acc;
    batch_used[static_cast<std::size_t>(b)] = used;
  });

  std::int64_t used = 0;
  for (std::int64_t u : batch_used) used += u;
  if (used == 0)
    fail(ErrorKind::AllPairsDegenerate, "every sampled pair fell under the distance guard");
  double total = 0.0;
  for (double v : batch_sum) total += v;
  return total;
}

const char* verdict_name(EnergyVerdict v) {
  switch (v) {
    case EnergyVerdict::Converged: return "converged";
    case EnergyVerdict::Diverging: return "diverging";
    case EnergyVerdict::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

EnergyReport energy_report(const std::vector<SampledMeasure>& levels,
                           const std::vector<std::string>& labels, double s,
                           std::int64_t pair_budget, std::uint64_t seed) {
  if (levels.size() < 3)
    fail(ErrorKind::InvalidArgument, "energy ladder needs >= 3 levels");
  if (!labels.empty() && labels.size() != levels.size())
    fail(ErrorKind::InvalidArgument, "label count disagrees with level count");

  EnergyReport rep;
  rep.s = s;
  rep.labels = labels;
  for (const auto& mu : levels)
    rep.estimates.push_back(energy_integral(mu, s, pair_budget, seed));

  std::vector<double> change;
  for (std::size_t i = 0; i + 1 < rep.estimates.size(); ++i)
    change.push_back((rep.estimates[i + 1] - rep.estimates[i]) / rep.estimates[i]);

  const double last = change.back();
  const double prev = change[change.size() - 2];
  const bool monotone_growth = std::all_of(change.begin(), change.end(), [](double g) { return g > 0; });
  if (std::fabs(last) < 0.05 && std::fabs(prev) < 0.05)
    rep.verdict = EnergyVerdict::Converged;
  else if (monotone_growth && last > 0.20 && prev > 0.20)
    rep.verdict = EnergyVerdict::Diverging;
  else
    rep.verdict = EnergyVerdict::Inconclusive;
  return rep;
}

double local_dimension(const SampledMeasure& mu, const std::vector<double>& radii,
                       int centers, std::uint64_t seed) {
  const fractal::BallMassTable table = fractal::ball_mass_table(mu, radii, centers, seed);

  double mean_smallest = 0.0;
  for (const auto& row : table.count) mean_smallest += static_cast<double>(row[0]);
  mean_smallest /= static_cast<double>(table.count.size());
  if (mean_smallest < 10.0)
    fail(ErrorKind::InsufficientResolution,
         "smallest radius captures " + std::to_string(mean_smallest) + " points on average (< 10)");

  std::vector<double> lr(radii.size());
  for (std::size_t i = 0; i < radii.size(); ++i) lr[i] = std::log(radii[i]);
  double slope_sum = 0.0;
  std::vector<double> lm(radii.size());
  for (const auto& row : table.mass) {
    for (std::size_t i = 0; i < radii.size(); ++i) lm[i] = std::log(row[i]);
    slope_sum += fit_line(lr, lm).slope;
  }
  return slope_sum / static_cast<double>(table.mass.size());
}

DecayFit fourier_decay(const SampledMeasure& mu, double xi_max, int n_directions,
                       std::uint64_t seed) {
  if (n_directions < 8) fail(ErrorKind::InvalidArgument, "need >= 8 directions");
  if (!(xi_max > 4)) fail(ErrorKind::InvalidArgument, "xi_max too small");
  if (mu.meta.position_error > 0 && xi_max > 0.5 / mu.meta.position_error)
    fail(ErrorKind::AliasLimit, "xi_max beyond the aliasing limit 1/(2 * positional error)");

  const int d = mu.dim();
  const std::size_t n = mu.size();

  // canonical axes first, then uniform random directions
  std::vector<Vec> dirs;
  for (int a = 0; a < d && static_cast<int>(dirs.size()) < n_directions; ++a) {
    Vec e(static_cast<std::size_t>(d), 0.0);
    e[static_cast<std::size_t>(a)] = 1.0;
    dirs.push_back(std::move(e));
  }
  Philox rng(seed, streams::kFourierDirection);
  for (int i = static_cast<int>(dirs.size()); i < n_directions; ++i) {
    IndexStream st(rng, static_cast<std::uint64_t>(i));
    Vec w(static_cast<std::size_t>(d));
    double nrm = 0.0;
    do {
      for (auto& c : w) c = st.normal();
      nrm = norm(w);
    } while (nrm <= 1e-12);
    for (auto& c : w) c /= nrm;
    dirs.push_back(std::move(w));
  }

  constexpr int kGridPoints = 48;
  const std::vector<double> xi = fractal::geometric_grid(xi_max / 256.0, xi_max, kGridPoints);
  // radial phase offsets: quarter-period steps of the unit-scale oscillation
  const std::array<double, 4> offsets = {0.0, kPi / 2, kPi, 1.5 * kPi};

  std::vector<double> envelope(kGridPoints, 0.0);
  std::vector<double> abscissa(xi);
  std::vector<std::vector<double>> per_dir_best(dirs.size(), std::vector<double>(kGridPoints, 0.0));
  std::vector<std::vector<double>> per_dir_freq(dirs.size(), std::vector<double>(kGridPoints, 0.0));

  parallel_for_chunks(static_cast<std::int64_t>(dirs.size()), [&](std::int64_t di) {
    const Vec& w = dirs[static_cast<std::size_t>(di)];
    std::vector<double> proj(n);
    for (std::size_t i = 0; i < n; ++i) proj[i] = dot(w, mu.points.point(i));
    for (int g = 0; g < kGridPoints; ++g) {
      double best = 0.0, best_freq = xi[static_cast<std::size_t>(g)];
      for (double off : offsets) {
        const double freq = xi[static_cast<std::size_t>(g)] + off;
        double re = 0.0, im = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          const double a = freq * proj[i];
          re += mu.weights[i] * std::cos(a);
          im -= mu.weights[i] * std::sin(a);
        }
        const double mod = std::hypot(re, im);
        if (mod > best) {
          best = mod;
          best_freq = freq;
        }
      }
      per_dir_best[static_cast<std::size_t>(di)][static_cast<std::size_t>(g)] = best;
      per_dir_freq[static_cast<std::size_t>(di)][static_cast<std::size_t>(g)] = best_freq;
    }
  });

  for (int g = 0; g < kGridPoints; ++g) {
    double best = 0.0, freq = xi[static_cast<std::size_t>(g)];
    for (std::size_t di = 0; di < dirs.size(); ++di) {
      if (per_dir_best[di][static_cast<std::size_t>(g)] > best) {
        best = per_dir_best[di][static_cast<std::size_t>(g)];
        freq = per_dir_freq[di][static_cast<std::size_t>(g)];
      }
    }
    envelope[static_cast<std::size_t>(g)] = best;
    abscissa[static_cast<std::size_t>(g)] = freq;
  }

  // fit the tail half only; the head of the grid is pre-asymptotic
  DecayFit fit;
  std::vector<double> lx, ly;
  for (int g = kGridPoints / 2; g < kGridPoints; ++g) {
    const double e = envelope[static_cast<std::size_t>(g)];
    fit.frequency.push_back(abscissa[static_cast<std::size_t>(g)]);
    fit.envelope.push_back(e);
    lx.push_back(std::log(abscissa[static_cast<std::size_t>(g)]));
    ly.push_back(std::log(std::max(e, 1e-300)));
  }
  fit.exponent = -fit_line(lx, ly).slope;
  return fit;
}

}  // namespace configlab::diagnostics

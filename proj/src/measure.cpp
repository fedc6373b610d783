#include "configlab/measure.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include <json.hpp>

#include "configlab/errors.hpp"
#include "configlab/parallel.hpp"
#include "configlab/rng.hpp"

namespace configlab::measure {

namespace {

constexpr int kBatches = 16;
constexpr int kChunksPerBatch = 16;
constexpr int kMaxCodomain = 8;

// One pair source shared by all estimators: exhaustive enumeration of the
// index product when it fits in the budget, uniform subsampling with
// replacement otherwise. Pairs are split into 16 disjoint batches (for the
// stderr resampling) built from 256 fixed chunks; batch b owns chunks
// c = b (mod 16) and visits them in ascending order, so accumulation per
// batch is a fixed-order sum no matter how many workers run.
struct PairEngine {
  const ConfigurationMap& map;
  const SampledMeasure& mu1;
  const SampledMeasure& mu2;
  std::int64_t pairs = 0;
  bool exhaustive = false;

  PairEngine(const ConfigurationMap& m, const SampledMeasure& a, const SampledMeasure& b,
             std::int64_t pair_budget)
      : map(m), mu1(a), mu2(b) {
    if (pair_budget < 10000)
      fail(ErrorKind::BudgetTooSmall, "pair budget must be >= 10^4");
    if (mu1.dim() != map.x_space.ambient)
      fail(ErrorKind::DimensionMismatch, "mu1 width " + std::to_string(mu1.dim()) +
                                             " != map X width " + std::to_string(map.x_space.ambient));
    if (mu2.dim() != map.y_space.ambient)
      fail(ErrorKind::DimensionMismatch, "mu2 width " + std::to_string(mu2.dim()) +
                                             " != map Y width " + std::to_string(map.y_space.ambient));
    if (!map.eval_rule)
      fail(ErrorKind::Unsupported, map.name + ": catalog entry has no evaluator");
    const long double product = static_cast<long double>(mu1.size()) * static_cast<long double>(mu2.size());
    exhaustive = product <= static_cast<long double>(pair_budget);
    pairs = exhaustive ? static_cast<std::int64_t>(mu1.size() * mu2.size()) : pair_budget;
  }

  // visit(batch, phi, pair_mass): pair_mass sums to ~1 over all pairs.
  // Runs batches in parallel; within a batch the order is fixed.
  // Returns per-batch visited mass.
  template <typename Visit>
  std::array<double, kBatches> run(std::uint64_t seed, Visit&& visit) const {
    const std::int64_t n1 = static_cast<std::int64_t>(mu1.size());
    const std::int64_t n2 = static_cast<std::int64_t>(mu2.size());
    const ChunkLayout layout(pairs, kBatches * kChunksPerBatch);
    const Philox rng(seed, streams::kPairSample);
    const double mc_scale =
        exhaustive ? 1.0
                   : static_cast<double>(n1) * static_cast<double>(n2) / static_cast<double>(pairs);

    std::array<double, kBatches> batch_mass{};
    parallel_for_chunks(kBatches, [&](std::int64_t b) {
      double buf[kMaxCodomain];
      std::span<double> phi(buf, static_cast<std::size_t>(map.k));
      double mass_acc = 0.0;
      for (std::int64_t c = b; c < layout.n_chunks; c += kBatches) {
        for (std::int64_t p = layout.begin(c); p < layout.end(c); ++p) {
          std::int64_t i, j;
          if (exhaustive) {
            i = p / n2;
            j = p % n2;
          } else {
            IndexStream st(rng, static_cast<std::uint64_t>(p));
            i = static_cast<std::int64_t>(st.index_below(static_cast<std::uint64_t>(n1)));
            j = static_cast<std::int64_t>(st.index_below(static_cast<std::uint64_t>(n2)));
          }
          const Span x = mu1.points.point(static_cast<std::size_t>(i));
          const Span y = mu2.points.point(static_cast<std::size_t>(j));
          if (map.is_singular && map.is_singular(x, y)) continue;
          map.eval_rule(x, y, phi);
          const double pair_mass = mu1.weights[static_cast<std::size_t>(i)] *
                                   mu2.weights[static_cast<std::size_t>(j)] * mc_scale;
          mass_acc += pair_mass;
          visit(static_cast<int>(b), Span(phi.data(), phi.size()), pair_mass);
        }
      }
      batch_mass[static_cast<std::size_t>(b)] = mass_acc;
    });
    return batch_mass;
  }
};

void check_eps_resolution(const SampledMeasure& mu1, const SampledMeasure& mu2, double eps) {
  if (!(eps > 0)) fail(ErrorKind::InvalidArgument, "eps must be positive");
  const double pe = std::max(mu1.meta.position_error, mu2.meta.position_error);
  if (eps <= pe)
    fail(ErrorKind::ResolutionConflict,
         "eps " + std::to_string(eps) + " does not exceed cloud positional error " + std::to_string(pe));
}

struct AxisWindow {
  int lo = 0, hi = -1;
};

}  // namespace

double Mollifier::normalization(int k) {
  constexpr double pi = 3.14159265358979323846;
  switch (k) {
    case 1: return 315.0 / 256.0;
    case 2: return 30.0 / pi;
    case 3: return 3465.0 / (512.0 * pi);
    case 4: return 1680.0 / (pi * pi);
    default:
      fail(ErrorKind::Unsupported, "mollifier normalization implemented for k <= 4");
  }
}

Vec GridSpec::node(std::size_t flat) const {
  Vec t(static_cast<std::size_t>(k));
  for (int a = k - 1; a >= 0; --a) {
    const std::size_t n = static_cast<std::size_t>(count[static_cast<std::size_t>(a)]);
    t[static_cast<std::size_t>(a)] = lo[static_cast<std::size_t>(a)] +
                                     step[static_cast<std::size_t>(a)] * static_cast<double>(flat % n);
    flat /= n;
  }
  return t;
}

DensityEstimate estimate_density(const ConfigurationMap& map, const SampledMeasure& mu1,
                                 const SampledMeasure& mu2, double eps,
                                 const std::optional<GridSpec>& grid_in,
                                 std::int64_t pair_budget, std::uint64_t seed) {
  check_eps_resolution(mu1, mu2, eps);
  if (map.k > 4)
    fail(ErrorKind::Unsupported, "density estimation restricted to k <= 4");
  const PairEngine engine(map, mu1, mu2, pair_budget);
  const int k = map.k;

  GridSpec grid;
  if (grid_in) {
    grid = *grid_in;
    for (double s : grid.step)
      if (s > eps / 2 + 1e-15)
        fail(ErrorKind::ResolutionConflict, "grid step exceeds eps/2");
  } else {
    // observed Phi range padded by 3 eps, step eps/2
    std::vector<Vec> mins(kBatches, Vec(static_cast<std::size_t>(k), std::numeric_limits<double>::infinity()));
    std::vector<Vec> maxs(kBatches, Vec(static_cast<std::size_t>(k), -std::numeric_limits<double>::infinity()));
    engine.run(seed, [&](int b, Span phi, double) {
      for (int a = 0; a < k; ++a) {
        mins[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)] =
            std::min(mins[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)], phi[static_cast<std::size_t>(a)]);
        maxs[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)] =
            std::max(maxs[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)], phi[static_cast<std::size_t>(a)]);
      }
    });
    grid.k = k;
    grid.lo.assign(static_cast<std::size_t>(k), 0.0);
    grid.step.assign(static_cast<std::size_t>(k), eps / 2);
    grid.count.assign(static_cast<std::size_t>(k), 0);
    for (int a = 0; a < k; ++a) {
      double lo = std::numeric_limits<double>::infinity();
      double hi = -std::numeric_limits<double>::infinity();
      for (int b = 0; b < kBatches; ++b) {
        lo = std::min(lo, mins[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)]);
        hi = std::max(hi, maxs[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)]);
      }
      if (!(lo <= hi))
        fail(ErrorKind::AllPairsDegenerate, "no nonsingular pair to infer a grid from");
      grid.lo[static_cast<std::size_t>(a)] = lo - 3 * eps;
      const double span = (hi + 3 * eps) - grid.lo[static_cast<std::size_t>(a)];
      grid.count[static_cast<std::size_t>(a)] =
          static_cast<int>(std::ceil(span / grid.step[static_cast<std::size_t>(a)])) + 1;
    }
  }

  const std::size_t nodes = grid.nodes();
  const Mollifier chi{k, eps};

  // per-batch dense accumulators; merged in batch order at the end
  std::vector<std::vector<double>> batch_values(kBatches, std::vector<double>(nodes, 0.0));
  std::vector<std::size_t> strides(static_cast<std::size_t>(k), 1);
  for (int a = k - 2; a >= 0; --a)
    strides[static_cast<std::size_t>(a)] =
        strides[static_cast<std::size_t>(a + 1)] * static_cast<std::size_t>(grid.count[static_cast<std::size_t>(a + 1)]);

  const auto batch_mass = engine.run(seed, [&](int b, Span phi, double pair_mass) {
    AxisWindow win[4];
    for (int a = 0; a < k; ++a) {
      const double lo = grid.lo[static_cast<std::size_t>(a)];
      const double st = grid.step[static_cast<std::size_t>(a)];
      int ilo = static_cast<int>(std::ceil((phi[static_cast<std::size_t>(a)] - eps - lo) / st));
      int ihi = static_cast<int>(std::floor((phi[static_cast<std::size_t>(a)] + eps - lo) / st));
      ilo = std::max(ilo, 0);
      ihi = std::min(ihi, grid.count[static_cast<std::size_t>(a)] - 1);
      if (ilo > ihi) return;  // kernel support misses the grid
      win[a] = {ilo, ihi};
    }
    auto& acc = batch_values[static_cast<std::size_t>(b)];
    int idx[4];
    for (int a = 0; a < k; ++a) idx[a] = win[a].lo;
    for (;;) {
      double u[4];
      std::size_t flat = 0;
      for (int a = 0; a < k; ++a) {
        const double t = grid.lo[static_cast<std::size_t>(a)] + grid.step[static_cast<std::size_t>(a)] * idx[a];
        u[a] = phi[static_cast<std::size_t>(a)] - t;
        flat += strides[static_cast<std::size_t>(a)] * static_cast<std::size_t>(idx[a]);
      }
      const double val = chi.value(Span(u, static_cast<std::size_t>(k)));
      if (val > 0.0) acc[flat] += pair_mass * val;
      int a = k - 1;
      while (a >= 0 && ++idx[a] > win[a].hi) {
        idx[a] = win[a].lo;
        --a;
      }
      if (a < 0) break;
    }
  });

  DensityEstimate est;
  est.grid = grid;
  est.eps = eps;
  est.pairs_used = engine.pairs;
  est.seed = seed;
  est.map_name = map.name;
  est.values.assign(nodes, 0.0);
  est.std_error.assign(nodes, 0.0);
  for (int b = 0; b < kBatches; ++b)
    for (std::size_t nidx = 0; nidx < nodes; ++nidx)
      est.values[nidx] += batch_values[static_cast<std::size_t>(b)][nidx];

  // stderr from the spread of the 16 per-batch estimates
  for (std::size_t nidx = 0; nidx < nodes; ++nidx) {
    double eb[kBatches];
    double mean = 0.0;
    for (int b = 0; b < kBatches; ++b) {
      const double w = batch_mass[static_cast<std::size_t>(b)];
      eb[b] = w > 0 ? batch_values[static_cast<std::size_t>(b)][nidx] / w : 0.0;
      mean += eb[b];
    }
    mean /= kBatches;
    double ss = 0.0;
    for (int b = 0; b < kBatches; ++b) ss += (eb[b] - mean) * (eb[b] - mean);
    est.std_error[nidx] = std::sqrt(ss / (kBatches - 1)) / std::sqrt(static_cast<double>(kBatches));
  }
  return est;
}

double ball_mass(const ConfigurationMap& map, const SampledMeasure& mu1,
                 const SampledMeasure& mu2, Span t, double eps,
                 std::int64_t pair_budget, std::uint64_t seed) {
  if (eps < 0) fail(ErrorKind::InvalidArgument, "eps must be nonnegative");
  if (static_cast<int>(t.size()) != map.k)
    fail(ErrorKind::DimensionMismatch, "t must have the map's codomain dimension");
  const PairEngine engine(map, mu1, mu2, pair_budget);
  const double eps2 = eps * eps;
  std::array<double, kBatches> inside{};
  engine.run(seed, [&](int b, Span phi, double pair_mass) {
    double r2 = 0.0;
    for (std::size_t a = 0; a < t.size(); ++a) {
      const double d = phi[a] - t[a];
      r2 += d * d;
    }
    if (r2 < eps2) inside[static_cast<std::size_t>(b)] += pair_mass;
  });
  double total = 0.0;
  for (double v : inside) total += v;
  return std::clamp(total, 0.0, 1.0);
}

ScalingFit fit_scaling_exponent(const ConfigurationMap& map, const SampledMeasure& mu1,
                                const SampledMeasure& mu2, Span t,
                                const std::vector<double>& eps_grid,
                                std::int64_t pair_budget, std::uint64_t seed) {
  if (eps_grid.size() < 2) fail(ErrorKind::InvalidArgument, "eps grid needs >= 2 entries");
  std::vector<double> sorted(eps_grid);
  std::sort(sorted.begin(), sorted.end());
  if (sorted.back() / sorted.front() < 8.0 * (1.0 - 1e-12))
    fail(ErrorKind::InvalidArgument, "eps grid must span >= 3 octaves");
  for (double e : sorted) check_eps_resolution(mu1, mu2, e);

  ScalingFit fit;
  fit.k_reference = map.k;
  fit.eps_grid = sorted;
  fit.masses.reserve(sorted.size());
  for (double e : sorted) {
    const double m = ball_mass(map, mu1, mu2, t, e, pair_budget, seed);
    if (m <= 0.0)
      fail(ErrorKind::DegenerateFit, "ball mass underflows at eps = " + std::to_string(e));
    fit.masses.push_back(m);
  }
  std::vector<double> lx(sorted.size()), ly(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    lx[i] = std::log(sorted[i]);
    ly[i] = std::log(fit.masses[i]);
  }
  const LineFit lf = fit_line(lx, ly);
  fit.slope = lf.slope;
  fit.rms_residual = lf.rms_residual;
  return fit;
}

std::vector<Box> detect_intervals(const DensityEstimate& est, double delta) {
  if (!(delta > 0)) fail(ErrorKind::InvalidArgument, "delta must be positive");
  const GridSpec& g = est.grid;
  const std::size_t nodes = g.nodes();
  std::vector<char> pass(nodes, 0);
  for (std::size_t i = 0; i < nodes; ++i)
    pass[i] = (est.values[i] - 2.0 * est.std_error[i]) > delta ? 1 : 0;

  std::vector<std::size_t> strides(static_cast<std::size_t>(g.k), 1);
  for (int a = g.k - 2; a >= 0; --a)
    strides[static_cast<std::size_t>(a)] =
        strides[static_cast<std::size_t>(a + 1)] * static_cast<std::size_t>(g.count[static_cast<std::size_t>(a + 1)]);

  std::vector<Box> boxes;
  std::vector<char> seen(nodes, 0);
  std::vector<std::size_t> stack;
  for (std::size_t start = 0; start < nodes; ++start) {
    if (!pass[start] || seen[start]) continue;
    std::vector<int> lo_idx(static_cast<std::size_t>(g.k), std::numeric_limits<int>::max());
    std::vector<int> hi_idx(static_cast<std::size_t>(g.k), -1);
    stack.assign(1, start);
    seen[start] = 1;
    while (!stack.empty()) {
      const std::size_t cur = stack.back();
      stack.pop_back();
      std::size_t rem = cur;
      for (int a = 0; a < g.k; ++a) {
        const int ia = static_cast<int>(rem / strides[static_cast<std::size_t>(a)]);
        rem %= strides[static_cast<std::size_t>(a)];
        lo_idx[static_cast<std::size_t>(a)] = std::min(lo_idx[static_cast<std::size_t>(a)], ia);
        hi_idx[static_cast<std::size_t>(a)] = std::max(hi_idx[static_cast<std::size_t>(a)], ia);
        // neighbors along axis a
        const std::size_t stride = strides[static_cast<std::size_t>(a)];
        if (ia > 0) {
          const std::size_t nb = cur - stride;
          if (pass[nb] && !seen[nb]) { seen[nb] = 1; stack.push_back(nb); }
        }
        if (ia + 1 < g.count[static_cast<std::size_t>(a)]) {
          const std::size_t nb = cur + stride;
          if (pass[nb] && !seen[nb]) { seen[nb] = 1; stack.push_back(nb); }
        }
      }
    }
    Box box;
    box.lo.resize(static_cast<std::size_t>(g.k));
    box.hi.resize(static_cast<std::size_t>(g.k));
    for (int a = 0; a < g.k; ++a) {
      box.lo[static_cast<std::size_t>(a)] = g.lo[static_cast<std::size_t>(a)] +
                                            g.step[static_cast<std::size_t>(a)] * lo_idx[static_cast<std::size_t>(a)];
      box.hi[static_cast<std::size_t>(a)] = g.lo[static_cast<std::size_t>(a)] +
                                            g.step[static_cast<std::size_t>(a)] * hi_idx[static_cast<std::size_t>(a)];
    }
    boxes.push_back(std::move(box));
  }
  std::sort(boxes.begin(), boxes.end(),
            [](const Box& a, const Box& b) { return a.lo < b.lo; });
  return boxes;
}

double default_delta(const DensityEstimate& est) {
  double mx = 0.0;
  for (double v : est.values) mx = std::max(mx, v);
  return 0.1 * mx;
}

double covering_mass_identity(const ConfigurationMap& map, const SampledMeasure& mu1,
                              const SampledMeasure& mu2, const std::vector<CoverBall>& cover,
                              std::int64_t pair_budget, std::uint64_t seed) {
  if (cover.empty()) fail(ErrorKind::InvalidArgument, "cover must be nonempty");
  double total = 0.0;
  for (const CoverBall& ball : cover)
    total += ball_mass(map, mu1, mu2, ball.center, ball.radius, pair_budget, seed);
  return total;
}

double riemann_mass(const DensityEstimate& est) {
  double acc = 0.0;
  for (double v : est.values) acc += v;
  return acc * est.grid.cell_volume();
}

void save_density_csv(const std::string& path, const DensityEstimate& est) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) fail(ErrorKind::InvalidArgument, "cannot open " + path + " for writing");
  for (int a = 0; a < est.grid.k; ++a) std::fprintf(f, "t%d,", a + 1);
  std::fprintf(f, "value,stderr\n");
  const std::size_t nodes = est.grid.nodes();
  for (std::size_t i = 0; i < nodes; ++i) {
    const Vec t = est.grid.node(i);
    for (double c : t) std::fprintf(f, "%.17g,", c);
    std::fprintf(f, "%.17g,%.17g\n", est.values[i], est.std_error[i]);
  }
  std::fclose(f);
}

void save_density_sidecar(const std::string& path, const DensityEstimate& est) {
  nlohmann::json j;
  j["map"] = est.map_name;
  j["eps"] = est.eps;
  j["pairs_used"] = est.pairs_used;
  j["seed"] = est.seed;
  j["grid"]["lo"] = est.grid.lo;
  j["grid"]["step"] = est.grid.step;
  j["grid"]["count"] = est.grid.count;
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) fail(ErrorKind::InvalidArgument, "cannot open " + path + " for writing");
  const std::string text = j.dump(2);
  std::fwrite(text.data(), 1, text.size(), f);
  std::fputc('\n', f);
  std::fclose(f);
}

}  // namespace configlab::measure

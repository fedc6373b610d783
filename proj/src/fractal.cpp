#include "configlab/fractal.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "configlab/errors.hpp"
#include "configlab/parallel.hpp"
#include "configlab/rng.hpp"

namespace configlab::fractal {

namespace {

constexpr double kPi = 3.14159265358979323846;

// weighted index draw by inverse CDF
std::size_t draw_index(const std::vector<double>& cumulative, double u) {
  const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
  std::size_t i = static_cast<std::size_t>(it - cumulative.begin());
  if (i >= cumulative.size()) i = cumulative.size() - 1;
  return i;
}

std::vector<double> cumulative_weights(const SampledMeasure& mu) {
  std::vector<double> cum(mu.weights.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < mu.weights.size(); ++i) {
    acc += mu.weights[i];
    cum[i] = acc;
  }
  return cum;
}

void require_octaves(const std::vector<double>& radii) {
  if (radii.size() < 2 || radii.front() <= 0)
    fail(ErrorKind::InvalidArgument, "radius grid needs >= 2 positive entries");
  if (radii.back() / radii.front() < 8.0 * (1.0 - 1e-12))
    fail(ErrorKind::InvalidArgument, "radius grid must span >= 3 octaves");
}

}  // namespace

SampledMeasure make_measure(PointCloud points, std::vector<double> weights, MeasureMeta meta) {
  if (points.size() != weights.size())
    fail(ErrorKind::DimensionMismatch, "weights and points disagree in count");
  if (points.size() == 0) fail(ErrorKind::InvalidArgument, "empty measure");
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) fail(ErrorKind::InvalidArgument, "negative weight");
    total += w;
  }
  if (total <= 0.0) fail(ErrorKind::InvalidArgument, "zero total mass");
  for (auto& w : weights) w /= total;

  if (meta.box_lo.empty()) {
    meta.box_lo.assign(static_cast<std::size_t>(points.dim), std::numeric_limits<double>::infinity());
    meta.box_hi.assign(static_cast<std::size_t>(points.dim), -std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < points.size(); ++i) {
      const Span p = points.point(i);
      for (int c = 0; c < points.dim; ++c) {
        meta.box_lo[static_cast<std::size_t>(c)] = std::min(meta.box_lo[static_cast<std::size_t>(c)], p[static_cast<std::size_t>(c)]);
        meta.box_hi[static_cast<std::size_t>(c)] = std::max(meta.box_hi[static_cast<std::size_t>(c)], p[static_cast<std::size_t>(c)]);
      }
    }
  } else {
    for (std::size_t i = 0; i < points.size(); ++i) {
      const Span p = points.point(i);
      for (int c = 0; c < points.dim; ++c) {
        if (p[static_cast<std::size_t>(c)] < meta.box_lo[static_cast<std::size_t>(c)] - 1e-12 ||
            p[static_cast<std::size_t>(c)] > meta.box_hi[static_cast<std::size_t>(c)] + 1e-12)
          fail(ErrorKind::InvalidArgument, "point outside declared bounding box");
      }
    }
  }
  return SampledMeasure{std::move(points), std::move(weights), std::move(meta)};
}

IfsSpec ifs_with_dimension(int d, int m, double s) {
  if (d < 1 || m < 2) fail(ErrorKind::InvalidArgument, "ifs needs d >= 1, m >= 2");
  if (!(s > 0.0) || s > static_cast<double>(d))
    fail(ErrorKind::InvalidArgument, "ifs dimension must satisfy 0 < s <= d");
  const double r = std::pow(static_cast<double>(m), -1.0 / s);

  // smallest grid with g^d cells >= m
  int g = 1;
  while (std::pow(static_cast<double>(g), d) < static_cast<double>(m)) ++g;
  if (g < 2) g = 2;
  if (r > 1.0 / static_cast<double>(g) + 1e-12)
    fail(ErrorKind::InfeasiblePacking,
         "contraction ratio " + std::to_string(r) + " does not pack " + std::to_string(m) +
             " disjoint images in [0,1]^" + std::to_string(d));

  const double spread = (1.0 - r) / static_cast<double>(g - 1);
  IfsSpec spec;
  spec.d = d;
  spec.m = m;
  spec.ratio = r;
  spec.dim = std::log(static_cast<double>(m)) / std::log(1.0 / r);
  spec.offsets.reserve(static_cast<std::size_t>(m));
  std::vector<int> idx(static_cast<std::size_t>(d), 0);
  for (int i = 0; i < m; ++i) {
    Vec b(static_cast<std::size_t>(d));
    for (int c = 0; c < d; ++c) b[static_cast<std::size_t>(c)] = spread * idx[static_cast<std::size_t>(c)];
    spec.offsets.push_back(std::move(b));
    for (int c = d - 1; c >= 0; --c) {
      if (++idx[static_cast<std::size_t>(c)] < g) break;
      idx[static_cast<std::size_t>(c)] = 0;
    }
  }

  // open set condition: images of the unit cube may touch but not overlap
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      bool separated = false;
      for (int c = 0; c < d; ++c) {
        const double lo_i = spec.offsets[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)];
        const double lo_j = spec.offsets[static_cast<std::size_t>(j)][static_cast<std::size_t>(c)];
        const double overlap = std::min(lo_i, lo_j) + r - std::max(lo_i, lo_j);
        if (overlap <= 1e-12) {
          separated = true;
          break;
        }
      }
      if (!separated)
        fail(ErrorKind::InfeasiblePacking, "ifs images overlap; open set condition fails");
    }
  }
  return spec;
}

SampledMeasure sample_ifs(const IfsSpec& spec, int depth, int n, std::uint64_t seed) {
  if (depth < 1 || n < 1) fail(ErrorKind::InvalidArgument, "sample_ifs needs depth, n >= 1");
  const int d = spec.d;
  PointCloud cloud;
  cloud.dim = d;
  cloud.data.resize(static_cast<std::size_t>(n) * static_cast<std::size_t>(d));
  Philox rng(seed, streams::kIfsDigits);

  const ChunkLayout layout(n, 256);
  parallel_for_chunks(layout.n_chunks, [&](std::int64_t chunk) {
    for (std::int64_t i = layout.begin(chunk); i < layout.end(chunk); ++i) {
      IndexStream st(rng, static_cast<std::uint64_t>(i));
      double* p = cloud.data.data() + static_cast<std::size_t>(i) * static_cast<std::size_t>(d);
      for (int c = 0; c < d; ++c) p[c] = 0.0;
      double scale = 1.0;
      for (int level = 0; level < depth; ++level) {
        const std::size_t digit = static_cast<std::size_t>(st.index_below(static_cast<std::uint64_t>(spec.m)));
        for (int c = 0; c < d; ++c) p[c] += scale * spec.offsets[digit][static_cast<std::size_t>(c)];
        scale *= spec.ratio;
      }
      for (int c = 0; c < d; ++c) p[c] += scale * 0.5;  // cylinder-cell center
    }
  });

  MeasureMeta meta;
  {
    std::ostringstream gen;
    gen << "ifs(d=" << d << ",m=" << spec.m << ",r=" << spec.ratio << ",depth=" << depth << ")";
    meta.generator = gen.str();
  }
  meta.seed = seed;
  meta.depth = depth;
  meta.position_error = std::pow(spec.ratio, depth) * 0.5 * std::sqrt(static_cast<double>(d));
  meta.box_lo.assign(static_cast<std::size_t>(d), 0.0);
  meta.box_hi.assign(static_cast<std::size_t>(d), 1.0);
  return make_measure(std::move(cloud), std::vector<double>(static_cast<std::size_t>(n), 1.0), std::move(meta));
}

SampledMeasure falconer_lattice_set(int d, double s, int q, int n, std::uint64_t seed) {
  if (d < 1 || q < 2 || n < 1) fail(ErrorKind::InvalidArgument, "lattice set needs d >= 1, q >= 2, n >= 1");
  if (!(s > 0.0) || s >= static_cast<double>(d))
    fail(ErrorKind::InvalidArgument, "lattice set needs 0 < s < d");
  const double radius = std::pow(static_cast<double>(q), -static_cast<double>(d) / s);
  if (radius >= 0.5 / static_cast<double>(q))
    fail(ErrorKind::InvalidArgument, "lattice balls overlap: q^(-d/s) >= 1/(2q)");

  const int per_axis = q + 1;
  std::uint64_t n_nodes = 1;
  for (int c = 0; c < d; ++c) n_nodes *= static_cast<std::uint64_t>(per_axis);

  PointCloud cloud;
  cloud.dim = d;
  cloud.data.resize(static_cast<std::size_t>(n) * static_cast<std::size_t>(d));
  Philox rng(seed, streams::kLattice);

  const ChunkLayout layout(n, 256);
  parallel_for_chunks(layout.n_chunks, [&](std::int64_t chunk) {
    for (std::int64_t i = layout.begin(chunk); i < layout.end(chunk); ++i) {
      IndexStream st(rng, static_cast<std::uint64_t>(i));
      std::uint64_t node = st.index_below(n_nodes);
      double* p = cloud.data.data() + static_cast<std::size_t>(i) * static_cast<std::size_t>(d);
      for (int c = 0; c < d; ++c) {
        p[c] = static_cast<double>(node % static_cast<std::uint64_t>(per_axis)) / static_cast<double>(q);
        node /= static_cast<std::uint64_t>(per_axis);
      }
      // uniform point of the ball: normalized gaussian direction, u^(1/d) radius
      Vec dir(static_cast<std::size_t>(d));
      double nrm = 0.0;
      do {
        for (auto& c : dir) c = st.normal();
        nrm = norm(dir);
      } while (nrm <= 1e-12);
      const double rad = radius * std::pow(st.u01(), 1.0 / static_cast<double>(d));
      for (int c = 0; c < d; ++c) p[c] += rad * dir[static_cast<std::size_t>(c)] / nrm;
    }
  });

  MeasureMeta meta;
  {
    std::ostringstream gen;
    gen << "lattice(d=" << d << ",s=" << s << ",q=" << q << ")";
    meta.generator = gen.str();
  }
  meta.seed = seed;
  meta.position_error = 0.0;
  meta.box_lo.assign(static_cast<std::size_t>(d), -radius);
  meta.box_hi.assign(static_cast<std::size_t>(d), 1.0 + radius);
  return make_measure(std::move(cloud), std::vector<double>(static_cast<std::size_t>(n), 1.0), std::move(meta));
}

namespace {

MeasureMeta product_meta(const SampledMeasure& a, const SampledMeasure& b) {
  MeasureMeta meta;
  meta.generator = "product(" + a.meta.generator + "," + b.meta.generator + ")";
  meta.seed = mix_seed(a.meta.seed, b.meta.seed);
  meta.depth = std::max(a.meta.depth, b.meta.depth);
  meta.position_error = std::hypot(a.meta.position_error, b.meta.position_error);
  meta.box_lo = a.meta.box_lo;
  meta.box_lo.insert(meta.box_lo.end(), b.meta.box_lo.begin(), b.meta.box_lo.end());
  meta.box_hi = a.meta.box_hi;
  meta.box_hi.insert(meta.box_hi.end(), b.meta.box_hi.begin(), b.meta.box_hi.end());
  return meta;
}

}  // namespace

SampledMeasure product_measure(const SampledMeasure& a, const SampledMeasure& b) {
  if (a.size() != b.size())
    fail(ErrorKind::InvalidArgument,
         "product of unequal clouds needs an explicit resampling budget");
  const std::size_t n = a.size();
  const int dim = a.dim() + b.dim();
  PointCloud cloud;
  cloud.dim = dim;
  cloud.data.resize(n * static_cast<std::size_t>(dim));
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) {
    double* p = cloud.data.data() + i * static_cast<std::size_t>(dim);
    const Span pa = a.points.point(i), pb = b.points.point(i);
    std::copy(pa.begin(), pa.end(), p);
    std::copy(pb.begin(), pb.end(), p + a.dim());
    w[i] = a.weights[i] * b.weights[i];
  }
  return make_measure(std::move(cloud), std::move(w), product_meta(a, b));
}

SampledMeasure product_measure(const SampledMeasure& a, const SampledMeasure& b,
                               int n_out, std::uint64_t seed) {
  if (n_out < 1) fail(ErrorKind::InvalidArgument, "product budget must be >= 1");
  const auto cum_a = cumulative_weights(a);
  const auto cum_b = cumulative_weights(b);
  const int dim = a.dim() + b.dim();
  PointCloud cloud;
  cloud.dim = dim;
  cloud.data.resize(static_cast<std::size_t>(n_out) * static_cast<std::size_t>(dim));
  Philox rng(seed, streams::kProductResample);
  for (int i = 0; i < n_out; ++i) {
    IndexStream st(rng, static_cast<std::uint64_t>(i));
    const Span pa = a.points.point(draw_index(cum_a, st.u01()));
    const Span pb = b.points.point(draw_index(cum_b, st.u01()));
    double* p = cloud.data.data() + static_cast<std::size_t>(i) * static_cast<std::size_t>(dim);
    std::copy(pa.begin(), pa.end(), p);
    std::copy(pb.begin(), pb.end(), p + a.dim());
  }
  MeasureMeta meta = product_meta(a, b);
  meta.seed = seed;
  return make_measure(std::move(cloud), std::vector<double>(static_cast<std::size_t>(n_out), 1.0), std::move(meta));
}

SampledMeasure uniform_box_measure(int d, double lo, double hi, int n, std::uint64_t seed) {
  if (d < 1 || n < 1 || !(hi > lo)) fail(ErrorKind::InvalidArgument, "bad uniform box");
  PointCloud cloud;
  cloud.dim = d;
  cloud.data.resize(static_cast<std::size_t>(n) * static_cast<std::size_t>(d));
  Philox rng(seed, streams::kUniformBox);
  const ChunkLayout layout(n, 256);
  parallel_for_chunks(layout.n_chunks, [&](std::int64_t chunk) {
    for (std::int64_t i = layout.begin(chunk); i < layout.end(chunk); ++i) {
      IndexStream st(rng, static_cast<std::uint64_t>(i));
      double* p = cloud.data.data() + static_cast<std::size_t>(i) * static_cast<std::size_t>(d);
      for (int c = 0; c < d; ++c) p[c] = lo + (hi - lo) * st.u01();
    }
  });
  MeasureMeta meta;
  {
    std::ostringstream gen;
    gen << "uniform(d=" << d << ",lo=" << lo << ",hi=" << hi << ")";
    meta.generator = gen.str();
  }
  meta.seed = seed;
  meta.box_lo.assign(static_cast<std::size_t>(d), lo);
  meta.box_hi.assign(static_cast<std::size_t>(d), hi);
  return make_measure(std::move(cloud), std::vector<double>(static_cast<std::size_t>(n), 1.0), std::move(meta));
}

SampledMeasure circle_measure(int n, std::uint64_t seed, double radius) {
  if (n < 1 || !(radius > 0)) fail(ErrorKind::InvalidArgument, "bad circle measure");
  PointCloud cloud;
  cloud.dim = 2;
  cloud.data.resize(static_cast<std::size_t>(n) * 2);
  Philox rng(seed, streams::kCircle);
  for (int i = 0; i < n; ++i) {
    IndexStream st(rng, static_cast<std::uint64_t>(i));
    const double a = 2.0 * kPi * st.u01();
    cloud.data[static_cast<std::size_t>(i) * 2] = radius * std::cos(a);
    cloud.data[static_cast<std::size_t>(i) * 2 + 1] = radius * std::sin(a);
  }
  MeasureMeta meta;
  meta.generator = "circle(r=" + std::to_string(radius) + ")";
  meta.seed = seed;
  meta.box_lo = {-radius, -radius};
  meta.box_hi = {radius, radius};
  return make_measure(std::move(cloud), std::vector<double>(static_cast<std::size_t>(n), 1.0), std::move(meta));
}

SampledMeasure measure_from_cloud(PointCloud cloud, std::string generator, std::uint64_t seed) {
  const std::size_t n = cloud.size();
  MeasureMeta meta;
  meta.generator = std::move(generator);
  meta.seed = seed;
  return make_measure(std::move(cloud), std::vector<double>(n, 1.0), std::move(meta));
}

SampledMeasure ifs_on_parameter_space(const geometry::ConfigurationMap& map,
                                      geometry::Side side, const IfsSpec& per_coordinate,
                                      int depth, int n, std::uint64_t seed,
                                      const geometry::SampleBoxes& boxes) {
  using geometry::SpaceKind;
  if (per_coordinate.d != 1)
    fail(ErrorKind::InvalidArgument, "chart construction expects a 1-d ifs");
  if (depth < 1 || n < 1) fail(ErrorKind::InvalidArgument, "needs depth, n >= 1");
  const geometry::SpaceSpec& space = (side == geometry::Side::X) ? map.x_space : map.y_space;
  const int chart_dim = space.manifold_dim;
  const int ambient = space.ambient;
  const double width = boxes.hi - boxes.lo;

  Philox rng(seed, streams::kIfsDigits);
  PointCloud cloud;
  cloud.dim = ambient;
  cloud.data.resize(static_cast<std::size_t>(n) * static_cast<std::size_t>(ambient));

  // direction chart: z in [0,1]^(d-1) -> disk of radius 0.9 -> upper hemisphere
  const auto hemisphere = [](Span a, Vec& out) {
    const std::size_t dm1 = a.size();
    double nrm2 = 0.0;
    for (std::size_t c = 0; c < dm1; ++c) nrm2 += a[c] * a[c];
    out.assign(dm1 + 1, 0.0);
    for (std::size_t c = 0; c < dm1; ++c) out[c] = a[c];
    out[dm1] = std::sqrt(std::max(0.0, 1.0 - nrm2));
  };

  for (int i = 0; i < n; ++i) {
    IndexStream st(rng, static_cast<std::uint64_t>(i));
    Vec z(static_cast<std::size_t>(chart_dim));
    for (int c = 0; c < chart_dim; ++c) {
      double val = 0.0, scale = 1.0;
      for (int level = 0; level < depth; ++level) {
        const std::size_t digit = static_cast<std::size_t>(st.index_below(static_cast<std::uint64_t>(per_coordinate.m)));
        val += scale * per_coordinate.offsets[digit][0];
        scale *= per_coordinate.ratio;
      }
      z[static_cast<std::size_t>(c)] = val + scale * 0.5;
    }

    double* p = cloud.data.data() + static_cast<std::size_t>(i) * static_cast<std::size_t>(ambient);
    switch (space.kind) {
      case SpaceKind::Point: {
        for (int c = 0; c < ambient; ++c) p[c] = boxes.lo + width * z[static_cast<std::size_t>(c)];
        break;
      }
      case SpaceKind::Hyperplane: {
        const int d = ambient - 1;
        Vec a(static_cast<std::size_t>(d - 1));
        for (int c = 0; c < d - 1; ++c)
          a[static_cast<std::size_t>(c)] = (2.0 * z[static_cast<std::size_t>(c)] - 1.0) * 0.9 / std::sqrt(static_cast<double>(d - 1));
        Vec w;
        hemisphere(a, w);
        for (int c = 0; c < d; ++c) p[c] = w[static_cast<std::size_t>(c)];
        p[d] = boxes.lo + width * z[static_cast<std::size_t>(d - 1)];
        break;
      }
      case SpaceKind::Sphere: {
        const int d = ambient - 1;
        for (int c = 0; c < d; ++c) p[c] = boxes.lo + width * z[static_cast<std::size_t>(c)];
        p[d] = boxes.radius_lo + (boxes.radius_hi - boxes.radius_lo) * z[static_cast<std::size_t>(d)];
        break;
      }
      case SpaceKind::Line: {
        const int d = ambient / 2;
        Vec a(static_cast<std::size_t>(d - 1));
        for (int c = 0; c < d - 1; ++c)
          a[static_cast<std::size_t>(c)] = (2.0 * z[static_cast<std::size_t>(c)] - 1.0) * 0.9 / std::sqrt(static_cast<double>(d - 1));
        Vec w;
        hemisphere(a, w);
        // orthonormal basis of w-perp by Gram-Schmidt over coordinate axes
        Vec v(static_cast<std::size_t>(d), 0.0);
        int used = 0;
        for (int axis = 0; axis < d && used < d - 1; ++axis) {
          Vec e(static_cast<std::size_t>(d), 0.0);
          e[static_cast<std::size_t>(axis)] = 1.0;
          const double ew = dot(e, w);
          for (int c = 0; c < d; ++c) e[static_cast<std::size_t>(c)] -= ew * w[static_cast<std::size_t>(c)];
          // subtract components along previously accepted basis directions
          // (axes processed in order; re-orthogonalize against v-part later)
          const double nrm = norm(e);
          if (nrm < 0.5) continue;  // axis nearly parallel to w
          for (int c = 0; c < d; ++c) e[static_cast<std::size_t>(c)] /= nrm;
          const double coord = boxes.lo + width * z[static_cast<std::size_t>(d - 1 + used)];
          for (int c = 0; c < d; ++c) v[static_cast<std::size_t>(c)] += coord * e[static_cast<std::size_t>(c)];
          ++used;
        }
        for (int pass = 0; pass < 2; ++pass) {
          const double vw = dot(v, w);
          for (int c = 0; c < d; ++c) v[static_cast<std::size_t>(c)] -= vw * w[static_cast<std::size_t>(c)];
        }
        for (int c = 0; c < d; ++c) p[c] = w[static_cast<std::size_t>(c)];
        for (int c = 0; c < d; ++c) p[d + c] = v[static_cast<std::size_t>(c)];
        break;
      }
    }
  }

  MeasureMeta meta;
  {
    std::ostringstream gen;
    gen << "param_ifs(map=" << map.name << ",side=" << (side == geometry::Side::X ? "X" : "Y")
        << ",m=" << per_coordinate.m << ",r=" << per_coordinate.ratio << ",depth=" << depth << ")";
    meta.generator = gen.str();
  }
  meta.seed = seed;
  meta.depth = depth;
  const double chart_lipschitz = std::max(std::fabs(width), 4.0);
  meta.position_error = std::pow(per_coordinate.ratio, depth) * 0.5 *
                        std::sqrt(static_cast<double>(chart_dim)) * chart_lipschitz;
  return make_measure(std::move(cloud), std::vector<double>(static_cast<std::size_t>(n), 1.0), std::move(meta));
}

BallMassTable ball_mass_table(const SampledMeasure& mu, const std::vector<double>& radii,
                              int centers, std::uint64_t seed) {
  require_octaves(radii);
  if (centers < 1) fail(ErrorKind::InvalidArgument, "needs >= 1 center");
  const auto cum = cumulative_weights(mu);
  Philox rng(seed, streams::kBallCenters);

  BallMassTable table;
  table.center_index.resize(static_cast<std::size_t>(centers));
  for (int c = 0; c < centers; ++c) {
    IndexStream st(rng, static_cast<std::uint64_t>(c));
    table.center_index[static_cast<std::size_t>(c)] = draw_index(cum, st.u01());
  }
  table.mass.assign(static_cast<std::size_t>(centers), std::vector<double>(radii.size(), 0.0));
  table.count.assign(static_cast<std::size_t>(centers), std::vector<std::size_t>(radii.size(), 0));

  const ChunkLayout layout(centers, 64);
  parallel_for_chunks(layout.n_chunks, [&](std::int64_t chunk) {
    for (std::int64_t c = layout.begin(chunk); c < layout.end(chunk); ++c) {
      const Span center = mu.points.point(table.center_index[static_cast<std::size_t>(c)]);
      auto& mass = table.mass[static_cast<std::size_t>(c)];
      auto& count = table.count[static_cast<std::size_t>(c)];
      for (std::size_t j = 0; j < mu.size(); ++j) {
        const double dj = dist(center, mu.points.point(j));
        for (std::size_t ri = radii.size(); ri-- > 0;) {
          if (dj <= radii[ri]) {
            mass[ri] += mu.weights[j];
            ++count[ri];
          } else {
            break;  // radii ascending: smaller balls exclude it too
          }
        }
      }
    }
  });
  return table;
}

FrostmanReport frostman_check(const SampledMeasure& mu, double s,
                              const std::vector<double>& radii, int centers,
                              std::uint64_t seed) {
  const BallMassTable table = ball_mass_table(mu, radii, centers, seed);

  double mean_smallest = 0.0;
  for (const auto& row : table.count) mean_smallest += static_cast<double>(row[0]);
  mean_smallest /= static_cast<double>(table.count.size());
  if (mean_smallest < 10.0)
    fail(ErrorKind::InsufficientResolution,
         "smallest radius captures " + std::to_string(mean_smallest) + " points on average (< 10)");

  FrostmanReport rep;
  rep.radii = radii;
  rep.mean_log_mass.assign(radii.size(), 0.0);
  for (std::size_t ri = 0; ri < radii.size(); ++ri) {
    double acc = 0.0;
    for (const auto& row : table.mass) acc += std::log(row[ri]);
    rep.mean_log_mass[ri] = acc / static_cast<double>(table.mass.size());
  }
  std::vector<double> lr(radii.size());
  for (std::size_t ri = 0; ri < radii.size(); ++ri) lr[ri] = std::log(radii[ri]);
  rep.slope = fit_line(lr, rep.mean_log_mass).slope;
  rep.pass = rep.slope >= s - 0.1;
  return rep;
}

std::vector<double> geometric_grid(double lo, double hi, int count) {
  if (!(lo > 0) || !(hi > lo) || count < 2) fail(ErrorKind::InvalidArgument, "bad geometric grid");
  std::vector<double> g(static_cast<std::size_t>(count));
  const double step = std::log(hi / lo) / static_cast<double>(count - 1);
  for (int i = 0; i < count; ++i) g[static_cast<std::size_t>(i)] = lo * std::exp(step * i);
  g.back() = hi;
  return g;
}

void save_measure(const std::string& path, const SampledMeasure& mu) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) fail(ErrorKind::InvalidArgument, "cannot open " + path + " for writing");
  std::fprintf(f, "# d=%d n=%zu seed=%llu generator=%s\n", mu.dim(), mu.size(),
               static_cast<unsigned long long>(mu.meta.seed), mu.meta.generator.c_str());
  for (std::size_t i = 0; i < mu.size(); ++i) {
    std::fprintf(f, "%.17g", mu.weights[i]);
    const Span p = mu.points.point(i);
    for (double c : p) std::fprintf(f, " %.17g", c);
    std::fputc('\n', f);
  }
  std::fclose(f);
}

SampledMeasure load_measure(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::InvalidArgument, "cannot open " + path);
  std::string header;
  std::getline(in, header);
  int d = 0;
  std::size_t n = 0;
  unsigned long long seed = 0;
  char genbuf[256] = {0};
  if (std::sscanf(header.c_str(), "# d=%d n=%zu seed=%llu generator=%255s", &d, &n, &seed, genbuf) != 4)
    fail(ErrorKind::ParseError, "bad measure header: " + header);

  PointCloud cloud;
  cloud.dim = d;
  cloud.data.reserve(n * static_cast<std::size_t>(d));
  std::vector<double> w;
  w.reserve(n);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    double wi;
    if (!(row >> wi)) fail(ErrorKind::ParseError, "bad measure row: " + line);
    w.push_back(wi);
    for (int c = 0; c < d; ++c) {
      double x;
      if (!(row >> x)) fail(ErrorKind::ParseError, "short measure row: " + line);
      cloud.data.push_back(x);
    }
  }
  if (w.size() != n) fail(ErrorKind::ParseError, "measure row count disagrees with header");
  MeasureMeta meta;
  meta.generator = genbuf;
  meta.seed = seed;
  return make_measure(std::move(cloud), std::move(w), std::move(meta));
}

}  // namespace configlab::fractal

#include "configlab/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "configlab/errors.hpp"
#include "configlab/rng.hpp"

namespace configlab::geometry {

namespace {

constexpr double kSingularMargin = 1e-9;
constexpr double kParallelMargin = 1e-10;

void check_widths(const ConfigurationMap& map, Span x, Span y) {
  if (static_cast<int>(x.size()) != map.x_space.ambient ||
      static_cast<int>(y.size()) != map.y_space.ambient) {
    fail(ErrorKind::DimensionMismatch,
         map.name + ": expected point widths (" + std::to_string(map.x_space.ambient) +
             ", " + std::to_string(map.y_space.ambient) + "), got (" +
             std::to_string(x.size()) + ", " + std::to_string(y.size()) + ")");
  }
}

// Construction-time consistency: k <= d2 <= d1, alpha + beta = (d2-k)/2 and
// threshold = d1 + k + 2 beta must hold exactly for every catalog entry.
ConfigurationMap finalize(ConfigurationMap map) {
  if (!(map.k >= 1 && map.k <= map.d2 && map.d2 <= map.d1))
    fail(ErrorKind::Internal, map.name + ": requires k <= d2 <= d1");
  if (!(map.alpha + map.beta == Rational(map.d2 - map.k, 2)))
    fail(ErrorKind::Internal, map.name + ": alpha + beta != (d2-k)/2");
  if (!(map.threshold_sum == Rational(map.d1 + map.k) + Rational(2) * map.beta))
    fail(ErrorKind::Internal, map.name + ": threshold != d1 + k + 2 beta");
  return map;
}

Line line_from_coords(Span x, int d) {
  return Line{Vec(x.begin(), x.begin() + d), Vec(x.begin() + d, x.begin() + 2 * d)};
}

double residual_line_point(const Line& line, Span y) {
  // |u - (u.omega) omega| with u = v - y
  const std::size_t d = line.omega.size();
  double udotw = 0.0;
  for (std::size_t i = 0; i < d; ++i) udotw += (line.v[i] - y[i]) * line.omega[i];
  double s = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    const double r = line.v[i] - y[i] - udotw * line.omega[i];
    s += r * r;
  }
  return s;
}

Vec sphere_direction(IndexStream& st, int d) {
  Vec w(static_cast<std::size_t>(d));
  for (;;) {
    for (auto& c : w) c = st.normal();
    const double n = norm(w);
    if (n > 1e-12) {
      for (auto& c : w) c /= n;
      return w;
    }
  }
}

}  // namespace

Vec eval_configuration(const ConfigurationMap& map, Span x, Span y) {
  if (!map.eval_rule)
    fail(ErrorKind::Unsupported, map.name + ": catalog entry has no evaluator");
  check_widths(map, x, y);
  if (map.is_singular && map.is_singular(x, y))
    fail(ErrorKind::SingularConfiguration, map.name + ": singular configuration");
  Vec out(static_cast<std::size_t>(map.k));
  map.eval_rule(x, y, out);
  return out;
}

// ---- lines ---------------------------------------------------------------

Line make_line(Vec omega, Vec v) {
  if (omega.size() != v.size() || omega.size() < 2)
    fail(ErrorKind::DimensionMismatch, "line needs matching direction/foot in d >= 2");
  const double n = norm(omega);
  if (std::fabs(n - 1.0) > 1e-12)
    fail(ErrorKind::InvalidArgument, "line direction must be a unit vector");
  if (std::fabs(dot(v, omega)) > 1e-12)
    fail(ErrorKind::InvalidArgument, "line foot point must be orthogonal to direction");
  return Line{std::move(omega), std::move(v)};
}

double line_point_distance(const Line& line, Span y) {
  if (y.size() != line.omega.size())
    fail(ErrorKind::DimensionMismatch, "line and point dimensions differ");
  return std::sqrt(residual_line_point(line, y));
}

double phi_line_point_smooth(const Line& line, Span y) {
  if (y.size() != line.omega.size())
    fail(ErrorKind::DimensionMismatch, "line and point dimensions differ");
  return 0.5 * residual_line_point(line, y);
}

double line_line_distance(const Line& a, const Line& b) {
  const std::size_t d = a.omega.size();
  if (b.omega.size() != d)
    fail(ErrorKind::DimensionMismatch, "lines live in different dimensions");
  const Vec u = sub(a.v, b.v);
  const double c = dot(a.omega, b.omega);

  if (std::fabs(c) > 1.0 - kParallelMargin) {
    // parallel: distance of b.v to line a
    return line_point_distance(a, b.v);
  }

  // minimize |u + s omega - s' omega'|^2: 2x2 normal equations with Gram
  // matrix [[1, -c], [-c, 1]]
  const double ru = -dot(u, a.omega);
  const double rv = dot(u, b.omega);
  const double det = 1.0 - c * c;
  const double s = (ru + c * rv) / det;
  const double sp = (rv + c * ru) / det;
  double acc = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    const double r = u[i] + s * a.omega[i] - sp * b.omega[i];
    acc += r * r;
  }
  return std::sqrt(acc);
}

// ---- Radon-Hurwitz numbers and ensembles ---------------------------------

int radon_hurwitz_two_n(std::int64_t two_n) {
  if (two_n <= 0) fail(ErrorKind::InvalidArgument, "radon_hurwitz needs n > 0");
  if (two_n % 2 != 0) return 0;  // half-integer
  std::int64_t n = two_n / 2;
  int m = 0;
  while (n % 2 == 0) {
    n /= 2;
    ++m;
  }
  const int p = m % 4;
  const int q = m / 4;
  return (1 << p) + 8 * q;
}

int radon_hurwitz(double n) {
  const double two_n = 2.0 * n;
  const double rounded = std::nearbyint(two_n);
  if (std::fabs(two_n - rounded) > 1e-9)
    fail(ErrorKind::InvalidArgument, "radon_hurwitz argument must be integer or half-integer");
  return radon_hurwitz_two_n(static_cast<std::int64_t>(rounded));
}

int alp_max_k(int d) {
  if (d < 1) fail(ErrorKind::InvalidArgument, "alp_max_k needs d >= 1");
  return radon_hurwitz_two_n(d) + 1;  // rho(d/2) + 1
}

namespace {

std::vector<double> sym(int d, std::initializer_list<double> rows) {
  std::vector<double> m(rows);
  if (static_cast<int>(m.size()) != d * d)
    fail(ErrorKind::Internal, "bad ensemble matrix literal");
  return m;
}

}  // namespace

QuadraticEnsemble build_quadratic_ensemble(int d, int k) {
  if (d < 1 || k < 1) fail(ErrorKind::InvalidArgument, "ensemble needs d, k >= 1");
  const int kmax = alp_max_k(d);
  if (k > kmax)
    fail(ErrorKind::MaxKExceeded, "no nonsingular ensemble of size " + std::to_string(k) +
                                      " on R^" + std::to_string(d) +
                                      " (max is " + std::to_string(kmax) + ")");
  QuadraticEnsemble ens;
  ens.d = d;
  ens.k = k;
  if (k == 1) {
    std::vector<double> id(static_cast<std::size_t>(d) * d, 0.0);
    for (int i = 0; i < d; ++i) id[static_cast<std::size_t>(i) * d + i] = 1.0;
    ens.matrices.push_back(std::move(id));
    return ens;
  }
  if (d == 2 && k == 2) {
    ens.matrices.push_back(sym(2, {1, 0, 0, -1}));    // x1^2 - x2^2
    ens.matrices.push_back(sym(2, {0, 0.5, 0.5, 0})); // x1 x2
    return ens;
  }
  if (d == 4 && k <= 3) {
    // quaternion-type family: det(sum c_j A_j) = (|c|^2)^2
    const std::vector<std::vector<double>> quads = {
        sym(4, {1, 0, 0, 0, 0, 1, 0, 0, 0, 0, -1, 0, 0, 0, 0, -1}),
        sym(4, {0, 0, 1, 0, 0, 0, 0, 1, 1, 0, 0, 0, 0, 1, 0, 0}),
        sym(4, {0, 0, 0, 1, 0, 0, -1, 0, 0, -1, 0, 0, 1, 0, 0, 0}),
    };
    for (int j = 0; j < k; ++j) ens.matrices.push_back(quads[static_cast<std::size_t>(j)]);
    return ens;
  }
  fail(ErrorKind::Unsupported, "no construction implemented for (d=" + std::to_string(d) +
                                   ", k=" + std::to_string(k) + ")");
}

NonsingularityReport ensemble_nonsingularity_check(const QuadraticEnsemble& ens,
                                                   int trials, std::uint64_t seed) {
  if (trials < 1) fail(ErrorKind::InvalidArgument, "nonsingularity check needs trials >= 1");
  const int d = ens.d, k = ens.k;
  Philox rng(seed, streams::kEnsembleCheck);
  NonsingularityReport rep;
  rep.min_abs_det = std::numeric_limits<double>::infinity();
  std::vector<double> combo(static_cast<std::size_t>(d) * d);
  for (int trial = 0; trial < trials; ++trial) {
    IndexStream st(rng, static_cast<std::uint64_t>(trial));
    Vec c = sphere_direction(st, k);
    std::fill(combo.begin(), combo.end(), 0.0);
    for (int j = 0; j < k; ++j)
      for (std::size_t e = 0; e < combo.size(); ++e)
        combo[e] += c[static_cast<std::size_t>(j)] * ens.matrices[static_cast<std::size_t>(j)][e];
    const double dv = std::fabs(det(combo, d));
    if (dv < rep.min_abs_det) {
      rep.min_abs_det = dv;
      rep.argmin_c = c;
    }
  }
  // axis coefficients are the classic degeneracy directions; always probe them
  for (int j = 0; j < k; ++j) {
    Vec c(static_cast<std::size_t>(k), 0.0);
    c[static_cast<std::size_t>(j)] = 1.0;
    std::fill(combo.begin(), combo.end(), 0.0);
    for (std::size_t e = 0; e < combo.size(); ++e)
      combo[e] = ens.matrices[static_cast<std::size_t>(j)][e];
    const double dv = std::fabs(det(combo, d));
    if (dv < rep.min_abs_det) {
      rep.min_abs_det = dv;
      rep.argmin_c = c;
    }
  }
  rep.pass = rep.min_abs_det > 1e-9;
  return rep;
}

// ---- Heisenberg group -----------------------------------------------------

Vec heis_mul(Span x, Span y) {
  // (x', x3) . (y', y3) = (x' + y', x3 + y3 + (x1 y2 - x2 y1)/2)
  return Vec{x[0] + y[0], x[1] + y[1], x[2] + y[2] + 0.5 * (x[0] * y[1] - x[1] * y[0])};
}

Vec heis_inv(Span x) { return Vec{-x[0], -x[1], -x[2]}; }

// ---- catalog --------------------------------------------------------------

Rational threshold_for(const ConfigurationMap& map) {
  if (map.name.empty()) fail(ErrorKind::UnknownMap, "map is not a catalog entry");
  return map.threshold_sum;
}

ConfigurationMap make_distance_map(int d) {
  if (d < 1) fail(ErrorKind::InvalidArgument, "distance map needs d >= 1");
  ConfigurationMap m;
  m.name = "distance";
  m.d1 = m.d2 = d;
  m.k = 1;
  m.alpha = Rational(d - 1, 2);
  m.beta = Rational(0);
  m.threshold_sum = Rational(d + 1);
  m.x_space = m.y_space = SpaceSpec{SpaceKind::Point, d, d};
  m.eval_rule = [](Span x, Span y, std::span<double> out) { out[0] = dist(x, y); };
  m.is_singular = [](Span x, Span y) { return dist(x, y) < kSingularMargin; };
  m.translation_invariant = true;
  return finalize(std::move(m));
}

ConfigurationMap make_ellipsoid_distance_map(int d, std::vector<double> mat) {
  if (static_cast<int>(mat.size()) != d * d)
    fail(ErrorKind::DimensionMismatch, "ellipsoid norm matrix must be d x d");
  ConfigurationMap m = make_distance_map(d);
  m.name = "ellipsoid_distance";
  m.eval_rule = [d, mat](Span x, Span y, std::span<double> out) {
    double acc = 0.0;
    for (int r = 0; r < d; ++r) {
      double row = 0.0;
      for (int c = 0; c < d; ++c)
        row += mat[static_cast<std::size_t>(r) * d + c] * (x[static_cast<std::size_t>(c)] - y[static_cast<std::size_t>(c)]);
      acc += row * row;
    }
    out[0] = std::sqrt(acc);
  };
  return m;
}

ConfigurationMap make_difference_map(int d) {
  if (d < 1) fail(ErrorKind::InvalidArgument, "difference map needs d >= 1");
  ConfigurationMap m;
  m.name = "difference";
  m.d1 = m.d2 = d;
  m.k = d;
  m.alpha = Rational(0);
  m.beta = Rational(0);
  m.threshold_sum = Rational(2 * d);
  m.x_space = m.y_space = SpaceSpec{SpaceKind::Point, d, d};
  m.eval_rule = [d](Span x, Span y, std::span<double> out) {
    for (int i = 0; i < d; ++i) out[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(i)] - y[static_cast<std::size_t>(i)];
  };
  m.translation_invariant = true;
  return finalize(std::move(m));
}

ConfigurationMap make_multiparameter_map(std::vector<int> parts) {
  const int k = static_cast<int>(parts.size());
  if (k < 1) fail(ErrorKind::InvalidArgument, "multiparameter map needs >= 1 block");
  int d = 0;
  int min_dj = parts[0];
  for (int dj : parts) {
    if (dj < 2) fail(ErrorKind::InvalidArgument, "multiparameter blocks need d_j >= 2");
    d += dj;
    min_dj = std::min(min_dj, dj);
  }
  ConfigurationMap m;
  m.name = "multiparameter";
  m.d1 = m.d2 = d;
  m.k = k;
  m.alpha = Rational(min_dj - 1, 2);
  m.beta = Rational(d - k, 2) - m.alpha;
  m.threshold_sum = Rational(2 * d - min_dj + 1);
  m.x_space = m.y_space = SpaceSpec{SpaceKind::Point, d, d};
  m.eval_rule = [parts](Span x, Span y, std::span<double> out) {
    std::size_t off = 0;
    for (std::size_t j = 0; j < parts.size(); ++j) {
      double acc = 0.0;
      for (int i = 0; i < parts[j]; ++i) {
        const double diff = x[off + static_cast<std::size_t>(i)] - y[off + static_cast<std::size_t>(i)];
        acc += diff * diff;
      }
      out[j] = std::sqrt(acc);
      off += static_cast<std::size_t>(parts[j]);
    }
  };
  m.is_singular = [parts](Span x, Span y) {
    std::size_t off = 0;
    for (int dj : parts) {
      double acc = 0.0;
      for (int i = 0; i < dj; ++i) {
        const double diff = x[off + static_cast<std::size_t>(i)] - y[off + static_cast<std::size_t>(i)];
        acc += diff * diff;
      }
      if (std::sqrt(acc) < kSingularMargin) return true;
      off += static_cast<std::size_t>(dj);
    }
    return false;
  };
  m.translation_invariant = true;
  return finalize(std::move(m));
}

ConfigurationMap make_hyperplane_point_map(int d) {
  if (d < 2) fail(ErrorKind::InvalidArgument, "hyperplane-point map needs d >= 2");
  ConfigurationMap m;
  m.name = "hyperplane_point";
  m.d1 = m.d2 = d;
  m.k = 1;
  m.alpha = Rational(d - 1, 2);
  m.beta = Rational(0);
  m.threshold_sum = Rational(d + 1);
  m.x_space = SpaceSpec{SpaceKind::Hyperplane, d + 1, d};  // (omega, s)
  m.y_space = SpaceSpec{SpaceKind::Point, d, d};
  m.eval_rule = [d](Span x, Span y, std::span<double> out) {
    double acc = -x[static_cast<std::size_t>(d)];
    for (int i = 0; i < d; ++i) acc += x[static_cast<std::size_t>(i)] * y[static_cast<std::size_t>(i)];
    out[0] = std::fabs(acc);
  };
  m.is_singular = [d](Span x, Span y) {
    double acc = -x[static_cast<std::size_t>(d)];
    for (int i = 0; i < d; ++i) acc += x[static_cast<std::size_t>(i)] * y[static_cast<std::size_t>(i)];
    return std::fabs(acc) < kSingularMargin;
  };
  return finalize(std::move(m));
}

ConfigurationMap make_sphere_point_map(int d) {
  if (d < 1) fail(ErrorKind::InvalidArgument, "sphere-point map needs d >= 1");
  ConfigurationMap m;
  m.name = "sphere_point";
  m.d1 = d + 1;
  m.d2 = d;
  m.k = 1;
  m.alpha = Rational(d - 1, 2);
  m.beta = Rational(0);
  m.threshold_sum = Rational(d + 2);
  m.x_space = SpaceSpec{SpaceKind::Sphere, d + 1, d + 1};  // (center, radius)
  m.y_space = SpaceSpec{SpaceKind::Point, d, d};
  m.eval_rule = [d](Span x, Span y, std::span<double> out) {
    double acc = 0.0;
    for (int i = 0; i < d; ++i) {
      const double diff = y[static_cast<std::size_t>(i)] - x[static_cast<std::size_t>(i)];
      acc += diff * diff;
    }
    out[0] = std::sqrt(acc) - x[static_cast<std::size_t>(d)];  // signed
  };
  m.is_singular = [d](Span x, Span y) {
    double acc = 0.0;
    for (int i = 0; i < d; ++i) {
      const double diff = y[static_cast<std::size_t>(i)] - x[static_cast<std::size_t>(i)];
      acc += diff * diff;
    }
    return std::sqrt(acc) < kSingularMargin;  // point at the center
  };
  return finalize(std::move(m));
}

ConfigurationMap make_line_point_map(int d) {
  if (d < 2) fail(ErrorKind::InvalidArgument, "line-point map needs d >= 2");
  ConfigurationMap m;
  m.name = "line_point";
  m.d1 = 2 * d - 2;
  m.d2 = d;
  m.k = 1;
  m.alpha = Rational(d - 1, 2);
  m.beta = Rational(0);
  m.threshold_sum = Rational(2 * d - 1);
  m.x_space = SpaceSpec{SpaceKind::Line, 2 * d, 2 * d - 2};  // (omega, v)
  m.y_space = SpaceSpec{SpaceKind::Point, d, d};
  m.eval_rule = [d](Span x, Span y, std::span<double> out) {
    out[0] = line_point_distance(line_from_coords(x, d), y);
  };
  m.is_singular = [d](Span x, Span y) {
    return line_point_distance(line_from_coords(x, d), y) < kSingularMargin;
  };
  return finalize(std::move(m));
}

ConfigurationMap make_line_line_map(int d) {
  if (d < 2) fail(ErrorKind::InvalidArgument, "line-line map needs d >= 2");
  ConfigurationMap m;
  m.name = "line_line";
  m.d1 = m.d2 = 2 * d - 2;
  m.k = 1;
  m.alpha = Rational(2 * d - 3, 2);
  m.beta = Rational(0);
  m.threshold_sum = Rational(2 * d - 1);
  m.x_space = m.y_space = SpaceSpec{SpaceKind::Line, 2 * d, 2 * d - 2};
  m.eval_rule = [d](Span x, Span y, std::span<double> out) {
    out[0] = line_line_distance(line_from_coords(x, d), line_from_coords(y, d));
  };
  m.is_singular = [d](Span x, Span y) {
    return line_line_distance(line_from_coords(x, d), line_from_coords(y, d)) < kSingularMargin;
  };
  return finalize(std::move(m));
}

ConfigurationMap make_quadratic_map(QuadraticEnsemble ens) {
  ConfigurationMap m;
  m.name = "quadratic";
  m.d1 = m.d2 = ens.d;
  m.k = ens.k;
  m.alpha = Rational(ens.d - ens.k, 2);
  m.beta = Rational(0);
  m.threshold_sum = Rational(ens.d + ens.k);
  m.x_space = m.y_space = SpaceSpec{SpaceKind::Point, ens.d, ens.d};
  const int d = ens.d;
  auto mats = ens.matrices;
  m.eval_rule = [d, mats](Span x, Span y, std::span<double> out) {
    Vec u(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) u[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(i)] - y[static_cast<std::size_t>(i)];
    for (std::size_t j = 0; j < mats.size(); ++j) {
      double acc = 0.0;
      for (int r = 0; r < d; ++r) {
        double row = 0.0;
        for (int c = 0; c < d; ++c) row += mats[j][static_cast<std::size_t>(r) * d + c] * u[static_cast<std::size_t>(c)];
        acc += u[static_cast<std::size_t>(r)] * row;
      }
      out[j] = acc;
    }
  };
  m.is_singular = [](Span x, Span y) { return dist(x, y) < kSingularMargin; };
  m.translation_invariant = true;
  return finalize(std::move(m));
}

ConfigurationMap make_heisenberg_map() {
  ConfigurationMap m;
  m.name = "heisenberg";
  m.d1 = m.d2 = 3;
  m.k = 2;
  m.alpha = Rational(1, 3);
  m.beta = Rational(1, 6);
  m.threshold_sum = Rational(16, 3);
  m.x_space = m.y_space = SpaceSpec{SpaceKind::Point, 3, 3};
  m.eval_rule = [](Span x, Span y, std::span<double> out) {
    // (|x'-y'|, height of x . y^{-1})
    const double dx0 = x[0] - y[0], dx1 = x[1] - y[1];
    out[0] = std::sqrt(dx0 * dx0 + dx1 * dx1);
    out[1] = x[2] - y[2] + 0.5 * (x[0] * y[1] - x[1] * y[0]);
  };
  m.is_singular = [](Span x, Span y) {
    const double dx0 = x[0] - y[0], dx1 = x[1] - y[1];
    return std::sqrt(dx0 * dx0 + dx1 * dx1) < kSingularMargin;
  };
  return finalize(std::move(m));
}

ConfigurationMap make_moment_curve_map(int d) {
  if (d < 2) fail(ErrorKind::InvalidArgument, "moment-curve map needs d >= 2");
  ConfigurationMap m;
  m.name = "moment_curve";
  m.d1 = m.d2 = d;
  m.k = d - 1;
  m.alpha = Rational(1, d);
  m.beta = Rational(1, 2) - Rational(1, d);
  m.threshold_sum = Rational(2 * d * d - 2, d);  // 2d - 2/d
  m.x_space = m.y_space = SpaceSpec{SpaceKind::Point, d, d};
  m.eval_rule = [d](Span x, Span y, std::span<double> out) {
    const double tau = x[0] - y[0];
    double p = tau;
    for (int j = 1; j < d; ++j) {
      p *= tau;  // tau^(j+1)
      out[static_cast<std::size_t>(j - 1)] = x[static_cast<std::size_t>(j)] - y[static_cast<std::size_t>(j)] - p;
    }
  };
  m.translation_invariant = true;
  return finalize(std::move(m));
}

ConfigurationMap make_step_two_entry(int step1_dim, int step2_dim) {
  if (step1_dim < 2 || step1_dim % 2 != 0 || step2_dim < 1)
    fail(ErrorKind::InvalidArgument, "step-two entry needs even n >= 2, m >= 1");
  ConfigurationMap m;
  m.name = "step_two(n=" + std::to_string(step1_dim) + ",m=" + std::to_string(step2_dim) + ")";
  m.d1 = m.d2 = step1_dim + step2_dim;
  m.k = step2_dim + 1;
  m.beta = Rational(1, 6);
  m.alpha = Rational(m.d2 - m.k, 2) - m.beta;
  m.threshold_sum = Rational(step1_dim + 2 * step2_dim) + Rational(4, 3);
  m.x_space = m.y_space = SpaceSpec{SpaceKind::Point, m.d1, m.d1};
  // no evaluator: threshold-only row beyond the H^1 case
  return finalize(std::move(m));
}

std::vector<ConfigurationMap> standard_catalog() {
  std::vector<ConfigurationMap> cat;
  cat.push_back(make_distance_map(2));
  cat.push_back(make_distance_map(3));
  cat.push_back(make_difference_map(1));
  cat.push_back(make_difference_map(2));
  cat.push_back(make_multiparameter_map({2, 2}));
  cat.push_back(make_hyperplane_point_map(2));
  cat.push_back(make_hyperplane_point_map(3));
  cat.push_back(make_sphere_point_map(2));
  cat.push_back(make_sphere_point_map(3));
  cat.push_back(make_line_point_map(3));
  cat.push_back(make_line_line_map(3));
  cat.push_back(make_quadratic_map(build_quadratic_ensemble(2, 2)));
  cat.push_back(make_quadratic_map(build_quadratic_ensemble(4, 3)));
  cat.push_back(make_heisenberg_map());
  cat.push_back(make_step_two_entry(2, 1));
  cat.push_back(make_moment_curve_map(2));
  cat.push_back(make_moment_curve_map(3));
  return cat;
}

// ---- parameter-space sampling ---------------------------------------------

PointCloud sample_parameter_space(const ConfigurationMap& map, Side side, int n,
                                  std::uint64_t seed, const SampleBoxes& boxes) {
  if (n < 1) fail(ErrorKind::InvalidArgument, "sample_parameter_space needs n >= 1");
  const SpaceSpec& space = (side == Side::X) ? map.x_space : map.y_space;
  const double width = boxes.hi - boxes.lo;
  Philox rng(seed, streams::kParamSpace);

  PointCloud cloud;
  cloud.dim = space.ambient;
  cloud.data.resize(static_cast<std::size_t>(n) * static_cast<std::size_t>(space.ambient));

  for (int i = 0; i < n; ++i) {
    IndexStream st(rng, static_cast<std::uint64_t>(i));
    double* p = cloud.data.data() + static_cast<std::size_t>(i) * static_cast<std::size_t>(space.ambient);
    switch (space.kind) {
      case SpaceKind::Point: {
        for (int c = 0; c < space.ambient; ++c) p[c] = boxes.lo + width * st.u01();
        break;
      }
      case SpaceKind::Hyperplane: {
        const int d = space.ambient - 1;
        const Vec w = sphere_direction(st, d);
        for (int c = 0; c < d; ++c) p[c] = w[static_cast<std::size_t>(c)];
        p[d] = boxes.lo + width * st.u01();
        break;
      }
      case SpaceKind::Sphere: {
        const int d = space.ambient - 1;
        for (int c = 0; c < d; ++c) p[c] = boxes.lo + width * st.u01();
        p[d] = boxes.radius_lo + (boxes.radius_hi - boxes.radius_lo) * st.u01();
        break;
      }
      case SpaceKind::Line: {
        const int d = space.ambient / 2;
        const Vec w = sphere_direction(st, d);
        Vec v(static_cast<std::size_t>(d));
        for (int c = 0; c < d; ++c) v[static_cast<std::size_t>(c)] = boxes.lo + width * st.u01();
        // two projection passes pin v . omega to ~1e-16 relative
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
  return cloud;
}

}  // namespace configlab::geometry

#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "configlab/rational.hpp"
#include "configlab/vecmath.hpp"

namespace configlab::geometry {

// Parameter spaces points can live in. `ambient` is the number of stored
// coordinates; `manifold_dim` is the dimension that enters thresholds
// (they differ for lines, spheres and hyperplanes, which are embedded).
enum class SpaceKind { Point, Hyperplane, Sphere, Line };

struct SpaceSpec {
  SpaceKind kind = SpaceKind::Point;
  int ambient = 0;
  int manifold_dim = 0;
};

// A configuration map Phi : X x Y -> R^k together with its cataloged
// smoothing order alpha, loss beta and sufficient dimension-sum threshold.
// Entries without an evaluator are threshold-only catalog rows.
struct ConfigurationMap {
  std::string name;
  int d1 = 0;  // dim X
  int d2 = 0;  // dim Y
  int k = 0;   // codomain dimension
  Rational alpha;          // absolute smoothing
  Rational beta;           // relative loss, alpha + beta = (d2-k)/2
  Rational threshold_sum;  // d1 + k + 2*beta
  SpaceSpec x_space, y_space;
  std::function<void(Span x, Span y, std::span<double> out)> eval_rule;
  std::function<bool(Span x, Span y)> is_singular;  // empty: never singular
  bool translation_invariant = false;
};

// Evaluates Phi(x, y); checks coordinate widths and the singular-set
// predicate (margin 1e-9) before calling the rule.
Vec eval_configuration(const ConfigurationMap& map, Span x, Span y);

// ---- affine lines -------------------------------------------------------

// Oriented affine line {v + s*omega}: unit direction, foot point in
// omega-perp. Construction enforces both invariants to 1e-12.
struct Line {
  Vec omega;
  Vec v;
};

Line make_line(Vec omega, Vec v);

// Euclidean distance from y to the infinite line.
double line_point_distance(const Line& line, Span y);

// Smooth variant (half squared distance); no sqrt kink at incidence.
double phi_line_point_smooth(const Line& line, Span y);

// Distance between two lines: exact two-variable least squares, with an
// orthogonal-projection fallback for (near-)parallel directions.
double line_line_distance(const Line& a, const Line& b);

// ---- quadratic-form ensembles ------------------------------------------

struct QuadraticEnsemble {
  int d = 0;
  int k = 0;
  std::vector<std::vector<double>> matrices;  // k symmetric d*d, row-major
};

// Radon-Hurwitz number rho(n) for n given as 2n (so half-integers are
// exact). rho((2l+1)*2^(p+4q)) = 2^p + 8q; zero for half-integers.
int radon_hurwitz_two_n(std::int64_t two_n);
int radon_hurwitz(double n);

// Largest admissible ensemble size on R^d: rho(d/2) + 1.
int alp_max_k(int d);

// Known nonsingular constructions: (d, 1), (2, 2) and (4, k <= 3).
QuadraticEnsemble build_quadratic_ensemble(int d, int k);

struct NonsingularityReport {
  bool pass = false;
  double min_abs_det = 0.0;
  Vec argmin_c;
};

// Samples unit coefficient vectors and tracks min |det(sum c_j A_j)|.
NonsingularityReport ensemble_nonsingularity_check(const QuadraticEnsemble& ens,
                                                   int trials, std::uint64_t seed);

// ---- Heisenberg group ---------------------------------------------------

struct HeisPoint {
  double x1 = 0, x2 = 0, x3 = 0;
};

Vec heis_mul(Span x, Span y);
Vec heis_inv(Span x);

// ---- catalog ------------------------------------------------------------

Rational threshold_for(const ConfigurationMap& map);

ConfigurationMap make_distance_map(int d);
// |M(x-y)| for positive definite M (row-major d*d); strictly convex norm.
ConfigurationMap make_ellipsoid_distance_map(int d, std::vector<double> m);
ConfigurationMap make_difference_map(int d);
ConfigurationMap make_multiparameter_map(std::vector<int> parts);
ConfigurationMap make_hyperplane_point_map(int d);
ConfigurationMap make_sphere_point_map(int d);
ConfigurationMap make_line_point_map(int d);
ConfigurationMap make_line_line_map(int d);
ConfigurationMap make_quadratic_map(QuadraticEnsemble ens);
ConfigurationMap make_heisenberg_map();
ConfigurationMap make_moment_curve_map(int d);
// Step-two group row (threshold only; no evaluator beyond the H^1 case).
ConfigurationMap make_step_two_entry(int step1_dim, int step2_dim);

// Representative instances for the `thresholds` table.
std::vector<ConfigurationMap> standard_catalog();

// ---- parameter-space sampling -------------------------------------------

enum class Side { X, Y };

// Bounding boxes for the non-compact parameter spaces.
struct SampleBoxes {
  double lo = -1.0;
  double hi = 1.0;
  double radius_lo = 0.1;
  double radius_hi = 1.1;
};

// n parameter points for the requested side, deterministic per seed.
// Line and hyperplane invariants hold to 1e-12.
PointCloud sample_parameter_space(const ConfigurationMap& map, Side side, int n,
                                  std::uint64_t seed, const SampleBoxes& boxes = {});

}  // namespace configlab::geometry

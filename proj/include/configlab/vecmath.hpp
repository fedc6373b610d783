#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace configlab {

using Vec = std::vector<double>;
using Span = std::span<const double>;

inline double dot(Span a, Span b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm2(Span a) { return dot(a, a); }

inline double norm(Span a) { return std::sqrt(norm2(a)); }

inline double dist(Span a, Span b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

inline Vec sub(Span a, Span b) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

// Determinant of a dense n x n matrix (row-major), by LU with partial
// pivoting. Destroys its local copy; n stays small here.
inline double det(std::span<const double> m, int n) {
  std::vector<double> a(m.begin(), m.end());
  double d = 1.0;
  for (int col = 0; col < n; ++col) {
    int piv = col;
    double best = std::fabs(a[static_cast<std::size_t>(col) * n + col]);
    for (int r = col + 1; r < n; ++r) {
      const double v = std::fabs(a[static_cast<std::size_t>(r) * n + col]);
      if (v > best) { best = v; piv = r; }
    }
    if (best == 0.0) return 0.0;
    if (piv != col) {
      for (int j = 0; j < n; ++j)
        std::swap(a[static_cast<std::size_t>(piv) * n + j], a[static_cast<std::size_t>(col) * n + j]);
      d = -d;
    }
    const double p = a[static_cast<std::size_t>(col) * n + col];
    d *= p;
    for (int r = col + 1; r < n; ++r) {
      const double f = a[static_cast<std::size_t>(r) * n + col] / p;
      for (int j = col; j < n; ++j)
        a[static_cast<std::size_t>(r) * n + j] -= f * a[static_cast<std::size_t>(col) * n + j];
    }
  }
  return d;
}

// Flat row-major point storage shared by samplers and measures.
struct PointCloud {
  int dim = 0;
  std::vector<double> data;  // n * dim

  std::size_t size() const { return dim ? data.size() / static_cast<std::size_t>(dim) : 0; }
  Span point(std::size_t i) const {
    return Span(data.data() + i * static_cast<std::size_t>(dim), static_cast<std::size_t>(dim));
  }
};

// Ordinary least squares fit y ~ a + b x; returns {slope, rms residual}.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double rms_residual = 0.0;
};

inline LineFit fit_line(Span x, Span y) {
  const std::size_t n = x.size();
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) { mx += x[i]; my += y[i]; }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ss = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - (f.intercept + f.slope * x[i]);
    ss += r * r;
  }
  f.rms_residual = std::sqrt(ss / static_cast<double>(n));
  return f;
}

}  // namespace configlab

#pragma once

// Independent reference implementations used only by tests. Nothing here
// shares code with the library: masses come from integrating the density
// rather than from erfc, and means are enumerated by brute force.

#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

namespace rnm::oracle {

namespace detail {

inline double simpson_step(const std::function<double(double)>& f, double a, double fa,
                           double b, double fb, double m, double fm, double whole,
                           double tol, int depth) {
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return simpson_step(f, a, fa, m, fm, lm, flm, left, tol / 2, depth - 1) +
         simpson_step(f, m, fm, b, fb, rm, frm, right, tol / 2, depth - 1);
}

}  // namespace detail

/// Adaptive Simpson with Richardson correction; tol is absolute.
inline double simpson(const std::function<double(double)>& f, double a, double b,
                      double tol = 1e-13, int depth = 40) {
  const double m = 0.5 * (a + b);
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(m);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return detail::simpson_step(f, a, fa, b, fb, m, fm, whole, tol, depth);
}

inline double normal_pdf(double x, double mean, double variance) {
  const double z = (x - mean) / std::sqrt(variance);
  return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi * variance);
}

/// Normal mass by integrating the density. Pieces of width sigma keep the
/// Simpson recursion well conditioned; tail pieces beyond 40 sigma are zero
/// at double precision. Absolute accuracy about 1e-14.
inline double normal_mass(double a, double b, double mean, double variance) {
  const double sigma = std::sqrt(variance);
  const double lo = std::max(a, mean - 40.0 * sigma);
  const double hi = std::min(b, mean + 40.0 * sigma);
  if (!(lo < hi)) return 0.0;
  const int pieces = std::max(1, static_cast<int>(std::ceil((hi - lo) / sigma)));
  double total = 0.0;
  for (int p = 0; p < pieces; ++p) {
    const double x0 = lo + (hi - lo) * p / pieces;
    const double x1 = p + 1 == pieces ? hi : lo + (hi - lo) * (p + 1) / pieces;
    total += simpson([&](double x) { return normal_pdf(x, mean, variance); }, x0, x1,
                     1e-15 / pieces);
  }
  return total;
}

/// Truncated-normal cell masses by integrating the density.
inline std::vector<double> cell_masses(int m, double mean, double variance) {
  const double total = normal_mass(0.0, 1.0, mean, variance);
  std::vector<double> p(static_cast<std::size_t>(m));
  for (int k = 0; k < m; ++k)
    p[static_cast<std::size_t>(k)] =
        normal_mass(static_cast<double>(k) / m, static_cast<double>(k + 1) / m, mean, variance) / total;
  return p;
}

/// WMEAN / WMIN / WMAX / MIXMINMAX written straight from their definitions,
/// with plain summation.
inline double wmean(const std::vector<double>& w, const std::vector<double>& z) {
  double mu = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) mu += w[i] * z[i];
  return mu;
}

inline double soft_extreme(const std::vector<double>& w, const std::vector<double>& z, bool min) {
  const double n = static_cast<double>(z.size());
  double best = min ? INFINITY : -INFINITY;
  for (std::size_t i = 0; i < z.size(); ++i) {
    double others = 0.0;
    for (std::size_t j = 0; j < z.size(); ++j)
      if (j != i) others += z[j];
    const double term = (w[i] * z[i] + others) / (w[i] + n - 1.0);
    best = min ? std::min(best, term) : std::max(best, term);
  }
  return best;
}

/// Every combination of one sample point per parent, parent 1 slowest.
inline std::vector<std::vector<double>> combinations(const std::vector<std::vector<double>>& grids) {
  std::vector<std::vector<double>> out = {{}};
  for (const auto& grid : grids) {
    std::vector<std::vector<double>> next;
    for (const auto& prefix : out) {
      for (double x : grid) {
        auto row = prefix;
        row.push_back(x);
        next.push_back(std::move(row));
      }
    }
    out = std::move(next);
  }
  return out;
}

/// s equidistant points on [lo, hi].
inline std::vector<double> linspace(double lo, double hi, int s) {
  std::vector<double> x(static_cast<std::size_t>(s));
  for (int j = 0; j < s; ++j) x[static_cast<std::size_t>(j)] = lo + (hi - lo) * j / (s - 1);
  return x;
}

}  // namespace rnm::oracle

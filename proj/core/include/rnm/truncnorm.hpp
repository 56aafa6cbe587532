#pragma once

// Probability masses of normal distributions, plain and truncated to [0, 1].

#include <span>
#include <vector>

namespace rnm {

/// Standard normal CDF, via erfc so the lower tail keeps relative accuracy.
double standard_normal_cdf(double x) noexcept;

/// Standard normal survival function 1 - Phi(x), accurate in the upper tail.
double standard_normal_sf(double x) noexcept;

/// Mass of N(mean, variance) on [a, b].
///
/// Relative accuracy is close to machine precision everywhere: both tails are
/// evaluated on their own side and narrow intervals, where the CDF difference
/// cancels, switch to Gauss-Legendre integration of the density.
/// Throws ArgumentError when a > b or variance <= 0.
double normal_mass(double a, double b, double mean, double variance);

/// Mass on [a, b] of N(mean, variance) truncated to [0, 1].
///
/// Requires 0 <= a <= b <= 1. If the untruncated mass of [0, 1] underflows
/// (below 1e-300) the truncated law is treated as a point mass at
/// clamp(mean, 0, 1).
double tnorm_mass(double a, double b, double mean, double variance);

/// Truncated-normal masses of the m equal-width cells [(k-1)/m, k/m],
/// written to out[0..m). Uses m + 1 tail evaluations. The cells sum to 1
/// up to rounding. out.size() must equal m.
void partition_masses(int m, double mean, double variance, std::span<double> out);

/// partition_masses with the cell boundaries and standard deviation set up
/// once, for evaluating many means at one variance. Results are identical.
class CellPartition {
 public:
  CellPartition(int m, double variance);

  int cell_count() const noexcept { return static_cast<int>(boundaries_.size()) - 1; }
  void masses(double mean, std::span<double> out) const;

 private:
  std::vector<double> boundaries_;  // 0, 1/m, ..., 1
  double inv_scale_;                // 1 / (sigma sqrt 2)
};

}  // namespace rnm

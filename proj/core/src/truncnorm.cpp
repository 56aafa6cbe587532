#include "rnm/truncnorm.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fmt/format.h>
#include <numbers>

#include "rnm/error.hpp"

namespace rnm {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kUnderflowMass = 1e-300;

// 8-point Gauss-Legendre on [-1, 1].
constexpr std::array<double, 4> kGlNodes = {0.1834346424956498, 0.5255324099163290,
                                            0.7966664774136267, 0.9602898564975363};
constexpr std::array<double, 4> kGlWeights = {0.3626837833783620, 0.3137066458778873,
                                              0.2223810344533745, 0.1012285362903763};

double standard_normal_pdf(double x) noexcept {
  return std::exp(-0.5 * x * x) * (0.5 * std::numbers::inv_sqrtpi * std::numbers::sqrt2);
}

// Phi(x) for x <= 0 and Q(x) = 1 - Phi(x) for x > 0: the value that is
// never close to 1 and so keeps full relative precision.
struct Tail {
  bool upper;
  double value;
};

Tail tail(double x) noexcept {
  if (x > 0.0) return {true, 0.5 * std::erfc(x * kInvSqrt2)};
  return {false, 0.5 * std::erfc(-x * kInvSqrt2)};
}

// Same, for an argument already divided by sqrt(2).
Tail scaled_tail(double t) noexcept {
  if (t > 0.0) return {true, 0.5 * std::erfc(t)};
  return {false, 0.5 * std::erfc(-t)};
}

// Phi(hi) - Phi(lo) for standardized lo <= hi, from the tail representations.
double standardized_mass(const Tail& tlo, const Tail& thi) noexcept {
  if (!tlo.upper && !thi.upper) return thi.value - tlo.value;
  if (tlo.upper && thi.upper) return tlo.value - thi.value;
  return 1.0 - tlo.value - thi.value;  // lo <= 0 < hi
}

// Magnitude of the operands in standardized_mass; the result is exact to
// rounding relative to this.
double cancellation_scale(const Tail& tlo, const Tail& thi) noexcept {
  if (tlo.upper != thi.upper) return 1.0;
  return std::max(tlo.value, thi.value);
}

// Standardized midpoint and half-width; the width is taken from b - a rather
// than from the difference of standardized ends, which would lose digits.
double gauss_legendre_mass(double mid, double half) noexcept {
  double sum = 0.0;
  for (std::size_t j = 0; j < kGlNodes.size(); ++j) {
    sum += kGlWeights[j] * (standard_normal_pdf(mid - half * kGlNodes[j]) +
                            standard_normal_pdf(mid + half * kGlNodes[j]));
  }
  return half * sum;
}

double checked_sigma(double variance) {
  if (!(variance > 0.0) || !std::isfinite(variance))
    throw ArgumentError(fmt::format("variance must be positive and finite, got {}", variance));
  return std::sqrt(variance);
}

}  // namespace

double standard_normal_cdf(double x) noexcept { return 0.5 * std::erfc(-x * kInvSqrt2); }

double standard_normal_sf(double x) noexcept { return 0.5 * std::erfc(x * kInvSqrt2); }

double normal_mass(double a, double b, double mean, double variance) {
  const double sigma = checked_sigma(variance);
  if (!(a <= b)) throw ArgumentError(fmt::format("interval [{}, {}] is empty", a, b));
  if (a == b) return 0.0;
  const double lo = (a - mean) / sigma;
  const double hi = (b - mean) / sigma;
  const Tail tlo = tail(lo);
  const Tail thi = tail(hi);
  const double diff = standardized_mass(tlo, thi);
  // When the two tail values nearly cancel the interval is narrow on the
  // scale over which the density changes, so a short quadrature is exact to
  // rounding while the subtraction is not.
  if (std::isfinite(lo) && std::isfinite(hi) && diff < 0.01 * cancellation_scale(tlo, thi))
    return gauss_legendre_mass((0.5 * (a + b) - mean) / sigma, 0.5 * (b - a) / sigma);
  return diff;
}

double tnorm_mass(double a, double b, double mean, double variance) {
  if (!(0.0 <= a && a <= b && b <= 1.0))
    throw ArgumentError(fmt::format("[{}, {}] is not a sub-interval of [0, 1]", a, b));
  const double total = normal_mass(0.0, 1.0, mean, variance);
  if (total < kUnderflowMass) {
    const double point = std::clamp(mean, 0.0, 1.0);
    return (a <= point && point <= b) ? 1.0 : 0.0;
  }
  return normal_mass(a, b, mean, variance) / total;
}

CellPartition::CellPartition(int m, double variance)
    : inv_scale_(1.0 / (checked_sigma(variance) * std::numbers::sqrt2)) {
  if (m < 1) throw ArgumentError(fmt::format("partition needs at least one cell, got {}", m));
  boundaries_.resize(static_cast<std::size_t>(m) + 1);
  for (int k = 0; k < m; ++k) boundaries_[static_cast<std::size_t>(k)] = static_cast<double>(k) / m;
  boundaries_.back() = 1.0;
}

void CellPartition::masses(double mean, std::span<double> out) const {
  const int m = cell_count();
  if (out.size() != static_cast<std::size_t>(m))
    throw ArgumentError(fmt::format("partition needs {} output slots, got {}", m, out.size()));

  const Tail first = scaled_tail((0.0 - mean) * inv_scale_);
  Tail prev = first;
  for (std::size_t k = 1; k < boundaries_.size(); ++k) {
    const Tail next = scaled_tail((boundaries_[k] - mean) * inv_scale_);
    out[k - 1] = standardized_mass(prev, next);
    prev = next;
  }
  const double total = standardized_mass(first, prev);
  if (total < kUnderflowMass) {
    std::fill(out.begin(), out.end(), 0.0);
    const double point = std::clamp(mean, 0.0, 1.0);
    const int cell = std::clamp(static_cast<int>(std::floor(point * m)), 0, m - 1);
    out[static_cast<std::size_t>(cell)] = 1.0;
    return;
  }
  for (double& p : out) p /= total;
}

void partition_masses(int m, double mean, double variance, std::span<double> out) {
  CellPartition(m, variance).masses(mean, out);
}

}  // namespace rnm

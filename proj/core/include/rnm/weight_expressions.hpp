#pragma once

// Sampling of state intervals and evaluation of the four weight expressions.

#include <cstdint>
#include <span>
#include <vector>

#include "rnm/model.hpp"

namespace rnm {

/// Default cap on the number of sample-point combinations per distribution.
inline constexpr std::uint64_t kDefaultCombinationCap = 10'000'000;

/// kDefaultCombinationCap, or the value of RNM_MAX_COMBINATIONS when that
/// environment variable holds a positive integer.
std::uint64_t combination_cap();

/// s^n, saturating at UINT64_MAX.
std::uint64_t combination_count(int sample_size, int parent_count) noexcept;

/// s equidistant points on the interval, both endpoints included exactly.
std::vector<double> sample_points(StateInterval interval, int sample_size);

/// Weight expression applied to one sample point per parent.
///
/// The spec is assumed valid for z.size() parents. Sums are formed in a way
/// that does not depend on parent order, so permuting parents together with
/// their weights gives a bit-identical result.
double evaluate_mu(const WeightExpressionSpec& spec, std::span<const double> z);

/// The WMIN/WMAX term of parent i (1-based):
/// (w_i z_i + sum_{j != i} z_j) / (w_i + n - 1), computed exactly as
/// evaluate_mu does, so evaluate_mu(WMIN) == wmin_term(..., i) bit-for-bit
/// when parent i attains the minimum.
double wmin_term(std::span<const double> weights, std::span<const double> z, int i);

/// Parent (1-based) whose term attains the WMIN minimum, lowest index on ties.
int wmin_argmin(std::span<const double> weights, std::span<const double> z);

/// The means mu_r over all s^n sample combinations, in mixed-radix order with
/// parent 1 slowest.
struct MuSet {
  std::vector<double> values;

  double min() const;
  double max() const;
  double range() const { return max() - min(); }
};

/// Throws ResourceError when s^n exceeds cap, ValidationError on an invalid
/// spec and ArgumentError on a bad configuration or sample size.
MuSet enumerate_mu(const WeightExpressionSpec& spec, const RankedFragment& fragment,
                   const ParentConfiguration& config, int sample_size,
                   std::uint64_t cap = combination_cap());

struct MuBounds {
  double lower;
  double upper;
};

/// Extremes of the weight expression over the box of parent state
/// intervals. Every expression is non-decreasing in each argument, so these
/// sit at the all-lower and all-upper corners.
MuBounds mu_bounds(const WeightExpressionSpec& spec, const RankedFragment& fragment,
                   const ParentConfiguration& config);

}  // namespace rnm

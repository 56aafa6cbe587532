#pragma once

// Domain types for a ranked-node fragment: parents X_1..X_n feeding a child
// X_C, each node with an ordinal scale mapped onto equal-width sub-intervals
// of [0, 1].
//
// Index convention: every *domain* index (state index k, parent index i,
// child state index) is 1-based, matching how states are named. Container
// positions are 0-based; accessors that take a domain index say so.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rnm/error.hpp"

namespace rnm {

/// Absolute tolerance applied to the weight-sum constraints.
inline constexpr double kWeightSumTolerance = 1e-9;

/// Absolute tolerance for a probability vector to count as normalized.
inline constexpr double kNormalizationTolerance = 1e-9;

/// Sub-interval [lower, upper] of [0, 1] associated with one state.
struct StateInterval {
  double lower = 0.0;
  double upper = 0.0;

  double width() const noexcept { return upper - lower; }
  friend bool operator==(const StateInterval&, const StateInterval&) = default;
};

/// The k-th of m state intervals: [(k-1)/m, k/m]. Requires m >= 2, 1 <= k <= m.
StateInterval state_interval(int k, int m);

class RankedFragment {
 public:
  /// Throws ArgumentError unless n >= 1, every m_i >= 2 and m_C >= 2.
  RankedFragment(std::vector<int> parent_state_counts, int child_state_count);

  /// n parents and a child, all with m states.
  static RankedFragment equal_m(int parent_count, int state_count);

  int parent_count() const noexcept {
    return static_cast<int>(parent_state_counts_.size());
  }
  std::span<const int> parent_state_counts() const noexcept {
    return parent_state_counts_;
  }
  /// State count of parent i (1-based).
  int parent_state_count(int i) const;
  int child_state_count() const noexcept { return child_state_count_; }

  /// True when every parent and the child share one state count.
  bool is_equal_m() const noexcept;
  /// The shared state count; throws UnsupportedConfiguration otherwise.
  int common_state_count() const;

  /// Product of the parent state counts (number of CPT columns).
  std::size_t configuration_count() const noexcept;

  friend bool operator==(const RankedFragment&, const RankedFragment&) = default;

 private:
  std::vector<int> parent_state_counts_;
  int child_state_count_;
};

/// One state index per parent, 1-based.
struct ParentConfiguration {
  std::vector<int> state_indices;

  int size() const noexcept { return static_cast<int>(state_indices.size()); }
  friend bool operator==(const ParentConfiguration&,
                         const ParentConfiguration&) = default;
  friend auto operator<=>(const ParentConfiguration&,
                          const ParentConfiguration&) = default;
};

/// Throws ArgumentError unless the configuration has one in-range index per
/// parent of the fragment.
void check_configuration(const ParentConfiguration& config,
                         const RankedFragment& fragment);

/// Every configuration of the fragment, lexicographic with k_1 slowest.
std::vector<ParentConfiguration> all_configurations(const RankedFragment& fragment);

/// Scenario x^{D,i}: parent i (1-based) at its lowest state, all others at
/// their highest. Only defined for equal-m fragments.
ParentConfiguration scenario_d(int i, const RankedFragment& fragment);

enum class Expression { wmean, wmin, wmax, mixminmax };

std::string_view to_string(Expression expression) noexcept;
/// Case-insensitive parse of "WMEAN", "WMIN", "WMAX", "MIXMINMAX".
std::optional<Expression> parse_expression(std::string_view text) noexcept;

/// A weight expression together with its weights.
///
/// For WMEAN/WMIN/WMAX the weights are w_1..w_n. For MIXMINMAX they are the
/// pair (w_min, w_max). Construction does not validate; see validate_spec.
class WeightExpressionSpec {
 public:
  WeightExpressionSpec(Expression expression, std::vector<double> weights)
      : expression_(expression), weights_(std::move(weights)) {}

  static WeightExpressionSpec wmean(std::vector<double> weights) {
    return {Expression::wmean, std::move(weights)};
  }
  static WeightExpressionSpec wmin(std::vector<double> weights) {
    return {Expression::wmin, std::move(weights)};
  }
  static WeightExpressionSpec wmax(std::vector<double> weights) {
    return {Expression::wmax, std::move(weights)};
  }
  static WeightExpressionSpec mixminmax(double w_min, double w_max) {
    return {Expression::mixminmax, {w_min, w_max}};
  }

  Expression expression() const noexcept { return expression_; }
  std::span<const double> weights() const noexcept { return weights_; }

  /// MIXMINMAX only.
  double w_min() const { return weights_.at(0); }
  double w_max() const { return weights_.at(1); }

  friend bool operator==(const WeightExpressionSpec&,
                         const WeightExpressionSpec&) = default;

 private:
  Expression expression_;
  std::vector<double> weights_;
};

/// Why a specification falls outside its feasible weight set.
struct SpecViolation {
  enum class Constraint {
    weight_count,     ///< wrong number of weights for the expression / fragment
    weight_finite,    ///< NaN or infinite weight
    unit_range,       ///< WMEAN / MIXMINMAX weight outside [0, 1]
    weight_sum,       ///< WMEAN weights do not sum to 1
    at_least_one,     ///< WMIN / WMAX weight below 1
    mix_complement,   ///< MIXMINMAX w_max != 1 - w_min
  };

  Constraint constraint;
  int index = 0;  ///< offending weight (1-based), 0 when not index-specific
  std::string message;
};

/// Empty when the weights lie in the feasible set of the expression and the
/// count matches the fragment (MIXMINMAX always carries exactly two).
std::optional<SpecViolation> validate_spec(const WeightExpressionSpec& spec,
                                           const RankedFragment& fragment);

class ValidationError : public Error {
 public:
  explicit ValidationError(SpecViolation violation)
      : Error(violation.message), violation_(std::move(violation)) {}
  const SpecViolation& violation() const noexcept { return violation_; }

 private:
  SpecViolation violation_;
};

/// Throws ValidationError when validate_spec reports a violation.
void require_valid(const WeightExpressionSpec& spec, const RankedFragment& fragment);

/// Variance of the truncated normal and the per-interval sample size.
class GenerationParams {
 public:
  /// Throws ArgumentError unless variance > 0 (finite) and sample_size >= 2.
  /// Structural guarantees (consecutive top-2 states) need sample_size >= 3.
  GenerationParams(double variance, int sample_size);

  double variance() const noexcept { return variance_; }
  int sample_size() const noexcept { return sample_size_; }

 private:
  double variance_;
  int sample_size_;
};

/// Probability vector over the child states.
class ConditionalDistribution {
 public:
  /// Throws ArgumentError unless every entry is in [0, 1] and the entries sum
  /// to 1 within kNormalizationTolerance.
  explicit ConditionalDistribution(std::vector<double> probabilities);

  std::span<const double> probabilities() const noexcept { return probabilities_; }
  int state_count() const noexcept { return static_cast<int>(probabilities_.size()); }
  /// Probability of child state k (1-based).
  double probability(int k) const { return probabilities_.at(static_cast<std::size_t>(k - 1)); }

  friend bool operator==(const ConditionalDistribution&,
                         const ConditionalDistribution&) = default;

 private:
  std::vector<double> probabilities_;
};

/// Full conditional probability table, one column per parent configuration
/// in lexicographic order (k_1 slowest).
class Cpt {
 public:
  Cpt(RankedFragment fragment, std::vector<ConditionalDistribution> columns);

  const RankedFragment& fragment() const noexcept { return fragment_; }
  std::size_t size() const noexcept { return columns_.size(); }
  const std::vector<ParentConfiguration>& configurations() const noexcept {
    return configurations_;
  }
  const std::vector<ConditionalDistribution>& columns() const noexcept { return columns_; }
  const ConditionalDistribution& at(const ParentConfiguration& config) const;

 private:
  RankedFragment fragment_;
  std::vector<ParentConfiguration> configurations_;
  std::vector<ConditionalDistribution> columns_;
};

}  // namespace rnm

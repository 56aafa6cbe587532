#pragma once

// Numerical studies: D-function curves under WMEAN, the weight-update
// robustness experiment, D_1 curves under MIXMINMAX, and the randomized
// property suites.
//
// Every run is a deterministic function of its configuration and seed.
// Replication r draws from the random stream (seed, r), so the thread count
// does not change results. A stop predicate, polled between work items, ends
// a run early; the report then holds the completed prefix and complete = false.

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "rnm/analysis.hpp"
#include "rnm/model.hpp"
#include "rnm/rng.hpp"

namespace rnm {

using StopPredicate = std::function<bool()>;

/// `count` log-spaced points in (floor, ceiling]; floor itself is excluded.
std::vector<double> log_grid(double floor, double ceiling, int count);

struct VarianceGrid {
  double floor = 5e-4;
  double ceiling = 0.1;
  int points = 50;
  std::map<int, double> ceiling_by_m = {{20, 0.02}};  ///< per-m override of ceiling

  std::vector<double> for_m(int m) const;
};

// --- D_ub and D_RNM curves --------------------------------------------------

struct Fig2Config {
  std::vector<int> m_values = {3, 4, 5, 6, 7, 8, 9, 10, 20};
  VarianceGrid grid;
  int threads = 1;
};

struct Fig2Row {
  int m = 0;
  double variance = 0.0;
  double d_ub = 0.0;
  double d_rnm5 = 0.0;
  double d_rnm10 = 0.0;
};

struct Fig2Report {
  std::vector<Fig2Row> rows;
  bool complete = true;
};

/// n = 2, k = 2: w_1 at the equal-pair weight and w_2 = 1 - w_1.
Fig2Report run_fig2(const Fig2Config& config, const StopPredicate& stop = {});

// --- Weight-update experiment -----------------------------------------------

/// Upper end of the variance range drawn per replication.
enum class VarianceCeiling {
  quarter,  ///< 1 / (4 m^2)
  full,     ///< 1 / m^2
};

struct WeightUpdateConfig {
  int replications = 1000;
  std::uint64_t seed = 0;
  VarianceCeiling ceiling = VarianceCeiling::quarter;
  double variance_floor = 5e-4;
  int sample_size = 5;
  int threads = 1;
  int max_attempts = 10'000;  ///< draws per replication before giving up
};

struct WalkResult {
  std::vector<double> final_weights;
  /// after_step[i - 1]: the weights right after parent i was updated,
  /// for i = n down to 2; empty for i = 1.
  std::vector<std::vector<double>> after_step;
  /// An update needed redistribution but the other parents had no slack.
  bool degenerate = false;
};

/// The update walk for one replication. For i = n down to 2, two uniforms
/// (u, y) pick a step towards the lower (u < 1/2) or upper bound of w_i, at
/// most y times the total slack of parents 1..i-1 in the opposite direction.
/// The step is absorbed by parents 1..i-1 in proportion to that slack.
WalkResult weight_walk(std::vector<double> weights, std::span<const WeightInterval> intervals,
                       Rng& rng);

struct ReplicationRecord {
  int replication = 0;
  int m = 0;
  int n = 0;
  double variance = 0.0;
  double e1 = 0.0;  ///< largest mean absolute difference over i = 3..n
  double e2 = 0.0;  ///< largest single absolute difference over i = 3..n
  int interval_mismatches = 0;  ///< draws rejected before this one was accepted
  int degenerate_walks = 0;
};

struct WeightUpdateReport {
  WeightUpdateConfig config;
  std::vector<ReplicationRecord> records;
  double mean_e1 = 0.0;
  double mean_e2 = 0.0;
  double max_e1 = 0.0;
  double max_e2 = 0.0;
  int interval_mismatches = 0;
  int degenerate_walks = 0;
  bool complete = true;
};

/// Runs config.replications independent replications. A draw is rejected and
/// redrawn, and counted, when some initial weight w_i lies outside the interval
/// of the mode pair its own scenario produces, or when the walk degenerates.
WeightUpdateReport run_weight_update(const WeightUpdateConfig& config,
                                     const StopPredicate& stop = {});

/// One replication from stream (seed, replication).
ReplicationRecord run_replication(const WeightUpdateConfig& config, int replication);

// --- D_1 curves under MIXMINMAX ---------------------------------------------

struct Fig3Config {
  std::vector<int> m_values = {3, 4, 5, 6, 7, 8, 9, 10, 20};
  std::vector<int> sample_sizes = {3, 5, 10};
  VarianceGrid grid;
  int parent_count = 4;
  int threads = 1;
};

struct Fig3Root {
  int m = 0;
  int sample_size = 0;
  double variance0 = 0.0;  ///< 1 / (4 m^2)
  double w_max0 = 0.0;
};

struct Fig3Row {
  int m = 0;
  int sample_size = 0;
  double variance = 0.0;
  double w_max0 = 0.0;
  double d1 = 0.0;
};

struct Fig3Report {
  std::vector<Fig3Root> roots;
  std::vector<Fig3Row> rows;
  bool complete = true;
};

/// For each (m, s): w_max0 from bisect_wmax(1, n, m, k = m - 1, 1/(4m^2), s),
/// then D_1 at that fixed w_max0 over the variance grid.
Fig3Report run_fig3(const Fig3Config& config, const StopPredicate& stop = {});

// --- Property suites --------------------------------------------------------

struct PropertySuiteConfig {
  int trials = 1000;
  std::uint64_t seed = 0;
  int threads = 1;
  /// Self-test of the harness: swap the mode probability with that of the
  /// state farthest from it before checking.
  bool mutate = false;
  bool structural = true;  ///< normalization, range, consecutive top-2
  bool reduction = true;   ///< WMIN reduction
};

struct Counterexample {
  std::string property;  ///< normalization, range, consecutive_top2, wmin_reduction
  int trial = 0;
  Expression expression = Expression::wmean;
  int m = 0;
  int n = 0;
  int sample_size = 0;
  double variance = 0.0;
  std::vector<double> weights;
  ParentConfiguration config;
  std::string detail;
};

struct PropertySuiteReport {
  int trials = 0;
  std::vector<Counterexample> counterexamples;
};

/// Random (expression, feasible weights, m in 3..7, n in 2..4, s in {3, 5},
/// variance in [5e-4, 0.25], configuration) tuples checked for normalization,
/// mean range exactly 1/m and consecutive top-2 states; plus random WMIN
/// cases in scenario x^{D,i} where the reduction to one term must hold
/// (n up to m + 2; s = 3 whenever n > m, since s^n grows quickly).
PropertySuiteReport run_property_suite(const PropertySuiteConfig& config);

}  // namespace rnm

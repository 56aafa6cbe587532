#pragma once

// Conditional distributions and full CPTs from a weight expression, plus the
// Monte-Carlo estimate of the large-sample limit the generator converges to.

#include <cstdint>
#include <vector>

#include "rnm/model.hpp"
#include "rnm/weight_expressions.hpp"

namespace rnm {

/// Child distribution for one parent configuration: for each child state,
/// the truncated-normal mass of its interval averaged over every mu_r.
ConditionalDistribution generate_distribution(const WeightExpressionSpec& spec,
                                              const RankedFragment& fragment,
                                              const ParentConfiguration& config,
                                              const GenerationParams& params,
                                              std::uint64_t cap = combination_cap());

/// The averaging step alone, for callers that already hold the means.
ConditionalDistribution distribution_from_mu(const MuSet& mu, int child_state_count,
                                             double variance);

struct CptOptions {
  int threads = 1;
  std::uint64_t cap = combination_cap();
};

/// One column per configuration, lexicographic order. Throws ResourceError
/// when (number of configurations) * s^n exceeds options.cap.
Cpt generate_cpt(const WeightExpressionSpec& spec, const RankedFragment& fragment,
                 const GenerationParams& params, const CptOptions& options = {});

struct LimitOracleParams {
  std::uint64_t mc_samples = 1'000'000;
  std::uint64_t rng_seed = 0;
};

struct LimitEstimate {
  ConditionalDistribution distribution;
  std::vector<double> standard_error;  ///< per child state
};

/// Monte-Carlo estimate of the s -> infinity limit: parent values drawn
/// uniformly on their state intervals, mapped through the weight expression,
/// and the truncated-normal cell masses averaged.
///
/// Samples are drawn in fixed blocks, each from its own stream derived from
/// (rng_seed, block), and accumulated order-independently; the output for a
/// seed is identical for any thread count.
LimitEstimate limit_distribution(const WeightExpressionSpec& spec,
                                 const RankedFragment& fragment,
                                 const ParentConfiguration& config, double variance,
                                 const LimitOracleParams& oracle, int threads = 1);

}  // namespace rnm

#include "rnm/cpt_generator.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "rnm/detail/fixed_sum.hpp"
#include "rnm/parallel.hpp"
#include "rnm/rng.hpp"
#include "rnm/truncnorm.hpp"

namespace rnm {

namespace {

constexpr std::uint64_t kMonteCarloBlock = 1 << 14;

std::vector<double> normalized(std::vector<detail::FixedSum> const& sums, double count) {
  std::vector<double> p(sums.size());
  for (std::size_t k = 0; k < sums.size(); ++k) p[k] = sums[k].value() / count;
  return p;
}

}  // namespace

ConditionalDistribution distribution_from_mu(const MuSet& mu, int child_state_count,
                                             double variance) {
  if (mu.values.empty()) throw ArgumentError("no means to average");
  const auto m = static_cast<std::size_t>(child_state_count);
  std::vector<detail::FixedSum> sums(m);
  std::vector<double> cell(m);
  const CellPartition partition(child_state_count, variance);
  for (double value : mu.values) {
    partition.masses(value, cell);
    for (std::size_t k = 0; k < m; ++k) sums[k].add(cell[k]);
  }
  return ConditionalDistribution(normalized(sums, static_cast<double>(mu.values.size())));
}

ConditionalDistribution generate_distribution(const WeightExpressionSpec& spec,
                                              const RankedFragment& fragment,
                                              const ParentConfiguration& config,
                                              const GenerationParams& params,
                                              std::uint64_t cap) {
  const MuSet mu = enumerate_mu(spec, fragment, config, params.sample_size(), cap);
  return distribution_from_mu(mu, fragment.child_state_count(), params.variance());
}

Cpt generate_cpt(const WeightExpressionSpec& spec, const RankedFragment& fragment,
                 const GenerationParams& params, const CptOptions& options) {
  require_valid(spec, fragment);
  const std::uint64_t per_column =
      combination_count(params.sample_size(), fragment.parent_count());
  const std::uint64_t columns = fragment.configuration_count();
  const std::uint64_t total =
      per_column > UINT64_MAX / columns ? UINT64_MAX : per_column * columns;
  if (total > options.cap) throw ResourceError(total, options.cap);

  const auto configs = all_configurations(fragment);
  std::vector<std::optional<ConditionalDistribution>> slots(configs.size());
  parallel_for(configs.size(), options.threads, [&](std::size_t c) {
    slots[c] = generate_distribution(spec, fragment, configs[c], params, options.cap);
  });
  std::vector<ConditionalDistribution> out;
  out.reserve(slots.size());
  for (auto& slot : slots) out.push_back(std::move(*slot));
  return Cpt(fragment, std::move(out));
}

LimitEstimate limit_distribution(const WeightExpressionSpec& spec,
                                 const RankedFragment& fragment,
                                 const ParentConfiguration& config, double variance,
                                 const LimitOracleParams& oracle, int threads) {
  require_valid(spec, fragment);
  check_configuration(config, fragment);
  if (oracle.mc_samples < 1) throw ArgumentError("mc_samples must be >= 1");
  if (!(variance > 0.0)) throw ArgumentError("variance must be positive");

  const int n = fragment.parent_count();
  const int m = fragment.child_state_count();
  std::vector<StateInterval> intervals;
  for (int i = 1; i <= n; ++i)
    intervals.push_back(state_interval(config.state_indices[static_cast<std::size_t>(i - 1)],
                                       fragment.parent_state_count(i)));

  struct Block {
    std::vector<detail::FixedSum> sum;
    std::vector<detail::FixedSum> sum_sq;
  };
  const std::uint64_t blocks = (oracle.mc_samples + kMonteCarloBlock - 1) / kMonteCarloBlock;
  std::vector<Block> partial(static_cast<std::size_t>(blocks));

  parallel_for(partial.size(), threads, [&](std::size_t b) {
    Rng rng(oracle.rng_seed, b);
    Block& block = partial[b];
    block.sum.resize(static_cast<std::size_t>(m));
    block.sum_sq.resize(static_cast<std::size_t>(m));
    std::vector<double> z(static_cast<std::size_t>(n));
    std::vector<double> cell(static_cast<std::size_t>(m));
    const CellPartition partition(m, variance);
    const std::uint64_t begin = b * kMonteCarloBlock;
    const std::uint64_t end = std::min(oracle.mc_samples, begin + kMonteCarloBlock);
    for (std::uint64_t sample = begin; sample < end; ++sample) {
      for (std::size_t i = 0; i < z.size(); ++i) z[i] = rng.uniform(intervals[i].lower, intervals[i].upper);
      partition.masses(evaluate_mu(spec, z), cell);
      for (std::size_t k = 0; k < cell.size(); ++k) {
        block.sum[k].add(cell[k]);
        block.sum_sq[k].add(cell[k] * cell[k]);
      }
    }
  });

  std::vector<detail::FixedSum> sum(static_cast<std::size_t>(m));
  std::vector<detail::FixedSum> sum_sq(static_cast<std::size_t>(m));
  for (const auto& block : partial) {
    for (std::size_t k = 0; k < sum.size(); ++k) {
      sum[k].add(block.sum[k]);
      sum_sq[k].add(block.sum_sq[k]);
    }
  }
  const double count = static_cast<double>(oracle.mc_samples);
  std::vector<double> mean = normalized(sum, count);
  std::vector<double> se(mean.size(), 0.0);
  if (oracle.mc_samples > 1) {
    for (std::size_t k = 0; k < mean.size(); ++k) {
      const double second = sum_sq[k].value() / count;
      const double var = std::max(0.0, second - mean[k] * mean[k]) * count / (count - 1.0);
      se[k] = std::sqrt(var / count);
    }
  }
  return {ConditionalDistribution(std::move(mean)), std::move(se)};
}

}  // namespace rnm

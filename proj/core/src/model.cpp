#include "rnm/model.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fmt/format.h>
#include <numeric>

namespace rnm {

StateInterval state_interval(int k, int m) {
  if (m < 2) throw ArgumentError(fmt::format("state count must be >= 2, got {}", m));
  if (k < 1 || k > m)
    throw ArgumentError(fmt::format("state index {} outside 1..{}", k, m));
  return {static_cast<double>(k - 1) / m, static_cast<double>(k) / m};
}

RankedFragment::RankedFragment(std::vector<int> parent_state_counts, int child_state_count)
    : parent_state_counts_(std::move(parent_state_counts)),
      child_state_count_(child_state_count) {
  if (parent_state_counts_.empty()) throw ArgumentError("fragment needs at least one parent");
  for (std::size_t i = 0; i < parent_state_counts_.size(); ++i) {
    if (parent_state_counts_[i] < 2)
      throw ArgumentError(fmt::format("parent {} has {} states, need >= 2", i + 1,
                                      parent_state_counts_[i]));
  }
  if (child_state_count_ < 2)
    throw ArgumentError(fmt::format("child has {} states, need >= 2", child_state_count_));
}

RankedFragment RankedFragment::equal_m(int parent_count, int state_count) {
  if (parent_count < 1) throw ArgumentError("fragment needs at least one parent");
  return RankedFragment(std::vector<int>(static_cast<std::size_t>(parent_count), state_count),
                        state_count);
}

int RankedFragment::parent_state_count(int i) const {
  if (i < 1 || i > parent_count())
    throw ArgumentError(fmt::format("parent index {} outside 1..{}", i, parent_count()));
  return parent_state_counts_[static_cast<std::size_t>(i - 1)];
}

bool RankedFragment::is_equal_m() const noexcept {
  return std::all_of(parent_state_counts_.begin(), parent_state_counts_.end(),
                     [&](int m) { return m == child_state_count_; });
}

int RankedFragment::common_state_count() const {
  if (!is_equal_m())
    throw UnsupportedConfiguration("operation requires all nodes to have the same state count");
  return child_state_count_;
}

std::size_t RankedFragment::configuration_count() const noexcept {
  return std::accumulate(parent_state_counts_.begin(), parent_state_counts_.end(),
                         std::size_t{1},
                         [](std::size_t acc, int m) { return acc * static_cast<std::size_t>(m); });
}

void check_configuration(const ParentConfiguration& config, const RankedFragment& fragment) {
  if (config.size() != fragment.parent_count())
    throw ArgumentError(fmt::format("configuration has {} entries, fragment has {} parents",
                                    config.size(), fragment.parent_count()));
  for (int i = 1; i <= config.size(); ++i) {
    const int k = config.state_indices[static_cast<std::size_t>(i - 1)];
    const int m = fragment.parent_state_count(i);
    if (k < 1 || k > m)
      throw ArgumentError(fmt::format("parent {} state {} outside 1..{}", i, k, m));
  }
}

std::vector<ParentConfiguration> all_configurations(const RankedFragment& fragment) {
  const auto counts = fragment.parent_state_counts();
  std::vector<ParentConfiguration> out;
  out.reserve(fragment.configuration_count());
  std::vector<int> current(counts.size(), 1);
  while (true) {
    out.push_back({current});
    // Odometer increment, last parent fastest.
    std::size_t pos = counts.size();
    while (pos > 0) {
      --pos;
      if (current[pos] < counts[pos]) {
        ++current[pos];
        break;
      }
      current[pos] = 1;
      if (pos == 0) return out;
    }
  }
}

ParentConfiguration scenario_d(int i, const RankedFragment& fragment) {
  const int m = fragment.common_state_count();
  const int n = fragment.parent_count();
  if (i < 1 || i > n) throw ArgumentError(fmt::format("parent index {} outside 1..{}", i, n));
  ParentConfiguration config{std::vector<int>(static_cast<std::size_t>(n), m)};
  config.state_indices[static_cast<std::size_t>(i - 1)] = 1;
  return config;
}

std::string_view to_string(Expression expression) noexcept {
  switch (expression) {
    case Expression::wmean: return "WMEAN";
    case Expression::wmin: return "WMIN";
    case Expression::wmax: return "WMAX";
    case Expression::mixminmax: return "MIXMINMAX";
  }
  return "?";
}

std::optional<Expression> parse_expression(std::string_view text) noexcept {
  std::string upper(text);
  std::transform(upper.begin(), upper.end(), upper.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  for (auto e : {Expression::wmean, Expression::wmin, Expression::wmax, Expression::mixminmax}) {
    if (upper == to_string(e)) return e;
  }
  return std::nullopt;
}

namespace {

SpecViolation violation(SpecViolation::Constraint c, int index, std::string message) {
  return {c, index, std::move(message)};
}

}  // namespace

std::optional<SpecViolation> validate_spec(const WeightExpressionSpec& spec,
                                           const RankedFragment& fragment) {
  using C = SpecViolation::Constraint;
  const auto w = spec.weights();
  const auto name = to_string(spec.expression());

  const std::size_t expected = spec.expression() == Expression::mixminmax
                                   ? 2
                                   : static_cast<std::size_t>(fragment.parent_count());
  if (w.size() != expected)
    return violation(C::weight_count, 0,
                     fmt::format("{} needs {} weights, got {}", name, expected, w.size()));

  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!std::isfinite(w[i]))
      return violation(C::weight_finite, static_cast<int>(i + 1),
                       fmt::format("{} weight {} is not finite", name, i + 1));
  }

  switch (spec.expression()) {
    case Expression::wmean: {
      for (std::size_t i = 0; i < w.size(); ++i) {
        if (w[i] < 0.0 || w[i] > 1.0)
          return violation(C::unit_range, static_cast<int>(i + 1),
                           fmt::format("WMEAN weight w_{} = {} outside [0, 1]", i + 1, w[i]));
      }
      const double sum = std::accumulate(w.begin(), w.end(), 0.0);
      if (std::abs(sum - 1.0) > kWeightSumTolerance)
        return violation(C::weight_sum, 0,
                         fmt::format("WMEAN weights must sum to 1, sum is {:.12g}", sum));
      break;
    }
    case Expression::wmin:
    case Expression::wmax:
      for (std::size_t i = 0; i < w.size(); ++i) {
        if (w[i] < 1.0)
          return violation(C::at_least_one, static_cast<int>(i + 1),
                           fmt::format("{} weight w_{} = {} is below 1", name, i + 1, w[i]));
      }
      break;
    case Expression::mixminmax:
      for (std::size_t i = 0; i < 2; ++i) {
        if (w[i] < 0.0 || w[i] > 1.0)
          return violation(C::unit_range, static_cast<int>(i + 1),
                           fmt::format("MIXMINMAX weight {} = {} outside [0, 1]",
                                       i == 0 ? "w_min" : "w_max", w[i]));
      }
      if (std::abs(w[1] - (1.0 - w[0])) > kWeightSumTolerance)
        return violation(C::mix_complement, 2,
                         fmt::format("MIXMINMAX requires w_max = 1 - w_min, got w_min = {}, "
                                     "w_max = {}",
                                     w[0], w[1]));
      break;
  }
  return std::nullopt;
}

void require_valid(const WeightExpressionSpec& spec, const RankedFragment& fragment) {
  if (auto v = validate_spec(spec, fragment)) throw ValidationError(std::move(*v));
}

GenerationParams::GenerationParams(double variance, int sample_size)
    : variance_(variance), sample_size_(sample_size) {
  if (!(variance > 0.0) || !std::isfinite(variance))
    throw ArgumentError(fmt::format("variance must be positive and finite, got {}", variance));
  if (sample_size < 2)
    throw ArgumentError(fmt::format("sample size must be >= 2, got {}", sample_size));
}

ConditionalDistribution::ConditionalDistribution(std::vector<double> probabilities)
    : probabilities_(std::move(probabilities)) {
  if (probabilities_.size() < 2) throw ArgumentError("distribution needs at least two states");
  double sum = 0.0;
  for (std::size_t k = 0; k < probabilities_.size(); ++k) {
    const double p = probabilities_[k];
    if (!(p >= 0.0 && p <= 1.0 + kNormalizationTolerance))
      throw ArgumentError(fmt::format("probability of state {} is {}", k + 1, p));
    sum += p;
  }
  if (std::abs(sum - 1.0) > kNormalizationTolerance)
    throw ArgumentError(fmt::format("probabilities sum to {:.15g}", sum));
}

Cpt::Cpt(RankedFragment fragment, std::vector<ConditionalDistribution> columns)
    : fragment_(std::move(fragment)),
      configurations_(all_configurations(fragment_)),
      columns_(std::move(columns)) {
  if (columns_.size() != configurations_.size())
    throw ArgumentError(fmt::format("CPT needs {} columns, got {}", configurations_.size(),
                                    columns_.size()));
  for (const auto& col : columns_) {
    if (col.state_count() != fragment_.child_state_count())
      throw ArgumentError("CPT column length does not match the child state count");
  }
}

const ConditionalDistribution& Cpt::at(const ParentConfiguration& config) const {
  auto it = std::lower_bound(configurations_.begin(), configurations_.end(), config);
  if (it == configurations_.end() || *it != config)
    throw ArgumentError("configuration not in CPT");
  return columns_[static_cast<std::size_t>(it - configurations_.begin())];
}

}  // namespace rnm

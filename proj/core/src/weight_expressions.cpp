#include "rnm/weight_expressions.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fmt/format.h>
#include <string_view>

#include "rnm/detail/fixed_sum.hpp"

namespace rnm {

std::uint64_t combination_cap() {
  const char* env = std::getenv("RNM_MAX_COMBINATIONS");
  if (env == nullptr) return kDefaultCombinationCap;
  const std::string_view text(env);
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || value == 0)
    return kDefaultCombinationCap;
  return value;
}

std::uint64_t combination_count(int sample_size, int parent_count) noexcept {
  std::uint64_t total = 1;
  const auto s = static_cast<std::uint64_t>(sample_size);
  for (int i = 0; i < parent_count; ++i) {
    if (total > UINT64_MAX / s) return UINT64_MAX;
    total *= s;
  }
  return total;
}

std::vector<double> sample_points(StateInterval interval, int sample_size) {
  if (sample_size < 2)
    throw ArgumentError(fmt::format("sample size must be >= 2, got {}", sample_size));
  std::vector<double> points(static_cast<std::size_t>(sample_size));
  const double step = interval.width() / (sample_size - 1);
  for (int j = 0; j < sample_size; ++j) points[static_cast<std::size_t>(j)] = interval.lower + j * step;
  points.back() = interval.upper;
  return points;
}

namespace {

double exact_sum(std::span<const double> values) noexcept {
  detail::FixedSum sum;
  for (double v : values) sum.add(v);
  return sum.value();
}

// Soft min/max term of WMIN/WMAX for parent i: (w_i z_i + sum_{j != i} z_j) / (w_i + n - 1),
// written as ((w_i - 1) z_i + S) / (w_i + n - 1) with S the order-free total.
double soft_term(double weight, double zi, double total, std::size_t n) noexcept {
  return std::fma(weight - 1.0, zi, total) / (weight + static_cast<double>(n) - 1.0);
}

}  // namespace

double evaluate_mu(const WeightExpressionSpec& spec, std::span<const double> z) {
  const auto w = spec.weights();
  switch (spec.expression()) {
    case Expression::wmean: {
      detail::FixedSum sum;
      for (std::size_t i = 0; i < z.size(); ++i) sum.add(w[i] * z[i]);
      return sum.value();
    }
    case Expression::wmin:
    case Expression::wmax: {
      const double total = exact_sum(z);
      const bool take_min = spec.expression() == Expression::wmin;
      double best = soft_term(w[0], z[0], total, z.size());
      for (std::size_t i = 1; i < z.size(); ++i) {
        const double term = soft_term(w[i], z[i], total, z.size());
        best = take_min ? std::min(best, term) : std::max(best, term);
      }
      return best;
    }
    case Expression::mixminmax: {
      const auto [lo, hi] = std::minmax_element(z.begin(), z.end());
      return w[0] * *lo + w[1] * *hi;
    }
  }
  return 0.0;
}

double wmin_term(std::span<const double> weights, std::span<const double> z, int i) {
  if (weights.size() != z.size() || i < 1 || static_cast<std::size_t>(i) > z.size())
    throw ArgumentError("wmin_term needs one weight per sample point and 1 <= i <= n");
  const auto idx = static_cast<std::size_t>(i - 1);
  return soft_term(weights[idx], z[idx], exact_sum(z), z.size());
}

int wmin_argmin(std::span<const double> weights, std::span<const double> z) {
  if (weights.size() != z.size() || z.empty())
    throw ArgumentError("wmin_argmin needs one weight per sample point");
  const double total = exact_sum(z);
  std::size_t best_index = 0;
  double best = soft_term(weights[0], z[0], total, z.size());
  for (std::size_t i = 1; i < z.size(); ++i) {
    const double term = soft_term(weights[i], z[i], total, z.size());
    if (term < best) {
      best = term;
      best_index = i;
    }
  }
  return static_cast<int>(best_index + 1);
}

double MuSet::min() const {
  if (values.empty()) throw ArgumentError("empty MuSet");
  return *std::min_element(values.begin(), values.end());
}

double MuSet::max() const {
  if (values.empty()) throw ArgumentError("empty MuSet");
  return *std::max_element(values.begin(), values.end());
}

MuSet enumerate_mu(const WeightExpressionSpec& spec, const RankedFragment& fragment,
                   const ParentConfiguration& config, int sample_size, std::uint64_t cap) {
  require_valid(spec, fragment);
  check_configuration(config, fragment);
  if (sample_size < 2)
    throw ArgumentError(fmt::format("sample size must be >= 2, got {}", sample_size));

  const int n = fragment.parent_count();
  const std::uint64_t count = combination_count(sample_size, n);
  if (count > cap) throw ResourceError(count, cap);

  std::vector<std::vector<double>> grids;
  grids.reserve(static_cast<std::size_t>(n));
  for (int i = 1; i <= n; ++i) {
    const auto interval = state_interval(config.state_indices[static_cast<std::size_t>(i - 1)],
                                         fragment.parent_state_count(i));
    grids.push_back(sample_points(interval, sample_size));
  }

  MuSet set;
  set.values.reserve(static_cast<std::size_t>(count));
  std::vector<int> digits(static_cast<std::size_t>(n), 0);
  std::vector<double> z(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < z.size(); ++i) z[i] = grids[i][0];

  for (std::uint64_t r = 0; r < count; ++r) {
    set.values.push_back(evaluate_mu(spec, z));
    // Advance the odometer, last parent fastest.
    for (std::size_t pos = z.size(); pos-- > 0;) {
      if (++digits[pos] < sample_size) {
        z[pos] = grids[pos][static_cast<std::size_t>(digits[pos])];
        break;
      }
      digits[pos] = 0;
      z[pos] = grids[pos][0];
    }
  }
  return set;
}

MuBounds mu_bounds(const WeightExpressionSpec& spec, const RankedFragment& fragment,
                   const ParentConfiguration& config) {
  require_valid(spec, fragment);
  check_configuration(config, fragment);
  const int n = fragment.parent_count();
  std::vector<double> lower(static_cast<std::size_t>(n));
  std::vector<double> upper(static_cast<std::size_t>(n));
  for (int i = 1; i <= n; ++i) {
    const auto interval = state_interval(config.state_indices[static_cast<std::size_t>(i - 1)],
                                         fragment.parent_state_count(i));
    lower[static_cast<std::size_t>(i - 1)] = interval.lower;
    upper[static_cast<std::size_t>(i - 1)] = interval.upper;
  }
  return {evaluate_mu(spec, lower), evaluate_mu(spec, upper)};
}

}  // namespace rnm

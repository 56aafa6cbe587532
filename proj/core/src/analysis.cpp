#include "rnm/analysis.hpp"

#include <algorithm>
#include <array>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <fmt/format.h>
#include <numeric>

#include "rnm/cpt_generator.hpp"
#include "rnm/truncnorm.hpp"
#include "rnm/weight_expressions.hpp"

namespace rnm {

namespace {

// Depth and relative tolerance for the D_ub quadrature. The integrand is
// smooth on a short interval, so a few levels reach 1e-10 absolute; the
// depth cap keeps cases where the integral vanishes from chasing rounding.
constexpr unsigned kQuadratureDepth = 8;
constexpr double kQuadratureTolerance = 1e-10;

void require_state_count(int m) {
  if (m < 2) throw ArgumentError(fmt::format("state count must be >= 2, got {}", m));
}

ConditionalDistribution scenario_distribution(const WeightExpressionSpec& spec, int n, int m,
                                              int i, double variance, int sample_size) {
  const auto fragment = RankedFragment::equal_m(n, m);
  return generate_distribution(spec, fragment, scenario_d(i, fragment),
                               GenerationParams(variance, sample_size));
}

ConditionalDistribution mix_distribution(int n, int m, double w_max, double variance,
                                         int sample_size) {
  return scenario_distribution(WeightExpressionSpec::mixminmax(1.0 - w_max, w_max), n, m, 1,
                               variance, sample_size);
}

// States compared by D_j: (first, second) with difference P(first) - P(second).
std::pair<int, int> mix_states(int j, int m, int k) {
  if (j == 1) {
    if (k < 1 || k > m - 1) throw ArgumentError(fmt::format("D_1 needs 1 <= k <= {}, got {}", m - 1, k));
    return {k, k + 1};
  }
  if (j == 2) {
    if (k < 2 || k > m - 1) throw ArgumentError(fmt::format("D_2 needs 2 <= k <= {}, got {}", m - 1, k));
    return {k - 1, k + 1};
  }
  throw ArgumentError(fmt::format("D_j is defined for j = 1 or 2, got {}", j));
}

std::vector<double> scan_grid() {
  const int steps = static_cast<int>(std::lround(1.0 / kScanStep));
  std::vector<double> grid(static_cast<std::size_t>(steps + 1));
  for (int g = 0; g <= steps; ++g) grid[static_cast<std::size_t>(g)] = g * kScanStep;
  grid.back() = 1.0;
  return grid;
}

}  // namespace

ModePair mode_pair(const ConditionalDistribution& dist) {
  const auto p = dist.probabilities();
  if (p.size() < 2) throw ArgumentError("a mode pair needs at least two states");
  std::vector<int> order(p.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return p[static_cast<std::size_t>(a)] > p[static_cast<std::size_t>(b)]; });
  return {order[0] + 1, order[1] + 1};
}

bool check_consecutive_top2(const ConditionalDistribution& dist, double tolerance) {
  const auto p = dist.probabilities();
  if (p.size() < 2) return false;
  const ModePair pair = mode_pair(dist);
  const double runner = dist.probability(pair.runner_up);
  for (int k = 1; k <= dist.state_count(); ++k) {
    if (k == pair.mode) continue;
    if (std::abs(dist.probability(k) - runner) <= tolerance && std::abs(k - pair.mode) == 1)
      return true;
  }
  return false;
}

double wmean_equal_pair_weight(int m, int k) {
  require_state_count(m);
  if (k < 2 || k > m)
    throw DomainError(fmt::format("equal-pair weight needs 2 <= k <= m = {}, got k = {}", m, k));
  return (m - k + 0.5) / (m - 1);
}

double wmean_flank_pair_weight(int m, int k) {
  require_state_count(m);
  if (k < 2 || k > m - 1)
    throw DomainError(fmt::format("flank weight needs 2 <= k <= m - 1 = {}, got k = {}", m - 1, k));
  return static_cast<double>(m - k) / (m - 1);
}

WeightInterval wmean_weight_interval(int m, ModePair target) {
  require_state_count(m);
  const int k = target.mode;
  const int r = target.runner_up;
  if (k < 1 || k > m || r < 1 || r > m || !target.adjacent())
    throw DomainError(fmt::format("mode pair ({}, {}) is not an adjacent pair of {} states", k, r, m));
  const double mid = static_cast<double>(m - k) / (m - 1);
  const double half_step = 0.5 / (m - 1);
  double lower = r == k - 1 ? mid : mid - half_step;
  double upper = r == k - 1 ? mid + half_step : mid;
  return {std::clamp(lower, 0.0, 1.0), std::clamp(upper, 0.0, 1.0), target};
}

std::vector<double> wmean_weights_with(int n, int i, double w_i) {
  if (n < 1 || i < 1 || i > n) throw ArgumentError(fmt::format("parent {} out of range 1..{}", i, n));
  if (n == 1) return {w_i};
  std::vector<double> w(static_cast<std::size_t>(n), (1.0 - w_i) / (n - 1));
  w[static_cast<std::size_t>(i - 1)] = w_i;
  return w;
}

double h_function(double y, int m, int k, double variance) {
  require_state_count(m);
  if (k < 2 || k > m) throw ArgumentError(fmt::format("h needs 2 <= k <= m = {}, got {}", m, k));
  if (!(y >= 0.0 && y <= 0.5 / m))
    throw ArgumentError(fmt::format("h is defined on [0, 1/(2m)], got y = {}", y));
  const double c = static_cast<double>(k - 1) / m;
  const auto upper = state_interval(k, m);
  const auto lower = state_interval(k - 1, m);
  const double diff = normal_mass(upper.lower, upper.upper, c + y, variance) -
                      normal_mass(lower.lower, lower.upper, c + y, variance);
  const double inv = 1.0 / normal_mass(0.0, 1.0, c - y, variance) -
                     1.0 / normal_mass(0.0, 1.0, c + y, variance);
  return diff * inv;
}

double d_ub(int m, int k, double variance) {
  require_state_count(m);
  if (k < 2 || k > m) throw ArgumentError(fmt::format("D_ub needs 2 <= k <= m = {}, got {}", m, k));
  auto h = [&](double y) { return h_function(y, m, k, variance); };
  const double integral = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      h, 0.0, 0.5 / m, kQuadratureDepth, kQuadratureTolerance);
  return std::abs(m * integral);
}

double d_rnm(int m, int k, std::span<const double> weights, int i, double variance,
             int sample_size) {
  const int n = static_cast<int>(weights.size());
  if (i < 1 || i > n) throw ArgumentError(fmt::format("parent {} out of range 1..{}", i, n));
  const double target = wmean_equal_pair_weight(m, k);
  if (std::abs(weights[static_cast<std::size_t>(i - 1)] - target) > 1e-12)
    throw ArgumentError(fmt::format("w_{} = {} is not the equal-pair weight {}", i,
                                    weights[static_cast<std::size_t>(i - 1)], target));
  const auto spec = WeightExpressionSpec::wmean({weights.begin(), weights.end()});
  if (auto violation = validate_spec(spec, RankedFragment::equal_m(n, m)))
    throw ArgumentError(violation->message);
  const auto dist = scenario_distribution(spec, n, m, i, variance, sample_size);
  return std::abs(dist.probability(k - 1) - dist.probability(k));
}

double wmin_reduction_threshold(int n, int m) {
  if (m < 3) throw DomainError(fmt::format("no reduction threshold for m = {}", m));
  return static_cast<double>(n - 2) / (m - 2);
}

bool wmin_reduces(int n, int m, double w_i) {
  if (n < 2 || m < 2) throw ArgumentError(fmt::format("need n, m >= 2, got n = {}, m = {}", n, m));
  if (!(w_i >= 1.0)) throw ArgumentError(fmt::format("WMIN weight must be >= 1, got {}", w_i));
  if (n <= m) return true;
  if (m == 2)
    throw DomainError(fmt::format("n = {} > m = 2: the reduction threshold is undefined", n));
  return w_i >= wmin_reduction_threshold(n, m);
}

std::vector<double> beta_weights(std::span<const double> wmin_weights, int i, int m) {
  const int n = static_cast<int>(wmin_weights.size());
  if (i < 1 || i > n) throw ArgumentError(fmt::format("parent {} out of range 1..{}", i, n));
  const double w_i = wmin_weights[static_cast<std::size_t>(i - 1)];
  if (!wmin_reduces(n, m, w_i))
    throw DomainError(fmt::format("WMIN does not reduce for n = {}, m = {}, w_i = {}", n, m, w_i));
  const double denom = w_i + n - 1;
  std::vector<double> beta(static_cast<std::size_t>(n), 1.0 / denom);
  beta[static_cast<std::size_t>(i - 1)] = w_i / denom;
  return beta;
}

std::optional<std::vector<double>> wmin_reduction_witness(int n, int m, int i, double w_i,
                                                          int sample_size) {
  const auto fragment = RankedFragment::equal_m(n, m);
  const auto config = scenario_d(i, fragment);
  std::vector<std::vector<double>> grids;
  for (int p = 1; p <= n; ++p)
    grids.push_back(sample_points(state_interval(config.state_indices[static_cast<std::size_t>(p - 1)], m),
                                  sample_size));

  // Does some sample combination make the minimum differ from term i?
  auto has_witness = [&](const std::vector<double>& w) {
    const auto spec = WeightExpressionSpec::wmin(w);
    std::vector<int> digits(static_cast<std::size_t>(n), 0);
    std::vector<double> z(static_cast<std::size_t>(n));
    const std::uint64_t count = combination_count(sample_size, n);
    for (std::uint64_t r = 0; r < count; ++r) {
      for (std::size_t p = 0; p < z.size(); ++p) z[p] = grids[p][static_cast<std::size_t>(digits[p])];
      if (evaluate_mu(spec, z) != wmin_term(w, z, i)) return true;
      for (std::size_t pos = z.size(); pos-- > 0;) {
        if (++digits[pos] < sample_size) break;
        digits[pos] = 0;
      }
    }
    return false;
  };

  // One distinguished parent t with its own level, the rest sharing a level.
  // Large levels matter: just below the threshold only a dominant other
  // weight breaks the reduction.
  constexpr std::array<double, 5> levels = {1.0, 10.0, 100.0, 1e4, 1e6};
  for (int t = 1; t <= n; ++t) {
    if (t == i) continue;
    for (double lt : levels) {
      for (double rest : levels) {
        std::vector<double> w(static_cast<std::size_t>(n), rest);
        w[static_cast<std::size_t>(t - 1)] = lt;
        w[static_cast<std::size_t>(i - 1)] = w_i;
        if (has_witness(w)) return w;
      }
    }
  }
  return std::nullopt;
}

double d_mix_signed(int j, int n, int m, double w_max, double variance, int sample_size, int k) {
  const auto [a, b] = mix_states(j, m, k);
  const auto dist = mix_distribution(n, m, w_max, variance, sample_size);
  return dist.probability(a) - dist.probability(b);
}

double d_mix(int j, int n, int m, double w_max, double variance, int sample_size, int k) {
  return std::abs(d_mix_signed(j, n, m, w_max, variance, sample_size, k));
}

BisectionResult bisect_wmax(int j, int n, int m, int k, double variance, int sample_size) {
  const auto [a, b] = mix_states(j, m, k);
  struct Point {
    double w;
    double diff;
    double mass;
  };
  auto evaluate = [&](double w) {
    const auto dist = mix_distribution(n, m, w, variance, sample_size);
    return Point{w, dist.probability(a) - dist.probability(b), dist.probability(a) + dist.probability(b)};
  };

  std::vector<Point> scan;
  BisectionResult result;
  for (double w : scan_grid()) {
    scan.push_back(evaluate(w));
    result.profile.emplace_back(w, scan.back().diff);
  }

  std::optional<std::size_t> best;
  double best_mass = -1.0;
  for (std::size_t g = 0; g + 1 < scan.size(); ++g) {
    const bool crosses = (scan[g].diff <= 0.0 && scan[g + 1].diff >= 0.0) ||
                         (scan[g].diff >= 0.0 && scan[g + 1].diff <= 0.0);
    if (!crosses) continue;
    const double mass = scan[g].mass + scan[g + 1].mass;
    if (mass > best_mass) {
      best_mass = mass;
      best = g;
    }
  }
  if (!best)
    throw RootNotFound(fmt::format("D_{} has no sign change on [0, 1] (n = {}, m = {}, k = {}, "
                                   "variance = {}, s = {})",
                                   j, n, m, k, variance, sample_size),
                       std::move(result.profile));

  Point lo = scan[*best];
  Point hi = scan[*best + 1];
  if (lo.diff == 0.0) hi = lo;
  else if (hi.diff == 0.0) lo = hi;
  while (hi.w - lo.w > kRootTolerance) {
    const Point mid = evaluate(0.5 * (lo.w + hi.w));
    if (mid.diff == 0.0) {
      lo = hi = mid;
      break;
    }
    if ((mid.diff > 0.0) == (lo.diff > 0.0)) lo = mid;
    else hi = mid;
  }
  result.w_max = 0.5 * (lo.w + hi.w);
  result.bracket_lower = scan[*best].w;
  result.bracket_upper = scan[*best + 1].w;
  return result;
}

WeightInterval mixminmax_weight_interval(int n, int m, ModePair target, double variance,
                                         int sample_size) {
  if (!target.adjacent())
    throw DomainError(fmt::format("mode pair ({}, {}) is not adjacent", target.mode, target.runner_up));
  auto matches = [&](double w) {
    return mode_pair(mix_distribution(n, m, w, variance, sample_size)) == target;
  };

  const auto grid = scan_grid();
  ScanProfile profile;
  std::vector<bool> hit;
  for (double w : grid) {
    hit.push_back(matches(w));
    profile.emplace_back(w, hit.back() ? 1.0 : 0.0);
  }

  std::size_t best_begin = 0;
  std::size_t best_length = 0;
  for (std::size_t g = 0; g < hit.size();) {
    if (!hit[g]) {
      ++g;
      continue;
    }
    std::size_t end = g;
    while (end < hit.size() && hit[end]) ++end;
    if (end - g > best_length) {
      best_begin = g;
      best_length = end - g;
    }
    g = end;
  }
  if (best_length == 0)
    throw PairNotAttained(fmt::format("mode pair ({}, {}) never occurs for n = {}, m = {}",
                                      target.mode, target.runner_up, n, m),
                          std::move(profile));

  // Bisection on the transition between a non-matching and a matching point.
  auto refine = [&](double outside, double inside) {
    while (std::abs(inside - outside) > kRootTolerance) {
      const double mid = 0.5 * (outside + inside);
      (matches(mid) ? inside : outside) = mid;
    }
    return inside;
  };
  const std::size_t last = best_begin + best_length - 1;
  const double lower = best_begin == 0 ? 0.0 : refine(grid[best_begin - 1], grid[best_begin]);
  const double upper = last + 1 == grid.size() ? 1.0 : refine(grid[last + 1], grid[last]);
  return {lower, upper, target};
}

}  // namespace rnm

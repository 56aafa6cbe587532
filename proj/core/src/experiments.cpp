#include "rnm/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fmt/format.h>
#include <numeric>
#include <optional>

#include "rnm/cpt_generator.hpp"
#include "rnm/parallel.hpp"
#include "rnm/weight_expressions.hpp"

namespace rnm {

namespace {

// Runs item(i) for i in [0, count) and keeps the completed prefix. Once the
// stop predicate fires, items not yet started are skipped.
template <class T, class Item>
std::vector<T> run_items(std::size_t count, int threads, const StopPredicate& stop,
                         bool& complete, Item&& item) {
  std::vector<std::optional<T>> slots(count);
  std::atomic<bool> stopped{false};
  parallel_for(count, threads, [&](std::size_t i) {
    if (stopped.load() || (stop && stop())) {
      stopped = true;
      return;
    }
    slots[i] = item(i);
  });
  std::vector<T> out;
  out.reserve(count);
  for (auto& slot : slots) {
    if (!slot) break;
    out.push_back(std::move(*slot));
  }
  complete = out.size() == count;
  return out;
}

double sum(std::span<const double> values) {
  return std::accumulate(values.begin(), values.end(), 0.0);
}

}  // namespace

std::vector<double> log_grid(double floor, double ceiling, int count) {
  if (!(floor > 0.0 && ceiling > floor) || count < 1)
    throw ArgumentError(fmt::format("bad log grid ({}, {}] with {} points", floor, ceiling, count));
  std::vector<double> grid(static_cast<std::size_t>(count));
  const double ratio = std::log(ceiling / floor);
  for (int g = 1; g <= count; ++g)
    grid[static_cast<std::size_t>(g - 1)] = floor * std::exp(ratio * g / count);
  grid.back() = ceiling;
  return grid;
}

std::vector<double> VarianceGrid::for_m(int m) const {
  const auto it = ceiling_by_m.find(m);
  return log_grid(floor, it == ceiling_by_m.end() ? ceiling : it->second, points);
}

Fig2Report run_fig2(const Fig2Config& config, const StopPredicate& stop) {
  struct Task {
    int m;
    double variance;
  };
  std::vector<Task> tasks;
  for (int m : config.m_values) {
    if (m < 3) throw ArgumentError(fmt::format("curves need m >= 3, got {}", m));
    for (double v : config.grid.for_m(m)) tasks.push_back({m, v});
  }
  Fig2Report report;
  report.rows = run_items<Fig2Row>(tasks.size(), config.threads, stop, report.complete,
                                   [&](std::size_t t) {
    const auto [m, variance] = tasks[t];
    const double w1 = wmean_equal_pair_weight(m, 2);
    const std::vector<double> w = {w1, 1.0 - w1};
    return Fig2Row{m, variance, d_ub(m, 2, variance), d_rnm(m, 2, w, 1, variance, 5),
                   d_rnm(m, 2, w, 1, variance, 10)};
  });
  return report;
}

WalkResult weight_walk(std::vector<double> w, std::span<const WeightInterval> intervals,
                       Rng& rng) {
  const std::size_t n = w.size();
  if (intervals.size() != n) throw ArgumentError("one weight interval per parent required");
  WalkResult result;
  result.after_step.resize(n);
  for (std::size_t i = n; i-- > 1;) {
    const double u = rng.uniform();
    const double y = rng.uniform();
    double room_up = 0.0;    // sum_{j<i} (upper_j - w_j)
    double room_down = 0.0;  // sum_{j<i} (w_j - lower_j)
    for (std::size_t j = 0; j < i; ++j) {
      room_up += intervals[j].upper - w[j];
      room_down += w[j] - intervals[j].lower;
    }
    const double delta = u < 0.5 ? std::max(-y * room_up, intervals[i].lower - w[i])
                                 : std::min(y * room_down, intervals[i].upper - w[i]);
    w[i] += delta;
    if (delta != 0.0) {
      const double room = delta < 0.0 ? room_up : room_down;
      if (!(room > 0.0)) {
        result.degenerate = true;
        return result;
      }
      for (std::size_t j = 0; j < i; ++j) {
        const double slack = delta < 0.0 ? intervals[j].upper - w[j] : w[j] - intervals[j].lower;
        w[j] -= delta / room * slack;
      }
    }
    result.after_step[i] = w;
  }
  result.final_weights = std::move(w);
  return result;
}

ReplicationRecord run_replication(const WeightUpdateConfig& config, int replication) {
  Rng rng(config.seed, static_cast<std::uint64_t>(replication));
  ReplicationRecord record;
  record.replication = replication;

  for (int attempt = 0; attempt < config.max_attempts; ++attempt) {
    const int m = rng.uniform_int(3, 7);
    const int n = rng.uniform_int(3, 8);
    std::vector<double> w(static_cast<std::size_t>(n));
    for (double& x : w) x = rng.uniform();
    const double ceiling = config.ceiling == VarianceCeiling::quarter ? 1.0 / (4.0 * m * m)
                                                                       : 1.0 / (1.0 * m * m);
    const double variance = rng.uniform(config.variance_floor, ceiling);
    const double total = sum(w);
    for (double& x : w) x /= total;
    std::sort(w.begin(), w.end());

    const auto fragment = RankedFragment::equal_m(n, m);
    const GenerationParams params(variance, config.sample_size);
    auto scenario = [&](const std::vector<double>& weights, int i) {
      return generate_distribution(WeightExpressionSpec::wmean(weights), fragment,
                                   scenario_d(i, fragment), params);
    };

    std::vector<WeightInterval> intervals;
    bool consistent = true;
    for (int i = 1; i <= n && consistent; ++i) {
      intervals.push_back(wmean_weight_interval(m, mode_pair(scenario(w, i))));
      consistent = intervals.back().contains(w[static_cast<std::size_t>(i - 1)]);
    }
    if (!consistent) {
      ++record.interval_mismatches;
      continue;
    }

    const WalkResult walk = weight_walk(w, intervals, rng);
    if (walk.degenerate) {
      ++record.degenerate_walks;
      continue;
    }

    record.m = m;
    record.n = n;
    record.variance = variance;
    for (int i = 3; i <= n; ++i) {
      const auto before = scenario(walk.after_step[static_cast<std::size_t>(i - 1)], i);
      const auto after = scenario(walk.final_weights, i);
      double mean_diff = 0.0;
      double max_diff = 0.0;
      for (int k = 1; k <= m; ++k) {
        const double d = std::abs(before.probability(k) - after.probability(k));
        mean_diff += d;
        max_diff = std::max(max_diff, d);
      }
      record.e1 = std::max(record.e1, mean_diff / m);
      record.e2 = std::max(record.e2, max_diff);
    }
    return record;
  }
  throw Error(fmt::format("replication {} found no usable draw in {} attempts", replication,
                          config.max_attempts));
}

WeightUpdateReport run_weight_update(const WeightUpdateConfig& config, const StopPredicate& stop) {
  if (config.replications < 1) throw ArgumentError("replications must be >= 1");
  WeightUpdateReport report;
  report.config = config;
  report.records = run_items<ReplicationRecord>(
      static_cast<std::size_t>(config.replications), config.threads, stop, report.complete,
      [&](std::size_t r) { return run_replication(config, static_cast<int>(r)); });
  if (report.records.empty()) return report;
  double e1 = 0.0;
  double e2 = 0.0;
  for (const auto& rec : report.records) {
    e1 += rec.e1;
    e2 += rec.e2;
    report.max_e1 = std::max(report.max_e1, rec.e1);
    report.max_e2 = std::max(report.max_e2, rec.e2);
    report.interval_mismatches += rec.interval_mismatches;
    report.degenerate_walks += rec.degenerate_walks;
  }
  report.mean_e1 = e1 / static_cast<double>(report.records.size());
  report.mean_e2 = e2 / static_cast<double>(report.records.size());
  return report;
}

Fig3Report run_fig3(const Fig3Config& config, const StopPredicate& stop) {
  struct Pair {
    int m;
    int s;
  };
  std::vector<Pair> pairs;
  for (int m : config.m_values)
    for (int s : config.sample_sizes) pairs.push_back({m, s});

  Fig3Report report;
  bool roots_complete = true;
  report.roots = run_items<Fig3Root>(pairs.size(), config.threads, stop, roots_complete,
                                     [&](std::size_t p) {
    const auto [m, s] = pairs[p];
    const double variance0 = 1.0 / (4.0 * m * m);
    try {
      return Fig3Root{m, s, variance0, bisect_wmax(1, config.parent_count, m, m - 1, variance0, s).w_max};
    } catch (const RootNotFound& e) {
      throw RootNotFound(fmt::format("m = {}, s = {}: {}", m, s, e.what()), e.profile());
    }
  });

  struct Task {
    std::size_t root;
    double variance;
  };
  std::vector<Task> tasks;
  for (std::size_t r = 0; r < report.roots.size(); ++r)
    for (double v : config.grid.for_m(report.roots[r].m)) tasks.push_back({r, v});
  bool rows_complete = true;
  report.rows = run_items<Fig3Row>(tasks.size(), config.threads, stop, rows_complete,
                                   [&](std::size_t t) {
    const Fig3Root& root = report.roots[tasks[t].root];
    return Fig3Row{root.m, root.sample_size, tasks[t].variance, root.w_max0,
                   d_mix(1, config.parent_count, root.m, root.w_max0, tasks[t].variance,
                         root.sample_size, root.m - 1)};
  });
  report.complete = roots_complete && rows_complete;
  return report;
}

namespace {

struct TrialOutcome {
  std::vector<Counterexample> found;
};

Counterexample describe(const char* property, int trial, const WeightExpressionSpec& spec,
                        int m, int n, int s, double variance, ParentConfiguration config,
                        std::string detail) {
  return {property, trial, spec.expression(), m, n, s, variance,
          {spec.weights().begin(), spec.weights().end()}, std::move(config), std::move(detail)};
}

WeightExpressionSpec random_spec(Rng& rng, int n) {
  switch (rng.uniform_int(0, 3)) {
    case 0: {
      std::vector<double> w(static_cast<std::size_t>(n));
      for (double& x : w) x = rng.uniform();
      const double total = sum(w);
      if (total == 0.0) return WeightExpressionSpec::wmean(std::vector<double>(w.size(), 1.0 / n));
      for (double& x : w) x /= total;
      return WeightExpressionSpec::wmean(std::move(w));
    }
    case 1:
    case 2: {
      std::vector<double> w(static_cast<std::size_t>(n));
      for (double& x : w) x = rng.uniform(1.0, 10.0);
      return rng.uniform() < 0.5 ? WeightExpressionSpec::wmin(std::move(w))
                                 : WeightExpressionSpec::wmax(std::move(w));
    }
    default: {
      const double w_max = rng.uniform();
      return WeightExpressionSpec::mixminmax(1.0 - w_max, w_max);
    }
  }
}

void structural_trial(const PropertySuiteConfig& suite, int trial, std::vector<Counterexample>& out) {
  Rng rng(suite.seed, static_cast<std::uint64_t>(2 * trial));
  const int m = rng.uniform_int(3, 7);
  const int n = rng.uniform_int(2, 4);
  const int s = rng.uniform() < 0.5 ? 3 : 5;
  const double variance = rng.uniform(5e-4, 0.25);
  const auto spec = random_spec(rng, n);
  ParentConfiguration config;
  for (int i = 0; i < n; ++i) config.state_indices.push_back(rng.uniform_int(1, m));

  const auto fragment = RankedFragment::equal_m(n, m);
  const MuSet mu = enumerate_mu(spec, fragment, config, s);
  const double range = mu.range();
  if (std::abs(range - 1.0 / m) > 1e-12)
    out.push_back(describe("range", trial, spec, m, n, s, variance, config,
                           fmt::format("max - min of means = {:.17g}, expected 1/{}", range, m)));

  const auto dist = distribution_from_mu(mu, m, variance);
  std::vector<double> p(dist.probabilities().begin(), dist.probabilities().end());
  const double total = sum(p);
  if (std::abs(total - 1.0) > kNormalizationTolerance)
    out.push_back(describe("normalization", trial, spec, m, n, s, variance, config,
                           fmt::format("probabilities sum to {:.17g}", total)));

  if (suite.mutate) {
    const int mode = mode_pair(dist).mode;
    const int far = mode - 1 >= m - mode ? 1 : m;
    std::swap(p[static_cast<std::size_t>(mode - 1)], p[static_cast<std::size_t>(far - 1)]);
  }
  const ConditionalDistribution checked(std::move(p));
  if (!check_consecutive_top2(checked)) {
    const ModePair pair = mode_pair(checked);
    out.push_back(describe("consecutive_top2", trial, spec, m, n, s, variance, config,
                           fmt::format("mode {} runner-up {}", pair.mode, pair.runner_up)));
  }
}

// WMIN in scenario x^{D,i} where the reduction condition holds: every sample
// combination must pick the term of parent i, and the distribution must match
// WMEAN with the beta weights.
void reduction_trial(const PropertySuiteConfig& suite, int trial, std::vector<Counterexample>& out) {
  Rng rng(suite.seed, static_cast<std::uint64_t>(2 * trial + 1));
  const int m = rng.uniform_int(3, 7);
  const bool above = rng.uniform() < 0.5;
  const int n = above ? rng.uniform_int(m + 1, m + 2) : rng.uniform_int(2, std::min(m, 4));
  const int i = rng.uniform_int(1, n);
  const int s = rng.uniform() < 0.5 || n > m ? 3 : 5;
  const double variance = rng.uniform(5e-4, 0.25);
  std::vector<double> w(static_cast<std::size_t>(n));
  for (double& x : w) x = rng.uniform(1.0, 100.0);
  const double floor = n > m ? wmin_reduction_threshold(n, m) : 1.0;
  w[static_cast<std::size_t>(i - 1)] = rng.uniform(floor, floor + 5.0);

  const auto spec = WeightExpressionSpec::wmin(w);
  const auto fragment = RankedFragment::equal_m(n, m);
  const auto config = scenario_d(i, fragment);

  std::vector<std::vector<double>> grids;
  for (int p = 0; p < n; ++p)
    grids.push_back(sample_points(state_interval(config.state_indices[static_cast<std::size_t>(p)], m), s));
  std::vector<int> digits(static_cast<std::size_t>(n), 0);
  std::vector<double> z(static_cast<std::size_t>(n));
  const std::uint64_t count = combination_count(s, n);
  for (std::uint64_t r = 0; r < count; ++r) {
    for (std::size_t p = 0; p < z.size(); ++p) z[p] = grids[p][static_cast<std::size_t>(digits[p])];
    if (evaluate_mu(spec, z) != wmin_term(w, z, i)) {
      out.push_back(describe("wmin_reduction", trial, spec, m, n, s, variance, config,
                             fmt::format("combination {} does not take the term of parent {}", r, i)));
      return;
    }
    for (std::size_t pos = z.size(); pos-- > 0;) {
      if (++digits[pos] < s) break;
      digits[pos] = 0;
    }
  }

  const GenerationParams params(variance, s);
  const auto wmin_dist = generate_distribution(spec, fragment, config, params);
  const auto wmean_dist = generate_distribution(
      WeightExpressionSpec::wmean(beta_weights(w, i, m)), fragment, config, params);
  for (int k = 1; k <= m; ++k) {
    const double d = std::abs(wmin_dist.probability(k) - wmean_dist.probability(k));
    if (d > 1e-12) {
      out.push_back(describe("wmin_reduction", trial, spec, m, n, s, variance, config,
                             fmt::format("state {} differs from the beta-weighted mean by {:.3g}", k, d)));
      return;
    }
  }
}

}  // namespace

PropertySuiteReport run_property_suite(const PropertySuiteConfig& config) {
  if (config.trials < 1) throw ArgumentError("trials must be >= 1");
  bool complete = true;
  auto outcomes = run_items<TrialOutcome>(static_cast<std::size_t>(config.trials), config.threads,
                                          {}, complete, [&](std::size_t t) {
    TrialOutcome outcome;
    if (config.structural) structural_trial(config, static_cast<int>(t), outcome.found);
    if (config.reduction) reduction_trial(config, static_cast<int>(t), outcome.found);
    return outcome;
  });
  PropertySuiteReport report;
  report.trials = config.trials;
  for (auto& outcome : outcomes)
    for (auto& c : outcome.found) report.counterexamples.push_back(std::move(c));
  return report;
}

}  // namespace rnm

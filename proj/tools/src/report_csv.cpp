#include "report_csv.hpp"

#include <fmt/format.h>
#include <fmt/ranges.h>
#include <iterator>

namespace rnm::cli {

namespace {

std::string join_numbers(std::span<const double> values, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += sep;
    out += format_number(values[i]);
  }
  return out;
}

}  // namespace

std::string format_number(double value) { return fmt::format("{:.12g}", value); }

std::string cpt_csv(const Cpt& cpt) {
  const auto& fragment = cpt.fragment();
  std::string out;
  auto it = std::back_inserter(out);
  for (int i = 1; i <= fragment.parent_count(); ++i) fmt::format_to(it, "x{},", i);
  for (int k = 1; k <= fragment.child_state_count(); ++k)
    fmt::format_to(it, "p{}{}", k, k == fragment.child_state_count() ? "\n" : ",");

  const auto configs = all_configurations(fragment);
  for (std::size_t c = 0; c < configs.size(); ++c) {
    fmt::format_to(it, "{},{}\n", fmt::join(configs[c].state_indices, ","),
                   join_numbers(cpt.columns()[c].probabilities(), ","));
  }
  return out;
}

std::string counterexamples_csv(const PropertySuiteReport& report) {
  std::string out = "property,trial,expression,m,n,sample_size,variance,weights,configuration,detail\n";
  auto it = std::back_inserter(out);
  for (const auto& c : report.counterexamples) {
    fmt::format_to(it, "{},{},{},{},{},{},{},{},{},\"{}\"\n", c.property, c.trial,
                   to_string(c.expression), c.m, c.n, c.sample_size, format_number(c.variance),
                   join_numbers(c.weights, ";"), fmt::join(c.config.state_indices, ";"), c.detail);
  }
  return out;
}

std::string fig2_csv(const Fig2Report& report) {
  std::string out = "m,variance,d_ub,d_rnm5,d_rnm10\n";
  auto it = std::back_inserter(out);
  for (const auto& r : report.rows) {
    fmt::format_to(it, "{},{},{},{},{}\n", r.m, format_number(r.variance), format_number(r.d_ub),
                   format_number(r.d_rnm5), format_number(r.d_rnm10));
  }
  return out;
}

std::string table1_csv(const WeightUpdateReport& report) {
  std::string out = "kind,replication,m,n,variance,e1,e2,interval_mismatches,degenerate_walks\n";
  auto it = std::back_inserter(out);
  for (const auto& r : report.records) {
    fmt::format_to(it, "replication,{},{},{},{},{},{},{},{}\n", r.replication, r.m, r.n,
                   format_number(r.variance), format_number(r.e1), format_number(r.e2),
                   r.interval_mismatches, r.degenerate_walks);
  }
  fmt::format_to(it, "mean,,,,,{},{},{},{}\n", format_number(report.mean_e1),
                 format_number(report.mean_e2), report.interval_mismatches, report.degenerate_walks);
  fmt::format_to(it, "max,,,,,{},{},,\n", format_number(report.max_e1), format_number(report.max_e2));
  return out;
}

std::string fig3_csv(const Fig3Report& report) {
  std::string out = "m,sample_size,variance,w_max0,d1\n";
  auto it = std::back_inserter(out);
  for (const auto& r : report.rows) {
    fmt::format_to(it, "{},{},{},{},{}\n", r.m, r.sample_size, format_number(r.variance),
                   format_number(r.w_max0), format_number(r.d1));
  }
  return out;
}

std::string fig3_roots_csv(const Fig3Report& report) {
  std::string out = "m,sample_size,variance0,w_max0,w_min0\n";
  auto it = std::back_inserter(out);
  for (const auto& r : report.roots) {
    fmt::format_to(it, "{},{},{},{},{}\n", r.m, r.sample_size, format_number(r.variance0),
                   format_number(r.w_max0), format_number(1.0 - r.w_max0));
  }
  return out;
}

std::string bisection_csv(const BisectionResult& result) {
  return fmt::format("w_max,w_min,bracket_lower,bracket_upper\n{},{},{},{}\n",
                     format_number(result.w_max), format_number(result.w_min()),
                     format_number(result.bracket_lower), format_number(result.bracket_upper));
}

std::string profile_csv(const ScanProfile& profile) {
  std::string out = "w_max,signed_difference\n";
  auto it = std::back_inserter(out);
  for (const auto& [w, d] : profile) fmt::format_to(it, "{},{}\n", format_number(w), format_number(d));
  return out;
}

}  // namespace rnm::cli

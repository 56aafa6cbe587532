#pragma once

// CSV renderings of the reports. Numbers use 12 significant digits in the
// C locale; headers are stable.

#include <string>

#include "rnm/analysis.hpp"
#include "rnm/experiments.hpp"
#include "rnm/model.hpp"

namespace rnm::cli {

std::string format_number(double value);

/// x1..xn, p1..pm: one row per parent configuration.
std::string cpt_csv(const Cpt& cpt);

std::string counterexamples_csv(const PropertySuiteReport& report);

std::string fig2_csv(const Fig2Report& report);

/// Per-replication rows (kind = replication) followed by two aggregate rows:
/// kind = mean holds e1_bar / e2_bar, kind = max holds e1_hat / e2_hat.
std::string table1_csv(const WeightUpdateReport& report);

std::string fig3_csv(const Fig3Report& report);
std::string fig3_roots_csv(const Fig3Report& report);

std::string bisection_csv(const BisectionResult& result);
std::string profile_csv(const ScanProfile& profile);

}  // namespace rnm::cli

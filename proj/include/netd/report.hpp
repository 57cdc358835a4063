#pragma once

#include <optional>
#include <string>
#include <vector>

#include "netd/offline_opt.hpp"
#include "netd/simulate.hpp"

namespace netd {

// One benchmarked run: the full trace, its audit, and (optionally) the
// clairvoyant optimum with the resulting competitive ratio.
struct RunReport {
  explicit RunReport(RunTrace t) : trace(std::move(t)) {}

  RunTrace trace;
  std::vector<CheckResult> checks;
  std::optional<OfflineOptimum> opt;  // absent when skipped or the instance is too large
  std::optional<Rational> ratio;      // alg_total / opt cost, when the optimum is positive
  long long wall_ms = 0;
};

RunReport make_report(const InstanceSpec& spec, const SimConfig& config, bool compute_opt,
                      int opt_cap = kDefaultOptCap);

// Emitters are deterministic: reports are ordered by run name, rationals
// printed exactly, wall-clock timing left out unless asked for.
std::string report_to_json(const std::vector<RunReport>& reports, bool include_timing = false);
std::string report_to_csv(const std::vector<RunReport>& reports, bool include_timing = false);

// Rebuilds reports from report_to_json output so a saved report, traces and
// all, can be re-audited without re-running the engines.
std::vector<RunReport> reports_from_json(const std::string& text);

}  // namespace netd

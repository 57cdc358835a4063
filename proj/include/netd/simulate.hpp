#pragma once

#include <map>
#include <utility>
#include <string>
#include <vector>

#include "netd/deadline_engine.hpp"
#include "netd/delay_engine.hpp"
#include "netd/instance.hpp"

namespace netd {

struct SimConfig {
  OracleKind oracle = OracleKind::exact;
  E0Mode regime = E0Mode::element_threshold;
  ServeMode serve = ServeMode::all_satisfied;
};

const char* regime_name(E0Mode m);  // "classic" / "request-based"
E0Mode regime_from_name(const std::string& name);
const char* serve_name(ServeMode m);  // "all-satisfied" / "batch-only"
ServeMode serve_from_name(const std::string& name);

// Everything one simulated run did, in enough detail to re-audit it later
// without re-running the engines. Exactly one of the two record lists is
// populated, matching the spec's mode.
struct RunTrace {
  RunTrace(InstanceSpec s, SimConfig c) : spec(std::move(s)), config(c) {}

  InstanceSpec spec;
  SimConfig config;
  std::vector<DeadlineServiceRecord> deadline_services;
  std::vector<DelayServiceRecord> delay_services;
  std::vector<long long> doubling_guesses;  // request-union regime only
  std::map<int, Rational> served_at;
  std::map<int, Rational> realized_delay;  // delay mode: delay value at service
  std::map<int, Rational> final_h;         // delay mode: counter when served
  Rational transmit_total;
  Rational delay_total;
  Rational h_total;
  Rational alg_total;  // transmissions plus realized delay
  int oracle_calls = 0;
};

// Event-driven run: releases in file order, services at engine-computed
// trigger or critical times, releases first on ties, services ordered by
// (time, trigger id) in deadline mode and (time, level) in delay mode.
// Deterministic for a fixed (spec, config).
RunTrace simulate(const InstanceSpec& spec, const SimConfig& config);

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;  // empty when the check passes
};

// Structural audit of a finished run: per-service itemized budgets, pooled
// residual-delay caps at every event time and delay breakpoint, delay-cost
// domination by the counters, deadlines met, totals consistent. Pure
// function of the trace; used by tests, acceptance, and the check command.
std::vector<CheckResult> audit_trace(const RunTrace& trace);

bool all_passed(const std::vector<CheckResult>& checks);

}  // namespace netd

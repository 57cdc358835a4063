#pragma once

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "netd/deadline_engine.hpp"
#include "netd/delay_function.hpp"
#include "netd/oracle.hpp"
#include "netd/regime.hpp"

namespace netd {

struct DelayRequest {
  int id;
  RequestPayload payload;
  DelayFunction delay;
};

struct DelayServiceRecord {
  Rational time;   // trigger instant
  int critical_level = 0;
  int level = 0;   // service level, one above critical
  bool free_service = false;
  E0Mode e0_mode = E0Mode::element_threshold;

  std::vector<int> q_lambda;            // eligible ids, ascending
  std::map<int, Rational> h_before;     // investment counters at the trigger
  std::map<int, Rational> cleaning;     // residual delay paid per request
  std::map<int, Rational> h_frozen;     // counters the forwarding loop works from
  Rational tau;                         // how far ahead the service planned
  bool imperfect = false;               // the forwarding loop hit its cutoff
  int forward_iterations = 0;

  ElementSet e0{0};
  ElementSet s_elements{0};             // the kept shared solution
  ElementSet transmitted{0};
  std::optional<int> singleton;         // lowest eligible id, forced when S serves nothing
  std::optional<FLSolution> fl;         // facility runs: open sites + request id -> node
  std::map<int, Rational> investments;  // paid to requests left pending
  std::map<int, Rational> connections;  // facility runs: distance covered per connected id
  std::map<int, Rational> h_after;      // counters of eligible requests still pending

  std::vector<int> served;    // ascending ids
  std::vector<int> upgraded;  // ascending ids, raised to the service level

  Rational cleaning_cost, e0_cost, pc_part, singleton_cost, budget_cost, transmit_cost;
  Rational cleaning_limit, e0_limit, pc_limit, singleton_limit, budget_limit;
  int oracle_calls = 0;
};

// Delay-driven engine: requests accumulate delay cost instead of expiring. A
// service fires when the residual delay pooled at some level reaches that
// level's allowance; it then pre-pays future delay while probing how far a
// cheap shared solution can reach, invests the probe horizon into whatever
// stays unserved, and bumps it a level.
class DelayEngine {
 public:
  DelayEngine(ProblemInstance inst, OracleHandle oracle,
              ServeMode mode = ServeMode::all_satisfied,
              E0Mode e0_mode = E0Mode::element_threshold,
              std::optional<long long> khat = std::nullopt);

  // Returns a record only when the request is served for free on the spot.
  std::optional<DelayServiceRecord> on_arrival(const DelayRequest& r);

  // Earliest (time, level) at or after `from` where a level turns critical.
  std::optional<std::pair<Rational, int>> next_critical(const Rational& from) const;

  DelayServiceRecord run_service(const Rational& now, int critical_level);

  struct PendingView {
    int id;
    int level;
    Rational h;
    Rational residual;  // delay owed beyond the counter, at the queried time
  };
  std::vector<PendingView> pending(const Rational& at) const;
  int pending_count() const { return static_cast<int>(pending_.size()); }
  int oracle_calls() const { return oracle_calls_; }
  const ProblemInstance& instance() const { return inst_; }
  const OracleHandle& oracle() const { return oracle_; }

  // Test knob: pin a pending request to a level the cost rule would not pick.
  void force_level(int id, int level);

 private:
  struct Entry {
    RequestPayload payload;
    DelayFunction delay;
    int level;
    Rational h;
    ElementSet own_elements;
    Rational own_cost;
    std::optional<FLSolution> own_fl;
  };

  ProblemInstance inst_;
  OracleHandle oracle_;
  ServeMode mode_;
  E0Mode e0_mode_;
  std::optional<long long> khat_;
  std::map<int, Entry> pending_;
  int oracle_calls_ = 0;

  ElementSet build_e0(int level) const;
};

}  // namespace netd

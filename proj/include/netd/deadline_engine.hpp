#pragma once

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "netd/oracle.hpp"
#include "netd/regime.hpp"

namespace netd {

struct DeadlineRequest {
  int id;
  RequestPayload payload;
  Rational release;
  Rational deadline;
};

// Whom a transmission marks as served. The first mode serves every pending
// request the transmitted set happens to satisfy; the second serves exactly
// the requests the service planned for. Facility location always behaves
// like the second (service needs an assignment, not just open sites).
enum class ServeMode { all_satisfied, batch_only };

struct DeadlineServiceRecord {
  Rational time;
  bool free_service = false;  // zero-cost private solution, transmitted at release
  int trigger = -1;
  int level = 0;  // service level (one above the trigger); meaningless when free
  E0Mode e0_mode = E0Mode::element_threshold;
  ElementSet e0{0};
  ElementSet transmitted{0};
  std::optional<FLSolution> fl;  // facility runs: open sites + request id -> node
  std::vector<int> batch;        // ids folded into the shared solution, join order
  std::optional<int> rider;      // id served by its private solution after the cutoff
  Rational e0_cost, shared_cost, rider_cost, transmit_cost;
  Rational e0_limit, shared_limit, rider_limit, total_limit;
  std::vector<int> served;    // ascending ids
  std::vector<int> upgraded;  // ascending ids, raised to the service level
  int oracle_calls = 0;
};

// Deadline-driven engine: requests arrive with hard deadlines, every expiry
// triggers a service that batches whatever compatible pending work it can
// afford and leaves the rest upgraded for later. The itemized record of each
// service carries its own budget limits so audits are self-contained.
class DeadlineEngine {
 public:
  DeadlineEngine(ProblemInstance inst, OracleHandle oracle,
                 ServeMode mode = ServeMode::all_satisfied,
                 E0Mode e0_mode = E0Mode::element_threshold,
                 std::optional<long long> khat = std::nullopt);

  // Returns a record only when the request is served for free on the spot.
  std::optional<DeadlineServiceRecord> on_arrival(const DeadlineRequest& r);

  // Earliest pending (deadline, id), if any.
  std::optional<std::pair<Rational, int>> next_trigger() const;

  DeadlineServiceRecord run_service(const Rational& now);

  struct PendingView {
    int id;
    Rational deadline;
    int level;
    Rational own_cost;
  };
  std::vector<PendingView> pending() const;
  int pending_count() const { return static_cast<int>(pending_.size()); }
  int oracle_calls() const { return oracle_calls_; }
  const ProblemInstance& instance() const { return inst_; }
  const OracleHandle& oracle() const { return oracle_; }

 private:
  struct Entry {
    RequestPayload payload;
    Rational release;
    Rational deadline;
    int level;
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
  std::vector<int> collect_served(const ElementSet& transmitted, const std::vector<int>& planned);
};

}  // namespace netd

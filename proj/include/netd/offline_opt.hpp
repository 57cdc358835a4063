#pragma once

#include <vector>

#include "netd/instance.hpp"
#include "netd/oracle.hpp"

namespace netd {

// One batch of an optimal clairvoyant schedule.
struct OfflineBatch {
  std::vector<int> ids;  // request ids, ascending
  Rational time;
  Rational cost;  // exact service cost, plus the batch's delay in delay mode
};

struct OfflineOptimum {
  Rational cost;
  std::vector<OfflineBatch> batches;
};

inline constexpr int kDefaultOptCap = 14;

// Clairvoyant deadline optimum: cheapest partition of the requests into
// batches whose release/deadline windows share an instant, each batch paying
// its exact offline solution. Subset dynamic program, so the request count
// is capped.
OfflineOptimum opt_deadline(const ProblemInstance& inst,
                            const std::vector<RequestSpec>& requests,
                            int cap = kDefaultOptCap);

// Clairvoyant delay optimum. A batch is priced at its last release: delays
// are nondecreasing, so waiting longer with a fixed batch never helps, and
// serving earlier would miss a member.
OfflineOptimum opt_delay(const ProblemInstance& inst, const std::vector<RequestSpec>& requests,
                         int cap = kDefaultOptCap);

}  // namespace netd

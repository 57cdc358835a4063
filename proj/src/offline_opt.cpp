#include "netd/offline_opt.hpp"

#include <algorithm>
#include <functional>
#include <optional>

#include "netd/errors.hpp"

namespace netd {

namespace {

// Shared subset DP. batch_of(mask) prices one candidate batch or reports it
// infeasible; the DP then minimizes over partitions into feasible batches.
struct BatchInfo {
  Rational time;
  Rational cost;
};

OfflineOptimum partition_opt(const std::vector<RequestSpec>& requests, int cap,
                             const std::function<std::optional<BatchInfo>(unsigned)>& batch_of) {
  const int k = static_cast<int>(requests.size());
  if (k == 0) return {Rational(0), {}};
  if (k > cap) throw capacity_error("too many requests for the offline optimum");

  const unsigned full = (1u << k) - 1;
  std::vector<std::optional<BatchInfo>> batch(full + 1);
  for (unsigned m = 1; m <= full; ++m) batch[m] = batch_of(m);

  std::vector<std::optional<Rational>> best(full + 1);
  std::vector<unsigned> choice(full + 1, 0);
  best[0] = Rational(0);
  for (unsigned m = 1; m <= full; ++m) {
    for (unsigned sub = m; sub; sub = (sub - 1) & m) {
      if (!batch[sub] || !best[m ^ sub]) continue;
      Rational total = batch[sub]->cost + *best[m ^ sub];
      if (!best[m] || total < *best[m]) {
        best[m] = total;
        choice[m] = sub;
      }
    }
  }
  if (!best[full]) throw infeasible_error("no batch partition covers all requests");

  OfflineOptimum out{*best[full], {}};
  for (unsigned m = full; m;) {
    unsigned sub = choice[m];
    OfflineBatch b{{}, batch[sub]->time, batch[sub]->cost};
    for (int i = 0; i < k; ++i)
      if (sub >> i & 1) b.ids.push_back(requests[i].id);
    out.batches.push_back(std::move(b));
    m ^= sub;
  }
  std::sort(out.batches.begin(), out.batches.end(), [](const auto& a, const auto& b) {
    if (a.time != b.time) return a.time < b.time;
    return a.ids < b.ids;
  });
  return out;
}

}  // namespace

OfflineOptimum opt_deadline(const ProblemInstance& inst,
                            const std::vector<RequestSpec>& requests, int cap) {
  const int k = static_cast<int>(requests.size());
  for (const RequestSpec& r : requests)
    if (!r.deadline) throw input_error("deadline optimum needs deadline requests");
  auto batch_of = [&](unsigned mask) -> std::optional<BatchInfo> {
    Rational last_release(0), first_deadline(0);
    bool first = true;
    std::vector<RequestPayload> payloads;
    for (int i = 0; i < k; ++i) {
      if (!(mask >> i & 1)) continue;
      const RequestSpec& r = requests[i];
      if (first || r.release > last_release) last_release = r.release;
      if (first || *r.deadline < first_deadline) first_deadline = *r.deadline;
      first = false;
      payloads.push_back(r.payload);
    }
    if (last_release > first_deadline) return std::nullopt;  // windows never overlap
    OfflineSolution sol =
        exact_nd(inst, payloads, CostOverride::none(inst.element_count()));
    return BatchInfo{last_release, sol.cost};
  };
  return partition_opt(requests, cap, batch_of);
}

OfflineOptimum opt_delay(const ProblemInstance& inst, const std::vector<RequestSpec>& requests,
                         int cap) {
  const int k = static_cast<int>(requests.size());
  for (const RequestSpec& r : requests)
    if (!r.delay) throw input_error("delay optimum needs delay requests");
  auto batch_of = [&](unsigned mask) -> std::optional<BatchInfo> {
    Rational serve_time(0);
    bool first = true;
    std::vector<RequestPayload> payloads;
    for (int i = 0; i < k; ++i) {
      if (!(mask >> i & 1)) continue;
      const RequestSpec& r = requests[i];
      if (first || r.release > serve_time) serve_time = r.release;
      first = false;
      payloads.push_back(r.payload);
    }
    OfflineSolution sol =
        exact_nd(inst, payloads, CostOverride::none(inst.element_count()));
    Rational cost = sol.cost;
    for (int i = 0; i < k; ++i)
      if (mask >> i & 1) cost += requests[i].delay->value(serve_time);
    return BatchInfo{serve_time, cost};
  };
  return partition_opt(requests, cap, batch_of);
}

}  // namespace netd

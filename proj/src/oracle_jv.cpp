#include <algorithm>

#include "netd/errors.hpp"
#include "netd/oracle.hpp"

// Primal-dual facility location. Client duals grow in lockstep; a facility
// is tentatively opened once the clipped contributions cover its opening
// price, and clients freeze when they can reach an open facility (or when
// their dual hits the penalty, at which point they pay it instead). A greedy
// pass then keeps a conflict-free subset of the tentative openings, where
// two facilities conflict when some client contributed to both.
//
// The final answer is polished against the trivial alternatives (free
// facilities only, or one bought facility) and the cheapest one wins.

namespace netd {

namespace {

using Dist = std::optional<Rational>;

struct FLCandidate {
  std::vector<int> open;  // ascending node ids
  std::vector<int> served;
  std::map<int, int> assignment;
  Rational cost;
};

}  // namespace

OfflineSolution jv_facility_location(const ProblemInstance& inst,
                                     const std::vector<RequestPayload>& requests,
                                     const std::vector<Penalty>& penalties,
                                     const CostOverride& override_) {
  if (inst.kind != ProblemKind::facility_location)
    throw config_error("this solver handles facility location only");
  std::vector<Penalty> pen = penalties;
  if (pen.empty()) pen.assign(requests.size(), std::nullopt);
  if (pen.size() != requests.size()) throw input_error("one penalty per request expected");
  for (const Penalty& p : pen)
    if (p && *p < 0) throw input_error("negative penalty");
  for (const RequestPayload& r : requests) validate_payload(inst, r);

  const int n = inst.graph.node_count();
  const int k = static_cast<int>(requests.size());

  std::vector<std::vector<Dist>> d(n, std::vector<Dist>(k));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < k; ++j) d[i][j] = shortest_dist(inst.graph, i, requests[j].terminals[0]);
  std::vector<Rational> f(n);
  for (int i = 0; i < n; ++i)
    f[i] = override_.zeroed.contains(i) ? Rational(0) : inst.element_cost(i);

  // Phase 1: synchronized dual growth, batch-processing simultaneous events.
  std::vector<Rational> alpha(k, Rational(0));
  std::vector<char> active(k, 1);
  std::vector<std::optional<Rational>> open_time(n);
  Rational now(0);
  for (int i = 0; i < n; ++i)
    if (f[i] == 0) open_time[i] = Rational(0);

  auto tight_at = [&](int i) -> Dist {
    // Earliest t >= now where frozen plus growing contributions reach f[i].
    Rational frozen(0);
    std::vector<Rational> thresholds;
    for (int j = 0; j < k; ++j) {
      if (!d[i][j]) continue;
      if (active[j])
        thresholds.push_back(*d[i][j]);
      else if (alpha[j] > *d[i][j])
        frozen += alpha[j] - *d[i][j];
    }
    std::sort(thresholds.begin(), thresholds.end());
    Rational cur = now;
    std::size_t at = 0;
    while (at < thresholds.size() && thresholds[at] <= cur) ++at;
    for (;;) {
      Rational value = frozen;
      int slope = 0;
      for (std::size_t s = 0; s < at; ++s) {
        value += cur - thresholds[s];
        ++slope;
      }
      if (value >= f[i]) return cur;
      if (slope > 0) {
        Rational hit = cur + (f[i] - value) / slope;
        if (at == thresholds.size() || hit <= thresholds[at]) return hit;
      }
      if (at == thresholds.size()) return std::nullopt;
      cur = thresholds[at++];
    }
  };

  for (;;) {
    bool any_active = std::find(active.begin(), active.end(), char(1)) != active.end();
    if (!any_active) break;

    Dist next;
    auto consider = [&](const Dist& t) {
      if (t && (!next || *t < *next)) next = t;
    };
    for (int i = 0; i < n; ++i)
      if (!open_time[i]) consider(tight_at(i));
    for (int j = 0; j < k; ++j) {
      if (!active[j]) continue;
      for (int i = 0; i < n; ++i)
        if (open_time[i] && d[i][j]) consider(std::max(now, *d[i][j]));
      if (pen[j]) consider(std::max(now, *pen[j]));
    }
    if (!next)
      throw infeasible_error("a demand can reach no facility and has no penalty");
    now = *next;

    for (int i = 0; i < n; ++i) {
      if (open_time[i]) continue;
      Dist t = tight_at(i);
      if (t && *t <= now) open_time[i] = now;
    }
    for (int j = 0; j < k; ++j) {
      if (!active[j]) continue;
      for (int i = 0; i < n; ++i)
        if (open_time[i] && d[i][j] && *d[i][j] <= now) {
          alpha[j] = now;
          active[j] = 0;
          break;
        }
    }
    for (int j = 0; j < k; ++j)
      if (active[j] && pen[j] && *pen[j] <= now) {
        alpha[j] = now;
        active[j] = 0;
      }
  }

  // Phase 2: keep tentative openings greedily by opening time; drop any that
  // share a positively-contributing client with an earlier keeper.
  std::vector<int> tentative;
  for (int i = 0; i < n; ++i)
    if (open_time[i]) tentative.push_back(i);
  std::stable_sort(tentative.begin(), tentative.end(),
                   [&](int a, int b) { return *open_time[a] < *open_time[b]; });
  auto beta_positive = [&](int i, int j) { return d[i][j] && alpha[j] > *d[i][j]; };
  std::vector<int> chosen;
  for (int i : tentative) {
    bool clash = false;
    for (int prior : chosen) {
      for (int j = 0; j < k && !clash; ++j)
        clash = beta_positive(i, j) && beta_positive(prior, j);
      if (clash) break;
    }
    if (!clash) chosen.push_back(i);
  }

  auto evaluate = [&](std::vector<int> open) -> std::optional<FLCandidate> {
    std::sort(open.begin(), open.end());
    open.erase(std::unique(open.begin(), open.end()), open.end());
    FLCandidate c;
    c.open = open;
    for (int i : open) c.cost += f[i];
    for (int j = 0; j < k; ++j) {
      Dist nearest;
      int at = -1;
      for (int i : open)
        if (d[i][j] && (!nearest || *d[i][j] < *nearest)) {
          nearest = d[i][j];
          at = i;
        }
      if (nearest && (!pen[j] || *nearest <= *pen[j])) {
        c.served.push_back(j);
        c.assignment[j] = at;
        c.cost += *nearest;
      } else if (pen[j]) {
        c.cost += *pen[j];
      } else {
        return std::nullopt;
      }
    }
    return c;
  };

  std::vector<int> free_sites;
  for (int i = 0; i < n; ++i)
    if (f[i] == 0) free_sites.push_back(i);

  std::vector<FLCandidate> candidates;
  auto push = [&](std::vector<int> open) {
    if (auto c = evaluate(std::move(open))) candidates.push_back(std::move(*c));
  };
  std::vector<int> primal = chosen;
  primal.insert(primal.end(), free_sites.begin(), free_sites.end());
  push(std::move(primal));
  push(free_sites);
  for (int i = 0; i < n; ++i) {
    if (f[i] == 0) continue;
    std::vector<int> single = free_sites;
    single.push_back(i);
    push(std::move(single));
  }
  if (candidates.empty())
    throw infeasible_error("a demand can reach no facility and has no penalty");
  std::size_t best = 0;
  for (std::size_t i = 1; i < candidates.size(); ++i)
    if (candidates[i].cost < candidates[best].cost) best = i;

  OfflineSolution sol;
  sol.elements = ElementSet(inst.element_count());
  for (int i : candidates[best].open) sol.elements.insert(i);
  sol.served = std::move(candidates[best].served);
  FLSolution fl;
  fl.facilities = candidates[best].open;
  fl.assignment = std::move(candidates[best].assignment);
  sol.fl = std::move(fl);
  sol.cost = std::move(candidates[best].cost);
  return sol;
}

}  // namespace netd

#include <algorithm>
#include <cstdint>
#include <numeric>

#include "netd/errors.hpp"
#include "netd/oracle.hpp"

// Exact solvers by subset enumeration. Candidates are walked in ascending
// (cost, mask) order, so the first feasible hit is the optimum and ties
// resolve deterministically to the lowest mask. Elements that are free
// (zero price or overridden) are always part of the candidate: satisfaction
// is upwards closed, so taking them can never hurt.
//
// The hot path scales all prices to a common denominator and enumerates in
// int64; rationals are only used when that scaling would overflow.

namespace netd {

namespace {

constexpr long long kScaleLimit = 1LL << 40;

struct ScaledPrices {
  bool ok = false;
  std::vector<long long> values;
};

// Try to express the given rationals as int64 multiples of 1/L.
ScaledPrices scale_prices(const std::vector<Rational>& xs) {
  ScaledPrices out;
  BigInt lcm(1);
  for (const Rational& x : xs) {
    BigInt den = boost::multiprecision::denominator(x);
    lcm = boost::multiprecision::lcm(lcm, den);
    if (lcm > kScaleLimit) return out;
  }
  for (const Rational& x : xs) {
    BigInt scaled = boost::multiprecision::numerator(x) *
                    (lcm / boost::multiprecision::denominator(x));
    if (scaled >= kScaleLimit || scaled <= -kScaleLimit) return out;
    out.values.push_back(scaled.convert_to<long long>());
  }
  out.ok = true;
  return out;
}

// Subset costs of `prices` plus the enumeration order (ascending cost,
// ties by ascending mask).
template <class C>
void mask_order(const std::vector<C>& prices, std::vector<C>& cost,
                std::vector<std::uint32_t>& order) {
  const int p = static_cast<int>(prices.size());
  const std::uint32_t nmasks = std::uint32_t(1) << p;
  cost.assign(nmasks, C(0));
  for (std::uint32_t mask = 1; mask < nmasks; ++mask)
    cost[mask] = cost[mask & (mask - 1)] + prices[__builtin_ctz(mask)];
  order.resize(nmasks);
  std::iota(order.begin(), order.end(), 0u);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::uint32_t a, std::uint32_t b) { return cost[a] < cost[b]; });
}

struct Universe {
  std::vector<Rational> effective;  // price after the override
  std::vector<int> free_ids;        // price zero: always taken
  std::vector<int> pos_ids;         // enumerated
};

Universe split_universe(const ProblemInstance& inst, const CostOverride& override_) {
  Universe u;
  for (int e = 0; e < inst.element_count(); ++e) {
    Rational price = override_.zeroed.contains(e) ? Rational(0) : inst.element_cost(e);
    u.effective.push_back(price);
    if (price == 0)
      u.free_ids.push_back(e);
    else
      u.pos_ids.push_back(e);
  }
  return u;
}

// Penalties of a candidate that leaves `unsat` unsatisfied, as type C.
// Returns false when an infinite-penalty request is unsatisfied.
template <class C>
struct PenaltyView {
  std::vector<bool> finite;
  std::vector<C> value;
};

OfflineSolution build_solution(const ProblemInstance& inst,
                               const std::vector<RequestPayload>& requests,
                               const Universe& u, std::uint32_t mask,
                               const CostOverride& override_) {
  ElementSet elements(inst.element_count());
  for (int e : u.free_ids) elements.insert(e);
  for (std::size_t i = 0; i < u.pos_ids.size(); ++i)
    if ((mask >> i) & 1) elements.insert(u.pos_ids[i]);
  OfflineSolution sol;
  sol.elements = elements;
  sol.served = served_by(inst, requests, elements);
  sol.cost = element_set_cost(inst, elements, override_);
  return sol;
}

// Core search shared by the plain and the prize-collecting solver; the plain
// one is the special case of all penalties infinite.
template <class C>
std::uint32_t search_best_mask(const ProblemInstance& inst,
                               const std::vector<RequestPayload>& requests, const Universe& u,
                               const std::vector<C>& pos_prices, const PenaltyView<C>& pen) {
  std::vector<C> cost;
  std::vector<std::uint32_t> order;
  mask_order(pos_prices, cost, order);

  SatChecker checker(inst);
  std::vector<char> flags(inst.element_count(), 0);
  const int p = static_cast<int>(u.pos_ids.size());

  bool have_best = false;
  C best_total(0);
  std::uint32_t best_mask = 0;
  for (std::uint32_t mask : order) {
    if (have_best && cost[mask] >= best_total) break;
    for (int e : u.free_ids) flags[e] = 1;
    for (int i = 0; i < p; ++i) flags[u.pos_ids[i]] = (mask >> i) & 1;
    C total = cost[mask];
    bool viable = true;
    for (std::size_t q = 0; q < requests.size(); ++q) {
      if (checker.satisfied(requests[q], flags)) continue;
      if (!pen.finite[q]) {
        viable = false;
        break;
      }
      total += pen.value[q];
      if (have_best && total >= best_total) {
        viable = false;
        break;
      }
    }
    if (!viable) continue;
    if (!have_best || total < best_total) {
      have_best = true;
      best_total = total;
      best_mask = mask;
    }
  }
  if (!have_best) throw internal_error("exact search found no feasible candidate");
  return best_mask;
}

OfflineSolution exact_search(const ProblemInstance& inst,
                             const std::vector<RequestPayload>& requests,
                             const std::vector<Penalty>& penalties,
                             const CostOverride& override_, int cap) {
  if (inst.element_count() > cap)
    throw capacity_error("exact oracle refuses " + std::to_string(inst.element_count()) +
                         " elements (cap " + std::to_string(cap) + ")");
  for (const RequestPayload& r : requests) validate_payload(inst, r);
  for (const Penalty& p : penalties)
    if (p && *p < 0) throw input_error("negative penalty");
  // Requests with a finite penalty may stay unserved, so only the ones that
  // must be served need to be satisfiable at all.
  std::vector<RequestPayload> must_serve;
  for (std::size_t q = 0; q < requests.size(); ++q)
    if (!penalties[q]) must_serve.push_back(requests[q]);
  require_satisfiable(inst, must_serve);

  Universe u = split_universe(inst, override_);
  std::vector<Rational> pos_prices;
  for (int e : u.pos_ids) pos_prices.push_back(u.effective[e]);

  // One scaling covers prices and penalties so both live on the same grid.
  std::vector<Rational> to_scale = pos_prices;
  for (const Penalty& p : penalties)
    if (p) to_scale.push_back(*p);
  ScaledPrices scaled = scale_prices(to_scale);

  std::uint32_t best;
  if (scaled.ok) {
    std::vector<long long> iprices(scaled.values.begin(),
                                   scaled.values.begin() + pos_prices.size());
    PenaltyView<long long> pen;
    std::size_t next = pos_prices.size();
    for (const Penalty& p : penalties) {
      pen.finite.push_back(p.has_value());
      pen.value.push_back(p ? scaled.values[next++] : 0);
    }
    best = search_best_mask<long long>(inst, requests, u, iprices, pen);
  } else {
    PenaltyView<Rational> pen;
    for (const Penalty& p : penalties) {
      pen.finite.push_back(p.has_value());
      pen.value.push_back(p ? *p : Rational(0));
    }
    best = search_best_mask<Rational>(inst, requests, u, pos_prices, pen);
  }

  OfflineSolution sol = build_solution(inst, requests, u, best, override_);
  for (std::size_t q = 0; q < requests.size(); ++q) {
    if (std::find(sol.served.begin(), sol.served.end(), static_cast<int>(q)) !=
        sol.served.end())
      continue;
    if (!penalties[q]) throw internal_error("unserved request with infinite penalty");
    sol.cost += *penalties[q];
  }
  return sol;
}

// ---------- facility location ----------

std::vector<std::vector<std::optional<Rational>>> facility_distances(
    const ProblemInstance& inst, const std::vector<RequestPayload>& requests) {
  std::vector<std::vector<std::optional<Rational>>> d(inst.graph.node_count());
  for (int v = 0; v < inst.graph.node_count(); ++v) {
    d[v].reserve(requests.size());
    for (const RequestPayload& r : requests)
      d[v].push_back(shortest_dist(inst.graph, v, r.terminals.at(0)));
  }
  return d;
}

OfflineSolution exact_fl(const ProblemInstance& inst, const std::vector<RequestPayload>& requests,
                         const std::vector<Penalty>& penalties, const CostOverride& override_,
                         int cap) {
  if (inst.element_count() > cap) throw capacity_error("exact oracle: too many facility sites");
  for (const RequestPayload& r : requests) validate_payload(inst, r);
  auto dist = facility_distances(inst, requests);

  Universe u = split_universe(inst, override_);
  std::vector<Rational> pos_prices;
  for (int e : u.pos_ids) pos_prices.push_back(u.effective[e]);
  std::vector<Rational> cost;
  std::vector<std::uint32_t> order;
  mask_order(pos_prices, cost, order);

  const int p = static_cast<int>(u.pos_ids.size());
  bool have_best = false;
  Rational best_total(0);
  std::uint32_t best_mask = 0;
  std::vector<int> open;
  for (std::uint32_t mask : order) {
    if (have_best && cost[mask] >= best_total) break;
    open = u.free_ids;
    for (int i = 0; i < p; ++i)
      if ((mask >> i) & 1) open.push_back(u.pos_ids[i]);
    Rational total = cost[mask];
    bool viable = true;
    for (std::size_t q = 0; q < requests.size(); ++q) {
      std::optional<Rational> nearest;
      for (int v : open)
        if (dist[v][q] && (!nearest || *dist[v][q] < *nearest)) nearest = dist[v][q];
      if (nearest && (!penalties[q] || *nearest <= *penalties[q]))
        total += *nearest;
      else if (penalties[q])
        total += *penalties[q];
      else {
        viable = false;
        break;
      }
      if (have_best && total >= best_total) {
        viable = false;
        break;
      }
    }
    if (!viable) continue;
    if (!have_best || total < best_total) {
      have_best = true;
      best_total = total;
      best_mask = mask;
    }
  }
  if (!have_best) throw infeasible_error("no facility set can serve the demands");

  OfflineSolution sol;
  sol.elements = ElementSet(inst.element_count());
  FLSolution fl;
  for (int e : u.free_ids) sol.elements.insert(e);
  for (int i = 0; i < p; ++i)
    if ((best_mask >> i) & 1) sol.elements.insert(u.pos_ids[i]);
  fl.facilities = sol.elements.ids();
  sol.cost = element_set_cost(inst, sol.elements, override_);
  for (std::size_t q = 0; q < requests.size(); ++q) {
    std::optional<Rational> nearest;
    int at = -1;
    for (int v : fl.facilities)
      if (dist[v][q] && (!nearest || *dist[v][q] < *nearest)) {
        nearest = dist[v][q];
        at = v;
      }
    if (nearest && (!penalties[q] || *nearest <= *penalties[q])) {
      sol.served.push_back(static_cast<int>(q));
      fl.assignment[static_cast<int>(q)] = at;
      sol.cost += *nearest;
    } else {
      sol.cost += *penalties[q];
    }
  }
  sol.fl = std::move(fl);
  return sol;
}

}  // namespace

OfflineSolution exact_nd(const ProblemInstance& inst, const std::vector<RequestPayload>& requests,
                         const CostOverride& override_, int cap) {
  std::vector<Penalty> infinite(requests.size());
  if (inst.kind == ProblemKind::facility_location)
    return exact_fl(inst, requests, infinite, override_, cap);
  return exact_search(inst, requests, infinite, override_, cap);
}

OfflineSolution exact_pcnd(const ProblemInstance& inst,
                           const std::vector<RequestPayload>& requests,
                           const std::vector<Penalty>& penalties, const CostOverride& override_,
                           int cap) {
  if (penalties.size() != requests.size())
    throw input_error("one penalty per request expected");
  if (inst.kind == ProblemKind::facility_location)
    return exact_fl(inst, requests, penalties, override_, cap);
  return exact_search(inst, requests, penalties, override_, cap);
}

}  // namespace netd

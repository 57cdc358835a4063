#include <algorithm>

#include "netd/errors.hpp"
#include "netd/oracle.hpp"
#include "netd/union_find.hpp"

// Moat growing for the edge-weighted connection families. Free edges (price
// zero or overridden) are contracted up front and always bought. Duals of
// active components grow in lockstep; an edge is bought when its accumulated
// load reaches its price, and a reverse-delete pass strips redundant buys.
//
// The prize-collecting variant runs the same growth but charges every live
// request for the growth of the components it keeps active; a request whose
// charge reaches its penalty drops out and pays.

namespace netd {

namespace {

bool edge_connection_kind(const ProblemInstance& inst) {
  return inst.kind == ProblemKind::steiner_forest ||
         inst.kind == ProblemKind::strong_steiner_forest;
}

std::vector<Rational> effective_prices(const ProblemInstance& inst,
                                       const CostOverride& override_) {
  std::vector<Rational> price;
  price.reserve(inst.graph.edge_count());
  for (const GraphEdge& e : inst.graph.edges())
    price.push_back(override_.zeroed.contains(e.id) ? Rational(0) : e.cost);
  return price;
}

bool payload_connected(UnionFind& uf, const RequestPayload& r) {
  int c = uf.find(r.terminals[0]);
  for (int t : r.terminals)
    if (uf.find(t) != c) return false;
  return true;
}

struct Growth {
  std::vector<int> bought;     // chronological
  std::vector<char> gave_up;   // per request
};

Growth run_growth(const ProblemInstance& inst, const std::vector<RequestPayload>& requests,
                  const std::vector<Penalty>& penalties, const std::vector<Rational>& price) {
  const Graph& g = inst.graph;
  UnionFind uf(g.node_count());
  for (const GraphEdge& e : g.edges())
    if (price[e.id] == 0) uf.unite(e.tail, e.head);

  Growth out;
  out.gave_up.assign(requests.size(), 0);
  std::vector<Rational> load(g.edge_count(), Rational(0));
  std::vector<Rational> charged(requests.size(), Rational(0));

  std::vector<char> live(requests.size());
  std::vector<char> active(g.node_count());
  std::vector<int> charge(requests.size());
  std::vector<int> comps;

  for (;;) {
    std::fill(live.begin(), live.end(), 0);
    std::fill(active.begin(), active.end(), 0);
    std::fill(charge.begin(), charge.end(), 0);
    bool any_live = false;
    for (std::size_t q = 0; q < requests.size(); ++q) {
      if (out.gave_up[q] || payload_connected(uf, requests[q])) continue;
      live[q] = 1;
      any_live = true;
      comps.clear();
      for (int t : requests[q].terminals) comps.push_back(uf.find(t));
      std::sort(comps.begin(), comps.end());
      comps.erase(std::unique(comps.begin(), comps.end()), comps.end());
      for (int c : comps) active[c] = 1;
      charge[q] = static_cast<int>(comps.size());
    }
    if (!any_live) break;

    // Next event: an edge going tight or a request hitting its penalty.
    // Edges win ties so a merge that satisfies a request beats its give-up.
    bool have = false;
    Rational best_dt(0);
    int best_class = 0, best_id = 0;
    auto consider = [&](const Rational& dt, int cls, int id) {
      if (!have || dt < best_dt || (dt == best_dt && (cls < best_class ||
          (cls == best_class && id < best_id)))) {
        have = true;
        best_dt = dt;
        best_class = cls;
        best_id = id;
      }
    };
    for (const GraphEdge& e : g.edges()) {
      if (price[e.id] == 0) continue;
      int cu = uf.find(e.tail), cv = uf.find(e.head);
      if (cu == cv) continue;
      int rate = active[cu] + active[cv];
      if (rate == 0) continue;
      consider((price[e.id] - load[e.id]) / rate, 0, e.id);
    }
    for (std::size_t q = 0; q < requests.size(); ++q) {
      if (!live[q] || !penalties[q]) continue;
      consider((*penalties[q] - charged[q]) / charge[q], 1, static_cast<int>(q));
    }
    if (!have)
      throw infeasible_error("moat growing stalled: a request can never be connected");

    for (const GraphEdge& e : g.edges()) {
      if (price[e.id] == 0) continue;
      int cu = uf.find(e.tail), cv = uf.find(e.head);
      if (cu == cv) continue;
      int rate = active[cu] + active[cv];
      if (rate > 0) load[e.id] += best_dt * rate;
    }
    for (std::size_t q = 0; q < requests.size(); ++q)
      if (live[q]) charged[q] += best_dt * charge[q];

    if (best_class == 0) {
      const GraphEdge& e = g.edge(best_id);
      uf.unite(e.tail, e.head);
      out.bought.push_back(best_id);
    } else {
      out.gave_up[best_id] = 1;
    }
  }
  return out;
}

// Drop bought edges, newest first, whenever the must-stay-connected payloads
// survive without them.
std::vector<int> reverse_delete(const ProblemInstance& inst, const std::vector<Rational>& price,
                                const std::vector<int>& bought,
                                const std::vector<const RequestPayload*>& mandatory) {
  std::vector<char> keep(bought.size(), 1);
  UnionFind uf;
  for (int i = static_cast<int>(bought.size()) - 1; i >= 0; --i) {
    keep[i] = 0;
    uf.reset(inst.graph.node_count());
    for (const GraphEdge& e : inst.graph.edges())
      if (price[e.id] == 0) uf.unite(e.tail, e.head);
    for (std::size_t j = 0; j < bought.size(); ++j) {
      if (!keep[j]) continue;
      const GraphEdge& e = inst.graph.edge(bought[j]);
      uf.unite(e.tail, e.head);
    }
    for (const RequestPayload* r : mandatory)
      if (!payload_connected(uf, *r)) {
        keep[i] = 1;
        break;
      }
  }
  std::vector<int> kept;
  for (std::size_t j = 0; j < bought.size(); ++j)
    if (keep[j]) kept.push_back(bought[j]);
  return kept;
}

ElementSet assemble_elements(const ProblemInstance& inst, const std::vector<Rational>& price,
                             const std::vector<int>& kept) {
  ElementSet elements(inst.element_count());
  for (const GraphEdge& e : inst.graph.edges())
    if (price[e.id] == 0) elements.insert(e.id);
  for (int id : kept) elements.insert(id);
  return elements;
}

}  // namespace

OfflineSolution gw_steiner_forest(const ProblemInstance& inst,
                                  const std::vector<RequestPayload>& requests,
                                  const CostOverride& override_) {
  if (!edge_connection_kind(inst))
    throw config_error("moat growing handles the edge-weighted connection families only");
  for (const RequestPayload& r : requests) validate_payload(inst, r);

  std::vector<Rational> price = effective_prices(inst, override_);
  std::vector<Penalty> infinite(requests.size());
  Growth growth = run_growth(inst, requests, infinite, price);

  std::vector<const RequestPayload*> mandatory;
  for (const RequestPayload& r : requests) mandatory.push_back(&r);
  std::vector<int> kept = reverse_delete(inst, price, growth.bought, mandatory);

  OfflineSolution sol;
  sol.elements = assemble_elements(inst, price, kept);
  sol.served = served_by(inst, requests, sol.elements);
  if (sol.served.size() != requests.size())
    throw internal_error("moat growing left a request unserved");
  sol.cost = element_set_cost(inst, sol.elements, override_);
  return sol;
}

OfflineSolution pc_gw_steiner_forest(const ProblemInstance& inst,
                                     const std::vector<RequestPayload>& requests,
                                     const std::vector<Penalty>& penalties,
                                     const CostOverride& override_) {
  if (!edge_connection_kind(inst))
    throw config_error("moat growing handles the edge-weighted connection families only");
  if (penalties.size() != requests.size())
    throw input_error("one penalty per request expected");
  for (const RequestPayload& r : requests) validate_payload(inst, r);
  for (const Penalty& p : penalties)
    if (p && *p < 0) throw input_error("negative penalty");

  std::vector<Rational> price = effective_prices(inst, override_);

  // Candidate solutions; the cheapest wins, earlier ones win ties.
  struct Candidate {
    ElementSet elements;
    std::vector<int> served;
    Rational cost;
  };
  std::vector<Candidate> candidates;
  auto evaluate = [&](ElementSet elements) -> std::optional<Candidate> {
    Candidate c{std::move(elements), {}, Rational(0)};
    c.served = served_by(inst, requests, c.elements);
    c.cost = element_set_cost(inst, c.elements, override_);
    std::size_t at = 0;
    for (std::size_t q = 0; q < requests.size(); ++q) {
      if (at < c.served.size() && c.served[at] == static_cast<int>(q)) {
        ++at;
        continue;
      }
      if (!penalties[q]) return std::nullopt;  // must be served, is not
      c.cost += *penalties[q];
    }
    return c;
  };

  // Capped growth: give-ups pay, the rest must stay connected.
  Growth growth = run_growth(inst, requests, penalties, price);
  std::vector<const RequestPayload*> mandatory;
  for (std::size_t q = 0; q < requests.size(); ++q)
    if (!growth.gave_up[q]) mandatory.push_back(&requests[q]);
  std::vector<int> kept = reverse_delete(inst, price, growth.bought, mandatory);
  if (auto c = evaluate(assemble_elements(inst, price, kept))) candidates.push_back(std::move(*c));

  // Serve everything, penalties be damned.
  try {
    OfflineSolution all = gw_steiner_forest(inst, requests, override_);
    if (auto c = evaluate(all.elements)) candidates.push_back(std::move(*c));
  } catch (const infeasible_error&) {
  }

  // Buy nothing beyond the free edges.
  if (auto c = evaluate(assemble_elements(inst, price, {}))) candidates.push_back(std::move(*c));

  if (candidates.empty())
    throw infeasible_error("no prize-collecting candidate is feasible");
  std::size_t best = 0;
  for (std::size_t i = 1; i < candidates.size(); ++i)
    if (candidates[i].cost < candidates[best].cost) best = i;

  OfflineSolution sol;
  sol.elements = std::move(candidates[best].elements);
  sol.served = std::move(candidates[best].served);
  sol.cost = std::move(candidates[best].cost);
  return sol;
}

}  // namespace netd

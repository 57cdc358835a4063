#include "netd/problem.hpp"

#include <algorithm>
#include <array>
#include <set>

#include "netd/errors.hpp"

namespace netd {

const char* kind_name(ProblemKind k) {
  switch (k) {
    case ProblemKind::steiner_forest: return "steiner_forest";
    case ProblemKind::strong_steiner_forest: return "strong_steiner_forest";
    case ProblemKind::multicut: return "multicut";
    case ProblemKind::strong_multicut: return "strong_multicut";
    case ProblemKind::node_weighted_steiner_forest: return "node_weighted_steiner_forest";
    case ProblemKind::steiner_network: return "steiner_network";
    case ProblemKind::directed_steiner_tree: return "directed_steiner_tree";
    case ProblemKind::facility_location: return "facility_location";
  }
  throw internal_error("unknown problem kind");
}

ProblemKind kind_from_name(const std::string& name) {
  for (ProblemKind k :
       {ProblemKind::steiner_forest, ProblemKind::strong_steiner_forest, ProblemKind::multicut,
        ProblemKind::strong_multicut, ProblemKind::node_weighted_steiner_forest,
        ProblemKind::steiner_network, ProblemKind::directed_steiner_tree,
        ProblemKind::facility_location})
    if (name == kind_name(k)) return k;
  throw input_error("unknown problem kind: " + name);
}

const Rational& ProblemInstance::element_cost(int e) const {
  if (e < 0 || e >= element_count()) throw input_error("element id out of range");
  if (elements_are_nodes()) {
    if (!graph.node_costs()) throw config_error("instance needs node costs");
    return (*graph.node_costs())[e];
  }
  return graph.edge(e).cost;
}

void validate_payload(const ProblemInstance& inst, const RequestPayload& payload) {
  for (int v : payload.terminals)
    if (v < 0 || v >= inst.graph.node_count()) throw input_error("payload terminal out of range");
  const std::size_t n = payload.terminals.size();
  switch (inst.kind) {
    case ProblemKind::steiner_forest:
    case ProblemKind::multicut:
    case ProblemKind::node_weighted_steiner_forest:
    case ProblemKind::steiner_network:
      if (n != 2 || payload.terminals[0] == payload.terminals[1])
        throw input_error("payload must name two distinct terminals");
      break;
    case ProblemKind::strong_steiner_forest:
    case ProblemKind::strong_multicut: {
      if (n < 2) throw input_error("subset payload needs at least two terminals");
      std::set<int> uniq(payload.terminals.begin(), payload.terminals.end());
      if (uniq.size() != n) throw input_error("subset payload has repeated terminals");
      break;
    }
    case ProblemKind::directed_steiner_tree:
      if (!inst.root) throw config_error("directed instance without root");
      if (n != 1) throw input_error("directed payload is a single terminal");
      if (payload.terminals[0] == *inst.root) throw input_error("terminal equals the root");
      break;
    case ProblemKind::facility_location:
      if (n != 1) throw input_error("facility payload is a single demand node");
      break;
  }
  if (inst.kind == ProblemKind::steiner_network) {
    if (payload.demand < 1) throw input_error("steiner_network demand must be >= 1");
  } else if (payload.demand != 1) {
    throw input_error("demand is only meaningful for steiner_network");
  }
}

SatChecker::SatChecker(const ProblemInstance& inst) : inst_(inst) {
  uf_parent_.resize(inst.graph.node_count());
  seen_.resize(inst.graph.node_count());
}

void SatChecker::reset_uf() {
  for (std::size_t i = 0; i < uf_parent_.size(); ++i) uf_parent_[i] = static_cast<int>(i);
}

int SatChecker::find(int x) {
  while (uf_parent_[x] != x) {
    uf_parent_[x] = uf_parent_[uf_parent_[x]];
    x = uf_parent_[x];
  }
  return x;
}

void SatChecker::unite(int a, int b) {
  a = find(a);
  b = find(b);
  if (a != b) uf_parent_[std::max(a, b)] = std::min(a, b);
}

// BFS augmentation over unit capacities, rebuilt per call from `chosen`.
// Good enough: demands here are tiny and graphs are desk-sized.
int SatChecker::unit_flow(const std::vector<char>& chosen, int s, int t, int need) {
  const auto& edges = inst_.graph.edges();
  const bool directed = inst_.graph.directed();
  // residual capacity per edge and direction: cap[e][0] tail->head
  std::vector<std::array<int, 2>> cap(edges.size());
  for (std::size_t e = 0; e < edges.size(); ++e)
    cap[e] = {chosen[e] ? 1 : 0, chosen[e] && !directed ? 1 : 0};
  std::vector<int> prev_edge(inst_.graph.node_count());
  std::vector<int> prev_dir(inst_.graph.node_count());
  int flow = 0;
  while (flow < need) {
    std::fill(seen_.begin(), seen_.end(), 0);
    queue_.clear();
    queue_.push_back(s);
    seen_[s] = 1;
    bool reached = false;
    for (std::size_t qi = 0; qi < queue_.size() && !reached; ++qi) {
      int x = queue_[qi];
      for (std::size_t e = 0; e < edges.size(); ++e) {
        for (int dir = 0; dir < 2; ++dir) {
          int from = dir == 0 ? edges[e].tail : edges[e].head;
          int to = dir == 0 ? edges[e].head : edges[e].tail;
          if (from != x || cap[e][dir] <= 0 || seen_[to]) continue;
          seen_[to] = 1;
          prev_edge[to] = static_cast<int>(e);
          prev_dir[to] = dir;
          if (to == t) {
            reached = true;
            break;
          }
          queue_.push_back(to);
        }
        if (reached) break;
      }
    }
    if (!reached) break;
    for (int x = t; x != s;) {
      int e = prev_edge[x], dir = prev_dir[x];
      cap[e][dir] -= 1;
      cap[e][1 - dir] += 1;
      x = dir == 0 ? inst_.graph.edge(e).tail : inst_.graph.edge(e).head;
    }
    ++flow;
  }
  return flow;
}

bool SatChecker::satisfied(const RequestPayload& payload, const std::vector<char>& chosen) {
  const Graph& g = inst_.graph;
  switch (inst_.kind) {
    case ProblemKind::steiner_forest:
    case ProblemKind::strong_steiner_forest: {
      reset_uf();
      for (const GraphEdge& e : g.edges())
        if (chosen[e.id]) unite(e.tail, e.head);
      int root = find(payload.terminals[0]);
      for (std::size_t i = 1; i < payload.terminals.size(); ++i)
        if (find(payload.terminals[i]) != root) return false;
      return true;
    }
    case ProblemKind::multicut:
    case ProblemKind::strong_multicut: {
      // chosen is the removed set; terminals must end up pairwise separated
      reset_uf();
      for (const GraphEdge& e : g.edges())
        if (!chosen[e.id]) unite(e.tail, e.head);
      for (std::size_t i = 0; i < payload.terminals.size(); ++i)
        for (std::size_t j = i + 1; j < payload.terminals.size(); ++j)
          if (find(payload.terminals[i]) == find(payload.terminals[j])) return false;
      return true;
    }
    case ProblemKind::node_weighted_steiner_forest: {
      // bought nodes must include both terminals and induce a connection
      if (!chosen[payload.terminals[0]] || !chosen[payload.terminals[1]]) return false;
      reset_uf();
      for (const GraphEdge& e : g.edges())
        if (chosen[e.tail] && chosen[e.head]) unite(e.tail, e.head);
      return find(payload.terminals[0]) == find(payload.terminals[1]);
    }
    case ProblemKind::steiner_network: {
      if (payload.demand == 1) {
        reset_uf();
        for (const GraphEdge& e : g.edges())
          if (chosen[e.id]) unite(e.tail, e.head);
        return find(payload.terminals[0]) == find(payload.terminals[1]);
      }
      return unit_flow(chosen, payload.terminals[0], payload.terminals[1], payload.demand) >=
             payload.demand;
    }
    case ProblemKind::directed_steiner_tree: {
      int target = payload.terminals[0];
      int root = *inst_.root;
      if (root == target) return true;
      std::fill(seen_.begin(), seen_.end(), 0);
      queue_.clear();
      queue_.push_back(root);
      seen_[root] = 1;
      for (std::size_t qi = 0; qi < queue_.size(); ++qi) {
        int x = queue_[qi];
        for (const GraphEdge& e : g.edges()) {
          if (!chosen[e.id]) continue;
          int next = -1;
          if (e.tail == x)
            next = e.head;
          else if (!g.directed() && e.head == x)
            next = e.tail;
          if (next < 0 || seen_[next]) continue;
          if (next == target) return true;
          seen_[next] = 1;
          queue_.push_back(next);
        }
      }
      return false;
    }
    case ProblemKind::facility_location:
      throw config_error("facility location has no satisfaction predicate");
  }
  throw internal_error("unknown problem kind");
}

bool satisfies(const ProblemInstance& inst, const RequestPayload& payload,
               const ElementSet& chosen) {
  if (chosen.universe() != inst.element_count())
    throw input_error("satisfies: element set universe mismatch");
  validate_payload(inst, payload);
  std::vector<char> flags(inst.element_count(), 0);
  for (int e = 0; e < inst.element_count(); ++e) flags[e] = chosen.contains(e) ? 1 : 0;
  SatChecker checker(inst);
  return checker.satisfied(payload, flags);
}

Rational fl_solution_cost(const ProblemInstance& inst, const FLSolution& sol,
                          const std::vector<RequestPayload>& requests) {
  if (inst.kind != ProblemKind::facility_location)
    throw config_error("fl_solution_cost: not a facility location instance");
  if (!inst.graph.node_costs()) throw config_error("facility instance without opening costs");
  std::set<int> open(sol.facilities.begin(), sol.facilities.end());
  Rational total(0);
  for (int v : open) {
    if (v < 0 || v >= inst.graph.node_count()) throw input_error("unknown facility node");
    total += (*inst.graph.node_costs())[v];
  }
  for (const auto& [req, fac] : sol.assignment) {
    if (req < 0 || req >= static_cast<int>(requests.size()))
      throw input_error("assignment names an unknown request");
    if (!open.count(fac)) throw input_error("assignment to an unopened facility");
    auto d = shortest_dist(inst.graph, fac, requests[req].terminals.at(0));
    if (!d) throw input_error("assigned facility cannot reach the request");
    total += *d;
  }
  return total;
}

namespace {

// Representative payloads used by the deep closure audit.
std::vector<RequestPayload> sample_payloads(const ProblemInstance& inst) {
  const int n = inst.graph.node_count();
  std::vector<RequestPayload> out;
  if (inst.kind == ProblemKind::facility_location || n < 2) return out;
  if (inst.kind == ProblemKind::directed_steiner_tree) {
    for (int v = 0; v < n && out.size() < 2; ++v)
      if (v != *inst.root) out.push_back({{v}, 1});
    return out;
  }
  if (inst.kind == ProblemKind::strong_steiner_forest || inst.kind == ProblemKind::strong_multicut) {
    RequestPayload p;
    for (int v = 0; v < std::min(n, 3); ++v) p.terminals.push_back(v);
    out.push_back(p);
    return out;
  }
  out.push_back({{0, 1}, 1});
  if (n >= 3) out.push_back({{0, n - 1}, 1});
  if (inst.kind == ProblemKind::steiner_network) out.back().demand = 2;
  return out;
}

}  // namespace

std::vector<std::string> validate_instance(const ProblemInstance& inst, bool deep) {
  std::vector<std::string> bad;
  const Graph& g = inst.graph;
  switch (inst.kind) {
    case ProblemKind::directed_steiner_tree:
      if (!g.directed()) bad.push_back("directed_steiner_tree needs a directed graph");
      if (!inst.root)
        bad.push_back("directed_steiner_tree needs a root");
      else if (*inst.root < 0 || *inst.root >= g.node_count())
        bad.push_back("root out of range");
      break;
    case ProblemKind::node_weighted_steiner_forest:
      if (!g.node_costs()) bad.push_back("node-weighted instance needs node costs");
      break;
    case ProblemKind::facility_location:
      if (!g.node_costs()) bad.push_back("facility instance needs opening costs");
      if (!g.edge_weights()) bad.push_back("facility instance needs a connection metric");
      break;
    default:
      break;
  }
  if (inst.kind != ProblemKind::directed_steiner_tree && g.directed())
    bad.push_back("only directed_steiner_tree runs on directed graphs");

  if (deep && inst.kind != ProblemKind::facility_location) {
    const int m = inst.element_count();
    if (m > 12) {
      bad.push_back("deep audit limited to 12 elements");
      return bad;
    }
    // Upwards closure: adding one element never breaks satisfaction. Checking
    // single-element extensions over all subsets covers every A subset-of B
    // by induction.
    SatChecker checker(inst);
    std::vector<char> a(m, 0), b(m, 0);
    for (const RequestPayload& payload : sample_payloads(inst)) {
      for (int mask = 0; mask < (1 << m); ++mask) {
        for (int e = 0; e < m; ++e) a[e] = (mask >> e) & 1;
        if (!checker.satisfied(payload, a)) continue;
        for (int e = 0; e < m; ++e) {
          if ((mask >> e) & 1) continue;
          b = a;
          b[e] = 1;
          if (!checker.satisfied(payload, b)) {
            bad.push_back("satisfaction is not upwards closed");
            return bad;
          }
        }
      }
    }
  }
  return bad;
}

}  // namespace netd

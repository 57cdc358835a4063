#include "netd/generators.hpp"

#include <algorithm>
#include <random>

#include "netd/errors.hpp"

namespace netd {

namespace {

// rng() % n is biased but portable; the bias is irrelevant for test data
long long pick(std::mt19937_64& rng, long long n) {
  return static_cast<long long>(rng() % static_cast<std::uint64_t>(n));
}

int pick_node(std::mt19937_64& rng, int nodes) { return static_cast<int>(pick(rng, nodes)); }

std::pair<int, int> distinct_pair(std::mt19937_64& rng, int nodes) {
  int u = pick_node(rng, nodes);
  int v = pick_node(rng, nodes - 1);
  if (v >= u) ++v;
  return {u, v};
}

Graph random_graph(std::mt19937_64& rng, const GenParams& p) {
  const bool directed = p.kind == ProblemKind::directed_steiner_tree;
  const bool node_weighted = p.kind == ProblemKind::node_weighted_steiner_forest ||
                             p.kind == ProblemKind::facility_location;
  std::vector<GraphEdge> edges;
  auto edge_cost = [&]() -> Rational {
    // node-weighted families price nodes, so their edges stay free
    return node_weighted ? Rational(0) : Rational(pick(rng, p.max_cost + 1));
  };
  // spanning connectivity first: parent links keep everything reachable
  // (downward from node 0 in the directed case)
  for (int v = 1; v < p.nodes; ++v) {
    int parent = static_cast<int>(pick(rng, v));
    edges.push_back({static_cast<int>(edges.size()), parent, v, edge_cost()});
  }
  for (int i = 0; i < p.extra_edges; ++i) {
    auto [u, v] = distinct_pair(rng, p.nodes);
    if (directed && u > v) std::swap(u, v);  // keep extras downward too
    edges.push_back({static_cast<int>(edges.size()), u, v, edge_cost()});
  }

  std::optional<std::vector<Rational>> node_costs;
  std::optional<std::vector<Rational>> edge_weights;
  if (node_weighted) {
    node_costs.emplace();
    for (int v = 0; v < p.nodes; ++v) node_costs->push_back(Rational(pick(rng, p.max_cost + 1)));
  }
  if (p.kind == ProblemKind::facility_location) {
    edge_weights.emplace();
    for (std::size_t i = 0; i < edges.size(); ++i)
      edge_weights->push_back(Rational(1 + pick(rng, std::max(1, p.max_cost))));
  }
  return Graph(p.nodes, directed, std::move(edges), std::move(node_costs),
               std::move(edge_weights));
}

RequestPayload random_payload(std::mt19937_64& rng, const ProblemInstance& inst, int nodes) {
  RequestPayload payload;
  switch (inst.kind) {
    case ProblemKind::steiner_forest:
    case ProblemKind::multicut:
    case ProblemKind::node_weighted_steiner_forest: {
      auto [u, v] = distinct_pair(rng, nodes);
      payload.terminals = {u, v};
      break;
    }
    case ProblemKind::strong_steiner_forest:
    case ProblemKind::strong_multicut: {
      int want = 2 + static_cast<int>(pick(rng, std::max(1, nodes - 2)));
      std::vector<int> all(nodes);
      for (int v = 0; v < nodes; ++v) all[v] = v;
      for (int j = 0; j < want; ++j) std::swap(all[j], all[j + pick(rng, nodes - j)]);
      payload.terminals.assign(all.begin(), all.begin() + want);
      std::sort(payload.terminals.begin(), payload.terminals.end());
      break;
    }
    case ProblemKind::steiner_network: {
      auto [u, v] = distinct_pair(rng, nodes);
      payload.terminals = {u, v};
      int flow = max_disjoint_paths(inst.graph, ElementSet::full(inst.element_count()), u, v);
      payload.demand = std::min(1 + static_cast<int>(pick(rng, 2)), flow);
      break;
    }
    case ProblemKind::directed_steiner_tree:
      payload.terminals = {1 + static_cast<int>(pick(rng, nodes - 1))};
      break;
    case ProblemKind::facility_location:
      payload.terminals = {pick_node(rng, nodes)};
      break;
  }
  return payload;
}

}  // namespace

InstanceSpec gen_random(const GenParams& p, std::uint64_t seed) {
  if (p.nodes < 3) throw input_error("random instances need at least three nodes");
  if (p.requests < 1) throw input_error("random instances need at least one request");
  std::mt19937_64 rng(seed);

  ProblemInstance inst{p.kind, random_graph(rng, p),
                       p.kind == ProblemKind::directed_steiner_tree ? std::optional<int>(0)
                                                                    : std::nullopt};

  std::vector<Rational> releases;
  for (int i = 0; i < p.requests; ++i) releases.push_back(Rational(pick(rng, 2 * p.requests + 1)));
  std::sort(releases.begin(), releases.end());

  InstanceSpec spec{p.name, seed, p.mode, std::move(inst), {}};
  for (int i = 0; i < p.requests; ++i) {
    RequestSpec r;
    r.id = i;
    r.payload = random_payload(rng, spec.instance, p.nodes);
    r.release = releases[i];
    if (p.mode == RunMode::deadline) {
      r.deadline = r.release + Rational(1 + pick(rng, p.max_window));
    } else {
      r.delay = DelayFunction::linear(r.release, Rational(1 + pick(rng, 4)) / 2);
    }
    spec.requests.push_back(std::move(r));
  }
  validate_spec(spec);
  return spec;
}

InstanceSpec gen_set_cover_lb(int levels, RunMode mode, bool directed) {
  if (levels < 1 || levels > 6) throw input_error("lower-bound family takes 1..6 levels");
  int sets = 1;
  int patterns = 1;
  for (int j = 0; j < levels; ++j) {
    sets *= 2;
    patterns *= 3;
  }
  // node layout: root, then the candidate sets, then the cover patterns
  const int root = 0;
  auto set_node = [&](int s) { return 1 + s; };
  auto pattern_node = [&](int e) { return 1 + sets + e; };
  const int nodes = 1 + sets + patterns;

  // pattern e is covered by set s when every digit of e is either the
  // wildcard 2 or agrees with the corresponding bit of s
  auto covers = [&](int e, int s) {
    for (int j = 0; j < levels; ++j) {
      int digit = e % 3;
      e /= 3;
      int bit = (s >> j) & 1;
      if (digit != 2 && digit != bit) return false;
    }
    return true;
  };

  std::vector<GraphEdge> edges;
  std::optional<std::vector<Rational>> node_costs;
  auto add_edge = [&](int tail, int head, int cost) {
    edges.push_back({static_cast<int>(edges.size()), tail, head, Rational(cost)});
  };
  if (directed) {
    for (int s = 0; s < sets; ++s) add_edge(root, set_node(s), 1);
    for (int e = 0; e < patterns; ++e)
      for (int s = 0; s < sets; ++s)
        if (covers(e, s)) add_edge(set_node(s), pattern_node(e), 0);
  } else {
    node_costs.emplace(nodes, Rational(0));
    for (int s = 0; s < sets; ++s) {
      (*node_costs)[set_node(s)] = 1;
      add_edge(root, set_node(s), 0);
    }
    for (int e = 0; e < patterns; ++e)
      for (int s = 0; s < sets; ++s)
        if (covers(e, s)) add_edge(set_node(s), pattern_node(e), 0);
  }

  ProblemKind kind =
      directed ? ProblemKind::directed_steiner_tree : ProblemKind::node_weighted_steiner_forest;
  ProblemInstance inst{kind, Graph(nodes, directed, std::move(edges), std::move(node_costs),
                                   std::nullopt),
                       directed ? std::optional<int>(root) : std::nullopt};

  std::string name = "set-cover-lb-" + std::to_string(levels) + (directed ? "-directed" : "-node");
  InstanceSpec spec{std::move(name), 0, mode, std::move(inst), {}};
  for (int e = 0; e < patterns; ++e) {
    RequestSpec r;
    r.id = e;
    r.payload.terminals = directed ? std::vector<int>{pattern_node(e)}
                                   : std::vector<int>{root, pattern_node(e)};
    r.release = Rational(e);
    if (mode == RunMode::deadline)
      r.deadline = r.release + 1;
    else
      r.delay = DelayFunction::linear(r.release, Rational(1));
    spec.requests.push_back(std::move(r));
  }
  validate_spec(spec);
  return spec;
}

}  // namespace netd

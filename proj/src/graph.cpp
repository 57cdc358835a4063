#include "netd/graph.hpp"

#include <algorithm>
#include <queue>

#include "netd/errors.hpp"
#include "netd/union_find.hpp"

namespace netd {

Graph::Graph(int node_count, bool directed, std::vector<GraphEdge> edges,
             std::optional<std::vector<Rational>> node_costs,
             std::optional<std::vector<Rational>> edge_weights)
    : node_count_(node_count),
      directed_(directed),
      edges_(std::move(edges)),
      node_costs_(std::move(node_costs)),
      edge_weights_(std::move(edge_weights)) {
  if (node_count_ < 0) throw input_error("graph: negative node count");
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    const GraphEdge& e = edges_[i];
    if (e.id != static_cast<int>(i)) throw input_error("graph: edge ids must be dense 0..m-1");
    if (e.tail < 0 || e.tail >= node_count_ || e.head < 0 || e.head >= node_count_)
      throw input_error("graph: edge endpoint out of range");
    if (e.tail == e.head) throw input_error("graph: self-loops are not allowed");
    if (e.cost < 0) throw input_error("graph: negative edge cost");
  }
  if (node_costs_) {
    if (static_cast<int>(node_costs_->size()) != node_count_)
      throw input_error("graph: node_costs size mismatch");
    for (const auto& c : *node_costs_)
      if (c < 0) throw input_error("graph: negative node cost");
  }
  if (edge_weights_) {
    if (edge_weights_->size() != edges_.size())
      throw input_error("graph: edge_weights size mismatch");
    for (const auto& w : *edge_weights_)
      if (w < 0) throw input_error("graph: negative edge weight");
  }
}

std::vector<int> components(const Graph& g, const ElementSet& active_edges) {
  if (active_edges.universe() != g.edge_count())
    throw input_error("components: edge set universe mismatch");
  UnionFind uf(g.node_count());
  for (const GraphEdge& e : g.edges())
    if (active_edges.contains(e.id)) uf.unite(e.tail, e.head);
  std::vector<int> label(g.node_count());
  for (int v = 0; v < g.node_count(); ++v) label[v] = uf.find(v);
  return label;
}

std::vector<int> components(const Graph& g, const std::vector<int>& active_edge_ids) {
  ElementSet s(g.edge_count());
  for (int id : active_edge_ids) {
    if (id < 0 || id >= g.edge_count()) throw input_error("components: unknown edge id");
    s.insert(id);
  }
  return components(g, s);
}

bool is_pair_connected(const Graph& g, const ElementSet& active_edges, int u, int v,
                       bool respect_direction) {
  if (u < 0 || u >= g.node_count() || v < 0 || v >= g.node_count())
    throw input_error("is_pair_connected: node out of range");
  if (active_edges.universe() != g.edge_count())
    throw input_error("is_pair_connected: edge set universe mismatch");
  if (u == v) return true;
  const bool use_direction = respect_direction && g.directed();
  std::vector<char> seen(g.node_count(), 0);
  std::vector<int> stack{u};
  seen[u] = 1;
  while (!stack.empty()) {
    int x = stack.back();
    stack.pop_back();
    for (const GraphEdge& e : g.edges()) {
      if (!active_edges.contains(e.id)) continue;
      int next = -1;
      if (e.tail == x)
        next = e.head;
      else if (!use_direction && e.head == x)
        next = e.tail;
      if (next < 0 || seen[next]) continue;
      if (next == v) return true;
      seen[next] = 1;
      stack.push_back(next);
    }
  }
  return false;
}

std::optional<Rational> shortest_dist(const Graph& g, int u, int v) {
  if (!g.edge_weights()) throw config_error("shortest_dist: graph has no edge weights");
  if (u < 0 || u >= g.node_count() || v < 0 || v >= g.node_count())
    throw input_error("shortest_dist: node out of range");
  const auto& w = *g.edge_weights();
  // Dijkstra with a plain O(n^2) scan; graphs here are small and the
  // weights are rationals, so a heap buys nothing.
  std::vector<std::optional<Rational>> dist(g.node_count());
  std::vector<char> done(g.node_count(), 0);
  dist[u] = Rational(0);
  for (;;) {
    int best = -1;
    for (int x = 0; x < g.node_count(); ++x) {
      if (done[x] || !dist[x]) continue;
      if (best < 0 || *dist[x] < *dist[best]) best = x;
    }
    if (best < 0) break;
    done[best] = 1;
    for (const GraphEdge& e : g.edges()) {
      int next = -1;
      if (e.tail == best)
        next = e.head;
      else if (!g.directed() && e.head == best)
        next = e.tail;
      if (next < 0) continue;
      Rational cand = *dist[best] + w[e.id];
      if (!dist[next] || cand < *dist[next]) dist[next] = cand;
    }
  }
  return dist[v];
}

namespace {

// Unit-capacity max flow via BFS augmentation. An undirected edge becomes a
// pair of opposite arcs of capacity 1 each, which preserves the flow value.
struct UnitFlow {
  int n = 0;
  std::vector<int> arc_to, arc_cap, arc_next, head;

  void init(int nodes) {
    n = nodes;
    arc_to.clear();
    arc_cap.clear();
    arc_next.clear();
    head.assign(n, -1);
  }

  void add_arc(int u, int v, int cap) {
    arc_to.push_back(v);
    arc_cap.push_back(cap);
    arc_next.push_back(head[u]);
    head[u] = static_cast<int>(arc_to.size()) - 1;
    arc_to.push_back(u);
    arc_cap.push_back(0);
    arc_next.push_back(head[v]);
    head[v] = static_cast<int>(arc_to.size()) - 1;
  }

  int max_flow(int s, int t) {
    int flow = 0;
    std::vector<int> prev_arc(n);
    for (;;) {
      std::fill(prev_arc.begin(), prev_arc.end(), -1);
      std::queue<int> q;
      q.push(s);
      prev_arc[s] = -2;
      while (!q.empty() && prev_arc[t] == -1) {
        int x = q.front();
        q.pop();
        for (int a = head[x]; a >= 0; a = arc_next[a]) {
          if (arc_cap[a] <= 0 || prev_arc[arc_to[a]] != -1) continue;
          prev_arc[arc_to[a]] = a;
          q.push(arc_to[a]);
        }
      }
      if (prev_arc[t] == -1) return flow;
      for (int x = t; x != s;) {
        int a = prev_arc[x];
        arc_cap[a] -= 1;
        arc_cap[a ^ 1] += 1;
        x = arc_to[a ^ 1];
      }
      ++flow;
    }
  }
};

}  // namespace

int max_disjoint_paths(const Graph& g, const ElementSet& active_edges, int u, int v) {
  if (u == v) throw input_error("max_disjoint_paths: endpoints must differ");
  if (u < 0 || u >= g.node_count() || v < 0 || v >= g.node_count())
    throw input_error("max_disjoint_paths: node out of range");
  if (active_edges.universe() != g.edge_count())
    throw input_error("max_disjoint_paths: edge set universe mismatch");
  UnitFlow f;
  f.init(g.node_count());
  for (const GraphEdge& e : g.edges()) {
    if (!active_edges.contains(e.id)) continue;
    f.add_arc(e.tail, e.head, 1);
    if (!g.directed()) f.add_arc(e.head, e.tail, 1);
  }
  return f.max_flow(u, v);
}

}  // namespace netd

#pragma once

#include <optional>
#include <vector>

#include "netd/element_set.hpp"
#include "netd/rational.hpp"

namespace netd {

struct GraphEdge {
  int id = 0;
  int tail = 0;
  int head = 0;
  Rational cost;
};

// Finite multigraph. Parallel edges are allowed, self-loops are not.
// Edge ids must be dense: edges[i].id == i.
//
// node_costs carries per-node prices for the node-weighted family and
// facility opening costs; edge_weights carries the connection metric for
// facility location. Both are independent of the purchase costs on edges.
class Graph {
 public:
  Graph(int node_count, bool directed, std::vector<GraphEdge> edges,
        std::optional<std::vector<Rational>> node_costs = std::nullopt,
        std::optional<std::vector<Rational>> edge_weights = std::nullopt);

  int node_count() const { return node_count_; }
  bool directed() const { return directed_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  const std::vector<GraphEdge>& edges() const { return edges_; }
  const GraphEdge& edge(int id) const { return edges_.at(id); }
  const std::optional<std::vector<Rational>>& node_costs() const { return node_costs_; }
  const std::optional<std::vector<Rational>>& edge_weights() const { return edge_weights_; }

 private:
  int node_count_;
  bool directed_;
  std::vector<GraphEdge> edges_;
  std::optional<std::vector<Rational>> node_costs_;
  std::optional<std::vector<Rational>> edge_weights_;
};

// Component labels (0..n-1, each node labelled by the smallest node of its
// component) of the subgraph with the given edges active. Direction is
// ignored here; directed reachability goes through is_pair_connected.
std::vector<int> components(const Graph& g, const ElementSet& active_edges);
std::vector<int> components(const Graph& g, const std::vector<int>& active_edge_ids);

bool is_pair_connected(const Graph& g, const ElementSet& active_edges, int u, int v,
                       bool respect_direction);

// Shortest u-v distance under edge_weights. Requires weights to be present.
// nullopt when v is unreachable from u.
std::optional<Rational> shortest_dist(const Graph& g, int u, int v);

// Maximum number of edge-disjoint u-v paths in the subgraph of active edges.
// Each undirected edge may be used by at most one path in total.
int max_disjoint_paths(const Graph& g, const ElementSet& active_edges, int u, int v);

}  // namespace netd

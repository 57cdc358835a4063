#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "netd/graph.hpp"

namespace netd {

enum class ProblemKind {
  steiner_forest,
  strong_steiner_forest,
  multicut,
  strong_multicut,
  node_weighted_steiner_forest,
  steiner_network,
  directed_steiner_tree,
  facility_location,
};

const char* kind_name(ProblemKind k);
ProblemKind kind_from_name(const std::string& name);

// What a request asks for. The shape of `terminals` depends on the instance
// kind: a pair for the pair families, >= 2 nodes for the strong (subset)
// variants, a single node for directed reachability and facility demands.
// `demand` is the number of edge-disjoint paths wanted and only matters for
// steiner_network.
struct RequestPayload {
  std::vector<int> terminals;
  int demand = 1;
};

// A problem family bound to a concrete graph. Purchasable elements are the
// edges, except for the node-weighted family and facility location where
// they are the nodes.
struct ProblemInstance {
  ProblemKind kind;
  Graph graph;
  std::optional<int> root;  // required by directed_steiner_tree

  bool elements_are_nodes() const {
    return kind == ProblemKind::node_weighted_steiner_forest ||
           kind == ProblemKind::facility_location;
  }
  int element_count() const {
    return elements_are_nodes() ? graph.node_count() : graph.edge_count();
  }
  const Rational& element_cost(int e) const;
};

// Facility location answers are not plain element sets: they name the open
// facilities and where each request connects. `assignment` maps an index
// into the request list of the call that produced the solution to a node.
struct FLSolution {
  std::vector<int> facilities;
  std::map<int, int> assignment;
};

// Does the element set `chosen` satisfy the payload? Separation families
// read `chosen` as the removed set; connection families as the bought set.
// Facility location has no such predicate and this throws config_error.
bool satisfies(const ProblemInstance& inst, const RequestPayload& payload,
               const ElementSet& chosen);

// Throws input_error when the payload does not fit the instance kind.
void validate_payload(const ProblemInstance& inst, const RequestPayload& payload);

// Opening costs plus metric connection costs for every assigned request.
// Throws input_error on an assignment to an unreachable or unopened node.
Rational fl_solution_cost(const ProblemInstance& inst, const FLSolution& sol,
                          const std::vector<RequestPayload>& requests);

// Structural audit; returns human-readable violations instead of aborting.
// deep additionally spot-checks that satisfaction is upwards closed, which
// enumerates all element subsets and is only allowed for small universes.
std::vector<std::string> validate_instance(const ProblemInstance& inst, bool deep = false);

// Shared fast path for the predicate above: one checker per instance,
// reusable scratch buffers, element sets as plain flag vectors.
class SatChecker {
 public:
  explicit SatChecker(const ProblemInstance& inst);
  bool satisfied(const RequestPayload& payload, const std::vector<char>& chosen);

 private:
  const ProblemInstance& inst_;
  std::vector<int> uf_parent_;
  std::vector<int> queue_;
  std::vector<char> seen_;

  int find(int x);
  void unite(int a, int b);
  void reset_uf();
  int unit_flow(const std::vector<char>& chosen, int s, int t, int need);
};

}  // namespace netd

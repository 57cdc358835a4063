#pragma once

#include <cstdint>
#include <string>

#include "netd/instance.hpp"

namespace netd {

// Knobs for the random instance generator. Costs are integers in
// [0, max_cost], releases integers in [0, 2 * requests], deadline windows
// integers in [1, max_window], delay slopes from {1/2, 1, 3/2, 2}.
struct GenParams {
  ProblemKind kind = ProblemKind::steiner_forest;
  RunMode mode = RunMode::deadline;
  int nodes = 6;
  int extra_edges = 3;
  int requests = 4;
  int max_cost = 8;
  int max_window = 6;
  std::string name = "random";
};

// Deterministic for a fixed (params, seed). Every request is satisfiable on
// the generated graph by construction.
InstanceSpec gen_random(const GenParams& params, std::uint64_t seed);

// Set-cover-style lower-bound family: 2^levels candidate sets over 3^levels
// cover patterns, behind a shared root. Nodes: 3^levels + 2^levels + 1.
// Undirected node-weighted form, or rooted directed form when `directed`.
InstanceSpec gen_set_cover_lb(int levels, RunMode mode, bool directed);

}  // namespace netd

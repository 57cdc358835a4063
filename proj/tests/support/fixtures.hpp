#pragma once

#include <vector>

#include "netd/graph.hpp"

namespace netd::fixtures {

// Triangle on nodes a=0, b=1, c=2 with edges ab cost 5, ac cost 2, cb cost 2.
// Edge weights mirror the costs so distance queries work on it as well.
inline Graph triangle() {
  std::vector<GraphEdge> edges{
      {0, 0, 1, Rational(5)},
      {1, 0, 2, Rational(2)},
      {2, 2, 1, Rational(2)},
  };
  std::vector<Rational> weights{Rational(5), Rational(2), Rational(2)};
  return Graph(3, false, edges, std::nullopt, weights);
}

// Two nodes u=0, v=1 joined by an edge of weight 1; opening costs 1 and 10.
inline Graph two_point_metric() {
  std::vector<GraphEdge> edges{{0, 0, 1, Rational(0)}};
  std::vector<Rational> opening{Rational(1), Rational(10)};
  std::vector<Rational> weights{Rational(1)};
  return Graph(2, false, edges, opening, weights);
}

}  // namespace netd::fixtures

#pragma once

#include <vector>

#include "netd/problem.hpp"

namespace netd {

// How a service assembles its bundle of prepaid elements.
enum class E0Mode {
  element_threshold,  // every element priced at or below 2^level / universe
  request_union,      // union of cheap individual solutions (needs a request-count guess)
};

// The threshold bundle. Always contains every zero-cost element.
ElementSet cheap_element_bundle(const ProblemInstance& inst, int level);

// One pending request together with its private solution, as the
// request-union bundle consumes them.
struct OwnedSolution {
  int id;
  const RequestPayload* payload;
  const ElementSet* elements;
  Rational cost;
};

// Walk the pending requests in ascending id order and fold in each private
// solution priced at or below gamma * 2^level / khat, skipping requests the
// bundle built so far already satisfies. With at most khat pending requests
// the result costs at most gamma * 2^level.
ElementSet request_union_bundle(const ProblemInstance& inst, const Rational& gamma, int level,
                                long long khat, const std::vector<OwnedSolution>& pending);

// Guess-doubling plan: route arrivals to engine instances, each sized for a
// tentative request count. Instance guesses square (2, 4, 16, ...); once a
// guess exceeds the element universe the instance runs unmodified and takes
// every later arrival.
class DoublingPlan {
 public:
  explicit DoublingPlan(int universe);

  struct InstanceInfo {
    long long guess;
    bool classic;  // guess exceeds the universe: no bundle trickery
  };

  // Which engine instance receives this arrival (instances are created here).
  int route_arrival();
  const std::vector<InstanceInfo>& instances() const { return instances_; }

 private:
  int universe_;
  long long next_guess_ = 2;
  long long received_ = 0;
  std::vector<InstanceInfo> instances_;
};

}  // namespace netd

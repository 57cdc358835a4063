#include "netd/regime.hpp"

#include "netd/errors.hpp"
#include "netd/rational.hpp"

namespace netd {

ElementSet cheap_element_bundle(const ProblemInstance& inst, int level) {
  const int universe = inst.element_count();
  if (universe == 0) throw input_error("instance has no purchasable elements");
  Rational threshold = pow2(level) / universe;
  ElementSet bundle(universe);
  for (int e = 0; e < universe; ++e)
    if (inst.element_cost(e) <= threshold) bundle.insert(e);
  return bundle;
}

ElementSet request_union_bundle(const ProblemInstance& inst, const Rational& gamma, int level,
                                long long khat, const std::vector<OwnedSolution>& pending) {
  if (inst.kind == ProblemKind::facility_location)
    throw config_error("the request-union bundle has no facility location form");
  if (khat <= 0) throw input_error("request-count guess must be positive");
  Rational threshold = gamma * pow2(level) / khat;
  ElementSet bundle(inst.element_count());
  for (const OwnedSolution& own : pending) {
    if (satisfies(inst, *own.payload, bundle)) continue;
    if (own.cost <= threshold) bundle |= *own.elements;
  }
  return bundle;
}

DoublingPlan::DoublingPlan(int universe) : universe_(universe) {
  if (universe <= 0) throw input_error("instance has no purchasable elements");
}

int DoublingPlan::route_arrival() {
  bool need_fresh = instances_.empty() ||
                    (!instances_.back().classic && received_ == instances_.back().guess);
  if (need_fresh) {
    instances_.push_back({next_guess_, next_guess_ > universe_});
    received_ = 0;
    // square the guess; past the universe it never matters again
    if (next_guess_ <= universe_) next_guess_ *= next_guess_;
  }
  ++received_;
  return static_cast<int>(instances_.size()) - 1;
}

}  // namespace netd

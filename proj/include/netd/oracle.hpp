#pragma once

#include <optional>
#include <vector>

#include "netd/problem.hpp"

namespace netd {

enum class OracleKind { exact, gw, pc_gw, jv };

const char* oracle_name(OracleKind k);
OracleKind oracle_from_name(const std::string& name);

// Oracle identity plus the approximation factor the engines budget against.
struct OracleHandle {
  OracleKind kind;
  Rational gamma;

  static OracleHandle make(OracleKind k);
};

// Elements whose price is treated as zero for one oracle call. The engines
// use this to hand the cheap-element bundle to the solver for free.
struct CostOverride {
  ElementSet zeroed;

  static CostOverride none(int universe) { return CostOverride{ElementSet(universe)}; }
};

// nullopt = infinite penalty: the request must be served.
using Penalty = std::optional<Rational>;

struct OfflineSolution {
  ElementSet elements;            // bought elements, including free ones it relies on
  std::vector<int> served;        // indices into the Q of the call, ascending
  std::optional<FLSolution> fl;   // facility runs carry openings + assignment
  Rational cost;                  // overridden element prices + penalties + connections
};

inline constexpr int kDefaultExactCap = 20;

// Minimum-cost element set satisfying every request. Exponential in the
// number of positively-priced elements; refuses universes above `cap`.
OfflineSolution exact_nd(const ProblemInstance& inst, const std::vector<RequestPayload>& requests,
                         const CostOverride& override_, int cap = kDefaultExactCap);

// Prize-collecting variant: unserved requests pay their penalty instead.
OfflineSolution exact_pcnd(const ProblemInstance& inst,
                           const std::vector<RequestPayload>& requests,
                           const std::vector<Penalty>& penalties, const CostOverride& override_,
                           int cap = kDefaultExactCap);

// Primal-dual moat growing for the edge-weighted connection families
// (pairs and strong subsets). Factor 2.
OfflineSolution gw_steiner_forest(const ProblemInstance& inst,
                                  const std::vector<RequestPayload>& requests,
                                  const CostOverride& override_);

// Same growth with per-request penalty caps: a request whose accumulated
// dual reaches its penalty drops out and pays. Factor 3, checked empirically
// against the exact solver.
OfflineSolution pc_gw_steiner_forest(const ProblemInstance& inst,
                                     const std::vector<RequestPayload>& requests,
                                     const std::vector<Penalty>& penalties,
                                     const CostOverride& override_);

// Primal-dual facility location (factor 3). Empty `penalties` means plain
// facility location; with penalties a request may pay instead of connecting.
OfflineSolution jv_facility_location(const ProblemInstance& inst,
                                     const std::vector<RequestPayload>& requests,
                                     const std::vector<Penalty>& penalties,
                                     const CostOverride& override_);

// Family-aware dispatch. nd_of must serve everything; pcnd_of may leave
// requests at their penalty. gw has no prize-collecting mode.
OfflineSolution nd_of(const OracleHandle& oracle, const ProblemInstance& inst,
                      const std::vector<RequestPayload>& requests, const CostOverride& override_,
                      int cap = kDefaultExactCap);
OfflineSolution pcnd_of(const OracleHandle& oracle, const ProblemInstance& inst,
                        const std::vector<RequestPayload>& requests,
                        const std::vector<Penalty>& penalties, const CostOverride& override_,
                        int cap = kDefaultExactCap);

// Shared helpers (also used by engines and the simulator audit).
Rational element_set_cost(const ProblemInstance& inst, const ElementSet& elements,
                          const CostOverride& override_);
std::vector<int> served_by(const ProblemInstance& inst,
                           const std::vector<RequestPayload>& requests,
                           const ElementSet& elements);
void require_satisfiable(const ProblemInstance& inst,
                         const std::vector<RequestPayload>& requests);

}  // namespace netd

#include "netd/oracle.hpp"

#include "netd/errors.hpp"

namespace netd {

const char* oracle_name(OracleKind k) {
  switch (k) {
    case OracleKind::exact: return "exact";
    case OracleKind::gw: return "gw";
    case OracleKind::pc_gw: return "pcgw";
    case OracleKind::jv: return "jv";
  }
  throw internal_error("unknown oracle kind");
}

OracleKind oracle_from_name(const std::string& name) {
  for (OracleKind k : {OracleKind::exact, OracleKind::gw, OracleKind::pc_gw, OracleKind::jv})
    if (name == oracle_name(k)) return k;
  throw input_error("unknown oracle: " + name);
}

OracleHandle OracleHandle::make(OracleKind k) {
  switch (k) {
    case OracleKind::exact: return {k, Rational(1)};
    case OracleKind::gw: return {k, Rational(2)};
    case OracleKind::pc_gw: return {k, Rational(3)};
    case OracleKind::jv: return {k, Rational(3)};
  }
  throw internal_error("unknown oracle kind");
}

Rational element_set_cost(const ProblemInstance& inst, const ElementSet& elements,
                          const CostOverride& override_) {
  if (elements.universe() != inst.element_count() ||
      override_.zeroed.universe() != inst.element_count())
    throw input_error("element set universe mismatch");
  Rational total(0);
  for (int e = 0; e < inst.element_count(); ++e)
    if (elements.contains(e) && !override_.zeroed.contains(e)) total += inst.element_cost(e);
  return total;
}

std::vector<int> served_by(const ProblemInstance& inst,
                           const std::vector<RequestPayload>& requests,
                           const ElementSet& elements) {
  std::vector<int> out;
  for (std::size_t i = 0; i < requests.size(); ++i)
    if (satisfies(inst, requests[i], elements)) out.push_back(static_cast<int>(i));
  return out;
}

void require_satisfiable(const ProblemInstance& inst,
                         const std::vector<RequestPayload>& requests) {
  if (inst.kind == ProblemKind::facility_location) {
    // a facility can always open at the demand node itself
    for (const RequestPayload& r : requests) validate_payload(inst, r);
    return;
  }
  ElementSet everything = ElementSet::full(inst.element_count());
  for (std::size_t i = 0; i < requests.size(); ++i)
    if (!satisfies(inst, requests[i], everything))
      throw infeasible_error("request " + std::to_string(i) +
                             " cannot be satisfied by any element set");
}

namespace {

bool is_edge_steiner(ProblemKind k) {
  return k == ProblemKind::steiner_forest || k == ProblemKind::strong_steiner_forest;
}

std::vector<Penalty> all_infinite(std::size_t n) { return std::vector<Penalty>(n); }

}  // namespace

OfflineSolution nd_of(const OracleHandle& oracle, const ProblemInstance& inst,
                      const std::vector<RequestPayload>& requests, const CostOverride& override_,
                      int cap) {
  switch (oracle.kind) {
    case OracleKind::exact:
      return exact_nd(inst, requests, override_, cap);
    case OracleKind::gw:
      if (!is_edge_steiner(inst.kind))
        throw config_error("gw oracle only covers the edge-weighted connection families");
      return gw_steiner_forest(inst, requests, override_);
    case OracleKind::pc_gw:
      if (!is_edge_steiner(inst.kind))
        throw config_error("pcgw oracle only covers the edge-weighted connection families");
      return pc_gw_steiner_forest(inst, requests, all_infinite(requests.size()), override_);
    case OracleKind::jv:
      if (inst.kind != ProblemKind::facility_location)
        throw config_error("jv oracle only covers facility location");
      return jv_facility_location(inst, requests, {}, override_);
  }
  throw internal_error("unknown oracle kind");
}

OfflineSolution pcnd_of(const OracleHandle& oracle, const ProblemInstance& inst,
                        const std::vector<RequestPayload>& requests,
                        const std::vector<Penalty>& penalties, const CostOverride& override_,
                        int cap) {
  if (penalties.size() != requests.size())
    throw input_error("one penalty per request expected");
  switch (oracle.kind) {
    case OracleKind::exact:
      return exact_pcnd(inst, requests, penalties, override_, cap);
    case OracleKind::gw:
      throw config_error("gw oracle has no prize-collecting mode; use pcgw");
    case OracleKind::pc_gw:
      if (!is_edge_steiner(inst.kind))
        throw config_error("pcgw oracle only covers the edge-weighted connection families");
      return pc_gw_steiner_forest(inst, requests, penalties, override_);
    case OracleKind::jv:
      if (inst.kind != ProblemKind::facility_location)
        throw config_error("jv oracle only covers facility location");
      return jv_facility_location(inst, requests, penalties, override_);
  }
  throw internal_error("unknown oracle kind");
}

}  // namespace netd

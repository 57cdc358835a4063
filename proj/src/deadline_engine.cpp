#include "netd/deadline_engine.hpp"

#include <algorithm>

#include "netd/errors.hpp"

namespace netd {

namespace {

Rational fl_connections(const ProblemInstance& inst, const FLSolution& fl,
                        const std::map<int, RequestPayload>& payload_of) {
  Rational total(0);
  for (const auto& [id, node] : fl.assignment) {
    auto d = shortest_dist(inst.graph, node, payload_of.at(id).terminals.at(0));
    if (!d) throw internal_error("assigned facility is unreachable");
    total += *d;
  }
  return total;
}

}  // namespace

DeadlineEngine::DeadlineEngine(ProblemInstance inst, OracleHandle oracle, ServeMode mode,
                               E0Mode e0_mode, std::optional<long long> khat)
    : inst_(std::move(inst)), oracle_(oracle), mode_(mode), e0_mode_(e0_mode), khat_(khat) {
  if (e0_mode_ == E0Mode::request_union) {
    if (inst_.kind == ProblemKind::facility_location)
      throw config_error("the request-union bundle has no facility location form");
    if (!khat_) throw input_error("request-union mode needs a request-count guess");
  }
}

ElementSet DeadlineEngine::build_e0(int level) const {
  if (e0_mode_ == E0Mode::element_threshold) return cheap_element_bundle(inst_, level);
  std::vector<OwnedSolution> owned;
  for (const auto& [id, entry] : pending_)
    owned.push_back({id, &entry.payload, &entry.own_elements, entry.own_cost});
  return request_union_bundle(inst_, oracle_.gamma, level, *khat_, owned);
}

std::optional<DeadlineServiceRecord> DeadlineEngine::on_arrival(const DeadlineRequest& r) {
  validate_payload(inst_, r.payload);
  if (pending_.count(r.id)) throw input_error("request id already pending");
  if (r.deadline < r.release) throw input_error("deadline precedes release");

  OfflineSolution own = nd_of(oracle_, inst_, {r.payload}, CostOverride::none(inst_.element_count()));
  ++oracle_calls_;

  if (own.cost == 0) {
    // Nothing to pay for: transmit the free solution on the spot.
    DeadlineServiceRecord rec;
    rec.time = r.release;
    rec.free_service = true;
    rec.trigger = r.id;
    rec.e0_mode = e0_mode_;
    rec.e0 = ElementSet(inst_.element_count());
    rec.transmitted = own.elements;
    rec.served.push_back(r.id);
    rec.oracle_calls = 1;
    if (own.fl) {
      FLSolution fl;
      fl.facilities = own.fl->facilities;
      fl.assignment[r.id] = own.fl->assignment.at(0);
      rec.fl = std::move(fl);
    } else if (mode_ == ServeMode::all_satisfied) {
      for (auto it = pending_.begin(); it != pending_.end();) {
        if (satisfies(inst_, it->second.payload, rec.transmitted)) {
          rec.served.push_back(it->first);
          it = pending_.erase(it);
        } else {
          ++it;
        }
      }
      std::sort(rec.served.begin(), rec.served.end());
    }
    return rec;
  }

  Entry entry{r.payload,
              r.release,
              r.deadline,
              floor_log2(own.cost / oracle_.gamma),
              std::move(own.elements),
              std::move(own.cost),
              std::move(own.fl)};
  pending_.emplace(r.id, std::move(entry));
  return std::nullopt;
}

std::optional<std::pair<Rational, int>> DeadlineEngine::next_trigger() const {
  std::optional<std::pair<Rational, int>> best;
  for (const auto& [id, entry] : pending_)
    if (!best || entry.deadline < best->first) best = {entry.deadline, id};
  return best;
}

std::vector<int> DeadlineEngine::collect_served(const ElementSet& transmitted,
                                                const std::vector<int>& planned) {
  std::vector<int> served = planned;
  if (mode_ == ServeMode::all_satisfied && inst_.kind != ProblemKind::facility_location) {
    for (const auto& [id, entry] : pending_)
      if (satisfies(inst_, entry.payload, transmitted)) served.push_back(id);
  }
  std::sort(served.begin(), served.end());
  served.erase(std::unique(served.begin(), served.end()), served.end());
  return served;
}

DeadlineServiceRecord DeadlineEngine::run_service(const Rational& now) {
  auto trig = next_trigger();
  if (!trig) throw internal_error("service requested with nothing pending");
  const Entry& trigger = pending_.at(trig->second);

  DeadlineServiceRecord rec;
  rec.time = now;
  rec.trigger = trig->second;
  rec.level = trigger.level + 1;
  rec.e0_mode = e0_mode_;
  const Rational scale = pow2(rec.level);
  const Rational shared_cutoff = oracle_.gamma * scale;

  rec.e0 = build_e0(rec.level);
  CostOverride prepaid{rec.e0};

  std::vector<int> eligible;
  for (const auto& [id, entry] : pending_)
    if (entry.level <= rec.level) eligible.push_back(id);
  std::sort(eligible.begin(), eligible.end(), [&](int a, int b) {
    const Entry& ea = pending_.at(a);
    const Entry& eb = pending_.at(b);
    if (ea.deadline != eb.deadline) return ea.deadline < eb.deadline;
    return a < b;
  });

  // Fold eligible requests into one shared solution until it stops being
  // cheap; the request that crossed the line rides on its private solution.
  ElementSet shared(inst_.element_count());
  Rational shared_cost(0);
  std::optional<FLSolution> shared_fl;
  std::vector<RequestPayload> payloads;
  for (int id : eligible) {
    payloads.push_back(pending_.at(id).payload);
    OfflineSolution sol = nd_of(oracle_, inst_, payloads, prepaid);
    ++rec.oracle_calls;
    if (sol.cost >= shared_cutoff) {
      rec.rider = id;
      break;
    }
    shared = std::move(sol.elements);
    shared_cost = std::move(sol.cost);
    shared_fl = std::move(sol.fl);
    rec.batch.push_back(id);
  }

  rec.transmitted = rec.e0 | shared;
  if (rec.rider) rec.transmitted |= pending_.at(*rec.rider).own_elements;

  rec.e0_cost = element_set_cost(inst_, rec.e0, CostOverride::none(inst_.element_count()));
  rec.shared_cost = shared_cost;
  rec.rider_cost = rec.rider ? pending_.at(*rec.rider).own_cost : Rational(0);
  rec.e0_limit = e0_mode_ == E0Mode::element_threshold ? scale : oracle_.gamma * scale;
  rec.shared_limit = shared_cutoff;
  rec.rider_limit = 2 * shared_cutoff;
  rec.total_limit = rec.e0_limit + 3 * oracle_.gamma * scale;

  std::vector<int> planned = rec.batch;
  if (rec.rider) planned.push_back(*rec.rider);
  rec.served = collect_served(rec.transmitted, planned);

  if (inst_.kind == ProblemKind::facility_location) {
    FLSolution fl;
    fl.facilities = rec.transmitted.ids();
    for (std::size_t i = 0; i < rec.batch.size(); ++i)
      fl.assignment[rec.batch[i]] = shared_fl->assignment.at(static_cast<int>(i));
    if (rec.rider) fl.assignment[*rec.rider] = pending_.at(*rec.rider).own_fl->assignment.at(0);
    std::map<int, RequestPayload> payload_of;
    for (int id : rec.served) payload_of[id] = pending_.at(id).payload;
    rec.transmit_cost =
        element_set_cost(inst_, rec.transmitted, CostOverride::none(inst_.element_count())) +
        fl_connections(inst_, fl, payload_of);
    rec.fl = std::move(fl);
  } else {
    rec.transmit_cost =
        element_set_cost(inst_, rec.transmitted, CostOverride::none(inst_.element_count()));
  }

  for (int id : rec.served) pending_.erase(id);
  for (int id : eligible) {
    auto it = pending_.find(id);
    if (it == pending_.end()) continue;
    it->second.level = rec.level;
    rec.upgraded.push_back(id);
  }
  std::sort(rec.upgraded.begin(), rec.upgraded.end());
  oracle_calls_ += rec.oracle_calls;
  return rec;
}

std::vector<DeadlineEngine::PendingView> DeadlineEngine::pending() const {
  std::vector<PendingView> out;
  for (const auto& [id, entry] : pending_)
    out.push_back({id, entry.deadline, entry.level, entry.own_cost});
  return out;
}

}  // namespace netd

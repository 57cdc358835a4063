#include "netd/delay_engine.hpp"

#include <algorithm>
#include <set>

#include "netd/errors.hpp"

namespace netd {

DelayEngine::DelayEngine(ProblemInstance inst, OracleHandle oracle, ServeMode mode,
                         E0Mode e0_mode, std::optional<long long> khat)
    : inst_(std::move(inst)), oracle_(oracle), mode_(mode), e0_mode_(e0_mode), khat_(khat) {
  if (e0_mode_ == E0Mode::request_union) {
    if (inst_.kind == ProblemKind::facility_location)
      throw config_error("the request-union bundle has no facility location form");
    if (!khat_) throw input_error("request-union mode needs a request-count guess");
  }
}

ElementSet DelayEngine::build_e0(int level) const {
  if (e0_mode_ == E0Mode::element_threshold) return cheap_element_bundle(inst_, level);
  std::vector<OwnedSolution> owned;
  for (const auto& [id, entry] : pending_)
    owned.push_back({id, &entry.payload, &entry.own_elements, entry.own_cost});
  return request_union_bundle(inst_, oracle_.gamma, level, *khat_, owned);
}

std::optional<DelayServiceRecord> DelayEngine::on_arrival(const DelayRequest& r) {
  validate_payload(inst_, r.payload);
  if (pending_.count(r.id)) throw input_error("request id already pending");

  OfflineSolution own =
      nd_of(oracle_, inst_, {r.payload}, CostOverride::none(inst_.element_count()));
  ++oracle_calls_;

  if (own.cost == 0) {
    DelayServiceRecord rec;
    rec.time = r.delay.release();
    rec.free_service = true;
    rec.e0_mode = e0_mode_;
    rec.e0 = ElementSet(inst_.element_count());
    rec.s_elements = own.elements;
    rec.transmitted = own.elements;
    rec.served.push_back(r.id);
    rec.oracle_calls = 1;
    if (own.fl) {
      FLSolution fl;
      fl.facilities = own.fl->facilities;
      fl.assignment[r.id] = own.fl->assignment.at(0);
      rec.fl = std::move(fl);
    }
    return rec;
  }

  Entry entry{r.payload,
              r.delay,
              floor_log2(own.cost / oracle_.gamma),
              Rational(0),
              std::move(own.elements),
              std::move(own.cost),
              std::move(own.fl)};
  pending_.emplace(r.id, std::move(entry));
  return std::nullopt;
}

std::optional<std::pair<Rational, int>> DelayEngine::next_critical(const Rational& from) const {
  std::set<int> levels;
  for (const auto& [id, entry] : pending_) levels.insert(entry.level);
  std::optional<std::pair<Rational, int>> best;
  for (int j : levels) {
    ClampedSum pooled;
    for (const auto& [id, entry] : pending_)
      if (entry.level <= j) pooled.add(entry.delay, entry.h);
    Rational hit = pooled.earliest_reach(pow2(j), from);
    if (!best || hit < best->first) best = {hit, j};
  }
  return best;
}

void DelayEngine::force_level(int id, int level) {
  pending_.at(id).level = level;
}

DelayServiceRecord DelayEngine::run_service(const Rational& now, int critical_level) {
  DelayServiceRecord rec;
  rec.time = now;
  rec.critical_level = critical_level;
  rec.level = critical_level + 1;
  rec.e0_mode = e0_mode_;
  const Rational scale = pow2(rec.level);
  const Rational cutoff = oracle_.gamma * scale;

  // Pay off everything the eligible requests are owed so far; their counters
  // catch up to the present and the forwarding loop measures from here.
  for (auto& [id, entry] : pending_) {
    if (entry.level > rec.level) continue;
    rec.q_lambda.push_back(id);
    rec.h_before[id] = entry.h;
    Rational owed = entry.delay.value(now) - entry.h;
    if (owed < 0) owed = Rational(0);
    rec.cleaning[id] = owed;
    entry.h += owed;
    rec.h_frozen[id] = entry.h;
    rec.cleaning_cost += owed;
  }
  if (rec.q_lambda.empty()) throw internal_error("critical service with no eligible request");
  const int k = static_cast<int>(rec.q_lambda.size());

  rec.e0 = build_e0(rec.level);
  CostOverride prepaid{rec.e0};

  std::vector<RequestPayload> payloads;
  for (int id : rec.q_lambda) payloads.push_back(pending_.at(id).payload);
  auto future_penalty = [&](int id, const Rational& at) {
    Rational p = pending_.at(id).delay.value(at) - rec.h_frozen.at(id);
    return p < 0 ? Rational(0) : p;
  };

  // Forwarding loop: march a horizon that accrues one allowance of future
  // delay among the unserved, and retry the prize-collecting solve with the
  // matching penalties. Stop as soon as the solve stops being cheap.
  std::vector<int> s_served;  // indices into q_lambda
  std::optional<FLSolution> s_fl;
  Rational t_prime = now;
  rec.s_elements = ElementSet(inst_.element_count());
  const int guard = 4 * k * k + 8;
  for (;;) {
    if (++rec.forward_iterations > guard)
      throw internal_error("forwarding loop exceeded its iteration guard");
    std::vector<char> is_served(k, 0);
    for (int i : s_served) is_served[i] = 1;
    ClampedSum pending_penalty;
    for (int i = 0; i < k; ++i)
      if (!is_served[i])
        pending_penalty.add(pending_.at(rec.q_lambda[i]).delay, rec.h_frozen.at(rec.q_lambda[i]));
    if (pending_penalty.empty()) {
      rec.tau = t_prime;
      break;
    }
    Rational t2 =
        pending_penalty.earliest_reach(pending_penalty.value(t_prime) + cutoff, t_prime);
    std::vector<Penalty> pen;
    for (int id : rec.q_lambda) pen.emplace_back(future_penalty(id, t2));
    OfflineSolution sol = pcnd_of(oracle_, inst_, payloads, pen, prepaid);
    ++rec.oracle_calls;
    if (sol.cost >= cutoff) {
      rec.imperfect = true;
      rec.tau = t2;
      break;
    }
    rec.s_elements = std::move(sol.elements);
    s_fl = std::move(sol.fl);
    s_served = std::move(sol.served);
    t_prime = t2;
  }

  // A service must serve someone; when the kept solution serves nobody the
  // lowest eligible id rides its private solution.
  if (s_served.empty()) rec.singleton = rec.q_lambda.front();

  rec.transmitted = rec.e0 | rec.s_elements;
  if (rec.singleton) rec.transmitted |= pending_.at(*rec.singleton).own_elements;

  std::set<int> served_ids;
  for (int i : s_served) served_ids.insert(rec.q_lambda[i]);
  if (rec.singleton) served_ids.insert(*rec.singleton);

  FLSolution fl;
  Rational fl_connection_cost(0);  // every connection, for the transmission total
  Rational s_connection_cost(0);   // connections of requests the shared solution serves
  if (inst_.kind == ProblemKind::facility_location) {
    fl.facilities = rec.transmitted.ids();
    for (std::size_t i = 0; i < s_served.size(); ++i) {
      int id = rec.q_lambda[s_served[i]];
      int node = s_fl->assignment.at(s_served[i]);
      fl.assignment[id] = node;
      auto d = shortest_dist(inst_.graph, node, pending_.at(id).payload.terminals.at(0));
      if (!d) throw internal_error("assigned facility is unreachable");
      fl_connection_cost += *d;
      s_connection_cost += *d;
    }
    if (rec.singleton) {
      const Entry& solo = pending_.at(*rec.singleton);
      int node = solo.own_fl->assignment.at(0);
      fl.assignment[*rec.singleton] = node;
      auto d = shortest_dist(inst_.graph, node, solo.payload.terminals.at(0));
      if (!d) throw internal_error("assigned facility is unreachable");
      fl_connection_cost += *d;
    }

    // Connection pass for the rest: a facility already transmitted may be
    // close enough that the counter plus the planned investment covers the
    // trip; those requests connect now instead of waiting.
    std::vector<int> connectable = rec.e0.ids();
    for (int u : rec.s_elements.ids()) connectable.push_back(u);
    std::sort(connectable.begin(), connectable.end());
    connectable.erase(std::unique(connectable.begin(), connectable.end()), connectable.end());
    for (int id : rec.q_lambda) {
      if (served_ids.count(id)) continue;
      Entry& entry = pending_.at(id);
      std::optional<Rational> dist;
      int at = -1;
      for (int u : connectable) {
        auto d = shortest_dist(inst_.graph, u, entry.payload.terminals.at(0));
        if (d && (!dist || *d < *dist)) {
          dist = *d;
          at = u;
        }
      }
      Rational pi = future_penalty(id, rec.tau);
      if (dist && entry.h + pi >= *dist) {
        if (entry.h < *dist) entry.h = *dist;
        fl.assignment[id] = at;
        rec.connections[id] = *dist;
        fl_connection_cost += *dist;
        served_ids.insert(id);
      }
    }
  } else if (mode_ == ServeMode::all_satisfied) {
    for (int id : rec.q_lambda) {
      if (served_ids.count(id)) continue;
      if (satisfies(inst_, pending_.at(id).payload, rec.transmitted)) served_ids.insert(id);
    }
  }

  // Whoever stays pays forward: the probe horizon's delay lands in the
  // counter and the request moves up to the service level.
  for (int id : rec.q_lambda) {
    if (served_ids.count(id)) continue;
    Entry& entry = pending_.at(id);
    Rational pi = future_penalty(id, rec.tau);
    rec.investments[id] = pi;
    entry.h += pi;
    entry.level = rec.level;
    rec.upgraded.push_back(id);
    rec.h_after[id] = entry.h;
  }

  rec.served.assign(served_ids.begin(), served_ids.end());
  CostOverride no_override = CostOverride::none(inst_.element_count());
  rec.e0_cost = element_set_cost(inst_, rec.e0, no_override);
  rec.pc_part = element_set_cost(inst_, rec.s_elements, prepaid) + s_connection_cost;
  for (const auto& [id, pi] : rec.investments) rec.pc_part += pi;
  rec.singleton_cost = rec.singleton ? pending_.at(*rec.singleton).own_cost : Rational(0);
  rec.budget_cost = rec.cleaning_cost + rec.e0_cost + rec.pc_part + rec.singleton_cost;
  rec.transmit_cost = element_set_cost(inst_, rec.transmitted, no_override) + fl_connection_cost;

  rec.cleaning_limit = scale;
  rec.e0_limit = e0_mode_ == E0Mode::element_threshold ? scale : oracle_.gamma * scale;
  rec.pc_limit = 2 * cutoff;
  rec.singleton_limit = 2 * cutoff;
  rec.budget_limit = rec.cleaning_limit + rec.e0_limit + rec.pc_limit + rec.singleton_limit;

  if (inst_.kind == ProblemKind::facility_location) rec.fl = std::move(fl);
  for (int id : rec.served) pending_.erase(id);
  oracle_calls_ += rec.oracle_calls;
  return rec;
}

std::vector<DelayEngine::PendingView> DelayEngine::pending(const Rational& at) const {
  std::vector<PendingView> out;
  for (const auto& [id, entry] : pending_) {
    Rational residual = entry.delay.value(at) - entry.h;
    if (residual < 0) residual = Rational(0);
    out.push_back({id, entry.level, entry.h, residual});
  }
  return out;
}

}  // namespace netd

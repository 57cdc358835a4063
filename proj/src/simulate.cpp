#include "netd/simulate.hpp"

#include <algorithm>
#include <memory>
#include <set>
#include <sstream>

#include "netd/errors.hpp"
#include "netd/regime.hpp"

namespace netd {

const char* regime_name(E0Mode m) {
  return m == E0Mode::element_threshold ? "classic" : "request-based";
}

E0Mode regime_from_name(const std::string& name) {
  if (name == "classic") return E0Mode::element_threshold;
  if (name == "request-based") return E0Mode::request_union;
  throw input_error("unknown regime: " + name);
}

const char* serve_name(ServeMode m) {
  return m == ServeMode::all_satisfied ? "all-satisfied" : "batch-only";
}

ServeMode serve_from_name(const std::string& name) {
  if (name == "all-satisfied") return ServeMode::all_satisfied;
  if (name == "batch-only") return ServeMode::batch_only;
  throw input_error("unknown serve mode: " + name);
}

namespace {

void run_deadline(const InstanceSpec& spec, const SimConfig& config, RunTrace& trace) {
  OracleHandle oracle = OracleHandle::make(config.oracle);
  std::vector<std::unique_ptr<DeadlineEngine>> engines;
  std::optional<DoublingPlan> plan;
  if (config.regime == E0Mode::request_union) plan.emplace(spec.instance.element_count());

  auto engine_for_arrival = [&]() -> DeadlineEngine& {
    int idx = 0;
    if (plan) idx = plan->route_arrival();
    if (idx == static_cast<int>(engines.size())) {
      bool classic = !plan || plan->instances()[idx].classic;
      if (classic)
        engines.push_back(std::make_unique<DeadlineEngine>(spec.instance, oracle, config.serve));
      else
        engines.push_back(std::make_unique<DeadlineEngine>(spec.instance, oracle, config.serve,
                                                           E0Mode::request_union,
                                                           plan->instances()[idx].guess));
    }
    return *engines[idx];
  };

  auto absorb = [&](const DeadlineServiceRecord& rec) {
    trace.transmit_total += rec.transmit_cost;
    for (int id : rec.served) trace.served_at[id] = rec.time;
    trace.deadline_services.push_back(rec);
  };

  std::size_t next = 0;
  for (;;) {
    int with_trigger = -1;
    std::optional<std::pair<Rational, int>> best;
    for (std::size_t i = 0; i < engines.size(); ++i) {
      auto trig = engines[i]->next_trigger();
      if (trig && (!best || *trig < *best)) {
        best = trig;
        with_trigger = static_cast<int>(i);
      }
    }
    bool arrival =
        next < spec.requests.size() && (!best || spec.requests[next].release <= best->first);
    if (arrival) {
      const RequestSpec& r = spec.requests[next++];
      if (auto rec = engine_for_arrival().on_arrival({r.id, r.payload, r.release, *r.deadline}))
        absorb(*rec);
    } else if (best) {
      absorb(engines[with_trigger]->run_service(best->first));
    } else {
      break;
    }
  }
  for (const auto& e : engines) trace.oracle_calls += e->oracle_calls();
  if (plan)
    for (const auto& info : plan->instances()) trace.doubling_guesses.push_back(info.guess);
  trace.alg_total = trace.transmit_total;
}

void run_delay(const InstanceSpec& spec, const SimConfig& config, RunTrace& trace) {
  OracleHandle oracle = OracleHandle::make(config.oracle);
  std::vector<std::unique_ptr<DelayEngine>> engines;
  std::optional<DoublingPlan> plan;
  if (config.regime == E0Mode::request_union) plan.emplace(spec.instance.element_count());

  std::map<int, const DelayFunction*> delay_of;
  for (const RequestSpec& r : spec.requests) delay_of[r.id] = &*r.delay;

  auto engine_for_arrival = [&]() -> DelayEngine& {
    int idx = 0;
    if (plan) idx = plan->route_arrival();
    if (idx == static_cast<int>(engines.size())) {
      bool classic = !plan || plan->instances()[idx].classic;
      if (classic)
        engines.push_back(std::make_unique<DelayEngine>(spec.instance, oracle, config.serve));
      else
        engines.push_back(std::make_unique<DelayEngine>(spec.instance, oracle, config.serve,
                                                        E0Mode::request_union,
                                                        plan->instances()[idx].guess));
    }
    return *engines[idx];
  };

  auto absorb = [&](const DelayServiceRecord& rec) {
    trace.transmit_total += rec.transmit_cost;
    for (int id : rec.served) {
      trace.served_at[id] = rec.time;
      trace.realized_delay[id] = delay_of.at(id)->value(rec.time);
      Rational h(0);
      if (!rec.free_service) {
        h = rec.h_frozen.at(id);
        auto conn = rec.connections.find(id);
        if (conn != rec.connections.end() && conn->second > h) h = conn->second;
      }
      trace.final_h[id] = h;
    }
    trace.delay_services.push_back(rec);
  };

  std::size_t next = 0;
  Rational now(0);
  for (;;) {
    int with_critical = -1;
    std::optional<std::pair<Rational, int>> best;
    for (std::size_t i = 0; i < engines.size(); ++i) {
      auto crit = engines[i]->next_critical(now);
      if (crit && (!best || *crit < *best)) {
        best = crit;
        with_critical = static_cast<int>(i);
      }
    }
    bool arrival =
        next < spec.requests.size() && (!best || spec.requests[next].release <= best->first);
    if (arrival) {
      const RequestSpec& r = spec.requests[next++];
      now = r.release;
      if (auto rec = engine_for_arrival().on_arrival({r.id, r.payload, *r.delay})) absorb(*rec);
    } else if (best) {
      now = best->first;
      absorb(engines[with_critical]->run_service(best->first, best->second));
    } else {
      break;
    }
  }
  for (const auto& e : engines) trace.oracle_calls += e->oracle_calls();
  if (plan)
    for (const auto& info : plan->instances()) trace.doubling_guesses.push_back(info.guess);
  for (const auto& [id, d] : trace.realized_delay) trace.delay_total += d;
  for (const auto& [id, h] : trace.final_h) trace.h_total += h;
  trace.alg_total = trace.transmit_total + trace.delay_total;
}

}  // namespace

RunTrace simulate(const InstanceSpec& spec, const SimConfig& config) {
  validate_spec(spec);
  RunTrace trace{spec, config};
  if (spec.mode == RunMode::deadline)
    run_deadline(spec, config, trace);
  else
    run_delay(spec, config, trace);
  return trace;
}

namespace {

// Incremental replay of the requests' counters and levels through the
// service records, for the pooled-residual checks. Requests pool per engine
// instance: in the request-union regime the doubling router spreads arrivals
// over separate engines, and the allowance is a per-engine property.
struct PoolState {
  struct Member {
    const RequestSpec* req;
    int group;
    Rational h;
    int level;
    bool served = false;
  };
  std::map<int, Member> members;  // non-free requests only

  void apply(const DelayServiceRecord& rec) {
    if (rec.free_service) return;
    for (int id : rec.q_lambda) members.at(id).h = rec.h_frozen.at(id);
    for (const auto& [id, dist] : rec.connections)
      if (dist > members.at(id).h) members.at(id).h = dist;
    for (const auto& [id, pi] : rec.investments) members.at(id).h += pi;
    for (int id : rec.upgraded) members.at(id).level = rec.level;
    for (int id : rec.served) {
      auto it = members.find(id);
      if (it != members.end()) it->second.served = true;
    }
  }

  Rational pool(int group, int max_level, const Rational& t) const {
    Rational sum(0);
    for (const auto& [id, m] : members) {
      if (m.served || m.group != group || m.level > max_level || m.req->release > t) continue;
      Rational rho = m.req->delay->value(t) - m.h;
      if (rho > 0) sum += rho;
    }
    return sum;
  }

  // Every (engine, level) pool present at time t.
  std::vector<std::pair<std::pair<int, int>, Rational>> pools(const Rational& t) const {
    std::set<std::pair<int, int>> keys;
    for (const auto& [id, m] : members)
      if (!m.served && m.req->release <= t) keys.insert({m.group, m.level});
    std::vector<std::pair<std::pair<int, int>, Rational>> out;
    for (const auto& [group, level] : keys)
      out.push_back({{group, level}, pool(group, level, t)});
    return out;
  }
};

std::string at_time(const Rational& t) { return " at t=" + to_fraction(t); }

}  // namespace

bool all_passed(const std::vector<CheckResult>& checks) {
  for (const CheckResult& c : checks)
    if (!c.pass) return false;
  return true;
}

std::vector<CheckResult> audit_trace(const RunTrace& trace) {
  std::vector<CheckResult> out;
  auto add = [&](const std::string& name, bool pass, const std::string& detail) {
    out.push_back({name, pass, pass ? std::string() : detail});
  };

  const InstanceSpec& spec = trace.spec;
  const OracleHandle oracle = OracleHandle::make(trace.config.oracle);
  const Rational& gamma = oracle.gamma;
  const bool deadline_mode = spec.mode == RunMode::deadline;

  add("mode-records",
      deadline_mode ? trace.delay_services.empty() : trace.deadline_services.empty(),
      "service records of the wrong mode are present");

  {
    bool ok = true;
    std::string detail;
    auto check_order = [&](const auto& recs) {
      for (std::size_t i = 1; i < recs.size(); ++i)
        if (recs[i].time < recs[i - 1].time) {
          ok = false;
          detail = "service records out of time order" + at_time(recs[i].time);
          return;
        }
    };
    check_order(trace.deadline_services);
    check_order(trace.delay_services);
    add("record-order", ok, detail);
  }

  {
    bool ok = true;
    std::string detail;
    if (deadline_mode) {
      for (const auto& rec : trace.deadline_services) {
        if (rec.free_service) continue;
        Rational scale = pow2(rec.level);
        Rational e0_limit =
            trace.config.regime == E0Mode::element_threshold ? scale : gamma * scale;
        if (rec.e0_cost > e0_limit || rec.shared_cost >= gamma * scale ||
            rec.rider_cost >= 2 * gamma * scale ||
            rec.e0_cost + rec.shared_cost + rec.rider_cost > e0_limit + 3 * gamma * scale) {
          ok = false;
          detail = "itemized deadline budget exceeded" + at_time(rec.time);
          break;
        }
      }
    } else {
      for (const auto& rec : trace.delay_services) {
        if (rec.free_service) continue;
        Rational scale = pow2(rec.level);
        Rational e0_limit =
            trace.config.regime == E0Mode::element_threshold ? scale : gamma * scale;
        Rational pc_limit = 2 * gamma * scale;
        Rational sum = rec.cleaning_cost + rec.e0_cost + rec.pc_part + rec.singleton_cost;
        if (rec.cleaning_cost > scale || rec.e0_cost > e0_limit || rec.pc_part > pc_limit ||
            rec.singleton_cost > pc_limit || rec.budget_cost != sum ||
            rec.budget_cost > scale + e0_limit + 2 * pc_limit) {
          ok = false;
          detail = "itemized delay budget exceeded" + at_time(rec.time);
          break;
        }
      }
    }
    add("service-budgets", ok, detail);
  }

  {
    bool ok = true;
    std::string detail;
    std::map<int, int> times_served;
    auto tally = [&](const auto& recs) {
      for (const auto& rec : recs)
        for (int id : rec.served) ++times_served[id];
    };
    tally(trace.deadline_services);
    tally(trace.delay_services);
    for (const RequestSpec& r : spec.requests) {
      auto it = trace.served_at.find(r.id);
      if (it == trace.served_at.end() || times_served[r.id] != 1) {
        ok = false;
        detail = "request " + std::to_string(r.id) + " not served exactly once";
        break;
      }
      if (it->second < r.release) {
        ok = false;
        detail = "request " + std::to_string(r.id) + " served before its release";
        break;
      }
      if (deadline_mode && *r.deadline < it->second) {
        ok = false;
        detail = "request " + std::to_string(r.id) + " served past its deadline";
        break;
      }
    }
    add(deadline_mode ? "deadlines-met" : "all-served", ok, detail);
  }

  {
    Rational transmit(0);
    for (const auto& rec : trace.deadline_services) transmit += rec.transmit_cost;
    for (const auto& rec : trace.delay_services) transmit += rec.transmit_cost;
    Rational expected_alg =
        deadline_mode ? trace.transmit_total : trace.transmit_total + trace.delay_total;
    bool ok = transmit == trace.transmit_total && trace.alg_total == expected_alg;
    add("totals-consistent", ok, "recorded totals disagree with the service records");
  }

  if (deadline_mode) {
    bool ok = true;
    std::string detail;
    for (const auto& rec : trace.deadline_services) {
      if (rec.free_service) continue;
      if (std::find(rec.served.begin(), rec.served.end(), rec.trigger) == rec.served.end()) {
        ok = false;
        detail = "triggering request left unserved" + at_time(rec.time);
        break;
      }
    }
    add("trigger-served", ok, detail);
    return out;
  }

  // Delay-mode checks need each request's starting level, which the engines
  // derive from its private solution under the run's own oracle, and the
  // engine instance the doubling router sent it to.
  PoolState pool;
  std::set<int> free_ids;
  std::optional<DoublingPlan> routing;
  if (trace.config.regime == E0Mode::request_union)
    routing.emplace(spec.instance.element_count());
  for (const RequestSpec& r : spec.requests) {
    int group = routing ? routing->route_arrival() : 0;
    OfflineSolution own =
        nd_of(oracle, spec.instance, {r.payload}, CostOverride::none(spec.instance.element_count()));
    if (own.cost == 0) {
      free_ids.insert(r.id);
      continue;
    }
    pool.members[r.id] = {&r, group, Rational(0), floor_log2(own.cost / gamma), false};
  }

  {
    bool ok = true;
    std::string detail;
    for (const auto& rec : trace.delay_services) {
      if (!rec.free_service) continue;
      if (rec.served.size() != 1 || !free_ids.count(rec.served.front()) ||
          trace.realized_delay.at(rec.served.front()) != 0) {
        ok = false;
        detail = "free service did not serve exactly its arrival" + at_time(rec.time);
        break;
      }
    }
    add("free-at-release", ok, detail);
  }

  {
    // criticality must fire exactly when the triggering pool fills up
    PoolState replay = pool;
    bool ok = true;
    std::string detail;
    for (const auto& rec : trace.delay_services) {
      if (!rec.free_service) {
        int group = replay.members.at(rec.q_lambda.front()).group;
        if (replay.pool(group, rec.critical_level, rec.time) != pow2(rec.critical_level)) {
          ok = false;
          detail = "triggering pool off its allowance" + at_time(rec.time);
          break;
        }
      }
      replay.apply(rec);
    }
    add("critical-pool", ok, detail);
  }

  {
    // pooled residual delay may never overflow any level's allowance, at
    // event times and at every delay-curve breakpoint
    std::set<Rational> points;
    Rational horizon(0);
    for (const auto& rec : trace.delay_services)
      if (rec.time > horizon) horizon = rec.time;
    for (const RequestSpec& r : spec.requests) {
      points.insert(r.release);
      for (const auto& [t, v] : r.delay->breakpoints())
        if (t <= horizon) points.insert(t);
    }
    for (const auto& rec : trace.delay_services) points.insert(rec.time);

    PoolState replay = pool;
    std::size_t cursor = 0;
    bool ok = true;
    std::string detail;
    for (const Rational& t : points) {
      while (cursor < trace.delay_services.size() && trace.delay_services[cursor].time < t)
        replay.apply(trace.delay_services[cursor++]);
      for (const auto& [key, sum] : replay.pools(t)) {
        if (sum > pow2(key.second)) {
          ok = false;
          detail = "pooled residual above 2^" + std::to_string(key.second) + at_time(t);
          break;
        }
      }
      if (!ok) break;
    }
    add("pooled-residual", ok, detail);
  }

  {
    bool ok = true;
    std::string detail;
    Rational realized(0), counters(0);
    for (const auto& [id, d] : trace.realized_delay) realized += d;
    for (const auto& [id, h] : trace.final_h) counters += h;
    if (realized != trace.delay_total || counters != trace.h_total) {
      ok = false;
      detail = "recorded delay totals disagree with the per-request maps";
    } else if (trace.delay_total > trace.h_total) {
      ok = false;
      detail = "realized delay exceeds the invested counters";
    } else {
      for (const auto& [id, d] : trace.realized_delay) {
        if (d > trace.final_h.at(id)) {
          ok = false;
          detail = "request " + std::to_string(id) + " outran its counter";
          break;
        }
      }
    }
    add("delay-domination", ok, detail);
  }

  return out;
}

}  // namespace netd

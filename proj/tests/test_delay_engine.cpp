#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>

#include "netd/delay_engine.hpp"
#include "netd/errors.hpp"
#include "support/fixtures.hpp"

using namespace netd;

namespace {

ProblemInstance single_edge(const Rational& cost) {
  return {ProblemKind::steiner_forest, Graph(2, false, {{0, 0, 1, cost}}), std::nullopt};
}

}  // namespace

TEST_CASE("a lone request triggers at its level and rides the cheap bundle") {
  DelayEngine eng(single_edge(Rational(1)), OracleHandle::make(OracleKind::exact));

  CHECK_FALSE(eng.on_arrival({0, {{0, 1}, 1}, DelayFunction::linear(Rational(1), Rational(1))})
                  .has_value());
  REQUIRE(eng.pending_count() == 1);
  CHECK(eng.pending(Rational(1))[0].level == 0);

  auto crit = eng.next_critical(Rational(0));
  REQUIRE(crit.has_value());
  CHECK(crit->first == Rational(2));  // one unit of delay accrued by then
  CHECK(crit->second == 0);

  DelayServiceRecord rec = eng.run_service(crit->first, crit->second);
  CHECK(rec.time == Rational(2));
  CHECK(rec.level == 1);
  CHECK(rec.q_lambda == std::vector<int>{0});
  CHECK(rec.cleaning.at(0) == Rational(1));
  CHECK(rec.h_frozen.at(0) == Rational(1));
  CHECK(rec.cleaning_cost == Rational(1));
  CHECK(rec.e0.ids() == std::vector<int>{0});  // threshold 2 admits the edge
  CHECK(rec.e0_cost == Rational(1));
  CHECK(rec.forward_iterations == 2);
  CHECK(rec.tau == Rational(4));  // one allowance of future delay ahead
  CHECK_FALSE(rec.imperfect);
  CHECK(rec.s_elements.ids() == std::vector<int>{0});
  CHECK_FALSE(rec.singleton.has_value());
  CHECK(rec.transmitted.ids() == std::vector<int>{0});
  CHECK(rec.transmit_cost == Rational(1));
  CHECK(rec.served == std::vector<int>{0});
  CHECK(rec.investments.empty());
  CHECK(rec.upgraded.empty());
  CHECK(rec.pc_part == Rational(0));
  CHECK(rec.budget_cost == Rational(2));
  CHECK(rec.cleaning_limit == Rational(2));
  CHECK(rec.e0_limit == Rational(2));
  CHECK(rec.pc_limit == Rational(4));
  CHECK(rec.singleton_limit == Rational(4));
  CHECK(rec.budget_limit == Rational(12));
  CHECK(rec.oracle_calls == 1);
  CHECK(eng.oracle_calls() == 2);  // the arrival probe plus the forward solve
  CHECK(eng.pending_count() == 0);
}

TEST_CASE("an early stop hands the trigger its private solution") {
  DelayEngine eng(single_edge(Rational(4)), OracleHandle::make(OracleKind::exact));
  eng.on_arrival({5, {{0, 1}, 1}, DelayFunction::linear(Rational(0), Rational(1))});
  eng.force_level(5, 0);  // the cost rule would start this at level 2

  auto crit = eng.next_critical(Rational(0));
  REQUIRE(crit.has_value());
  CHECK(*crit == std::pair{Rational(1), 0});

  DelayServiceRecord rec = eng.run_service(Rational(1), 0);
  CHECK(rec.level == 1);
  CHECK(rec.cleaning_cost == Rational(1));
  CHECK(rec.e0.count() == 0);  // threshold 2 is below the only edge
  CHECK(rec.forward_iterations == 1);
  CHECK(rec.imperfect);  // paying the penalty matches the allowance
  CHECK(rec.tau == Rational(3));
  CHECK(rec.s_elements.count() == 0);
  REQUIRE(rec.singleton.has_value());
  CHECK(*rec.singleton == 5);
  CHECK(rec.singleton_cost == Rational(4));
  CHECK(rec.transmitted.ids() == std::vector<int>{0});
  CHECK(rec.transmit_cost == Rational(4));
  CHECK(rec.served == std::vector<int>{5});
  CHECK(rec.investments.empty());
  CHECK(rec.pc_part == Rational(0));
  CHECK(rec.budget_cost == Rational(5));
  CHECK(rec.budget_limit == Rational(12));
  CHECK(eng.pending_count() == 0);
}

TEST_CASE("two pairs pool their delay into one shared service") {
  ProblemInstance inst{ProblemKind::steiner_forest, fixtures::triangle(), std::nullopt};
  DelayEngine eng(inst, OracleHandle::make(OracleKind::exact));
  eng.on_arrival({1, {{0, 1}, 1}, DelayFunction::linear(Rational(0), Rational(1))});
  eng.on_arrival({2, {{0, 1}, 1}, DelayFunction::linear(Rational(1), Rational(1))});
  for (const auto& p : eng.pending(Rational(1))) CHECK(p.level == 2);

  auto crit = eng.next_critical(Rational(0));
  REQUIRE(crit.has_value());
  CHECK(*crit == std::pair{Rational(5) / 2, 2});

  DelayServiceRecord rec = eng.run_service(crit->first, crit->second);
  CHECK(rec.level == 3);
  CHECK(rec.q_lambda == std::vector<int>{1, 2});
  CHECK(rec.cleaning.at(1) == Rational(5) / 2);
  CHECK(rec.cleaning.at(2) == Rational(3) / 2);
  CHECK(rec.cleaning_cost == Rational(4));
  CHECK(rec.e0.ids() == std::vector<int>{1, 2});  // threshold 8/3 takes both cheap edges
  CHECK(rec.e0_cost == Rational(4));
  CHECK(rec.tau == Rational(13) / 2);
  CHECK_FALSE(rec.imperfect);
  CHECK(rec.transmitted.ids() == std::vector<int>{1, 2});
  CHECK(rec.transmit_cost == Rational(4));
  CHECK(rec.served == std::vector<int>{1, 2});
  CHECK(rec.pc_part == Rational(0));
  CHECK(rec.budget_cost == Rational(8));
  CHECK(rec.cleaning_limit == Rational(8));
  CHECK(rec.budget_limit == Rational(48));
  CHECK(eng.pending_count() == 0);
}

TEST_CASE("plateaus in the delay curve push the horizon past them") {
  DelayEngine eng(single_edge(Rational(1)), OracleHandle::make(OracleKind::exact));
  DelayFunction plateau({{Rational(0), Rational(0)},
                         {Rational(1), Rational(1)},
                         {Rational(3), Rational(1)}},
                        Rational(1));
  eng.on_arrival({0, {{0, 1}, 1}, plateau});

  auto crit = eng.next_critical(Rational(0));
  REQUIRE(crit.has_value());
  CHECK(*crit == std::pair{Rational(1), 0});

  DelayServiceRecord rec = eng.run_service(Rational(1), 0);
  CHECK(rec.cleaning_cost == Rational(1));
  CHECK(rec.tau == Rational(5));  // the flat stretch delays the horizon
  CHECK_FALSE(rec.imperfect);
  CHECK(rec.served == std::vector<int>{0});
}

TEST_CASE("facility service connects a straggler whose counter covers the trip") {
  std::vector<GraphEdge> edges{{0, 0, 1, Rational(2)}};
  Graph g(2, false, edges, std::vector<Rational>{Rational(1), Rational(50)},
          std::vector<Rational>{Rational(2)});
  ProblemInstance inst{ProblemKind::facility_location, g, std::nullopt};
  DelayEngine eng(inst, OracleHandle::make(OracleKind::exact));

  eng.on_arrival({1, {{0}, 1}, DelayFunction::linear(Rational(0), Rational(1))});
  eng.on_arrival({2, {{1}, 1}, DelayFunction::linear(Rational(0), Rational(1))});
  CHECK(eng.pending(Rational(0))[0].level == 0);
  CHECK(eng.pending(Rational(0))[1].level == 1);

  auto crit = eng.next_critical(Rational(0));
  REQUIRE(crit.has_value());
  CHECK(*crit == std::pair{Rational(1), 0});  // both levels tie, the lower one wins

  DelayServiceRecord rec = eng.run_service(Rational(1), 0);
  CHECK(rec.level == 1);
  CHECK(rec.q_lambda == std::vector<int>{1, 2});
  CHECK(rec.cleaning_cost == Rational(2));
  CHECK(rec.e0.ids() == std::vector<int>{0});
  CHECK(rec.imperfect);  // serving the far demand costs exactly the allowance
  CHECK(rec.tau == Rational(4));
  CHECK(rec.s_elements.ids() == std::vector<int>{0});
  CHECK_FALSE(rec.singleton.has_value());
  REQUIRE(rec.fl.has_value());
  CHECK(rec.fl->facilities == std::vector<int>{0});
  CHECK(rec.fl->assignment.at(1) == 0);
  CHECK(rec.fl->assignment.at(2) == 0);  // connected by the pass, not by the solve
  CHECK(rec.connections.at(2) == Rational(2));
  CHECK(rec.served == std::vector<int>{1, 2});
  CHECK(rec.investments.empty());
  CHECK(rec.pc_part == Rational(0));
  CHECK(rec.transmit_cost == Rational(3));  // opening 1 plus the straggler's trip
  CHECK(eng.pending_count() == 0);

  // the stop certificate: with the bundle free, even the best offline answer
  // pays at least the full allowance at the horizon
  std::vector<RequestPayload> payloads{{{0}, 1}, {{1}, 1}};
  std::vector<Penalty> pens;
  for (int id : rec.q_lambda)
    pens.emplace_back(std::max(Rational(0), Rational(4) - rec.h_frozen.at(id)));
  OfflineSolution replay = exact_pcnd(inst, payloads, pens, CostOverride{rec.e0});
  CHECK(replay.cost >= pow2(rec.level));
}

TEST_CASE("delay services never touch requests above the service level") {
  ProblemInstance inst{ProblemKind::steiner_forest, fixtures::triangle(), std::nullopt};
  std::vector<DelayRequest> reqs{
      {1, {{0, 1}, 1}, DelayFunction::linear(Rational(0), Rational(1))},
      {2, {{0, 2}, 1}, DelayFunction::linear(Rational(0), Rational(1))},
      {3, {{1, 2}, 1}, DelayFunction::linear(Rational(0), Rational(1))},
  };

  DelayEngine greedy(inst, OracleHandle::make(OracleKind::exact), ServeMode::all_satisfied);
  for (const auto& r : reqs) greedy.on_arrival(r);
  greedy.force_level(3, 7);

  auto crit = greedy.next_critical(Rational(0));
  REQUIRE(crit.has_value());
  CHECK(*crit == std::pair{Rational(2), 1});

  DelayServiceRecord rec = greedy.run_service(Rational(2), 1);
  CHECK(rec.q_lambda == std::vector<int>{1, 2});
  CHECK(rec.imperfect);
  REQUIRE(rec.singleton.has_value());
  CHECK(*rec.singleton == 1);
  CHECK(rec.transmitted.ids() == std::vector<int>{1, 2});
  // the transmission happens to link nodes 1 and 2, but request 3 sits above
  // the service level and must stay pending
  CHECK(rec.served == std::vector<int>{1, 2});
  REQUIRE(greedy.pending_count() == 1);
  CHECK(greedy.pending(Rational(2))[0].id == 3);
  CHECK(greedy.pending(Rational(2))[0].h == Rational(0));

  DelayEngine strict(inst, OracleHandle::make(OracleKind::exact), ServeMode::batch_only);
  for (const auto& r : reqs) strict.on_arrival(r);
  strict.force_level(3, 7);
  DelayServiceRecord rec2 = strict.run_service(Rational(2), 1);
  CHECK(rec2.served == std::vector<int>{1});  // only the forced singleton
  CHECK(rec2.investments.at(2) == Rational(2));
  CHECK(rec2.upgraded == std::vector<int>{2});
  CHECK(rec2.h_after.at(2) == Rational(4));
  CHECK(rec2.pc_part == Rational(2));
  REQUIRE(strict.pending_count() == 2);

  auto next = strict.next_critical(Rational(2));
  REQUIRE(next.has_value());
  CHECK(*next == std::pair{Rational(8), 2});  // request 2 must first outgrow its counter
}

TEST_CASE("request-union bundles fold private solutions under the level budget") {
  ProblemInstance inst{ProblemKind::steiner_forest, fixtures::triangle(), std::nullopt};
  DelayEngine eng(inst, OracleHandle::make(OracleKind::exact), ServeMode::all_satisfied,
                  E0Mode::request_union, 2);
  eng.on_arrival({1, {{0, 2}, 1}, DelayFunction::linear(Rational(0), Rational(1))});
  eng.on_arrival({2, {{2, 1}, 1}, DelayFunction::linear(Rational(0), Rational(1))});

  auto crit = eng.next_critical(Rational(0));
  REQUIRE(crit.has_value());
  CHECK(*crit == std::pair{Rational(1), 1});

  DelayServiceRecord rec = eng.run_service(Rational(1), 1);
  CHECK(rec.e0_mode == E0Mode::request_union);
  CHECK(rec.e0.ids() == std::vector<int>{1, 2});  // both private edges fit the split budget
  CHECK(rec.e0_cost == Rational(4));
  CHECK(rec.e0_limit == Rational(4));
  CHECK(rec.served == std::vector<int>{1, 2});
  CHECK_FALSE(rec.imperfect);
}

TEST_CASE("a zero-cost private solution is served on the spot") {
  std::vector<GraphEdge> edges{{0, 0, 1, Rational(0)}, {1, 1, 2, Rational(3)}};
  ProblemInstance inst{ProblemKind::steiner_forest, Graph(3, false, edges), std::nullopt};
  DelayEngine eng(inst, OracleHandle::make(OracleKind::exact));

  eng.on_arrival({1, {{0, 2}, 1}, DelayFunction::linear(Rational(0), Rational(1))});
  auto rec = eng.on_arrival({9, {{0, 1}, 1}, DelayFunction::linear(Rational(7), Rational(2))});
  REQUIRE(rec.has_value());
  CHECK(rec->free_service);
  CHECK(rec->time == Rational(7));
  CHECK(rec->served == std::vector<int>{9});
  CHECK(rec->transmitted.contains(0));
  CHECK(eng.pending_count() == 1);  // the earlier request is untouched
}

TEST_CASE("arrival validation and oracle pairing reject bad configurations") {
  ProblemInstance inst{ProblemKind::steiner_forest, fixtures::triangle(), std::nullopt};
  DelayEngine eng(inst, OracleHandle::make(OracleKind::exact));
  CHECK_THROWS_AS(eng.on_arrival({1, {{0, 0}, 1}, DelayFunction::linear(Rational(0), Rational(1))}),
                  input_error);
  eng.on_arrival({1, {{0, 1}, 1}, DelayFunction::linear(Rational(0), Rational(1))});
  CHECK_THROWS_AS(eng.on_arrival({1, {{0, 2}, 1}, DelayFunction::linear(Rational(0), Rational(1))}),
                  input_error);
  CHECK(eng.next_critical(Rational(100000)).has_value());

  CHECK_THROWS_AS(DelayEngine(inst, OracleHandle::make(OracleKind::exact),
                              ServeMode::all_satisfied, E0Mode::request_union, std::nullopt),
                  input_error);
  ProblemInstance fl{ProblemKind::facility_location, fixtures::two_point_metric(), std::nullopt};
  CHECK_THROWS_AS(DelayEngine(fl, OracleHandle::make(OracleKind::jv), ServeMode::all_satisfied,
                              E0Mode::request_union, 3),
                  config_error);

  DelayEngine empty(inst, OracleHandle::make(OracleKind::exact));
  CHECK_FALSE(empty.next_critical(Rational(0)).has_value());

  // the moat oracle has no prize-collecting form, so delay services cannot use it
  DelayEngine gw(inst, OracleHandle::make(OracleKind::gw));
  gw.on_arrival({1, {{0, 1}, 1}, DelayFunction::linear(Rational(0), Rational(1))});
  auto c = gw.next_critical(Rational(0));
  REQUIRE(c.has_value());
  CHECK_THROWS_AS(gw.run_service(c->first, c->second), config_error);
}

TEST_CASE("budgets, counters, and stop certificates hold on random delay runs") {
  std::mt19937_64 rng(1113);
  std::uniform_int_distribution<int> size(3, 6);
  std::uniform_int_distribution<int> reqs(1, 5);
  std::uniform_int_distribution<int> cost(0, 8);
  std::uniform_int_distribution<int> spread(0, 5);
  std::uniform_int_distribution<int> slope(1, 4);

  for (int iter = 0; iter < 80; ++iter) {
    int n = size(rng);
    std::vector<GraphEdge> edges;
    for (int v = 1; v < n; ++v) {
      std::uniform_int_distribution<int> prior(0, v - 1);
      edges.push_back({v - 1, prior(rng), v, Rational(cost(rng))});
    }
    std::uniform_int_distribution<int> node(0, n - 1);
    for (int i = 0; i < 2; ++i) {
      int u = node(rng), v = node(rng);
      while (v == u) v = node(rng);
      edges.push_back({n - 1 + i, u, v, Rational(cost(rng))});
    }
    ProblemInstance inst{ProblemKind::steiner_forest, Graph(n, false, edges), std::nullopt};

    bool exact = iter % 2 == 0;
    OracleHandle oracle = OracleHandle::make(exact ? OracleKind::exact : OracleKind::pc_gw);
    DelayEngine eng(inst, oracle);

    int k = reqs(rng);
    std::vector<DelayRequest> arrivals;
    std::map<int, RequestPayload> payload_of;
    std::map<int, Rational> release_of;
    for (int i = 0; i < k; ++i) {
      int u = node(rng), v = node(rng);
      while (v == u) v = node(rng);
      Rational release(spread(rng));
      arrivals.push_back(
          {i, {{u, v}, 1}, DelayFunction::linear(release, Rational(slope(rng)) / 2)});
      payload_of[i] = arrivals.back().payload;
      release_of[i] = release;
    }
    std::sort(arrivals.begin(), arrivals.end(), [](const auto& a, const auto& b) {
      if (a.delay.release() != b.delay.release()) return a.delay.release() < b.delay.release();
      return a.id < b.id;
    });

    std::map<int, Rational> served_at;
    std::map<int, int> level_of;
    auto absorb = [&](const DelayServiceRecord& rec) {
      if (!rec.free_service) {
        CHECK(rec.cleaning_cost <= rec.cleaning_limit);
        CHECK(rec.e0_cost <= rec.e0_limit);
        CHECK(rec.pc_part <= rec.pc_limit);
        if (rec.singleton) CHECK(rec.singleton_cost < rec.singleton_limit);
        CHECK(rec.budget_cost ==
              rec.cleaning_cost + rec.e0_cost + rec.pc_part + rec.singleton_cost);
        CHECK(rec.budget_cost <= rec.budget_limit);
        CHECK(rec.tau >= rec.time);
        CHECK_FALSE(rec.served.empty());

        // the trigger pool must sit exactly at its allowance
        Rational pool(0);
        for (const auto& [id, owed] : rec.cleaning)
          if (level_of.at(id) <= rec.critical_level) pool += owed;
        CHECK(pool == pow2(rec.critical_level));
        for (int id : rec.q_lambda)
          CHECK(rec.h_frozen.at(id) == rec.h_before.at(id) + rec.cleaning.at(id));

        if (rec.imperfect) {
          // replay the stop certificate: at the horizon the exact optimum
          // with the bundle free already fills the allowance
          std::vector<RequestPayload> payloads;
          std::vector<Penalty> pens;
          for (int id : rec.q_lambda) {
            payloads.push_back(payload_of.at(id));
            const DelayRequest* src = nullptr;
            for (const auto& a : arrivals)
              if (a.id == id) src = &a;
            REQUIRE(src != nullptr);
            Rational pi = src->delay.value(rec.tau) - rec.h_frozen.at(id);
            pens.emplace_back(pi < 0 ? Rational(0) : pi);
          }
          OfflineSolution replay = exact_pcnd(inst, payloads, pens, CostOverride{rec.e0});
          CHECK(replay.cost >= pow2(rec.level));
        }

        for (int id : rec.served) CHECK(satisfies(inst, payload_of.at(id), rec.transmitted));
        for (int id : rec.upgraded) {
          CHECK(rec.h_after.at(id) == rec.h_frozen.at(id) + rec.investments.at(id));
          level_of[id] = rec.level;
        }
        for (const auto& p : eng.pending(rec.time))
          if (std::find(rec.upgraded.begin(), rec.upgraded.end(), p.id) != rec.upgraded.end())
            CHECK(p.residual == Rational(0));
      }
      for (int id : rec.served) {
        CHECK_FALSE(served_at.count(id));
        served_at[id] = rec.time;
        level_of.erase(id);
      }
    };

    std::size_t next = 0;
    Rational now(0);
    int safety = 0;
    while (next < arrivals.size() || eng.pending_count() > 0) {
      REQUIRE(++safety < 400);
      auto crit = eng.next_critical(now);
      bool take_arrival =
          next < arrivals.size() && (!crit || arrivals[next].delay.release() <= crit->first);
      if (take_arrival) {
        now = arrivals[next].delay.release();
        auto rec = eng.on_arrival(arrivals[next]);
        if (rec) {
          CHECK(rec->served == std::vector<int>{arrivals[next].id});
          absorb(*rec);
        } else {
          for (const auto& p : eng.pending(now))
            if (p.id == arrivals[next].id) level_of[p.id] = p.level;
        }
        ++next;
      } else {
        now = crit->first;
        DelayServiceRecord rec = eng.run_service(crit->first, crit->second);
        absorb(rec);
      }
    }
    for (const auto& [id, at] : served_at) CHECK(at >= release_of.at(id));
    CHECK(served_at.size() == static_cast<std::size_t>(k));
  }
}

#include <doctest.h>

#include <vector>

#include "netd/errors.hpp"
#include "netd/generators.hpp"
#include "netd/offline_opt.hpp"
#include "netd/report.hpp"
#include "support/fixtures.hpp"

using namespace netd;

namespace {

ProblemInstance single_edge(const Rational& cost) {
  std::vector<GraphEdge> edges{{0, 0, 1, cost}};
  return {ProblemKind::steiner_forest, Graph(2, false, edges, std::nullopt, std::nullopt),
          std::nullopt};
}

RequestSpec deadline_req(int id, std::vector<int> terminals, Rational release, Rational deadline) {
  RequestSpec r;
  r.id = id;
  r.payload.terminals = std::move(terminals);
  r.release = release;
  r.deadline = deadline;
  return r;
}

RequestSpec delay_req(int id, std::vector<int> terminals, Rational release,
                      Rational slope = Rational(1)) {
  RequestSpec r;
  r.id = id;
  r.payload.terminals = std::move(terminals);
  r.release = release;
  r.delay = DelayFunction::linear(release, slope);
  return r;
}

InstanceSpec triangle_deadline_spec() {
  InstanceSpec spec{"triangle-deadline", 0, RunMode::deadline,
                    {ProblemKind::steiner_forest, fixtures::triangle(), std::nullopt},
                    {deadline_req(1, {0, 1}, Rational(0), Rational(3))}};
  return spec;
}

InstanceSpec triangle_delay_spec() {
  InstanceSpec spec{"triangle-delay", 0, RunMode::delay,
                    {ProblemKind::steiner_forest, fixtures::triangle(), std::nullopt},
                    {delay_req(1, {0, 1}, Rational(0)), delay_req(2, {0, 2}, Rational(1))}};
  return spec;
}

}  // namespace

TEST_CASE("instance files round-trip bit for bit") {
  std::vector<GraphEdge> edges{{0, 0, 1, Rational(1) / 3}, {1, 1, 2, Rational(7) / 2}};
  InstanceSpec spec{"thirds", 42, RunMode::delay,
                    {ProblemKind::steiner_forest, Graph(3, false, edges, std::nullopt, std::nullopt),
                     std::nullopt},
                    {}};
  RequestSpec r;
  r.id = 0;
  r.payload.terminals = {0, 2};
  r.release = Rational(1) / 3;
  r.delay = DelayFunction({{Rational(1) / 3, Rational(0)}, {Rational(2), Rational(1) / 7}},
                          Rational(5) / 3);
  spec.requests.push_back(r);

  std::string text = spec_to_text(spec);
  InstanceSpec back = spec_from_text(text);
  CHECK(spec_to_text(back) == text);
  CHECK(back.name == "thirds");
  CHECK(back.seed == 42);
  CHECK(back.mode == RunMode::delay);
  CHECK(back.instance.kind == ProblemKind::steiner_forest);
  CHECK(back.instance.graph.edges()[0].cost == Rational(1) / 3);
  CHECK(back.requests.size() == 1);
  CHECK(back.requests[0].delay->breakpoints().size() == 2);
  CHECK(back.requests[0].delay->value(Rational(3)) ==
        Rational(1) / 7 + Rational(5) / 3);

  InstanceSpec dl = triangle_deadline_spec();
  std::string dl_text = spec_to_text(dl);
  CHECK(spec_to_text(spec_from_text(dl_text)) == dl_text);
}

TEST_CASE("spec validation rejects structural mistakes") {
  InstanceSpec spec = triangle_deadline_spec();

  SUBCASE("duplicate request ids") {
    spec.requests.push_back(deadline_req(1, {0, 2}, Rational(1), Rational(4)));
    CHECK_THROWS_AS(validate_spec(spec), input_error);
  }
  SUBCASE("releases out of order") {
    spec.requests.insert(spec.requests.begin(),
                         deadline_req(2, {0, 2}, Rational(5), Rational(9)));
    CHECK_THROWS_AS(validate_spec(spec), input_error);
  }
  SUBCASE("deadline before release") {
    spec.requests[0].deadline = Rational(-1);
    CHECK_THROWS_AS(validate_spec(spec), input_error);
  }
  SUBCASE("delay curve in deadline mode") {
    spec.requests[0].delay = DelayFunction::linear(Rational(0), Rational(1));
    CHECK_THROWS_AS(validate_spec(spec), input_error);
  }
  SUBCASE("delay curve anchored off the release") {
    InstanceSpec dspec = triangle_delay_spec();
    dspec.requests[0].delay = DelayFunction::linear(Rational(1) / 2, Rational(1));
    CHECK_THROWS_AS(validate_spec(dspec), input_error);
  }
  SUBCASE("terminal out of range") {
    spec.requests[0].payload.terminals = {0, 9};
    CHECK_THROWS_AS(validate_spec(spec), input_error);
  }
}

TEST_CASE("the clairvoyant optimum batches deadline work when windows overlap") {
  ProblemInstance inst = single_edge(Rational(4));

  SUBCASE("overlapping windows share one purchase") {
    std::vector<RequestSpec> reqs{deadline_req(0, {0, 1}, Rational(0), Rational(3)),
                                  deadline_req(1, {0, 1}, Rational(2), Rational(5))};
    OfflineOptimum opt = opt_deadline(inst, reqs);
    CHECK(opt.cost == Rational(4));
    REQUIRE(opt.batches.size() == 1);
    CHECK(opt.batches[0].ids == std::vector<int>{0, 1});
    CHECK(opt.batches[0].time == Rational(2));
  }
  SUBCASE("disjoint windows pay twice") {
    std::vector<RequestSpec> reqs{deadline_req(0, {0, 1}, Rational(0), Rational(1)),
                                  deadline_req(1, {0, 1}, Rational(2), Rational(3))};
    OfflineOptimum opt = opt_deadline(inst, reqs);
    CHECK(opt.cost == Rational(8));
    CHECK(opt.batches.size() == 2);
  }
  SUBCASE("no requests cost nothing") {
    OfflineOptimum opt = opt_deadline(inst, {});
    CHECK(opt.cost == Rational(0));
    CHECK(opt.batches.empty());
  }
  SUBCASE("a singleton matches the offline solver") {
    std::vector<RequestSpec> reqs{deadline_req(0, {0, 1}, Rational(0), Rational(1))};
    OfflineOptimum opt = opt_deadline(inst, reqs);
    OfflineSolution direct =
        exact_nd(inst, {reqs[0].payload}, CostOverride::none(inst.element_count()));
    CHECK(opt.cost == direct.cost);
  }
  SUBCASE("too many requests for the cap") {
    std::vector<RequestSpec> reqs;
    for (int i = 0; i < 5; ++i)
      reqs.push_back(deadline_req(i, {0, 1}, Rational(i), Rational(i + 1)));
    CHECK_THROWS_AS(opt_deadline(inst, reqs, 4), capacity_error);
  }
}

TEST_CASE("the clairvoyant optimum trades delay against batching") {
  ProblemInstance inst = single_edge(Rational(4));

  SUBCASE("a lone request is served at its release") {
    std::vector<RequestSpec> reqs{delay_req(0, {0, 1}, Rational(0))};
    OfflineOptimum opt = opt_delay(inst, reqs);
    CHECK(opt.cost == Rational(4));
    REQUIRE(opt.batches.size() == 1);
    CHECK(opt.batches[0].time == Rational(0));
  }
  SUBCASE("two requests either batch late or pay twice") {
    // batching at t=1 pays 4 + 1 accrued delay; two services pay 8
    std::vector<RequestSpec> reqs{delay_req(0, {0, 1}, Rational(0)),
                                  delay_req(1, {0, 1}, Rational(1))};
    OfflineOptimum opt = opt_delay(inst, reqs);
    CHECK(opt.cost == Rational(5));
    REQUIRE(opt.batches.size() == 1);
    CHECK(opt.batches[0].time == Rational(1));
  }
  SUBCASE("the worked two-pair triangle run costs five offline") {
    InstanceSpec spec = triangle_delay_spec();
    OfflineOptimum opt = opt_delay(spec.instance, spec.requests);
    CHECK(opt.cost == Rational(5));
  }
  SUBCASE("no requests cost nothing") {
    CHECK(opt_delay(inst, {}).cost == Rational(0));
  }
}

TEST_CASE("simulation reproduces the worked deadline run") {
  InstanceSpec spec = triangle_deadline_spec();
  SimConfig config;
  RunTrace trace = simulate(spec, config);

  REQUIRE(trace.deadline_services.size() == 1);
  const DeadlineServiceRecord& rec = trace.deadline_services[0];
  CHECK(rec.time == Rational(3));
  CHECK(rec.trigger == 1);
  CHECK(rec.transmit_cost == Rational(4));
  CHECK(trace.alg_total == Rational(4));
  CHECK(trace.served_at.at(1) == Rational(3));
  CHECK(trace.oracle_calls >= 2);

  RunReport rep = make_report(spec, config, true);
  REQUIRE(rep.opt.has_value());
  CHECK(rep.opt->cost == Rational(4));
  CHECK(*rep.ratio == Rational(1));
  CHECK(all_passed(rep.checks));
}

TEST_CASE("simulation reproduces the worked delay runs") {
  SUBCASE("a lone unit edge pays one transmission and one unit of delay") {
    InstanceSpec spec{"unit-edge", 0, RunMode::delay, single_edge(Rational(1)),
                      {delay_req(7, {0, 1}, Rational(0))}};
    RunTrace trace = simulate(spec, SimConfig{});
    REQUIRE(trace.delay_services.size() == 1);
    const DelayServiceRecord& rec = trace.delay_services[0];
    CHECK(rec.time == Rational(1));
    CHECK(rec.critical_level == 0);
    CHECK(rec.level == 1);
    CHECK(rec.tau == Rational(3));
    CHECK(trace.transmit_total == Rational(1));
    CHECK(trace.delay_total == Rational(1));
    CHECK(trace.alg_total == Rational(2));
    CHECK(trace.h_total >= trace.delay_total);

    RunReport rep = make_report(spec, SimConfig{}, true);
    CHECK(rep.opt->cost == Rational(1));
    CHECK(*rep.ratio == Rational(2));
    CHECK(all_passed(rep.checks));
  }
  SUBCASE("the two-pair triangle run lands at eight against five") {
    InstanceSpec spec = triangle_delay_spec();
    RunReport rep = make_report(spec, SimConfig{}, true);
    CHECK(rep.trace.alg_total == Rational(8));
    CHECK(rep.opt->cost == Rational(5));
    CHECK(*rep.ratio == Rational(8) / 5);
    CHECK(all_passed(rep.checks));
  }
}

TEST_CASE("the auditor passes clean traces and flags corrupted ones") {
  InstanceSpec spec = triangle_delay_spec();
  RunTrace trace = simulate(spec, SimConfig{});
  REQUIRE(all_passed(audit_trace(trace)));

  auto failed = [](const std::vector<CheckResult>& checks, const std::string& name) {
    for (const CheckResult& c : checks)
      if (c.name == name) return !c.pass;
    return false;
  };

  SUBCASE("totals that disagree with the records") {
    trace.transmit_total += 1;
    CHECK(failed(audit_trace(trace), "totals-consistent"));
  }
  SUBCASE("a service charged past its cleaning allowance") {
    REQUIRE(!trace.delay_services.empty());
    trace.delay_services[0].cleaning_cost = trace.delay_services[0].cleaning_limit + 1;
    trace.delay_services[0].budget_cost += pow2(trace.delay_services[0].level) + 1;
    CHECK(failed(audit_trace(trace), "service-budgets"));
  }
  SUBCASE("a request claiming more realized delay than its counter") {
    REQUIRE(!trace.realized_delay.empty());
    int id = trace.realized_delay.begin()->first;
    trace.realized_delay[id] = trace.final_h[id] + 1;
    trace.delay_total += 1;
    trace.alg_total += 1;
    CHECK(failed(audit_trace(trace), "delay-domination"));
  }
  SUBCASE("a dropped service record") {
    trace.delay_services.clear();
    std::vector<CheckResult> checks = audit_trace(trace);
    CHECK(!all_passed(checks));
  }

  InstanceSpec dspec = triangle_deadline_spec();
  RunTrace dtrace = simulate(dspec, SimConfig{});
  REQUIRE(all_passed(audit_trace(dtrace)));
  SUBCASE("a deadline trace with a late service") {
    dtrace.served_at[1] = *dspec.requests[0].deadline + 1;
    CHECK(failed(audit_trace(dtrace), "deadlines-met"));
  }
}

TEST_CASE("identical runs emit identical reports") {
  GenParams params;
  params.kind = ProblemKind::steiner_forest;
  params.mode = RunMode::delay;
  params.requests = 3;
  params.name = "twin";
  InstanceSpec spec = gen_random(params, 99);

  std::vector<RunReport> a, b;
  a.push_back(make_report(spec, SimConfig{}, true));
  b.push_back(make_report(spec, SimConfig{}, true));
  CHECK(report_to_json(a) == report_to_json(b));
  CHECK(report_to_csv(a) == report_to_csv(b));
  // timing would break determinism, so it only appears on request
  CHECK(report_to_json(a).find("wall_ms") == std::string::npos);
}

TEST_CASE("request-union runs route arrivals through doubling guesses") {
  std::vector<GraphEdge> edges;
  for (int i = 0; i < 12; ++i)
    edges.push_back({i, i % 3, 3 + (i % 9), Rational(1 + i % 4)});
  InstanceSpec spec{"doubled", 0, RunMode::deadline,
                    {ProblemKind::steiner_forest, Graph(12, false, edges, std::nullopt,
                                                        std::nullopt),
                     std::nullopt},
                    {}};
  for (int i = 0; i < 7; ++i)
    spec.requests.push_back(deadline_req(i, {i % 3, 3 + (i % 9)}, Rational(i), Rational(i + 2)));

  SimConfig config;
  config.regime = E0Mode::request_union;
  RunTrace trace = simulate(spec, config);
  CHECK(trace.doubling_guesses == std::vector<long long>{2, 4, 16});
  CHECK(all_passed(audit_trace(trace)));
  for (const RequestSpec& r : spec.requests) CHECK(trace.served_at.count(r.id) == 1);

  bool saw_union = false, saw_classic = false;
  for (const auto& rec : trace.deadline_services) {
    if (rec.free_service) continue;
    (rec.e0_mode == E0Mode::request_union ? saw_union : saw_classic) = true;
  }
  CHECK(saw_union);
  CHECK(saw_classic);  // the last guess tops the 12-element universe
}

TEST_CASE("random instances are deterministic and satisfiable") {
  for (ProblemKind kind :
       {ProblemKind::steiner_forest, ProblemKind::strong_steiner_forest, ProblemKind::multicut,
        ProblemKind::strong_multicut, ProblemKind::node_weighted_steiner_forest,
        ProblemKind::steiner_network, ProblemKind::directed_steiner_tree,
        ProblemKind::facility_location}) {
    CAPTURE(kind_name(kind));
    GenParams params;
    params.kind = kind;
    params.mode = RunMode::deadline;
    params.nodes = 6;
    params.extra_edges = 3;
    params.requests = 4;
    InstanceSpec spec = gen_random(params, 5);
    CHECK(spec_to_text(spec) == spec_to_text(gen_random(params, 5)));
    CHECK(spec_to_text(spec) != spec_to_text(gen_random(params, 6)));
    CHECK(spec.instance.graph.node_count() == 6);
    CHECK(spec.requests.size() == 4);

    OracleHandle exact = OracleHandle::make(OracleKind::exact);
    for (const RequestSpec& r : spec.requests) {
      CHECK(*r.deadline >= r.release + 1);
      OfflineSolution own =
          nd_of(exact, spec.instance, {r.payload}, CostOverride::none(spec.instance.element_count()));
      CHECK(own.cost >= 0);
    }
  }

  GenParams dparams;
  dparams.mode = RunMode::delay;
  dparams.requests = 5;
  InstanceSpec dspec = gen_random(dparams, 17);
  for (const RequestSpec& r : dspec.requests) {
    REQUIRE(r.delay.has_value());
    CHECK(r.delay->value(r.release) == 0);
    CHECK(r.delay->value(r.release + 2) >= 1);  // slope at least one half
  }
}

TEST_CASE("the lower-bound family lays out sets over cover patterns") {
  CHECK(gen_set_cover_lb(1, RunMode::deadline, false).instance.graph.node_count() == 6);
  CHECK(gen_set_cover_lb(2, RunMode::deadline, false).instance.graph.node_count() == 14);
  CHECK(gen_set_cover_lb(3, RunMode::deadline, false).instance.graph.node_count() == 36);
  CHECK(gen_set_cover_lb(2, RunMode::delay, true).instance.graph.node_count() == 14);
  CHECK_THROWS_AS(gen_set_cover_lb(0, RunMode::deadline, false), input_error);
  CHECK_THROWS_AS(gen_set_cover_lb(7, RunMode::deadline, false), input_error);

  InstanceSpec node_form = gen_set_cover_lb(2, RunMode::deadline, false);
  CHECK(node_form.instance.kind == ProblemKind::node_weighted_steiner_forest);
  CHECK(node_form.requests.size() == 9);
  REQUIRE(node_form.instance.graph.node_costs().has_value());
  // only the four set nodes are priced
  Rational priced(0);
  for (const Rational& c : *node_form.instance.graph.node_costs()) priced += c;
  CHECK(priced == Rational(4));
  for (const RequestSpec& r : node_form.requests) {
    CHECK(r.payload.terminals[0] == 0);
    CHECK(*r.deadline == r.release + 1);
  }

  InstanceSpec directed = gen_set_cover_lb(2, RunMode::delay, true);
  CHECK(directed.instance.kind == ProblemKind::directed_steiner_tree);
  CHECK(directed.instance.root == 0);
  CHECK(directed.requests.size() == 9);
  // every pattern is reachable: its request has an exact solution
  for (const RequestSpec& r : directed.requests) {
    OfflineSolution own = exact_nd(directed.instance, {r.payload},
                                   CostOverride::none(directed.instance.element_count()));
    CHECK(own.cost == Rational(1));  // one root arc, free cover arcs
  }

  // the all-wildcard pattern is covered by every set; a no-wildcard pattern
  // by exactly one
  const Graph& g = directed.instance.graph;
  int sets = 4, patterns = 9;
  std::vector<int> indeg(g.node_count(), 0);
  for (const GraphEdge& e : g.edges()) ++indeg[e.head];
  int full_wild = 1 + sets + (patterns - 1);  // digits 2,2 is the last pattern
  CHECK(indeg[full_wild] == sets);
  int no_wild = 1 + sets + 0;  // digits 0,0 is the first pattern
  CHECK(indeg[no_wild] == 1);
}

TEST_CASE("reports round-trip through JSON for re-audit") {
  InstanceSpec spec = triangle_delay_spec();
  std::vector<RunReport> reports;
  reports.push_back(make_report(spec, SimConfig{}, true));
  InstanceSpec dspec = triangle_deadline_spec();
  SimConfig alt_config;
  alt_config.oracle = OracleKind::gw;
  reports.push_back(make_report(dspec, alt_config, false));

  std::string text = report_to_json(reports);
  std::vector<RunReport> back = reports_from_json(text);
  REQUIRE(back.size() == 2);
  // emitters order by name: triangle-deadline first
  CHECK(back[0].trace.spec.name == "triangle-deadline");
  CHECK(back[0].trace.config.oracle == OracleKind::gw);
  CHECK(!back[0].opt.has_value());
  CHECK(back[1].trace.alg_total == Rational(8));
  CHECK(back[1].opt->cost == Rational(5));
  CHECK(*back[1].ratio == Rational(8) / 5);
  for (const RunReport& rep : back) CHECK(all_passed(audit_trace(rep.trace)));
  CHECK(report_to_json(back) == text);

  std::string csv = report_to_csv(reports);
  CHECK(csv.find("triangle-delay,delay,exact,classic,all-satisfied,2,") != std::string::npos);
  CHECK(csv.find("8/5") != std::string::npos);
}

#include <doctest.h>

#include <vector>

#include "netd/deadline_engine.hpp"
#include "netd/errors.hpp"
#include "netd/regime.hpp"
#include "support/fixtures.hpp"

using namespace netd;

TEST_CASE("the threshold bundle admits exactly the cheap elements") {
  ProblemInstance inst{ProblemKind::steiner_forest, fixtures::triangle(), std::nullopt};
  CHECK(cheap_element_bundle(inst, 3).ids() == std::vector<int>{1, 2});  // threshold 8/3
  CHECK(cheap_element_bundle(inst, 0).count() == 0);                     // threshold 1/3
  CHECK(cheap_element_bundle(inst, 4).ids() == std::vector<int>{0, 1, 2});

  std::vector<GraphEdge> edges{{0, 0, 1, Rational(0)}, {1, 1, 2, Rational(3)}};
  ProblemInstance zero{ProblemKind::steiner_forest, Graph(3, false, edges), std::nullopt};
  CHECK(cheap_element_bundle(zero, -7).ids() == std::vector<int>{0});  // free rides any level
}

TEST_CASE("the request-union bundle folds cheap private solutions in id order") {
  ProblemInstance inst{ProblemKind::steiner_forest, fixtures::triangle(), std::nullopt};
  RequestPayload p01{{0, 1}, 1};
  RequestPayload p02{{0, 2}, 1};
  RequestPayload p21{{2, 1}, 1};
  ElementSet both(3);
  both.insert(1);
  both.insert(2);
  ElementSet ac(3);
  ac.insert(1);
  ElementSet cb(3);
  cb.insert(2);

  SUBCASE("two small solutions under the split budget") {
    std::vector<OwnedSolution> pending{{1, &p02, &ac, Rational(2)}, {2, &p21, &cb, Rational(2)}};
    ElementSet bundle = request_union_bundle(inst, Rational(1), 2, 2, pending);
    CHECK(bundle.ids() == std::vector<int>{1, 2});
    CHECK(element_set_cost(inst, bundle, CostOverride::none(3)) <= Rational(4));
  }

  SUBCASE("a request the bundle already covers is skipped") {
    std::vector<OwnedSolution> pending{{1, &p01, &both, Rational(4)}, {2, &p02, &ac, Rational(2)}};
    ElementSet bundle = request_union_bundle(inst, Rational(1), 2, 1, pending);
    CHECK(bundle.ids() == std::vector<int>{1, 2});  // the second never folds its edge again
  }

  SUBCASE("solutions above the split budget stay out") {
    std::vector<OwnedSolution> pending{{1, &p01, &both, Rational(4)}};
    CHECK(request_union_bundle(inst, Rational(1), 2, 2, pending).count() == 0);
  }

  SUBCASE("bad configurations are rejected") {
    CHECK_THROWS_AS(request_union_bundle(inst, Rational(1), 2, 0, {}), input_error);
    ProblemInstance fl{ProblemKind::facility_location, fixtures::two_point_metric(),
                       std::nullopt};
    CHECK_THROWS_AS(request_union_bundle(fl, Rational(3), 2, 2, {}), config_error);
  }
}

TEST_CASE("the doubling plan squares its guesses until one covers the universe") {
  DoublingPlan plan(12);
  std::vector<int> routes;
  for (int i = 0; i < 10; ++i) routes.push_back(plan.route_arrival());
  CHECK(routes == std::vector<int>{0, 0, 1, 1, 1, 1, 2, 2, 2, 2});
  REQUIRE(plan.instances().size() == 3);
  CHECK(plan.instances()[0].guess == 2);
  CHECK_FALSE(plan.instances()[0].classic);
  CHECK(plan.instances()[1].guess == 4);
  CHECK_FALSE(plan.instances()[1].classic);
  CHECK(plan.instances()[2].guess == 16);  // 16 exceeds 12 elements
  CHECK(plan.instances()[2].classic);

  DoublingPlan tiny(1);
  CHECK(tiny.route_arrival() == 0);
  CHECK(tiny.route_arrival() == 0);
  CHECK(tiny.instances().size() == 1);
  CHECK(tiny.instances()[0].classic);

  DoublingPlan two(2);
  for (int i = 0; i < 5; ++i) two.route_arrival();
  REQUIRE(two.instances().size() == 2);
  CHECK_FALSE(two.instances()[0].classic);
  CHECK(two.instances()[1].classic);

  CHECK_THROWS_AS(DoublingPlan(0), input_error);
}

TEST_CASE("a deadline engine in request-union mode prepays the folded bundle") {
  ProblemInstance inst{ProblemKind::steiner_forest, fixtures::triangle(), std::nullopt};
  DeadlineEngine eng(inst, OracleHandle::make(OracleKind::exact), ServeMode::all_satisfied,
                     E0Mode::request_union, 2);
  eng.on_arrival({1, {{0, 2}, 1}, Rational(0), Rational(3)});
  eng.on_arrival({2, {{2, 1}, 1}, Rational(0), Rational(4)});

  DeadlineServiceRecord rec = eng.run_service(Rational(3));
  CHECK(rec.e0_mode == E0Mode::request_union);
  CHECK(rec.level == 2);
  CHECK(rec.e0.ids() == std::vector<int>{1, 2});  // both cost-2 solutions fit 4/2
  CHECK(rec.e0_cost == Rational(4));
  CHECK(rec.e0_limit == Rational(4));
  CHECK(rec.shared_cost == Rational(0));
  CHECK(rec.served == std::vector<int>{1, 2});
  CHECK(eng.pending_count() == 0);
}

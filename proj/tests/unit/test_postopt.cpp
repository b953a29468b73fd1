#include <algorithm>

#include "doctest.h"

#include "../support/fixtures.hpp"
#include "vrp2l/construct.hpp"
#include "vrp2l/io.hpp"
#include "vrp2l/postopt.hpp"
#include "vrp2l/solution_build.hpp"

using namespace vrp2l;
using namespace vrp2l::test;

namespace {

double brute_force_subroutes(const std::vector<SubrouteEndpoints>& subs, const LocationId& yard,
                             const Instance& inst) {
  std::vector<int> perm(subs.size());
  for (size_t i = 0; i < perm.size(); ++i) perm[i] = static_cast<int>(i);
  double best = std::numeric_limits<double>::infinity();
  do {
    double c = inst.distance(yard, subs[perm.front()].first);
    for (size_t i = 0; i + 1 < perm.size(); ++i)
      c += inst.distance(subs[perm[i]].last, subs[perm[i + 1]].first);
    c += inst.distance(subs[perm.back()].last, yard);
    best = std::min(best, c);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

double ordering_cost(const std::vector<SubrouteEndpoints>& subs, const std::vector<int>& order,
                     const LocationId& yard, const Instance& inst) {
  double c = inst.distance(yard, subs[order.front()].first);
  for (size_t i = 0; i + 1 < order.size(); ++i)
    c += inst.distance(subs[order[i]].last, subs[order[i + 1]].first);
  return c + inst.distance(subs[order.back()].last, yard);
}

Instance random_net(TestRng& rng, int n_points) {
  InstanceBuilder b;
  b.yard("Y");
  for (int i = 0; i < n_points; ++i) b.supplier("P" + std::to_string(i), "SH");
  b.warehouse("W").truck("T1");
  std::vector<std::string> ids{"Y", "W"};
  for (int i = 0; i < n_points; ++i) ids.push_back("P" + std::to_string(i));
  for (size_t i = 0; i < ids.size(); ++i)
    for (size_t j = 0; j < ids.size(); ++j)
      if (i != j) b.distance(ids[i], ids[j], rng.uniform_int(1, 60), false);
  return b.build();
}

}  // namespace

TEST_CASE("sequence_subroutes: single sub-route is the identity") {
  TestRng rng(1);
  Instance inst = random_net(rng, 2);
  SubrouteOrdering out = sequence_subroutes({{"P0", "P1"}}, "Y", inst);
  CHECK(out.order == std::vector<int>{0});
  CHECK(out.exact);
}

TEST_CASE("sequence_subroutes: three sub-routes match brute force") {
  TestRng rng(2);
  Instance inst = random_net(rng, 6);
  std::vector<SubrouteEndpoints> subs = {{"P0", "P1"}, {"P2", "P3"}, {"P4", "P5"}};
  SubrouteOrdering out = sequence_subroutes(subs, "Y", inst);
  REQUIRE(out.order.size() == 3);
  CHECK(ordering_cost(subs, out.order, "Y", inst) ==
        doctest::Approx(brute_force_subroutes(subs, "Y", inst)));
}

TEST_CASE("sequence_subroutes: DP equals brute force on random tables up to 8") {
  TestRng rng(3);
  for (int round = 0; round < 25; ++round) {
    int n = rng.uniform_int(2, 8);
    Instance inst = random_net(rng, 2 * n);
    std::vector<SubrouteEndpoints> subs;
    for (int i = 0; i < n; ++i)
      subs.push_back({"P" + std::to_string(2 * i), "P" + std::to_string(2 * i + 1)});
    SubrouteOrdering out = sequence_subroutes(subs, "Y", inst);
    REQUIRE(out.exact);
    CHECK(ordering_cost(subs, out.order, "Y", inst) ==
          doctest::Approx(brute_force_subroutes(subs, "Y", inst)).epsilon(1e-9));
  }
}

TEST_CASE("sequence_subroutes: beyond the cap falls back to a flagged heuristic") {
  TestRng rng(4);
  Instance inst = random_net(rng, 10);
  std::vector<SubrouteEndpoints> subs;
  for (int i = 0; i < 5; ++i)
    subs.push_back({"P" + std::to_string(2 * i), "P" + std::to_string(2 * i + 1)});
  SubrouteOrdering out = sequence_subroutes(subs, "Y", inst, 3);
  CHECK_FALSE(out.exact);
  REQUIRE(out.order.size() == 5);
  // cost never worse than a couple of straw orderings
  std::vector<int> identity{0, 1, 2, 3, 4};
  CHECK(ordering_cost(subs, out.order, "Y", inst) <=
        ordering_cost(subs, identity, "Y", inst) + kMileageEps);
}

TEST_CASE("downsize_trucks: cheaper smaller truck takes over the load") {
  InstanceBuilder b;
  b.yard("Y").supplier("A", "SH").warehouse("W");
  b.truck("Tbig", 3, 8, 2.0).truck("Tsmall", 2, 4, 1.0);
  b.shipment("s1", "A", "W", 2, {1, 1, 1, 2});
  b.distance("Y", "A", 10).distance("A", "W", 10).distance("W", "Y", 10);
  Instance inst = b.build();

  RouteResult rr = solve_route(inst.truck("Tbig"), {"s1"}, inst, {});
  Solution sol = *assemble_solution({{"Tbig", {"s1"}, *rr.route, *rr.placement}}, inst);
  REQUIRE(sol.total_mileage == doctest::Approx(60));

  Solution after = downsize_trucks(sol, inst);
  CHECK(after.total_mileage == doctest::Approx(30));
  CHECK(after.assignment.truck_of.at("s1") == "Tsmall");
  CHECK(validate_solution(after, inst).empty());
}

TEST_CASE("downsize_trucks: identical fleet leaves the solution unchanged") {
  InstanceBuilder b;
  b.yard("Y").supplier("A", "SH").warehouse("W");
  b.truck("T1", 3, 8, 1.0).truck("T2", 3, 8, 1.0);
  b.shipment("s1", "A", "W");
  Instance inst = b.build();
  RouteResult rr = solve_route(inst.truck("T1"), {"s1"}, inst, {});
  Solution sol = *assemble_solution({{"T1", {"s1"}, *rr.route, *rr.placement}}, inst);
  Solution after = downsize_trucks(sol, inst);
  CHECK(after == sol);
}

TEST_CASE("downsize_trucks: swap breaking a dock length restriction is rejected") {
  InstanceBuilder b;
  b.yard("Y");
  b.supplier("A", "SH");
  b.last_location().allowed_truck_lengths = std::set<std::string>{"12m"};
  b.warehouse("W");
  b.truck("Tbig", 3, 8, 2.0, "12m").truck("Tsmall", 2, 4, 1.0, "7.6m");
  b.shipment("s1", "A", "W", 2, {1, 1, 1, 2});
  Instance inst = b.build();
  RouteResult rr = solve_route(inst.truck("Tbig"), {"s1"}, inst, {});
  Solution sol = *assemble_solution({{"Tbig", {"s1"}, *rr.route, *rr.placement}}, inst);
  Solution after = downsize_trucks(sol, inst);
  CHECK(after.assignment.truck_of.at("s1") == "Tbig");
}

TEST_CASE("merge_routes: two short trips chain into one tour, saving a yard leg") {
  InstanceBuilder b;
  b.yard("Y").supplier("A", "SH").supplier("B", "SH").warehouse("W");
  b.truck("T1", 2, 3, 1.0).truck("T2", 2, 3, 1.0);
  // loads that cannot share the surface (force separate trips)
  b.shipment("s1", "A", "W", 2, {2, 1, 1, 1});
  b.shipment("s2", "B", "W", 2, {2, 1, 1, 1});
  b.distance("Y", "A", 10).distance("A", "W", 4).distance("W", "Y", 3)
      .distance("W", "B", 2).distance("Y", "B", 9).distance("A", "B", 5);
  Instance inst = b.build();

  RouteResult r1 = solve_route(inst.truck("T1"), {"s1"}, inst, {});
  RouteResult r2 = solve_route(inst.truck("T2"), {"s2"}, inst, {});
  REQUIRE(r1.feasible);
  REQUIRE(r2.feasible);
  Solution sol = *assemble_solution({{"T1", {"s1"}, *r1.route, *r1.placement},
                                     {"T2", {"s2"}, *r2.route, *r2.placement}},
                                    inst);
  Solution merged = merge_routes(sol, inst);
  CHECK(merged.routes.size() == 1);
  CHECK(merged.total_mileage < sol.total_mileage - kMileageEps);
  auto violations = validate_solution(merged, inst);
  for (const Violation& v : violations) INFO(to_string(v.family), ": ", v.rule);
  CHECK(violations.empty());
}

TEST_CASE("merge_routes: merge exceeding the tour horizon is rejected") {
  InstanceBuilder b;
  b.yard("Y");
  b.supplier("A", "SH", {0, 2800}).supplier("B", "SH", {0, 2800});
  b.warehouse("W", {0, 2800});
  b.truck("T1", 2, 3, 1.0).truck("T2", 2, 3, 1.0);
  b.shipment("s1", "A", "W", 2, {2, 1, 1, 1});
  b.last_shipment().pickup_window = {0, 2800};
  b.last_shipment().delivery_window = {0, 2800};
  b.shipment("s2", "B", "W", 2, {2, 1, 1, 1});
  b.last_shipment().pickup_window = {0, 2800};
  b.last_shipment().delivery_window = {0, 2800};
  // each trip alone takes 2150 minutes; chained (either order) 2950 > 2880
  b.distance("Y", "A", 900).distance("A", "W", 400).distance("W", "Y", 850)
      .distance("W", "B", 400).distance("Y", "B", 900).distance("A", "B", 500);
  Instance inst = b.build();
  RouteSolverParams params;
  params.horizon = kMergedHorizon;  // let the single trips exist at all
  RouteResult r1 = solve_route(inst.truck("T1"), {"s1"}, inst, params);
  RouteResult r2 = solve_route(inst.truck("T2"), {"s2"}, inst, params);
  REQUIRE(r1.feasible);
  REQUIRE(r2.feasible);
  Route route1 = *r1.route;
  Route route2 = *r2.route;
  route1.horizon = kMergedHorizon;
  route2.horizon = kMergedHorizon;
  Solution sol = *assemble_solution({{"T1", {"s1"}, route1, *r1.placement},
                                     {"T2", {"s2"}, route2, *r2.placement}},
                                    inst);
  Solution merged = merge_routes(sol, inst);
  CHECK(merged.routes.size() == 2);
}

TEST_CASE("merge_routes: disjoint time windows block merging") {
  InstanceBuilder b;
  b.yard("Y").supplier("A", "SH", {0, 100}, 9, 0).supplier("B", "SH", {0, 100}, 9, 0);
  b.warehouse("W");
  b.truck("T1", 2, 3, 1.0).truck("T2", 2, 3, 1.0);
  b.shipment("s1", "A", "W", 2, {2, 1, 1, 1});
  b.last_shipment().pickup_window = {0, 40};
  b.shipment("s2", "B", "W", 2, {2, 1, 1, 1});
  b.last_shipment().pickup_window = {0, 40};
  b.distance("Y", "A", 30).distance("A", "W", 30).distance("W", "Y", 30)
      .distance("W", "B", 30).distance("Y", "B", 30).distance("A", "B", 30);
  Instance inst = b.build();
  RouteResult r1 = solve_route(inst.truck("T1"), {"s1"}, inst, {});
  RouteResult r2 = solve_route(inst.truck("T2"), {"s2"}, inst, {});
  REQUIRE(r1.feasible);
  REQUIRE(r2.feasible);
  Solution sol = *assemble_solution({{"T1", {"s1"}, *r1.route, *r1.placement},
                                     {"T2", {"s2"}, *r2.route, *r2.placement}},
                                    inst);
  Solution merged = merge_routes(sol, inst);
  CHECK(merged.routes.size() == 2);  // second pickup would be at ~70 > 40
}

TEST_CASE("postoptimize: never increases mileage and is idempotent") {
  for (std::uint64_t seed : {41ull, 42ull, 43ull}) {
    GeneratorConfig cfg;
    cfg.seed = seed;
    cfg.n_suppliers = 5;
    cfg.n_warehouses = 2;
    cfg.n_shipments = 12;
    cfg.n_trucks = 9;
    Instance inst = generate_instance(cfg);
    Solution sol = initial_solution(inst);
    Solution once = postoptimize(sol, inst);
    CHECK(once.total_mileage <= sol.total_mileage + kMileageEps);
    auto violations = validate_solution(once, inst);
    for (const Violation& v : violations) INFO(to_string(v.family), ": ", v.rule);
    CHECK(violations.empty());
    Solution twice = postoptimize(once, inst);
    CHECK(twice == once);
  }
}

#include "doctest.h"

#include "../support/fixtures.hpp"
#include "vrp2l/io.hpp"
#include "vrp2l/oracle.hpp"
#include "vrp2l/pipeline.hpp"
#include "vrp2l/routing.hpp"

using namespace vrp2l;
using namespace vrp2l::test;

namespace {

PackItem item(double w, double l, int pickup = 0, int delivery = 1) {
  Column c;
  c.shipment = "s";
  c.width = w;
  c.length = l;
  c.layers = 1;
  return {c, pickup, delivery};
}

Truck test_truck(double w, double l) {
  Truck t;
  t.id = "T";
  t.surface_width = w;
  t.surface_length = l;
  t.cost_per_distance = 1;
  t.home_yard = "Y";
  return t;
}

}  // namespace

TEST_CASE("exact_pack: basic cases") {
  CHECK(exact_pack({item(1, 1), item(1, 1)}, test_truck(2, 1)));
  CHECK_FALSE(exact_pack({item(3, 1)}, test_truck(2, 2)));
  CHECK(exact_pack({}, test_truck(1, 1)));
}

TEST_CASE("exact_pack: refuses more columns than the limit") {
  std::vector<PackItem> items;
  for (int i = 0; i < 6; ++i) items.push_back(item(1, 1));
  CHECK_THROWS_AS(exact_pack(items, test_truck(10, 10)), OracleError);
}

TEST_CASE("exact_pack agrees with pack at full width on random 4-column cases") {
  TestRng rng(90);
  int feasible_seen = 0, infeasible_seen = 0;
  for (int round = 0; round < 300; ++round) {
    Truck t = test_truck(rng.uniform_int(2, 4), rng.uniform_int(2, 5));
    int n = rng.uniform_int(1, 4);
    std::vector<PackItem> items;
    for (int i = 0; i < n; ++i) {
      int pickup = rng.uniform_int(0, 2);
      items.push_back(item(rng.uniform_int(1, 3), rng.uniform_int(1, 3), pickup,
                           rng.uniform_int(pickup + 1, 4)));
    }
    PackParams full;
    full.beam_width = 0;  // exhaustive
    full.prejudge_threshold = 1.0;
    bool mine = pack(items, t, full).feasible;
    bool oracle = exact_pack(items, t);
    CHECK(mine == oracle);
    (oracle ? feasible_seen : infeasible_seen)++;
  }
  CHECK(feasible_seen > 20);
  CHECK(infeasible_seen > 20);
}

TEST_CASE("exact_solve: single shipment single truck matches solve_route") {
  Instance inst = InstanceBuilder()
                      .yard("Y")
                      .supplier("A", "SH")
                      .warehouse("W")
                      .truck("T1")
                      .shipment("s1", "A", "W")
                      .distance("Y", "A", 7)
                      .distance("A", "W", 9)
                      .distance("W", "Y", 4)
                      .build();
  OracleResult oracle = exact_solve(inst);
  REQUIRE(oracle.feasible);
  RouteResult rr = solve_route(inst.truck("T1"), {"s1"}, inst, {});
  CHECK(oracle.mileage == doctest::Approx(rr.mileage));
  CHECK(validate_solution(*oracle.solution, inst).empty());
}

TEST_CASE("exact_solve: infeasible window gives an infeasible verdict") {
  InstanceBuilder b;
  b.yard("Y").supplier("A", "SH").warehouse("W").truck("T1");
  b.shipment("s1", "A", "W");
  b.last_shipment().delivery_window = {0, 5};
  b.distance("Y", "A", 7).distance("A", "W", 9).distance("W", "Y", 4);
  Instance inst = b.build();
  OracleResult oracle = exact_solve(inst);
  CHECK_FALSE(oracle.feasible);
}

TEST_CASE("exact_solve: refuses instances beyond the limits") {
  InstanceBuilder b;
  b.yard("Y").supplier("A", "SH").warehouse("W");
  for (int i = 0; i < 4; ++i) b.truck("T" + std::to_string(i));
  b.shipment("s1", "A", "W");
  Instance inst = b.build();
  CHECK_THROWS_AS(exact_solve(inst), OracleError);
}

TEST_CASE("exact_solve: pipeline never beats the oracle on tiny instances") {
  for (std::uint64_t seed : {61ull, 62ull, 63ull, 64ull}) {
    GeneratorConfig cfg;
    cfg.seed = seed;
    cfg.n_suppliers = 3;
    cfg.n_warehouses = 1;
    cfg.n_shipments = 4;
    cfg.n_trucks = 3;
    cfg.n_cities = 1;
    Instance inst = generate_instance(cfg);
    OracleResult oracle = exact_solve(inst);
    REQUIRE(oracle.feasible);

    PipelineOptions opts;
    opts.tabu.iteration_budget = 40;
    opts.construct.route.pack.prejudge_threshold = 1.0;
    opts.tabu.route.pack.prejudge_threshold = 1.0;
    opts.postopt.route.pack.prejudge_threshold = 1.0;
    PipelineResult result = run_pipeline(inst, opts);
    CHECK(result.final.total_mileage >= oracle.mileage - 1e-6);
  }
}

TEST_CASE("exact_solve: deterministic") {
  GeneratorConfig cfg;
  cfg.seed = 77;
  cfg.n_suppliers = 2;
  cfg.n_warehouses = 1;
  cfg.n_shipments = 3;
  cfg.n_trucks = 2;
  cfg.n_cities = 1;
  Instance inst = generate_instance(cfg);
  OracleResult a = exact_solve(inst);
  OracleResult b = exact_solve(inst);
  REQUIRE(a.feasible == b.feasible);
  CHECK(a.mileage == b.mileage);
  CHECK(*a.solution == *b.solution);
}

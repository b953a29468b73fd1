// Acceptance suite: one checkable criterion per --criterion value, each
// printing a single PASS/FAIL line with its measured numbers.

#include <algorithm>
#include <chrono>
#include <cstring>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <vector>

#include "../support/fixtures.hpp"
#include "vrp2l/construct.hpp"
#include "vrp2l/loading.hpp"
#include "vrp2l/io.hpp"
#include "vrp2l/oracle.hpp"
#include "vrp2l/pipeline.hpp"
#include "vrp2l/postopt.hpp"
#include "vrp2l/solution_build.hpp"
#include "vrp2l/tabu.hpp"

using namespace vrp2l;
using vrp2l::test::TestRng;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

GeneratorConfig tiny_config(TestRng& rng, std::uint64_t seed) {
  GeneratorConfig cfg;
  cfg.seed = seed;
  cfg.n_suppliers = rng.uniform_int(2, 3);
  cfg.n_warehouses = rng.uniform_int(1, 2);
  cfg.n_shipments = rng.uniform_int(3, 6);
  cfg.n_trucks = rng.uniform_int(2, 3);
  cfg.n_cities = rng.uniform_int(1, 2);
  cfg.bin_variants = 3;
  cfg.window_tightness = 0.3;
  return cfg;
}

RouteSolverParams exact_route_params() {
  RouteSolverParams params;
  params.pack.prejudge_threshold = 1.0;
  return params;
}

// ---------------------------------------------------------------------------
// 1. Oracle equivalence
// ---------------------------------------------------------------------------
bool criterion_1(std::string& detail) {
  auto start = Clock::now();
  TestRng rng(20250801);
  int solved = 0, matched = 0, regenerated = 0;
  std::uint64_t seed = 1;
  while (solved < 200) {
    GeneratorConfig cfg = tiny_config(rng, seed++);
    Instance inst;
    OracleResult oracle;
    try {
      inst = generate_instance(cfg);
      // stay within the oracle's packing limits: any per-truck subset of
      // these columns must remain exhaustively searchable
      int total_columns = 0;
      for (const Shipment& s : inst.shipments)
        total_columns += static_cast<int>(build_columns(s, inst.pallet).size());
      if (total_columns > 8) {
        ++regenerated;
        continue;
      }
      oracle = exact_solve(inst);
    } catch (const OracleError&) {
      ++regenerated;
      continue;
    } catch (const ModelError&) {
      ++regenerated;  // config rolled an unbuildable fleet
      continue;
    }
    if (!oracle.feasible) {
      ++regenerated;  // generator guarantees feasibility; treat as regen
      continue;
    }

    PipelineOptions opts;
    opts.construct.route = exact_route_params();
    opts.tabu.route = exact_route_params();
    opts.postopt.route = exact_route_params();
    opts.tabu.iteration_budget = 80;
    opts.tabu.threads = 1;
    // single-shipment moves: the exhaustive-budget run wants the full
    // relocation neighborhood, not the bundled speed-up
    opts.tabu.bundle_break_threshold = 1;
    PipelineResult result;
    try {
      result = run_pipeline(inst, opts);
    } catch (const ConstructionError&) {
      ++solved;  // pipeline failed an oracle-feasible instance: a miss
      continue;
    }

    if (result.final.total_mileage < oracle.mileage - 1e-9) {
      detail = "pipeline beat the oracle on seed " + std::to_string(cfg.seed) + " (" +
               std::to_string(result.final.total_mileage) + " < " +
               std::to_string(oracle.mileage) + ")";
      return false;
    }
    ++solved;
    if (result.final.total_mileage <= oracle.mileage + 1e-6) ++matched;
  }
  double rate = static_cast<double>(matched) / solved;
  double elapsed = seconds_since(start);
  std::ostringstream os;
  os << matched << "/" << solved << " optima matched (" << rate * 100 << "%), " << regenerated
     << " regenerated, " << elapsed << " s";
  detail = os.str();
  return rate >= 0.95 && elapsed < 300;
}

// ---------------------------------------------------------------------------
// 2. Constraint soundness
// ---------------------------------------------------------------------------
Solution candidate_after_move(const Solution& x, const Move& move,
                              const std::vector<Bundle>& bundles, const Instance& inst,
                              RouteQueryCache& cache, bool& ok) {
  ok = false;
  auto loads = loads_by_truck(x);
  auto from_it = loads.find(move.from);
  if (from_it == loads.end()) return {};
  std::vector<ShipmentId> fragment, from_rest;
  for (const ShipmentId& sid : from_it->second) {
    const Bundle& b = bundles[move.bundle_idx];
    if (std::count(b.shipments.begin(), b.shipments.end(), sid))
      fragment.push_back(sid);
    else
      from_rest.push_back(sid);
  }
  if (fragment.empty()) return {};
  std::vector<ShipmentId> to_set =
      loads.count(move.to) ? loads.at(move.to) : std::vector<ShipmentId>{};
  to_set.insert(to_set.end(), fragment.begin(), fragment.end());

  RouteResult from_rr = cache.solve(inst.truck(move.from), from_rest, inst);
  RouteResult to_rr = cache.solve(inst.truck(move.to), to_set, inst);
  if (!from_rr.feasible || !to_rr.feasible) return {};

  std::vector<TruckLoad> next;
  for (const auto& [tid, shipments] : loads) {
    if (tid == move.from || tid == move.to) continue;
    next.push_back({tid, shipments, *x.route_of(tid), *x.placement_of(tid)});
  }
  if (!from_rest.empty())
    next.push_back({move.from, from_rest, *from_rr.route, *from_rr.placement});
  if (!to_set.empty()) next.push_back({move.to, to_set, *to_rr.route, *to_rr.placement});
  auto sol = assemble_solution(next, inst);
  if (!sol) return {};
  ok = true;
  return *sol;
}

bool criterion_2(std::string& detail) {
  TestRng rng(7777);
  long labeled_feasible = 0, violated = 0;
  std::uint64_t seed = 9000;
  while (labeled_feasible < 10000) {
    GeneratorConfig cfg;
    cfg.seed = seed++;
    cfg.n_suppliers = rng.uniform_int(3, 6);
    cfg.n_warehouses = rng.uniform_int(1, 2);
    cfg.n_shipments = rng.uniform_int(8, 14);
    cfg.n_trucks = rng.uniform_int(6, 10);
    cfg.n_cities = rng.uniform_int(1, 2);
    Instance inst = generate_instance(cfg);
    Solution current = initial_solution(inst);
    ++labeled_feasible;
    if (!validate_solution(current, inst).empty()) ++violated;

    auto bundles = bundle_shipments(inst);
    RouteQueryCache cache{RouteSolverParams{}};
    for (int step = 0; step < 30; ++step) {
      Move move;
      move.bundle_idx = rng.uniform_int(0, static_cast<int>(bundles.size()) - 1);
      auto loads = loads_by_truck(current);
      std::vector<TruckId> on;
      for (const auto& [tid, shipments] : loads)
        for (const ShipmentId& sid : shipments)
          if (std::count(bundles[move.bundle_idx].shipments.begin(),
                         bundles[move.bundle_idx].shipments.end(), sid)) {
            on.push_back(tid);
            break;
          }
      if (on.empty()) continue;
      move.from = on[rng.uniform_int(0, static_cast<int>(on.size()) - 1)];
      move.to = inst.trucks[rng.uniform_int(0, static_cast<int>(inst.trucks.size()) - 1)].id;
      if (move.to == move.from) continue;
      bool ok = false;
      Solution cand = candidate_after_move(current, move, bundles, inst, cache, ok);
      if (!ok) continue;
      ++labeled_feasible;
      if (!validate_solution(cand, inst).empty()) ++violated;
      current = std::move(cand);
    }
    Solution post = postoptimize(current, inst);
    ++labeled_feasible;
    if (!validate_solution(post, inst).empty()) ++violated;
  }

  // injected single-constraint breaches, one per constraint-table row
  int undetected = 0;
  std::vector<std::string> missed;
  {
    using vrp2l::test::InstanceBuilder;
    InstanceBuilder b;
    b.yard("Y").supplier("A", "SH", {0, 600}, 2, 10).supplier("B", "SH", {0, 600}, 2, 10);
    b.hub("H", {0, 800}, 2, 10);
    b.warehouse("W", {0, 900}, 2, 10);
    b.truck("T1", 3, 6).truck("T2", 3, 6).truck("T3", 3, 6);
    b.shipment("s1", "A", "W", 2, {1, 1, 1, 2});
    b.shipment("s2", "B", "W", 2, {1, 2, 1, 2});
    b.shipment("up", "A", "H", 1, {1, 1, 1, 1});
    b.shipment("down", "H", "W", 1, {1, 1, 1, 1});
    b.hub_link("up", "down");
    b.distance("Y", "A", 10).distance("Y", "B", 12).distance("A", "B", 5)
        .distance("A", "H", 8).distance("B", "H", 9).distance("H", "W", 7)
        .distance("A", "W", 14).distance("B", "W", 13).distance("W", "Y", 11)
        .distance("Y", "H", 15);
    Instance inst = b.build();

    RouteQueryCache cache{RouteSolverParams{}};
    RouteResult r1 = cache.solve(inst.truck("T1"), {"s1", "up"}, inst);
    RouteResult r2 = cache.solve(inst.truck("T2"), {"s2"}, inst);
    RouteResult r3 = cache.solve(inst.truck("T3"), {"down"}, inst);
    std::vector<TruckLoad> loads{{"T1", {"s1", "up"}, *r1.route, *r1.placement},
                                 {"T2", {"s2"}, *r2.route, *r2.placement},
                                 {"T3", {"down"}, *r3.route, *r3.placement}};
    Solution base = *assemble_solution(loads, inst);
    if (!validate_solution(base, inst).empty()) {
      detail = "breach fixture base is not feasible";
      return false;
    }

    auto detects = [&](Family family, const std::function<void(Solution&)>& corrupt,
                       const char* label) {
      Solution broken = base;
      corrupt(broken);
      for (const Violation& v : validate_solution(broken, inst))
        if (v.family == family) return;
      ++undetected;
      missed.push_back(label);
    };

    detects(Family::A1, [](Solution& s) { s.routes[0].stops[1].departure += 1; }, "A1");
    detects(Family::A3,
            [](Solution& s) {
              for (Route& r : s.routes)
                for (size_t k = 0; k + 1 < r.stops.size(); ++k)
                  if (!r.stops[k].pickups.empty() && r.stops[k].pickups[0] == "s2") {
                    // deliver before pickup
                    auto& later = r.stops[k + 1];
                    std::swap(r.stops[k].pickups, later.pickups);
                    std::swap(r.stops[k].deliveries, later.deliveries);
                  }
            },
            "A3");
    detects(Family::B1, [](Solution& s) { s.placements[0].items[0].layers = 99; }, "B1");
    detects(Family::B2,
            [](Solution& s) {
              auto& items = s.placements[0].items;
              if (items.size() >= 2) {
                items[1].u = items[0].u;
                items[1].v = items[0].v;
                items[1].pickup_stop = items[0].pickup_stop;
                items[1].delivery_stop = items[0].delivery_stop;
              } else {
                items[0].u = 99;
              }
            },
            "B2");
    detects(Family::B3,
            [](Solution& s) {
              // later-delivered item dead rearward of an earlier one
              auto& items = s.placements[0].items;
              if (items.size() >= 2) {
                items[0].u = 0;
                items[0].v = 2;
                items[0].delivery_stop = 2;
                items[1].u = 0;
                items[1].v = 0;
                items[1].pickup_stop = items[0].pickup_stop;
                items[1].delivery_stop = 3;
              }
            },
            "B3");
    detects(Family::Hub,
            [](Solution& s) {
              for (Route& r : s.routes)
                for (Stop& st : r.stops)
                  if (!st.pickups.empty() && st.pickups[0] == "down") {
                    st.arrival = 0;
                    st.wait = 0;
                    st.departure = 10;
                  }
            },
            "hub");
    detects(Family::Assignment, [](Solution& s) { s.assignment.truck_of.erase("s2"); },
            "must-load");
    // A2: dock overflow fixture (three services at a 2-dock supplier)
    {
      Solution broken = base;
      // clone T2's visit times onto T1 and T3 at supplier A is contrived;
      // instead rebuild the dedicated overflow fixture
      InstanceBuilder qb;
      qb.yard("Y").supplier("S", "SH", {0, 1440}, 2, 10).warehouse("W");
      qb.truck("Q1").truck("Q2").truck("Q3");
      qb.shipment("q1", "S", "W").shipment("q2", "S", "W").shipment("q3", "S", "W");
      qb.distance("Y", "S", 10).distance("S", "W", 5).distance("W", "Y", 5);
      Instance qinst = qb.build();
      Solution qsol;
      int i = 1;
      for (const char* truck : {"Q1", "Q2", "Q3"}) {
        std::string sid = "q" + std::to_string(i++);
        qsol.assignment.truck_of[sid] = truck;
        Route r;
        r.truck = truck;
        r.stops = {{"Y", {}, {}, 0, 0, 0},
                   {"S", {sid}, {}, 10, 0, 20},
                   {"W", {}, {sid}, 25, 0, 25},
                   {"Y", {}, {}, 30, 0, 30}};
        qsol.routes.push_back(r);
        Placement p;
        p.truck = truck;
        p.items = {{sid, 0, 0, 0, 1, 1, 1, 1, false, 1, 2}};
        qsol.placements.push_back(p);
      }
      qsol.total_mileage = 60;
      bool found = false;
      for (const Violation& v : validate_solution(qsol, qinst))
        if (v.family == Family::A2) found = true;
      if (!found) {
        ++undetected;
        missed.push_back("A2");
      }
    }
  }

  std::ostringstream os;
  os << labeled_feasible << " feasible-labeled solutions, " << violated
     << " with violations; " << undetected << " undetected injected breaches";
  for (const std::string& m : missed) os << " [" << m << "]";
  detail = os.str();
  return violated == 0 && undetected == 0;
}

// ---------------------------------------------------------------------------
// 3. Packing correctness
// ---------------------------------------------------------------------------
bool criterion_3(std::string& detail) {
  TestRng rng(333);
  int disagreements = 0, false_positives = 0, feasible_cases = 0;
  for (int round = 0; round < 1000; ++round) {
    Truck t;
    t.id = "T";
    t.surface_width = rng.uniform_int(2, 4);
    t.surface_length = rng.uniform_int(2, 6);
    t.cost_per_distance = 1;
    int n = rng.uniform_int(1, 5);
    std::vector<PackItem> items;
    for (int i = 0; i < n; ++i) {
      Column c;
      c.shipment = "s" + std::to_string(i);
      c.width = rng.uniform_int(1, 3);
      c.length = rng.uniform_int(1, 3);
      c.layers = 1;
      int pickup = rng.uniform_int(0, 2);
      items.push_back({c, pickup, rng.uniform_int(pickup + 1, 4)});
    }
    PackParams full;
    full.beam_width = 0;
    full.prejudge_threshold = 1.0;
    bool mine = pack(items, t, full).feasible;
    bool oracle = exact_pack(items, t);
    if (mine != oracle) ++disagreements;
    if (oracle) ++feasible_cases;

    PackParams beam;
    beam.beam_width = 5;
    beam.auto_exhaustive_cap = 0;
    if (pack(items, t, beam).feasible && !oracle) ++false_positives;
  }
  std::ostringstream os;
  os << "1000 cases (" << feasible_cases << " feasible): " << disagreements
     << " full-width disagreements, " << false_positives << " beam false positives";
  detail = os.str();
  return disagreements == 0 && false_positives == 0;
}

// ---------------------------------------------------------------------------
// 4. Queue simulation
// ---------------------------------------------------------------------------
bool criterion_4(std::string& detail) {
  using vrp2l::test::InstanceBuilder;
  TestRng rng(444);
  int capacity_breaches = 0;
  for (int round = 0; round < 500; ++round) {
    InstanceBuilder b;
    b.yard("Y");
    int n_loc = rng.uniform_int(1, 3);
    for (int i = 0; i < n_loc; ++i)
      b.supplier("S" + std::to_string(i), "SH", {0, kDayHorizon}, rng.uniform_int(1, 3),
                 rng.uniform_int(5, 25));
    b.warehouse("W", {0, kDayHorizon}, rng.uniform_int(1, 3), rng.uniform_int(5, 20));
    int n_trucks = rng.uniform_int(2, 7);
    for (int i = 0; i < n_trucks; ++i) b.truck("T" + std::to_string(i));
    std::vector<std::vector<Stop>> sequences;
    for (int i = 0; i < n_trucks; ++i) {
      std::string sid = "s" + std::to_string(i);
      std::string src = "S" + std::to_string(rng.uniform_int(0, n_loc - 1));
      b.shipment(sid, src, "W");
      sequences.push_back({{"Y", {}, {}, 0, 0, 0},
                           {src, {sid}, {}, 0, 0, 0},
                           {"W", {}, {sid}, 0, 0, 0},
                           {"Y", {}, {}, 0, 0, 0}});
    }
    std::vector<std::string> ids{"Y", "W"};
    for (int i = 0; i < n_loc; ++i) ids.push_back("S" + std::to_string(i));
    for (size_t i = 0; i < ids.size(); ++i)
      for (size_t j = i + 1; j < ids.size(); ++j)
        b.distance(ids[i], ids[j], rng.uniform_int(0, 25));
    Instance inst = b.build();

    std::vector<Route> routes;
    for (int i = 0; i < n_trucks; ++i) {
      auto timed = propagate_times(sequences[i], inst.truck("T" + std::to_string(i)), inst);
      if (!timed) continue;
      routes.push_back({"T" + std::to_string(i), *timed, kDayHorizon});
    }
    GtwReport report = simulate_queues(routes, inst);

    std::map<LocationId, std::vector<std::pair<Minutes, int>>> events;
    for (const DockEvent& e : report.events)
      if (e.service_end > e.service_start) {
        events[e.location].push_back({e.service_start, +1});
        events[e.location].push_back({e.service_end, -1});
      }
    for (auto& [lid, evs] : events) {
      std::sort(evs.begin(), evs.end(), [](auto a, auto b) {
        if (a.first != b.first) return a.first < b.first;
        return a.second < b.second;
      });
      int busy = 0;
      int cap = inst.location(lid).dock_count;
      for (auto [t, d] : evs) {
        busy += d;
        if (busy > cap) ++capacity_breaches;
      }
    }
  }

  // the exact serialisation fixture: three simultaneous arrivals, one dock
  using vrp2l::test::InstanceBuilder;
  InstanceBuilder b;
  b.yard("Y").supplier("S", "SH", {0, kDayHorizon}, 1, 10).warehouse("W");
  b.truck("T0").truck("T1").truck("T2");
  b.shipment("s0", "S", "W").shipment("s1", "S", "W").shipment("s2", "S", "W");
  b.distance("Y", "S", 0).distance("S", "W", 5).distance("W", "Y", 5);
  Instance inst = b.build();
  std::vector<Route> routes;
  for (int i = 0; i < 3; ++i) {
    std::string sid = "s" + std::to_string(i);
    std::vector<Stop> seq = {{"Y", {}, {}, 0, 0, 0},
                             {"S", {sid}, {}, 0, 0, 0},
                             {"W", {}, {sid}, 0, 0, 0},
                             {"Y", {}, {}, 0, 0, 0}};
    routes.push_back({"T" + std::to_string(i), *propagate_times(seq, inst.truck("T" + std::to_string(i)), inst),
                      kDayHorizon});
  }
  simulate_queues(routes, inst);
  std::vector<Minutes> starts;
  for (const Route& r : routes) starts.push_back(r.stops[1].arrival + r.stops[1].wait);
  std::sort(starts.begin(), starts.end());
  bool fixture_ok = starts == std::vector<Minutes>{0, 10, 20};

  std::ostringstream os;
  os << "500 fixtures swept, " << capacity_breaches << " capacity breaches; 0/10/20 fixture "
     << (fixture_ok ? "exact" : "WRONG");
  detail = os.str();
  return capacity_breaches == 0 && fixture_ok;
}

// ---------------------------------------------------------------------------
// 5. Bundling trend
// ---------------------------------------------------------------------------
bool criterion_5(std::string& detail) {
  std::vector<double> wb, nb;
  double init_max = 0;
  bool all_below_init = true;
  for (std::uint64_t seed : {101, 102, 103, 104, 105}) {
    GeneratorConfig cfg;
    cfg.seed = seed;
    cfg.n_suppliers = 15;
    cfg.n_warehouses = 3;
    cfg.n_shipments = 100;
    cfg.n_trucks = 25;
    cfg.n_cities = 3;
    cfg.bin_variants = 10;
    Instance inst = generate_instance(cfg);
    Solution x0 = initial_solution(inst, {});

    TabuParams params;
    params.budget_seconds = 120;
    params.bundling = true;
    Solution with_bundle = tabu_search(x0, inst, params);
    params.bundling = false;
    Solution without_bundle = tabu_search(x0, inst, params);

    wb.push_back(with_bundle.total_mileage);
    nb.push_back(without_bundle.total_mileage);
    init_max = std::max(init_max, x0.total_mileage);
    if (with_bundle.total_mileage >= x0.total_mileage ||
        without_bundle.total_mileage >= x0.total_mileage)
      all_below_init = false;
  }
  std::sort(wb.begin(), wb.end());
  std::sort(nb.begin(), nb.end());
  double wb_median = wb[2], nb_median = nb[2];
  std::ostringstream os;
  os << "median WB " << wb_median << " vs NB " << nb_median << " (init max " << init_max
     << ")";
  detail = os.str();
  return wb_median < nb_median && all_below_init;
}

// ---------------------------------------------------------------------------
// 6. Post-opt monotonicity
// ---------------------------------------------------------------------------
bool criterion_6(std::string& detail) {
  TestRng rng(666);
  int increases = 0, non_idempotent = 0, infeasible_outputs = 0;
  for (int round = 0; round < 100; ++round) {
    GeneratorConfig cfg;
    cfg.seed = 40000 + round;
    cfg.n_suppliers = rng.uniform_int(3, 7);
    cfg.n_warehouses = rng.uniform_int(1, 2);
    cfg.n_shipments = rng.uniform_int(8, 16);
    cfg.n_trucks = rng.uniform_int(6, 12);
    cfg.n_cities = rng.uniform_int(1, 3);
    Instance inst = generate_instance(cfg);
    Solution sol = initial_solution(inst);
    if (rng.chance(0.3)) {
      TabuParams t;
      t.iteration_budget = 5;
      sol = tabu_search(sol, inst, t);
    }
    Solution once = postoptimize(sol, inst);
    if (once.total_mileage > sol.total_mileage + kMileageEps) ++increases;
    if (!validate_solution(once, inst).empty()) ++infeasible_outputs;
    Solution twice = postoptimize(once, inst);
    if (!(twice == once)) ++non_idempotent;
  }
  std::ostringstream os;
  os << "100 solutions: " << increases << " mileage increases, " << non_idempotent
     << " idempotence breaks, " << infeasible_outputs << " infeasible outputs";
  detail = os.str();
  return increases == 0 && non_idempotent == 0 && infeasible_outputs == 0;
}

// ---------------------------------------------------------------------------
// 7. Held-Karp exactness
// ---------------------------------------------------------------------------
bool criterion_7(std::string& detail) {
  using vrp2l::test::InstanceBuilder;
  TestRng rng(777);
  int mismatches = 0;
  for (int round = 0; round < 500; ++round) {
    int n = rng.uniform_int(1, 8);
    InstanceBuilder b;
    b.yard("Y");
    for (int i = 0; i < 2 * n; ++i) b.supplier("P" + std::to_string(i), "SH");
    b.warehouse("W").truck("T1");
    std::vector<std::string> ids{"Y", "W"};
    for (int i = 0; i < 2 * n; ++i) ids.push_back("P" + std::to_string(i));
    for (size_t i = 0; i < ids.size(); ++i)
      for (size_t j = 0; j < ids.size(); ++j)
        if (i != j) b.distance(ids[i], ids[j], rng.uniform_int(1, 99), false);
    Instance inst = b.build();
    std::vector<SubrouteEndpoints> subs;
    for (int i = 0; i < n; ++i)
      subs.push_back({"P" + std::to_string(2 * i), "P" + std::to_string(2 * i + 1)});

    auto cost_of = [&](const std::vector<int>& order) {
      double c = inst.distance("Y", subs[order.front()].first);
      for (size_t i = 0; i + 1 < order.size(); ++i)
        c += inst.distance(subs[order[i]].last, subs[order[i + 1]].first);
      return c + inst.distance(subs[order.back()].last, "Y");
    };

    SubrouteOrdering out = sequence_subroutes(subs, "Y", inst);
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    double best = std::numeric_limits<double>::infinity();
    do best = std::min(best, cost_of(perm));
    while (std::next_permutation(perm.begin(), perm.end()));
    if (std::abs(cost_of(out.order) - best) > 1e-9) ++mismatches;
  }
  std::ostringstream os;
  os << "500 tables, " << mismatches << " mismatches vs permutation brute force";
  detail = os.str();
  return mismatches == 0;
}

// ---------------------------------------------------------------------------
// 8. Robustness harness
// ---------------------------------------------------------------------------
bool criterion_8(std::string& detail) {
  auto start = Clock::now();
  GeneratorConfig cfg;
  cfg.seed = 888;
  cfg.n_suppliers = 10;
  cfg.n_warehouses = 2;
  cfg.n_shipments = 50;
  cfg.n_trucks = 16;
  cfg.n_cities = 2;
  Instance inst = generate_instance(cfg);

  double init_mileage = -1;
  std::vector<double> finals;
  int failures = 0;
  for (int tenure : {4, 8, 16})
    for (int beam : {3, 5})
      for (double threshold : {0.8, 0.9})
        for (double w2 : {0.25, 0.5}) {
          PipelineOptions opts;
          RouteSolverParams route;
          route.pack.beam_width = beam;
          route.pack.prejudge_threshold = threshold;
          route.pack.w_irregularity = w2;
          opts.construct.route = route;
          opts.tabu.route = route;
          opts.postopt.route = route;
          opts.tabu.tenure = tenure;
          opts.tabu.budget_seconds = 40;
          try {
            PipelineResult result = run_pipeline(inst, opts);
            finals.push_back(result.final.total_mileage);
            init_mileage = result.initial.total_mileage;
          } catch (const std::exception&) {
            ++failures;
          }
        }

  double elapsed = seconds_since(start);
  if (failures > 0 || finals.size() != 24) {
    detail = std::to_string(failures) + " of 24 runs crashed";
    return false;
  }
  double lo = *std::min_element(finals.begin(), finals.end());
  double hi = *std::max_element(finals.begin(), finals.end());
  double spread = (hi - lo) / init_mileage;
  std::ostringstream os;
  os << "24 combos, finals in [" << lo << ", " << hi << "], spread " << spread * 100
     << "% of init " << init_mileage << ", " << elapsed << " s";
  detail = os.str();
  return spread < 0.25 && elapsed < 1800;
}

// ---------------------------------------------------------------------------
// 9. Scale smoke test
// ---------------------------------------------------------------------------
bool criterion_9(std::string& detail) {
  std::ostringstream os;

  auto start = Clock::now();
  GeneratorConfig paper;
  paper.seed = 4242;
  paper.n_suppliers = 45;
  paper.n_warehouses = 8;
  paper.n_shipments = 311;
  paper.n_trucks = 90;
  paper.n_cities = 4;
  paper.bin_variants = 54;
  Instance inst = generate_instance(paper);
  PipelineOptions opts;
  opts.tabu.budget_seconds = 60;
  PipelineResult result = run_pipeline(inst, opts);
  double paper_elapsed = seconds_since(start);
  bool paper_ok = paper_elapsed < 300 && result.diagnostics.feasible;
  os << "311-shipment pipeline " << paper_elapsed << " s (mileage "
     << result.initial.total_mileage << " -> " << result.final.total_mileage << "); ";

  start = Clock::now();
  GeneratorConfig big;
  big.seed = 20000;
  big.n_suppliers = 150;
  big.n_warehouses = 10;
  big.n_shipments = 2000;
  big.n_trucks = 700;
  big.n_cities = 8;
  big.bin_variants = 54;
  Instance big_inst = generate_instance(big);
  Solution constructed = initial_solution(big_inst);
  double big_elapsed = seconds_since(start);
  bool big_ok = big_elapsed < 900 && !constructed.routes.empty();
  os << "2000-shipment construction " << big_elapsed << " s (" << constructed.routes.size()
     << " trucks, mileage " << constructed.total_mileage << ")";

  detail = os.str();
  return paper_ok && big_ok;
}

}  // namespace

int main(int argc, char** argv) {
  std::map<int, std::pair<const char*, std::function<bool(std::string&)>>> criteria = {
      {1, {"oracle equivalence on 200 tiny instances", criterion_1}},
      {2, {"constraint soundness over 10000 solutions plus injected breaches", criterion_2}},
      {3, {"packing agreement with the exhaustive oracle", criterion_3}},
      {4, {"queue simulation capacity and serialisation", criterion_4}},
      {5, {"bundling trend (WB vs NB medians)", criterion_5}},
      {6, {"post-optimization monotone and idempotent", criterion_6}},
      {7, {"sub-route ordering equals permutation brute force", criterion_7}},
      {8, {"robustness across 24 parameter combinations", criterion_8}},
      {9, {"paper-scale and 2000-shipment throughput", criterion_9}},
  };

  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc)
      selected.push_back(std::atoi(argv[++i]));
  }
  if (selected.empty())
    for (const auto& [id, _] : criteria) selected.push_back(id);

  int failures = 0;
  for (int id : selected) {
    auto it = criteria.find(id);
    if (it == criteria.end()) {
      std::cerr << "unknown criterion " << id << "\n";
      return 2;
    }
    std::string detail;
    bool ok = false;
    try {
      ok = it->second.second(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    std::cout << (ok ? "[PASS]" : "[FAIL]") << " criterion " << id << ": " << it->second.first
              << " — " << detail << "\n";
    if (!ok) ++failures;
  }
  return failures == 0 ? 0 : 1;
}

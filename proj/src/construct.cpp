#include "vrp2l/construct.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "vrp2l/schedule.hpp"
#include "vrp2l/solution_build.hpp"

namespace vrp2l {

SupplierAreas cluster_suppliers(const Instance& instance, double radius_scale) {
  std::vector<int> suppliers;
  for (size_t i = 0; i < instance.locations.size(); ++i)
    if (instance.locations[i].kind == LocationKind::Supplier)
      suppliers.push_back(static_cast<int>(i));
  int n = static_cast<int>(suppliers.size());
  if (n == 0) throw ModelError("cluster_suppliers: no suppliers");

  SupplierAreas areas;
  if (n == 1) {
    areas.groups.push_back({instance.locations[suppliers[0]].id});
    return areas;
  }

  double mean = 0;
  int pairs = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      mean += instance.travel.distance[suppliers[i]][suppliers[j]];
      ++pairs;
    }
  mean /= pairs;

  // weighted adjacency: 1/d for close pairs
  std::vector<std::vector<double>> w(n, std::vector<double>(n, 0));
  double total_weight = 0;  // m
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      double d = instance.travel.distance[suppliers[i]][suppliers[j]];
      if (d < radius_scale * mean) {
        double weight = 1.0 / std::max(d, 1e-6);
        w[i][j] = w[j][i] = weight;
        total_weight += weight;
      }
    }

  std::vector<int> community(n);
  for (int i = 0; i < n; ++i) community[i] = i;

  if (total_weight > 0) {
    // community-level edge weights and degrees
    std::map<std::pair<int, int>, double> e;
    std::vector<double> degree(n, 0), internal(n, 0);
    std::vector<bool> alive(n, true);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) degree[i] += w[i][j];
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (w[i][j] > 0) e[{i, j}] = w[i][j];

    double two_m = 2 * total_weight;
    while (true) {
      double best_gain = 0;
      std::pair<int, int> best{-1, -1};
      for (const auto& [key, weight] : e) {
        auto [a, b] = key;
        if (!alive[a] || !alive[b]) continue;
        double gain = 2 * (weight / two_m - degree[a] * degree[b] / (two_m * two_m));
        if (gain > best_gain + 1e-12) {
          best_gain = gain;
          best = key;
        }
      }
      if (best.first < 0) break;
      auto [a, b] = best;
      // merge b into a
      for (int i = 0; i < n; ++i)
        if (community[i] == b) community[i] = a;
      alive[b] = false;
      internal[a] += internal[b] + e[{a, b}];
      degree[a] += degree[b];
      std::map<std::pair<int, int>, double> e2;
      for (const auto& [key, weight] : e) {
        auto [x, y] = key;
        if (!alive[x] || !alive[y]) {
          int nx = x == b ? a : x;
          int ny = y == b ? a : y;
          if (nx == ny) continue;
          if (nx > ny) std::swap(nx, ny);
          if (!alive[nx] || !alive[ny]) continue;
          e2[{nx, ny}] += weight;
        } else {
          e2[key] += weight;
        }
      }
      e = std::move(e2);
    }

    // final modularity, recomputed from the node-level graph
    std::vector<double> node_degree(n, 0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) node_degree[i] += w[i][j];
    double q = 0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (community[i] == community[j])
          q += w[i][j] - node_degree[i] * node_degree[j] / two_m;
    areas.modularity = q / two_m;
  }

  std::map<int, std::vector<LocationId>> groups;
  for (int i = 0; i < n; ++i)
    groups[community[i]].push_back(instance.locations[suppliers[i]].id);
  for (auto& [c, members] : groups) {
    std::sort(members.begin(), members.end());
    areas.groups.push_back(std::move(members));
  }
  std::sort(areas.groups.begin(), areas.groups.end());
  return areas;
}

namespace {

struct OpenLoad {
  int truck_idx;
  int area;
  std::vector<ShipmentId> shipments;
  RouteResult rr;
};

struct Builder {
  const Instance& inst;
  const ConstructParams& params;
  RouteQueryCache cache;
  std::map<ShipmentId, int> area_of;
  std::vector<int> truck_by_size;  // truck indexes, smallest adequate first
  std::set<int> used_trucks;
  std::vector<OpenLoad> loads;

  Builder(const Instance& instance, const ConstructParams& p)
      : inst(instance), params(p), cache(p.route) {
    truck_by_size.resize(inst.trucks.size());
    for (size_t i = 0; i < truck_by_size.size(); ++i) truck_by_size[i] = static_cast<int>(i);
    std::sort(truck_by_size.begin(), truck_by_size.end(), [&](int a, int b) {
      double sa = inst.trucks[a].surface_area(), sb = inst.trucks[b].surface_area();
      if (sa != sb) return sa < sb;
      return inst.trucks[a].id < inst.trucks[b].id;
    });
  }

  // true when the shipment joined an already-open load
  bool try_insert_existing(const ShipmentId& sid, int area) {
    for (OpenLoad& load : loads) {
      if (load.area != area) continue;
      std::vector<ShipmentId> trial = load.shipments;
      trial.push_back(sid);
      RouteResult rr = cache.solve(inst.trucks[load.truck_idx], trial, inst);
      if (rr.feasible) {
        load.shipments = std::move(trial);
        load.rr = std::move(rr);
        return true;
      }
    }
    return false;
  }

  // last resort on a dry truck pool: any open load from the same city
  bool try_insert_same_city(const ShipmentId& sid) {
    const std::string& city = inst.location(inst.shipment(sid).source).city;
    for (OpenLoad& load : loads) {
      if (inst.location(inst.shipment(load.shipments.front()).source).city != city) continue;
      std::vector<ShipmentId> trial = load.shipments;
      trial.push_back(sid);
      RouteResult rr = cache.solve(inst.trucks[load.truck_idx], trial, inst);
      if (rr.feasible) {
        load.shipments = std::move(trial);
        load.rr = std::move(rr);
        return true;
      }
    }
    return false;
  }

  void open_new_truck(const ShipmentId& sid, int area) {
    for (int ti : truck_by_size) {
      if (used_trucks.count(ti)) continue;
      RouteResult rr = cache.solve(inst.trucks[ti], {sid}, inst);
      if (rr.feasible) {
        used_trucks.insert(ti);
        loads.push_back({ti, area, {sid}, std::move(rr)});
        return;
      }
    }
    // the pool ran dry: fall back to open routes, same area first
    if (try_insert_existing(sid, area)) return;
    if (try_insert_same_city(sid)) return;
    throw ConstructionError("construction failed: no idle truck can carry shipment " + sid);
  }

  std::vector<TruckLoad> to_truck_loads() const {
    std::vector<TruckLoad> out;
    for (const OpenLoad& l : loads) {
      TruckLoad tl;
      tl.truck = inst.trucks[l.truck_idx].id;
      tl.shipments = l.shipments;
      tl.route = *l.rr.route;
      tl.placement = *l.rr.placement;
      out.push_back(std::move(tl));
    }
    return out;
  }
};

}  // namespace

Solution initial_solution(const Instance& instance, const ConstructParams& params) {
  if (instance.shipments.empty()) {
    Solution empty;
    return empty;
  }

  SupplierAreas areas = cluster_suppliers(instance, params.radius_scale);
  std::map<LocationId, int> area_of_supplier;
  for (size_t a = 0; a < areas.groups.size(); ++a)
    for (const LocationId& sid : areas.groups[a]) area_of_supplier[sid] = static_cast<int>(a);

  Builder builder(instance, params);
  for (const Shipment& s : instance.shipments)
    builder.area_of[s.id] = area_of_supplier.at(s.source);

  // per area: descending source->destination distance, greedy fill of the
  // current truck, new truck when the solver says no
  auto sorted_area_shipments = [&](const std::vector<ShipmentId>& ids) {
    std::vector<ShipmentId> sorted = ids;
    std::sort(sorted.begin(), sorted.end(), [&](const ShipmentId& a, const ShipmentId& b) {
      const Shipment& sa = instance.shipment(a);
      const Shipment& sb = instance.shipment(b);
      double da = instance.distance(sa.source, sa.destination);
      double db = instance.distance(sb.source, sb.destination);
      if (da != db) return da > db;
      return a < b;
    });
    return sorted;
  };

  std::vector<std::vector<ShipmentId>> shipments_per_area(areas.groups.size());
  for (const Shipment& s : instance.shipments)
    shipments_per_area[builder.area_of[s.id]].push_back(s.id);

  for (size_t a = 0; a < shipments_per_area.size(); ++a) {
    OpenLoad* current = nullptr;
    for (const ShipmentId& sid : sorted_area_shipments(shipments_per_area[a])) {
      if (current) {
        std::vector<ShipmentId> trial = current->shipments;
        trial.push_back(sid);
        RouteResult rr =
            builder.cache.solve(instance.trucks[current->truck_idx], trial, instance);
        if (rr.feasible) {
          current->shipments = std::move(trial);
          current->rr = std::move(rr);
          continue;
        }
      }
      builder.open_new_truck(sid, static_cast<int>(a));
      current = &builder.loads.back();
    }
  }

  // A2 repair rounds
  std::set<std::map<ShipmentId, TruckId>> seen_assignments;
  for (int round = 0; round < params.repair_round_cap; ++round) {
    std::vector<Route> routes;
    for (const OpenLoad& l : builder.loads) routes.push_back(*l.rr.route);
    GtwReport report = simulate_queues(routes, instance);
    if (report.feasible) {
      std::vector<TruckLoad> loads = builder.to_truck_loads();
      auto sol = assemble_solution(std::move(loads), instance);
      if (!sol) throw ConstructionError("construction failed: assembled solution infeasible");
      return *sol;
    }

    std::set<TruckId> violating;
    for (const GtwViolation& v : report.violations)
      for (const std::string& e : v.entities)
        if (instance.truck_index.count(e)) violating.insert(e);
    if (violating.empty())
      throw ConstructionError("construction failed: queue infeasibility names no truck");

    std::map<ShipmentId, TruckId> assignment;
    for (const OpenLoad& l : builder.loads)
      for (const ShipmentId& sid : l.shipments)
        assignment[sid] = instance.trucks[l.truck_idx].id;
    bool stagnated = !seen_assignments.insert(assignment).second;

    if (!stagnated) {
      // delete violating trucks, re-run the assignment loop on their shipments
      std::vector<std::pair<int, ShipmentId>> repair;
      std::vector<OpenLoad> kept;
      for (OpenLoad& l : builder.loads) {
        if (violating.count(instance.trucks[l.truck_idx].id)) {
          builder.used_trucks.erase(l.truck_idx);
          for (const ShipmentId& sid : l.shipments) repair.push_back({l.area, sid});
        } else {
          kept.push_back(std::move(l));
        }
      }
      builder.loads = std::move(kept);
      std::sort(repair.begin(), repair.end(), [&](const auto& x, const auto& y) {
        if (x.first != y.first) return x.first < y.first;
        const Shipment& sa = instance.shipment(x.second);
        const Shipment& sb = instance.shipment(y.second);
        double da = instance.distance(sa.source, sa.destination);
        double db = instance.distance(sb.source, sb.destination);
        if (da != db) return da > db;
        return x.second < y.second;
      });
      for (const auto& [area, sid] : repair) {
        if (builder.try_insert_existing(sid, area)) continue;
        builder.open_new_truck(sid, area);
      }
    } else {
      // stagnation: consolidate one violating truck's load with another route
      // onto a larger truck, reducing the contested location's visit count
      bool consolidated = false;
      for (const TruckId& vid : violating) {
        OpenLoad* victim = nullptr;
        for (OpenLoad& l : builder.loads)
          if (instance.trucks[l.truck_idx].id == vid) victim = &l;
        if (!victim) continue;
        for (OpenLoad& other : builder.loads) {
          if (&other == victim || other.area != victim->area) continue;
          std::vector<ShipmentId> merged = other.shipments;
          merged.insert(merged.end(), victim->shipments.begin(), victim->shipments.end());
          for (int ti : builder.truck_by_size) {
            bool is_other = ti == other.truck_idx;
            if (!is_other && builder.used_trucks.count(ti)) continue;
            RouteResult rr = builder.cache.solve(instance.trucks[ti], merged, instance);
            if (!rr.feasible) continue;
            builder.used_trucks.erase(victim->truck_idx);
            builder.used_trucks.erase(other.truck_idx);
            builder.used_trucks.insert(ti);
            other.truck_idx = ti;
            other.shipments = std::move(merged);
            other.rr = std::move(rr);
            int victim_idx = static_cast<int>(victim - builder.loads.data());
            builder.loads.erase(builder.loads.begin() + victim_idx);
            consolidated = true;
            break;
          }
          if (consolidated) break;
        }
        if (consolidated) break;
      }
      if (!consolidated)
        throw ConstructionError(
            "construction failed: A2 repair stagnated and no consolidation is feasible");
    }
  }
  throw ConstructionError("construction failed: A2 repair rounds exhausted");
}

}  // namespace vrp2l

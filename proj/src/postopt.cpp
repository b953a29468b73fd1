#include "vrp2l/postopt.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "vrp2l/loading.hpp"
#include "vrp2l/schedule.hpp"
#include "vrp2l/solution_build.hpp"

namespace vrp2l {

SubrouteOrdering sequence_subroutes(const std::vector<SubrouteEndpoints>& subroutes,
                                    const LocationId& yard, const Instance& instance,
                                    int held_karp_cap) {
  SubrouteOrdering out;
  int n = static_cast<int>(subroutes.size());
  if (n == 0) return out;
  if (n == 1) {
    out.order = {0};
    return out;
  }

  auto d_start = [&](int j) { return instance.distance(yard, subroutes[j].first); };
  auto d_link = [&](int i, int j) {
    return instance.distance(subroutes[i].last, subroutes[j].first);
  };
  auto d_end = [&](int j) { return instance.distance(subroutes[j].last, yard); };

  if (n <= held_karp_cap) {
    const double inf = std::numeric_limits<double>::infinity();
    size_t full = size_t{1} << n;
    std::vector<std::vector<double>> cost(full, std::vector<double>(n, inf));
    std::vector<std::vector<int>> parent(full, std::vector<int>(n, -1));
    for (int j = 0; j < n; ++j) cost[size_t{1} << j][j] = d_start(j);
    for (size_t mask = 1; mask < full; ++mask)
      for (int j = 0; j < n; ++j) {
        if (!(mask & (size_t{1} << j)) || cost[mask][j] == inf) continue;
        for (int k = 0; k < n; ++k) {
          if (mask & (size_t{1} << k)) continue;
          size_t next = mask | (size_t{1} << k);
          double c = cost[mask][j] + d_link(j, k);
          if (c < cost[next][k] - kMileageEps) {
            cost[next][k] = c;
            parent[next][k] = j;
          }
        }
      }
    double best = inf;
    int last = -1;
    for (int j = 0; j < n; ++j) {
      double c = cost[full - 1][j] + d_end(j);
      if (c < best - kMileageEps) {
        best = c;
        last = j;
      }
    }
    size_t mask = full - 1;
    while (last >= 0) {
      out.order.push_back(last);
      int prev = parent[mask][last];
      mask &= ~(size_t{1} << last);
      last = prev;
    }
    std::reverse(out.order.begin(), out.order.end());
    return out;
  }

  // beyond the DP cap: nearest neighbour plus pairwise exchange
  out.exact = false;
  std::vector<bool> used(n, false);
  LocationId at = yard;
  for (int step = 0; step < n; ++step) {
    int pick = -1;
    double best = std::numeric_limits<double>::infinity();
    for (int j = 0; j < n; ++j) {
      if (used[j]) continue;
      double c = instance.distance(at, subroutes[j].first);
      if (c < best - kMileageEps) {
        best = c;
        pick = j;
      }
    }
    used[pick] = true;
    out.order.push_back(pick);
    at = subroutes[pick].last;
  }
  auto tour_cost = [&](const std::vector<int>& order) {
    double c = d_start(order.front());
    for (size_t i = 0; i + 1 < order.size(); ++i) c += d_link(order[i], order[i + 1]);
    return c + d_end(order.back());
  };
  bool improved = true;
  while (improved) {
    improved = false;
    double current = tour_cost(out.order);
    for (int i = 0; i < n && !improved; ++i)
      for (int j = i + 1; j < n && !improved; ++j) {
        std::vector<int> trial = out.order;
        std::swap(trial[i], trial[j]);
        if (tour_cost(trial) < current - kMileageEps) {
          out.order = std::move(trial);
          improved = true;
        }
      }
  }
  return out;
}

namespace {

double route_cost(const Route& r, const Instance& inst) {
  const Truck& t = inst.truck(r.truck);
  double total = 0;
  for (size_t k = 0; k + 1 < r.stops.size(); ++k)
    total += t.cost_per_distance * inst.distance(r.stops[k].location, r.stops[k + 1].location);
  return total;
}

// yard-free stop segments separated by empty-onboard boundaries
std::vector<std::vector<Stop>> split_segments(const Route& r) {
  std::vector<std::vector<Stop>> segments;
  std::set<ShipmentId> onboard;
  std::vector<Stop> current;
  for (size_t k = 1; k + 1 < r.stops.size(); ++k) {
    const Stop& st = r.stops[k];
    current.push_back(st);
    for (const ShipmentId& sid : st.pickups) onboard.insert(sid);
    for (const ShipmentId& sid : st.deliveries) onboard.erase(sid);
    if (onboard.empty()) {
      segments.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) segments.push_back(std::move(current));  // malformed route guard
  return segments;
}

std::vector<PackItem> route_pack_items(const Route& route,
                                       const std::vector<ShipmentId>& shipments,
                                       const Instance& inst) {
  std::vector<PackItem> items;
  for (const ShipmentId& sid : shipments) {
    int pickup = -1, delivery = -1;
    for (size_t k = 0; k < route.stops.size(); ++k) {
      if (std::count(route.stops[k].pickups.begin(), route.stops[k].pickups.end(), sid))
        pickup = static_cast<int>(k);
      if (std::count(route.stops[k].deliveries.begin(), route.stops[k].deliveries.end(), sid))
        delivery = static_cast<int>(k);
    }
    for (const Column& c : build_columns(inst.shipment(sid), inst.pallet))
      items.push_back({c, pickup, delivery});
  }
  return items;
}

// per-segment area filter; a multi-trip tour never holds two segments at once
bool segments_prejudge(const Route& route, const std::vector<PackItem>& items,
                       const Truck& truck, double threshold) {
  auto segments = split_segments(route);
  int stop_base = 1;
  for (const auto& seg : segments) {
    std::vector<Column> cols;
    for (const PackItem& it : items)
      if (it.pickup_stop >= stop_base &&
          it.pickup_stop < stop_base + static_cast<int>(seg.size()))
        cols.push_back(it.column);
    if (!prejudge(cols, truck, threshold)) return false;
    stop_base += static_cast<int>(seg.size());
  }
  return true;
}

// Re-times an existing stop sequence on a (possibly different) truck and
// re-packs it. Keeps multi-trip structure intact.
struct RetimedLoad {
  bool feasible = false;
  Route route;
  Placement placement;
};

RetimedLoad retime_on_truck(const Route& base, const Truck& truck,
                            const std::vector<ShipmentId>& shipments, const Instance& inst,
                            const PostoptParams& params, Minutes horizon) {
  RetimedLoad out;
  std::vector<Stop> stops = base.stops;
  stops.front().location = truck.home_yard;
  stops.back().location = truck.home_yard;
  auto timed = propagate_times(stops, truck, inst, horizon);
  if (!timed) return out;
  Route route;
  route.truck = truck.id;
  route.stops = std::move(*timed);
  route.horizon = horizon;
  if (!side_constraints_ok(truck, shipments, route, inst)) return out;

  std::vector<PackItem> items = route_pack_items(route, shipments, inst);
  if (!segments_prejudge(route, items, truck, params.route.pack.prejudge_threshold)) return out;
  PackOutcome outcome = pack(items, truck, params.route.pack);
  if (!outcome.feasible) return out;

  out.feasible = true;
  out.route = std::move(route);
  out.placement = std::move(*outcome.placement);
  return out;
}

std::vector<TruckLoad> current_loads(const Solution& sol) {
  std::vector<TruckLoad> out;
  for (const auto& [tid, shipments] : loads_by_truck(sol)) {
    const Route* r = sol.route_of(tid);
    const Placement* p = sol.placement_of(tid);
    if (!r || !p) continue;
    out.push_back({tid, shipments, *r, *p});
  }
  return out;
}

bool is_multi_trip(const Route& r) { return split_segments(r).size() > 1; }

}  // namespace

Solution downsize_trucks(const Solution& solution, const Instance& instance,
                         const PostoptParams& params) {
  Solution current = solution;
  RouteQueryCache cache(params.route);

  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<TruckLoad> loads = current_loads(current);
    std::set<TruckId> used;
    for (const TruckLoad& l : loads) used.insert(l.truck);

    for (size_t li = 0; li < loads.size() && !changed; ++li) {
      const TruckLoad& load = loads[li];
      const Truck& cur_truck = instance.truck(load.truck);
      std::vector<const Truck*> candidates;
      for (const Truck& t : instance.trucks)
        if (!used.count(t.id) && t.surface_area() < cur_truck.surface_area() - kGeomEps)
          candidates.push_back(&t);
      std::sort(candidates.begin(), candidates.end(), [](const Truck* a, const Truck* b) {
        if (a->cost_per_distance != b->cost_per_distance)
          return a->cost_per_distance < b->cost_per_distance;
        if (a->surface_area() != b->surface_area()) return a->surface_area() < b->surface_area();
        return a->id < b->id;
      });

      for (const Truck* cand : candidates) {
        TruckLoad trial = load;
        trial.truck = cand->id;
        if (is_multi_trip(load.route)) {
          RetimedLoad rt = retime_on_truck(load.route, *cand, load.shipments, instance, params,
                                           load.route.horizon);
          if (!rt.feasible) continue;
          trial.route = std::move(rt.route);
          trial.placement = std::move(rt.placement);
        } else {
          RouteResult rr = cache.solve(*cand, load.shipments, instance);
          if (!rr.feasible) continue;
          trial.route = *rr.route;
          trial.placement = *rr.placement;
        }
        std::vector<TruckLoad> trial_loads = loads;
        trial_loads[li] = trial;
        auto sol = assemble_solution(trial_loads, instance);
        if (!sol) continue;
        if (sol->total_mileage < current.total_mileage - kMileageEps) {
          current = std::move(*sol);
          changed = true;
          break;
        }
      }
    }
    if (changed) continue;

    // no idle replacement helped: try swapping two busy trucks' loads
    // (cheaper truck onto the longer tour)
    std::vector<TruckLoad> loads2 = current_loads(current);
    auto reload = [&](const TruckLoad& from, const Truck& onto) -> std::optional<TruckLoad> {
      TruckLoad trial = from;
      trial.truck = onto.id;
      if (is_multi_trip(from.route)) {
        RetimedLoad rt =
            retime_on_truck(from.route, onto, from.shipments, instance, params,
                            from.route.horizon);
        if (!rt.feasible) return std::nullopt;
        trial.route = std::move(rt.route);
        trial.placement = std::move(rt.placement);
      } else {
        RouteResult rr = cache.solve(onto, from.shipments, instance);
        if (!rr.feasible) return std::nullopt;
        trial.route = *rr.route;
        trial.placement = *rr.placement;
      }
      return trial;
    };
    for (size_t i = 0; i < loads2.size() && !changed; ++i)
      for (size_t j = i + 1; j < loads2.size() && !changed; ++j) {
        const Truck& ti = instance.truck(loads2[i].truck);
        const Truck& tj = instance.truck(loads2[j].truck);
        auto a = reload(loads2[i], tj);
        if (!a) continue;
        auto b = reload(loads2[j], ti);
        if (!b) continue;
        std::vector<TruckLoad> trial_loads;
        for (size_t k = 0; k < loads2.size(); ++k)
          if (k != i && k != j) trial_loads.push_back(loads2[k]);
        trial_loads.push_back(*a);
        trial_loads.push_back(*b);
        auto sol = assemble_solution(trial_loads, instance);
        if (!sol) continue;
        if (sol->total_mileage < current.total_mileage - kMileageEps) {
          current = std::move(*sol);
          changed = true;
        }
      }
  }
  return current;
}

Solution merge_routes(const Solution& solution, const Instance& instance,
                      const PostoptParams& params) {
  Solution current = solution;

  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<TruckLoad> loads = current_loads(current);

    for (size_t i = 0; i < loads.size() && !changed; ++i)
      for (size_t j = i + 1; j < loads.size() && !changed; ++j) {
        // single-city rule across the merged truck
        const std::string& city_i =
            instance.location(instance.shipment(loads[i].shipments.front()).source).city;
        const std::string& city_j =
            instance.location(instance.shipment(loads[j].shipments.front()).source).city;
        if (city_i != city_j) continue;

        std::vector<std::vector<Stop>> segments = split_segments(loads[i].route);
        auto segs_j = split_segments(loads[j].route);
        segments.insert(segments.end(), segs_j.begin(), segs_j.end());

        std::vector<ShipmentId> merged_shipments = loads[i].shipments;
        merged_shipments.insert(merged_shipments.end(), loads[j].shipments.begin(),
                                loads[j].shipments.end());
        std::sort(merged_shipments.begin(), merged_shipments.end());

        for (const TruckId& target : {loads[i].truck, loads[j].truck}) {
          const Truck& truck = instance.truck(target);
          std::vector<SubrouteEndpoints> endpoints;
          for (const auto& seg : segments)
            endpoints.push_back({seg.front().location, seg.back().location});
          SubrouteOrdering ordering =
              sequence_subroutes(endpoints, truck.home_yard, instance, params.held_karp_cap);

          std::vector<Stop> stops;
          stops.push_back({truck.home_yard, {}, {}, 0, 0, 0});
          for (int idx : ordering.order)
            for (const Stop& st : segments[idx]) stops.push_back(st);
          stops.push_back({truck.home_yard, {}, {}, 0, 0, 0});

          Route merged;
          merged.truck = target;
          merged.stops = std::move(stops);
          merged.horizon = params.merged_horizon;
          RetimedLoad rt = retime_on_truck(merged, truck, merged_shipments, instance, params,
                                           params.merged_horizon);
          if (!rt.feasible) continue;

          std::vector<TruckLoad> trial_loads;
          for (size_t k = 0; k < loads.size(); ++k)
            if (k != i && k != j) trial_loads.push_back(loads[k]);
          trial_loads.push_back({target, merged_shipments, rt.route, rt.placement});
          auto sol = assemble_solution(trial_loads, instance);
          if (!sol) continue;
          if (sol->total_mileage <= current.total_mileage + kMileageEps) {
            current = std::move(*sol);
            changed = true;
            break;
          }
        }
      }
  }
  return current;
}

Solution postoptimize(const Solution& solution, const Instance& instance,
                      const PostoptParams& params) {
  Solution current = solution;
  while (true) {
    Solution after = merge_routes(downsize_trucks(current, instance, params), instance, params);
    if (after == current) return current;
    current = std::move(after);
  }
}

}  // namespace vrp2l

#include "vrp2l/routing.hpp"

#include <algorithm>
#include <cstdio>
#include <mutex>
#include <set>

namespace vrp2l {

std::optional<bool> GeometryCache::lookup(const std::string& key) const {
  std::shared_lock lock(mu_);
  auto it = map_.find(key);
  if (it == map_.end()) return std::nullopt;
  return it->second;
}

void GeometryCache::store(const std::string& key, bool fits) {
  std::unique_lock lock(mu_);
  map_.emplace(key, fits);
}

std::optional<StepTimes> step_times(const Instance& instance, Minutes prev_departure,
                                    const LocationId& from, const Stop& next) {
  const Location& loc = instance.location(next.location);
  StepTimes t;
  t.arrival = prev_departure + instance.travel_time(from, next.location);
  bool is_yard = loc.kind == LocationKind::TruckYard;
  Minutes handling = is_yard ? 0 : loc.handling_time;

  Minutes earliest = t.arrival;
  Minutes latest_close = std::numeric_limits<Minutes>::max();
  if (!is_yard) {
    earliest = std::max(earliest, loc.working_window.open);
    latest_close = loc.working_window.close;
  }
  for (const ShipmentId& sid : next.pickups) {
    const Shipment& s = instance.shipment(sid);
    earliest = std::max(earliest, s.pickup_window.open);
    latest_close = std::min(latest_close, s.pickup_window.close);
  }
  for (const ShipmentId& sid : next.deliveries) {
    const Shipment& s = instance.shipment(sid);
    earliest = std::max(earliest, s.delivery_window.open);
    latest_close = std::min(latest_close, s.delivery_window.close);
  }
  t.wait = earliest - t.arrival;
  t.departure = earliest + handling;
  if (t.departure > latest_close) return std::nullopt;
  return t;
}

std::optional<std::vector<Stop>> propagate_times(const std::vector<Stop>& sequence,
                                                 const Truck& truck, const Instance& instance,
                                                 Minutes horizon) {
  if (sequence.size() < 2) return std::nullopt;
  if (sequence.front().location != truck.home_yard ||
      sequence.back().location != truck.home_yard)
    return std::nullopt;

  std::vector<Stop> out = sequence;
  out.front().arrival = 0;
  out.front().wait = 0;
  out.front().departure = 0;
  for (size_t k = 1; k < out.size(); ++k) {
    auto t = step_times(instance, out[k - 1].departure, out[k - 1].location, out[k]);
    if (!t) return std::nullopt;
    out[k].arrival = t->arrival;
    out[k].wait = t->wait;
    out[k].departure = t->departure;
  }
  if (out.back().arrival > horizon) return std::nullopt;
  return out;
}

namespace {

std::string geometry_key(const Truck& truck, const std::vector<const Column*>& onboard) {
  std::vector<std::pair<double, double>> dims;
  dims.reserve(onboard.size());
  for (const Column* c : onboard) dims.push_back({c->width, c->length});
  std::sort(dims.begin(), dims.end());
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g:%.9g", truck.surface_width, truck.surface_length);
  std::string key = buf;
  for (const auto& [w, l] : dims) {
    std::snprintf(buf, sizeof(buf), "|%.9g,%.9g", w, l);
    key += buf;
  }
  return key;
}

struct Search {
  const Instance& inst;
  const Truck& truck;
  const RouteSolverParams& params;
  GeometryCache* geometry;
  GeometryCache local_geometry;

  int n = 0;
  std::vector<const Shipment*> ships;
  std::vector<std::vector<Column>> columns;  // per shipment
  std::vector<LocationId> action_loc;        // 2n: pickups then deliveries

  std::vector<char> done;
  std::vector<Stop> stops;
  std::vector<int> pickup_stop_of;  // per shipment, -1 until picked
  std::map<LocationId, int> visit_count;
  double mileage = 0;
  long nodes = 0;
  bool truncated = false;

  bool found = false;
  double best_mileage = std::numeric_limits<double>::infinity();
  std::vector<Stop> best_stops;
  Placement best_placement;

  bool location_admissible(const Location& loc) const {
    return loc.admits_truck_length(truck.length_class);
  }

  bool onboard_fits() {
    std::vector<const Column*> onboard;
    for (int s = 0; s < n; ++s) {
      if (pickup_stop_of[s] < 0 || done[n + s]) continue;
      for (const Column& c : columns[s]) onboard.push_back(&c);
    }
    if (onboard.empty()) return true;
    std::vector<Column> cols;
    for (const Column* c : onboard) cols.push_back(*c);
    if (!prejudge(cols, truck, params.pack.prejudge_threshold)) return false;

    std::string key = geometry_key(truck, onboard);
    GeometryCache* cache = geometry ? geometry : &local_geometry;
    if (auto hit = cache->lookup(key)) return *hit;
    std::vector<PackItem> items;
    for (const Column& c : cols) items.push_back({c, 0, 1});
    bool fits = pack(items, truck, params.pack).feasible;
    cache->store(key, fits);
    return fits;
  }

  bool lex_better(const std::vector<Stop>& a, const std::vector<Stop>& b) const {
    // lexicographically smallest location-id sequence wins ties
    size_t m = std::min(a.size(), b.size());
    for (size_t i = 0; i < m; ++i) {
      if (a[i].location != b[i].location) return a[i].location < b[i].location;
    }
    return a.size() < b.size();
  }

  void try_leaf() {
    Stop back{truck.home_yard, {}, {}, 0, 0, 0};
    auto t = step_times(inst, stops.back().departure, stops.back().location, back);
    if (!t) return;
    if (t->arrival > params.horizon) return;
    double leaf_mileage =
        mileage + truck.cost_per_distance * inst.distance(stops.back().location, back.location);

    if (found) {
      if (leaf_mileage > best_mileage + kMileageEps) return;
      if (std::abs(leaf_mileage - best_mileage) <= kMileageEps) {
        std::vector<Stop> candidate = stops;
        candidate.push_back(back);
        if (!lex_better(candidate, best_stops)) return;
      }
    }

    back.arrival = t->arrival;
    back.wait = 0;
    back.departure = t->arrival;

    std::vector<Stop> full = stops;
    full.push_back(back);

    std::vector<PackItem> items;
    for (int s = 0; s < n; ++s) {
      int pickup = pickup_stop_of[s];
      int delivery = -1;
      for (size_t k = 0; k < full.size(); ++k)
        if (std::count(full[k].deliveries.begin(), full[k].deliveries.end(), ships[s]->id))
          delivery = static_cast<int>(k);
      for (const Column& c : columns[s])
        items.push_back({c, pickup, delivery});
    }
    std::vector<Column> cols;
    for (const PackItem& it : items) cols.push_back(it.column);
    if (!prejudge(cols, truck, params.pack.prejudge_threshold)) return;
    PackOutcome outcome = pack(items, truck, params.pack);
    if (!outcome.feasible) return;

    found = true;
    best_mileage = leaf_mileage;
    best_stops = std::move(full);
    best_placement = *outcome.placement;
  }

  void dfs() {
    if (truncated) return;
    if (++nodes > params.node_budget) {
      truncated = true;
      return;
    }

    bool all_done = true;
    for (int a = 0; a < 2 * n; ++a)
      if (!done[a]) all_done = false;
    if (all_done) {
      try_leaf();
      return;
    }

    if (found && mileage > best_mileage + kMileageEps) return;

    const bool cur_is_yard = stops.size() == 1;
    const LocationId cur_location = stops.back().location;
    const Minutes cur_departure = stops.back().departure;
    int max_action_in_cur = -1;
    if (!cur_is_yard) {
      const Stop& cur = stops.back();
      for (int s = 0; s < n; ++s) {
        if (std::count(cur.pickups.begin(), cur.pickups.end(), ships[s]->id))
          max_action_in_cur = std::max(max_action_in_cur, s);
        if (std::count(cur.deliveries.begin(), cur.deliveries.end(), ships[s]->id))
          max_action_in_cur = std::max(max_action_in_cur, n + s);
      }
    }

    for (int a = 0; a < 2 * n; ++a) {
      if (truncated) return;
      if (done[a]) continue;
      bool is_delivery = a >= n;
      int s = is_delivery ? a - n : a;
      if (is_delivery && pickup_stop_of[s] < 0) continue;  // precedence
      const LocationId& loc_id = action_loc[a];
      const Location& loc = inst.location(loc_id);
      if (!location_admissible(loc)) continue;

      bool merge = !cur_is_yard && cur_location == loc_id;
      if (merge && a <= max_action_in_cur) continue;  // canonical action order per stop

      if (merge) {
        // re-time the current stop with the extra action
        Stop trial = stops.back();
        (is_delivery ? trial.deliveries : trial.pickups).push_back(ships[s]->id);
        Minutes prev_dep = stops[stops.size() - 2].departure;
        auto t = step_times(inst, prev_dep, stops[stops.size() - 2].location, trial);
        if (!t) continue;
        Stop saved = stops.back();
        trial.arrival = t->arrival;
        trial.wait = t->wait;
        trial.departure = t->departure;
        stops.back() = trial;
        done[a] = 1;
        int saved_pickup = pickup_stop_of[s];
        if (!is_delivery) pickup_stop_of[s] = static_cast<int>(stops.size()) - 1;
        bool fits = is_delivery ? true : onboard_fits();
        if (fits) dfs();
        if (!is_delivery) pickup_stop_of[s] = saved_pickup;
        done[a] = 0;
        stops.back() = saved;
      } else {
        if (loc.must_be_first && stops.size() != 1) continue;
        if (!cur_is_yard && inst.location(cur_location).must_be_last) continue;
        if (loc.max_visits && visit_count[loc_id] + 1 > *loc.max_visits) continue;
        Stop next{loc_id, {}, {}, 0, 0, 0};
        (is_delivery ? next.deliveries : next.pickups).push_back(ships[s]->id);
        auto t = step_times(inst, cur_departure, cur_location, next);
        if (!t) continue;
        next.arrival = t->arrival;
        next.wait = t->wait;
        next.departure = t->departure;
        double leg = truck.cost_per_distance * inst.distance(cur_location, loc_id);
        if (found && mileage + leg > best_mileage + kMileageEps) continue;

        stops.push_back(next);
        visit_count[loc_id] += 1;
        mileage += leg;
        done[a] = 1;
        int saved_pickup = pickup_stop_of[s];
        if (!is_delivery) pickup_stop_of[s] = static_cast<int>(stops.size()) - 1;
        bool fits = is_delivery ? true : onboard_fits();
        if (fits) dfs();
        if (!is_delivery) pickup_stop_of[s] = saved_pickup;
        done[a] = 0;
        mileage -= leg;
        visit_count[loc_id] -= 1;
        stops.pop_back();
      }
    }
  }
};

}  // namespace

RouteResult solve_route(const Truck& truck, const std::vector<ShipmentId>& shipments,
                        const Instance& instance, const RouteSolverParams& params,
                        GeometryCache* geometry_cache) {
  RouteResult result;
  if (shipments.empty()) {
    result.feasible = true;
    result.mileage = 0;
    return result;
  }

  Search search{instance, truck, params, geometry_cache, {}};
  search.n = static_cast<int>(shipments.size());

  std::vector<ShipmentId> sorted = shipments;
  std::sort(sorted.begin(), sorted.end());

  std::string city;
  for (const ShipmentId& sid : sorted) {
    const Shipment& s = instance.shipment(sid);
    const std::string& c = instance.location(s.source).city;
    if (city.empty())
      city = c;
    else if (c != city)
      return result;  // shipments from different cities cannot share a truck
    search.ships.push_back(&s);
  }
  for (const Shipment* s : search.ships) search.action_loc.push_back(s->source);
  for (const Shipment* s : search.ships) search.action_loc.push_back(s->destination);
  for (const Shipment* s : search.ships)
    search.columns.push_back(build_columns(*s, instance.pallet));

  search.done.assign(2 * search.n, 0);
  search.pickup_stop_of.assign(search.n, -1);
  search.stops.push_back({truck.home_yard, {}, {}, 0, 0, 0});

  search.dfs();

  result.budget_truncated = search.truncated;
  if (!search.found) return result;

  Route route;
  route.truck = truck.id;
  route.stops = std::move(search.best_stops);
  route.horizon = params.horizon;
  for (Stop& st : route.stops) {
    std::sort(st.pickups.begin(), st.pickups.end());
    std::sort(st.deliveries.begin(), st.deliveries.end());
  }
  result.feasible = true;
  result.mileage = search.best_mileage;
  result.placement = std::move(search.best_placement);
  result.route = std::move(route);
  return result;
}

RouteResult RouteQueryCache::solve(const Truck& truck, std::vector<ShipmentId> shipments,
                                   const Instance& instance) {
  std::sort(shipments.begin(), shipments.end());
  std::string key = truck.id;
  for (const ShipmentId& sid : shipments) {
    key += '|';
    key += sid;
  }
  {
    std::shared_lock lock(mu_);
    auto it = map_.find(key);
    if (it != map_.end()) return it->second;
  }
  RouteResult result = solve_route(truck, shipments, instance, params_, &geometry_);
  {
    std::unique_lock lock(mu_);
    map_.emplace(key, result);
  }
  return result;
}

}  // namespace vrp2l

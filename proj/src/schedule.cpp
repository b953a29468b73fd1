#include "vrp2l/schedule.hpp"

#include <algorithm>
#include <limits>
#include <queue>

namespace vrp2l {

Minutes psi(int n, const std::vector<Minutes>& values) {
  if (n < 1) throw ModelError("psi: n must be >= 1");
  if (values.empty()) throw ModelError("psi: values must be non-empty");
  std::vector<Minutes> sorted = values;
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  if (n > static_cast<int>(sorted.size())) return sorted.back();
  return sorted[n - 1];
}

namespace {

struct PendingArrival {
  Minutes arrival;
  int route_idx;
  int stop_idx;
  TruckId truck;

  bool operator>(const PendingArrival& o) const {
    if (arrival != o.arrival) return arrival > o.arrival;
    return truck > o.truck;
  }
};

// Dock grants follow arrival order (min-heap of in-service end times, at
// most dock_count entries). Window or hub waits delay only the waiting
// truck; with per-location constant handling the pure queueing case still
// serves strictly in arrival order.
struct LocationState {
  std::priority_queue<Minutes, std::vector<Minutes>, std::greater<>> ends;
};

}  // namespace

GtwReport simulate_queues(std::vector<Route>& routes, const Instance& instance) {
  GtwReport report;

  // hub precedence floors discovered in earlier passes:
  // (route idx, stop idx) -> earliest service start
  std::map<std::pair<int, int>, Minutes> hub_floors;

  for (int pass = 0; pass < kGtwIterationCap; ++pass) {
    report = GtwReport{};
    std::map<LocationId, LocationState> loc_state;
    std::priority_queue<PendingArrival, std::vector<PendingArrival>, std::greater<>> queue;

    for (size_t r = 0; r < routes.size(); ++r) {
      Route& route = routes[r];
      if (route.stops.size() < 2) continue;
      Stop& yard = route.stops.front();
      yard.arrival = 0;
      yard.wait = 0;
      yard.departure = 0;
      Minutes arrival = instance.travel_time(yard.location, route.stops[1].location);
      queue.push({arrival, static_cast<int>(r), 1, route.truck});
    }

    while (!queue.empty()) {
      PendingArrival ev = queue.top();
      queue.pop();
      Route& route = routes[ev.route_idx];
      Stop& stop = route.stops[ev.stop_idx];
      const Location& loc = instance.location(stop.location);
      bool is_yard = loc.kind == LocationKind::TruckYard;
      bool is_last = ev.stop_idx + 1 == route.n_stops();

      stop.arrival = ev.arrival;
      if (is_yard) {
        stop.wait = 0;
        stop.departure = ev.arrival;
      } else {
        Minutes earliest = ev.arrival;
        Minutes latest_close = loc.working_window.close;
        earliest = std::max(earliest, loc.working_window.open);
        for (const ShipmentId& sid : stop.pickups) {
          const Shipment& s = instance.shipment(sid);
          earliest = std::max(earliest, s.pickup_window.open);
          latest_close = std::min(latest_close, s.pickup_window.close);
        }
        for (const ShipmentId& sid : stop.deliveries) {
          const Shipment& s = instance.shipment(sid);
          earliest = std::max(earliest, s.delivery_window.open);
          latest_close = std::min(latest_close, s.delivery_window.close);
        }
        auto floor_it = hub_floors.find({ev.route_idx, ev.stop_idx});
        if (floor_it != hub_floors.end()) earliest = std::max(earliest, floor_it->second);

        LocationState& state = loc_state[stop.location];
        if (static_cast<int>(state.ends.size()) >= loc.dock_count) {
          Minutes dock_free = state.ends.top();
          state.ends.pop();
          earliest = std::max(earliest, dock_free);
        }
        Minutes service_end = earliest + loc.handling_time;
        state.ends.push(service_end);

        stop.wait = earliest - ev.arrival;
        stop.departure = service_end;
        report.waits[{route.truck, ev.stop_idx}] = stop.wait;
        report.events.push_back({stop.location, route.truck, ev.arrival, earliest, service_end});

        if (service_end > latest_close)
          report.violations.push_back(
              {stop.location, service_end,
               "waiting pushed service past a closing time (A2 cascade)",
               {route.truck}});
      }

      if (is_last) {
        if (stop.arrival > route.horizon)
          report.violations.push_back({stop.location, stop.arrival,
                                       "route returns after its horizon",
                                       {route.truck}});
      } else {
        Minutes next_arrival =
            stop.departure +
            instance.travel_time(stop.location, route.stops[ev.stop_idx + 1].location);
        queue.push({next_arrival, ev.route_idx, ev.stop_idx + 1, route.truck});
      }
    }

    // hub precedence: downstream pickup may not start before upstream delivery ends
    bool floors_changed = false;
    for (const HubLink& link : instance.hub_links) {
      Minutes up_end = -1, down_start = -1;
      int down_route = -1, down_stop = -1;
      for (size_t r = 0; r < routes.size(); ++r) {
        for (size_t k = 0; k < routes[r].stops.size(); ++k) {
          const Stop& st = routes[r].stops[k];
          if (std::count(st.deliveries.begin(), st.deliveries.end(), link.upstream))
            up_end = st.departure;
          if (std::count(st.pickups.begin(), st.pickups.end(), link.downstream)) {
            down_start = st.arrival + st.wait;
            down_route = static_cast<int>(r);
            down_stop = static_cast<int>(k);
          }
        }
      }
      if (up_end < 0 || down_start < 0) continue;
      if (down_start < up_end) {
        auto key = std::make_pair(down_route, down_stop);
        auto it = hub_floors.find(key);
        if (it == hub_floors.end() || it->second < up_end) {
          hub_floors[key] = up_end;
          floors_changed = true;
        }
      }
    }
    if (!floors_changed) {
      report.feasible = report.violations.empty();
      return report;
    }
  }

  report.violations.push_back(
      {"", 0, "hub precedence did not settle within the iteration cap", {}});
  report.feasible = false;
  return report;
}

}  // namespace vrp2l

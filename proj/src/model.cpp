#include "vrp2l/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace vrp2l {

const char* to_string(LocationKind k) {
  switch (k) {
    case LocationKind::Supplier: return "supplier";
    case LocationKind::Warehouse: return "warehouse";
    case LocationKind::Hub: return "hub";
    case LocationKind::TruckYard: return "truck_yard";
  }
  return "supplier";
}

LocationKind location_kind_from_string(const std::string& s) {
  if (s == "supplier") return LocationKind::Supplier;
  if (s == "warehouse") return LocationKind::Warehouse;
  if (s == "hub") return LocationKind::Hub;
  if (s == "truck_yard") return LocationKind::TruckYard;
  throw ModelError("unknown location kind: " + s);
}

const char* to_string(Family f) {
  switch (f) {
    case Family::A1: return "A1";
    case Family::A2: return "A2";
    case Family::A3: return "A3";
    case Family::B1: return "B1";
    case Family::B2: return "B2";
    case Family::B3: return "B3";
    case Family::Hub: return "hub";
    case Family::Side: return "side-constraints";
    case Family::Assignment: return "assignment";
    case Family::Model: return "model";
  }
  return "model";
}

void Instance::finalize() {
  location_index.clear();
  truck_index.clear();
  shipment_index.clear();

  const size_t n = locations.size();
  for (size_t i = 0; i < n; ++i) {
    const Location& loc = locations[i];
    if (!location_index.emplace(loc.id, static_cast<int>(i)).second)
      throw ModelError("duplicate location id: " + loc.id);
    if (loc.working_window.open >= loc.working_window.close)
      throw ModelError("location " + loc.id + ": working window must satisfy open < close");
    if (loc.dock_count < 1) throw ModelError("location " + loc.id + ": dock_count must be >= 1");
    if (loc.handling_time < 0)
      throw ModelError("location " + loc.id + ": handling_time must be >= 0");
    if (loc.must_be_first && loc.must_be_last)
      throw ModelError("location " + loc.id + ": must_be_first and must_be_last both set");
    if (loc.max_visits && *loc.max_visits < 1)
      throw ModelError("location " + loc.id + ": max_visits must be >= 1");
  }

  if (travel.distance.size() != n || travel.travel_time.size() != n)
    throw ModelError("travel matrices must match the location count");
  for (size_t i = 0; i < n; ++i) {
    if (travel.distance[i].size() != n || travel.travel_time[i].size() != n)
      throw ModelError("travel matrices must be square");
    if (travel.distance[i][i] != 0.0 || travel.travel_time[i][i] != 0)
      throw ModelError("travel matrices must have zero diagonal");
    for (size_t j = 0; j < n; ++j) {
      double d = travel.distance[i][j];
      if (!(d >= 0.0) || !std::isfinite(d))
        throw ModelError("distance entries must be finite and non-negative");
      if (travel.travel_time[i][j] < 0) throw ModelError("travel times must be non-negative");
    }
  }

  for (size_t i = 0; i < trucks.size(); ++i) {
    const Truck& t = trucks[i];
    if (!truck_index.emplace(t.id, static_cast<int>(i)).second)
      throw ModelError("duplicate truck id: " + t.id);
    if (t.surface_width <= 0 || t.surface_length <= 0)
      throw ModelError("truck " + t.id + ": surface dimensions must be positive");
    if (t.cost_per_distance <= 0)
      throw ModelError("truck " + t.id + ": cost_per_distance must be positive");
    auto it = location_index.find(t.home_yard);
    if (it == location_index.end())
      throw ModelError("truck " + t.id + ": unknown home yard " + t.home_yard);
    if (locations[it->second].kind != LocationKind::TruckYard)
      throw ModelError("truck " + t.id + ": home yard " + t.home_yard + " is not a truck yard");
  }

  for (size_t i = 0; i < shipments.size(); ++i) {
    const Shipment& s = shipments[i];
    if (!shipment_index.emplace(s.id, static_cast<int>(i)).second)
      throw ModelError("duplicate shipment id: " + s.id);
    if (!location_index.count(s.source))
      throw ModelError("shipment " + s.id + ": unknown source " + s.source);
    if (!location_index.count(s.destination))
      throw ModelError("shipment " + s.id + ": unknown destination " + s.destination);
    if (s.source == s.destination)
      throw ModelError("shipment " + s.id + ": source equals destination");
    if (s.bin_count < 1) throw ModelError("shipment " + s.id + ": bin_count must be >= 1");
    if (s.bin.width <= 0 || s.bin.length <= 0)
      throw ModelError("shipment " + s.id + ": bin footprint must be positive");
    if (s.bin.stack_limit < 1)
      throw ModelError("shipment " + s.id + ": bin stack_limit must be >= 1");
    if (s.pickup_window.open >= s.pickup_window.close)
      throw ModelError("shipment " + s.id + ": empty pickup window");
    if (s.delivery_window.open >= s.delivery_window.close)
      throw ModelError("shipment " + s.id + ": empty delivery window");
  }

  if (!shipments.empty()) {
    if (pallet.width <= 0 || pallet.length <= 0 || pallet.stack_limit < 1)
      throw ModelError("pallet spec must have positive dimensions and stack_limit >= 1");
  }

  for (const HubLink& h : hub_links) {
    const Shipment& up = shipment(h.upstream);
    const Shipment& down = shipment(h.downstream);
    if (location(up.destination).kind != LocationKind::Hub)
      throw ModelError("hub link " + h.upstream + "->" + h.downstream +
                       ": upstream destination is not a hub");
    if (down.source != up.destination)
      throw ModelError("hub link " + h.upstream + "->" + h.downstream +
                       ": downstream source must be the upstream hub");
  }
}

int Instance::loc_idx(const LocationId& id) const {
  auto it = location_index.find(id);
  if (it == location_index.end()) throw ModelError("unknown location id: " + id);
  return it->second;
}

const Truck& Instance::truck(const TruckId& id) const {
  auto it = truck_index.find(id);
  if (it == truck_index.end()) throw ModelError("unknown truck id: " + id);
  return trucks[it->second];
}

const Shipment& Instance::shipment(const ShipmentId& id) const {
  auto it = shipment_index.find(id);
  if (it == shipment_index.end()) throw ModelError("unknown shipment id: " + id);
  return shipments[it->second];
}

double total_mileage(const Solution& solution, const Instance& instance) {
  double total = 0;
  for (const Route& r : solution.routes) {
    const Truck& t = instance.truck(r.truck);
    for (size_t k = 0; k + 1 < r.stops.size(); ++k)
      total += t.cost_per_distance *
               instance.distance(r.stops[k].location, r.stops[k + 1].location);
  }
  return total;
}

FeasibilityFlags classify_violations(const std::vector<Violation>& violations) {
  FeasibilityFlags flags;
  for (const Violation& v : violations) flags.ok[static_cast<int>(v.family)] = false;
  return flags;
}

namespace {

struct Validator {
  const Solution& sol;
  const Instance& inst;
  std::vector<Violation> out;

  void add(Family f, std::string rule, std::vector<std::string> entities) {
    out.push_back({f, std::move(rule), std::move(entities)});
  }

  bool known_location(const LocationId& id) { return inst.location_index.count(id) > 0; }

  void check_assignment() {
    for (const Shipment& s : inst.shipments) {
      auto it = sol.assignment.truck_of.find(s.id);
      if (it == sol.assignment.truck_of.end()) {
        add(Family::Assignment, "shipment must be loaded by exactly one truck", {s.id});
        continue;
      }
      if (!inst.truck_index.count(it->second)) {
        add(Family::Model, "assignment references unknown truck", {s.id, it->second});
        continue;
      }
      const Route* r = sol.route_of(it->second);
      if (!r) {
        add(Family::Assignment, "assigned truck has no route", {s.id, it->second});
        continue;
      }
      int pickup = -1, delivery = -1;
      for (size_t k = 0; k < r->stops.size(); ++k) {
        const Stop& st = r->stops[k];
        if (std::count(st.pickups.begin(), st.pickups.end(), s.id)) {
          if (pickup >= 0)
            add(Family::Assignment, "shipment picked up more than once", {s.id});
          pickup = static_cast<int>(k);
        }
        if (std::count(st.deliveries.begin(), st.deliveries.end(), s.id)) {
          if (delivery >= 0)
            add(Family::Assignment, "shipment delivered more than once", {s.id});
          delivery = static_cast<int>(k);
        }
      }
      if (pickup < 0 || delivery < 0) {
        add(Family::Assignment, "shipment not served on its truck's route", {s.id, it->second});
        continue;
      }
      if (!(pickup < delivery)) add(Family::A3, "p_j < d_j", {s.id});
      if (pickup >= 0) {
        const Stop& st = r->stops[pickup];
        if (st.location != s.source)
          add(Family::Model, "pickup stop is not the shipment source", {s.id, st.location});
      }
      if (delivery >= 0) {
        const Stop& st = r->stops[delivery];
        if (st.location != s.destination)
          add(Family::Model, "delivery stop is not the shipment destination",
              {s.id, st.location});
      }
    }
    for (const auto& [sid, tid] : sol.assignment.truck_of)
      if (!inst.shipment_index.count(sid))
        add(Family::Model, "assignment references unknown shipment", {sid});
    for (const Route& r : sol.routes) {
      if (!inst.truck_index.count(r.truck)) {
        add(Family::Model, "route references unknown truck", {r.truck});
        continue;
      }
      bool any = false;
      for (const auto& [sid, tid] : sol.assignment.truck_of)
        if (tid == r.truck) any = true;
      if (!any) add(Family::Model, "route for truck with no assigned shipments", {r.truck});
    }
  }

  void check_route_times(const Route& r) {
    if (!inst.truck_index.count(r.truck)) return;
    const Truck& t = inst.truck(r.truck);
    if (r.stops.size() < 2) {
      add(Family::A1, "route must start and end at the home yard", {r.truck});
      return;
    }
    for (const Stop& st : r.stops)
      if (!known_location(st.location)) {
        add(Family::Model, "route visits unknown location", {r.truck, st.location});
        return;
      }
    if (r.stops.front().location != t.home_yard || r.stops.back().location != t.home_yard)
      add(Family::A1, "y_i0 = y_in = y_0", {r.truck});
    if (r.stops.front().departure != 0)
      add(Family::A1, "t_i0 = 0", {r.truck});

    for (size_t k = 0; k + 1 < r.stops.size(); ++k) {
      const Stop& cur = r.stops[k];
      const Stop& next = r.stops[k + 1];
      Minutes tt = inst.travel_time(cur.location, next.location);
      if (next.arrival != cur.departure + tt)
        add(Family::A1, "arrival must equal previous departure plus travel time",
            {r.truck, next.location});
      if (next.wait < 0) add(Family::A1, "wait must be non-negative", {r.truck, next.location});
      const Location& loc = inst.location(next.location);
      bool is_yard = loc.kind == LocationKind::TruckYard;
      Minutes service_start = next.arrival + next.wait;
      Minutes handling = is_yard ? 0 : loc.handling_time;
      if (next.departure != service_start + handling)
        add(Family::A1, "departure must equal service start plus handling",
            {r.truck, next.location});
      if (!is_yard && !loc.working_window.contains(service_start, next.departure))
        add(Family::A1, "service interval must lie inside the location working window",
            {r.truck, next.location});
      if (k + 1 == r.stops.size() - 1 && next.arrival > r.horizon)
        add(Family::A1, "route must return within its horizon", {r.truck});
      // A3: service interval inside each shipment window at this stop
      for (const ShipmentId& sid : next.pickups) {
        if (!inst.shipment_index.count(sid)) continue;
        const Shipment& s = inst.shipment(sid);
        if (!s.pickup_window.contains(service_start, next.departure))
          add(Family::A3, "pickup must fall inside the shipment pickup window", {sid});
      }
      for (const ShipmentId& sid : next.deliveries) {
        if (!inst.shipment_index.count(sid)) continue;
        const Shipment& s = inst.shipment(sid);
        if (!s.delivery_window.contains(service_start, next.departure))
          add(Family::A3, "delivery must fall inside the shipment delivery window", {sid});
      }
    }
  }

  void check_dock_capacity() {
    // sweep service intervals per location; docks free at service end
    struct Ev {
      Minutes time;
      int delta;
      TruckId truck;
    };
    std::map<LocationId, std::vector<Ev>> per_loc;
    for (const Route& r : sol.routes) {
      for (const Stop& st : r.stops) {
        if (!known_location(st.location)) continue;
        const Location& loc = inst.location(st.location);
        if (loc.kind == LocationKind::TruckYard) continue;
        Minutes start = st.arrival + st.wait;
        Minutes end = st.departure;
        if (end <= start) continue;
        per_loc[st.location].push_back({start, +1, r.truck});
        per_loc[st.location].push_back({end, -1, r.truck});
      }
    }
    for (auto& [lid, evs] : per_loc) {
      std::sort(evs.begin(), evs.end(), [](const Ev& a, const Ev& b) {
        if (a.time != b.time) return a.time < b.time;
        return a.delta < b.delta;  // frees before occupies at the same instant
      });
      int busy = 0;
      int cap = inst.location(lid).dock_count;
      for (const Ev& e : evs) {
        busy += e.delta;
        if (busy > cap) {
          add(Family::A2, "trucks in service must not exceed dock count",
              {lid, std::to_string(e.time)});
          break;
        }
      }
    }
  }

  void check_loading(const Route& r) {
    if (!inst.truck_index.count(r.truck)) return;
    const Truck& t = inst.truck(r.truck);
    const Placement* pl = sol.placement_of(r.truck);
    std::vector<ShipmentId> carried;
    for (const auto& [sid, tid] : sol.assignment.truck_of)
      if (tid == r.truck && inst.shipment_index.count(sid)) carried.push_back(sid);
    if (!pl) {
      if (!carried.empty())
        add(Family::B2, "truck with shipments has no placement", {r.truck});
      return;
    }

    int n_stops = r.n_stops();
    for (const PlacedItem& it : pl->items) {
      if (it.pickup_stop < 0 || it.delivery_stop >= n_stops ||
          it.pickup_stop >= it.delivery_stop) {
        add(Family::Model, "placed item has invalid stop indices", {r.truck, it.shipment});
        continue;
      }
      if (it.u < -kGeomEps || it.v < -kGeomEps ||
          it.u + it.width > t.surface_width + kGeomEps ||
          it.v + it.length > t.surface_length + kGeomEps)
        add(Family::B2, "item must lie inside the loading surface", {r.truck, it.shipment});
    }
    for (size_t i = 0; i < pl->items.size(); ++i)
      for (size_t j = i + 1; j < pl->items.size(); ++j) {
        const PlacedItem& a = pl->items[i];
        const PlacedItem& b = pl->items[j];
        if (items_coexist(a, b) &&
            rects_overlap(a.u, a.v, a.width, a.length, b.u, b.v, b.width, b.length))
          add(Family::B2, "no two bins can overlap", {r.truck, a.shipment, b.shipment});
        if (!sequence_pair_ok(a, b) || !sequence_pair_ok(b, a))
          add(Family::B3, "later-unloaded item must not block the rear path",
              {r.truck, a.shipment, b.shipment});
      }

    // B1: stack limits and bin conservation per shipment
    for (const ShipmentId& sid : carried) {
      const Shipment& s = inst.shipment(sid);
      long bins = 0;
      for (const PlacedItem& it : pl->items) {
        if (it.shipment != sid) continue;
        bins += it.bin_total;
        if (it.on_pallet) {
          if (!s.needs_pallet)
            add(Family::B1, "shipment does not use pallets", {sid});
          if (it.layers > inst.pallet.stack_limit)
            add(Family::B1, "pallet stack exceeds the pallet layer limit", {sid});
          if (std::abs(it.width - inst.pallet.width) > kGeomEps ||
              std::abs(it.length - inst.pallet.length) > kGeomEps)
            add(Family::B1, "pallet stack footprint must equal the pallet footprint", {sid});
        } else {
          if (s.needs_pallet) add(Family::B1, "shipment requires pallets", {sid});
          if (it.layers > s.bin.stack_limit)
            add(Family::B1, "l_jt <= L_j (column exceeds stack layer limit)", {sid});
          if (std::abs(it.width - s.bin.width) > kGeomEps ||
              std::abs(it.length - s.bin.length) > kGeomEps)
            add(Family::B1, "column footprint must equal the bin footprint", {sid});
        }
      }
      if (bins != s.bin_count)
        add(Family::B1, "sum of column layers must equal the shipment bin count",
            {sid, std::to_string(bins)});
    }
  }

  void check_hub_links() {
    for (const HubLink& h : inst.hub_links) {
      if (!inst.shipment_index.count(h.upstream) || !inst.shipment_index.count(h.downstream))
        continue;
      auto up_truck = sol.assignment.truck_of.find(h.upstream);
      auto down_truck = sol.assignment.truck_of.find(h.downstream);
      if (up_truck == sol.assignment.truck_of.end() ||
          down_truck == sol.assignment.truck_of.end())
        continue;  // reported as assignment violations already
      const Route* up_route = sol.route_of(up_truck->second);
      const Route* down_route = sol.route_of(down_truck->second);
      if (!up_route || !down_route) continue;
      std::optional<Minutes> up_end, down_start;
      for (const Stop& st : up_route->stops)
        if (std::count(st.deliveries.begin(), st.deliveries.end(), h.upstream))
          up_end = st.departure;
      for (const Stop& st : down_route->stops)
        if (std::count(st.pickups.begin(), st.pickups.end(), h.downstream))
          down_start = st.arrival + st.wait;
      if (up_end && down_start && *down_start < *up_end)
        add(Family::Hub, "downstream pickup must not precede upstream delivery",
            {h.upstream, h.downstream});
    }
  }

  void check_side_constraints() {
    std::map<LocationId, int> visit_counts;
    for (const Route& r : sol.routes) {
      if (!inst.truck_index.count(r.truck)) continue;
      const Truck& t = inst.truck(r.truck);
      std::vector<ShipmentId> carried;
      for (const auto& [sid, tid] : sol.assignment.truck_of)
        if (tid == r.truck && inst.shipment_index.count(sid)) carried.push_back(sid);

      std::string city;
      for (const ShipmentId& sid : carried) {
        const std::string& c = inst.location(inst.shipment(sid).source).city;
        if (city.empty()) {
          city = c;
        } else if (c != city) {
          add(Family::Side, "shipments from different cities cannot share a truck",
              {r.truck, sid});
        }
      }

      for (size_t k = 0; k < r.stops.size(); ++k) {
        const Stop& st = r.stops[k];
        if (!known_location(st.location)) continue;
        const Location& loc = inst.location(st.location);
        if (!loc.admits_truck_length(t.length_class))
          add(Family::Side, "location does not admit the truck length class",
              {r.truck, st.location});
        if (loc.kind != LocationKind::TruckYard) visit_counts[st.location] += 1;
        bool interior = k > 0 && k + 1 < r.stops.size();
        if (interior && loc.must_be_first && k != 1)
          add(Family::Side, "location must be the first visited site", {r.truck, st.location});
        if (interior && loc.must_be_last && k != r.stops.size() - 2)
          add(Family::Side, "location must be the last visited site", {r.truck, st.location});
      }
    }
    for (const auto& [lid, count] : visit_counts) {
      const Location& loc = inst.location(lid);
      if (loc.max_visits && count > *loc.max_visits)
        add(Family::Side, "location visit count exceeds its limit",
            {lid, std::to_string(count)});
    }
  }

  void check_mileage() {
    bool ids_ok = true;
    for (const Route& r : sol.routes) {
      if (!inst.truck_index.count(r.truck)) ids_ok = false;
      for (const Stop& st : r.stops)
        if (!known_location(st.location)) ids_ok = false;
    }
    if (!ids_ok) return;
    double recomputed = total_mileage(sol, inst);
    if (std::abs(recomputed - sol.total_mileage) > kMileageEps)
      add(Family::Model, "stored total mileage does not match the recomputed value",
          {std::to_string(sol.total_mileage), std::to_string(recomputed)});
  }
};

}  // namespace

std::vector<Violation> validate_solution(const Solution& solution, const Instance& instance) {
  Validator v{solution, instance, {}};
  v.check_assignment();
  for (const Route& r : solution.routes) {
    v.check_route_times(r);
    v.check_loading(r);
  }
  v.check_dock_capacity();
  v.check_hub_links();
  v.check_side_constraints();
  v.check_mileage();
  return std::move(v.out);
}

bool side_constraints_ok(const Truck& truck, const std::vector<ShipmentId>& shipments,
                         const Route& route, const Instance& instance) {
  std::string city;
  for (const ShipmentId& sid : shipments) {
    const std::string& c = instance.location(instance.shipment(sid).source).city;
    if (city.empty())
      city = c;
    else if (c != city)
      return false;
  }
  std::map<LocationId, int> visits;
  for (size_t k = 0; k < route.stops.size(); ++k) {
    const Stop& st = route.stops[k];
    const Location& loc = instance.location(st.location);
    if (!loc.admits_truck_length(truck.length_class)) return false;
    if (loc.kind != LocationKind::TruckYard) visits[st.location] += 1;
    bool interior = k > 0 && k + 1 < route.stops.size();
    if (interior && loc.must_be_first && k != 1) return false;
    if (interior && loc.must_be_last && k != route.stops.size() - 2) return false;
  }
  for (const auto& [lid, count] : visits) {
    const Location& loc = instance.location(lid);
    if (loc.max_visits && count > *loc.max_visits) return false;
  }
  return true;
}

}  // namespace vrp2l

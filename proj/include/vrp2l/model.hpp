#pragma once

#include <array>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace vrp2l {

using LocationId = std::string;
using TruckId = std::string;
using ShipmentId = std::string;
using Minutes = int;

// mileage comparisons in optimization
inline constexpr double kMileageEps = 1e-9;
// geometric comparisons (placement coordinates)
inline constexpr double kGeomEps = 1e-9;
// planning horizon: one day, merged tours may run into a second day
inline constexpr Minutes kDayHorizon = 1440;
inline constexpr Minutes kMergedHorizon = 2880;

class ModelError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct TimeWindow {
  Minutes open = 0;
  Minutes close = 0;
  bool contains(Minutes t) const { return open <= t && t <= close; }
  bool contains(Minutes a, Minutes b) const { return open <= a && b <= close; }
  bool operator==(const TimeWindow&) const = default;
};

enum class LocationKind { Supplier, Warehouse, Hub, TruckYard };

const char* to_string(LocationKind k);
LocationKind location_kind_from_string(const std::string& s);

struct Location {
  LocationId id;
  LocationKind kind = LocationKind::Supplier;
  TimeWindow working_window{0, kDayHorizon};
  int dock_count = 1;
  Minutes handling_time = 0;
  std::string city;
  std::optional<std::set<std::string>> allowed_truck_lengths;
  std::optional<int> max_visits;
  bool must_be_first = false;
  bool must_be_last = false;
  std::optional<std::array<double, 2>> coord;

  bool admits_truck_length(const std::string& length_class) const {
    return !allowed_truck_lengths || allowed_truck_lengths->count(length_class) > 0;
  }
  bool operator==(const Location&) const = default;
};

struct TravelMatrices {
  std::vector<std::vector<double>> distance;
  std::vector<std::vector<Minutes>> travel_time;
  bool operator==(const TravelMatrices&) const = default;
};

struct BinSpec {
  double width = 0;
  double length = 0;
  double height = 0;  // informational only
  int stack_limit = 1;
  bool operator==(const BinSpec&) const = default;
};

struct Shipment {
  ShipmentId id;
  LocationId source;
  LocationId destination;
  int bin_count = 1;
  BinSpec bin;
  bool needs_pallet = false;
  TimeWindow pickup_window{0, kDayHorizon};
  TimeWindow delivery_window{0, kDayHorizon};
  bool operator==(const Shipment&) const = default;
};

struct HubLink {
  ShipmentId upstream;    // delivered to the hub
  ShipmentId downstream;  // picked up from the hub
  bool operator==(const HubLink&) const = default;
};

struct Truck {
  TruckId id;
  std::string model;
  double surface_width = 0;
  double surface_length = 0;
  std::string length_class;
  double cost_per_distance = 1.0;
  LocationId home_yard;

  double surface_area() const { return surface_width * surface_length; }
  bool operator==(const Truck&) const = default;
};

struct PalletSpec {
  double width = 0;
  double length = 0;
  int stack_limit = 1;
  bool operator==(const PalletSpec&) const = default;
};

struct Instance {
  std::vector<Location> locations;
  TravelMatrices travel;
  std::vector<Truck> trucks;
  std::vector<Shipment> shipments;
  std::vector<HubLink> hub_links;
  PalletSpec pallet;

  // derived, rebuilt by finalize()
  std::unordered_map<LocationId, int> location_index;
  std::unordered_map<TruckId, int> truck_index;
  std::unordered_map<ShipmentId, int> shipment_index;

  // Validates invariants and builds the id indexes. Throws ModelError.
  void finalize();

  int loc_idx(const LocationId& id) const;
  const Location& location(const LocationId& id) const { return locations[loc_idx(id)]; }
  const Truck& truck(const TruckId& id) const;
  const Shipment& shipment(const ShipmentId& id) const;
  double distance(const LocationId& a, const LocationId& b) const {
    return travel.distance[loc_idx(a)][loc_idx(b)];
  }
  Minutes travel_time(const LocationId& a, const LocationId& b) const {
    return travel.travel_time[loc_idx(a)][loc_idx(b)];
  }

  bool operator==(const Instance& o) const {
    return locations == o.locations && travel == o.travel && trucks == o.trucks &&
           shipments == o.shipments && hub_links == o.hub_links && pallet == o.pallet;
  }
};

// x_ij relation: exactly one truck per shipment. Ordered map keeps every
// traversal deterministic.
struct Assignment {
  std::map<ShipmentId, TruckId> truck_of;
  bool operator==(const Assignment&) const = default;
};

struct Stop {
  LocationId location;
  std::vector<ShipmentId> pickups;
  std::vector<ShipmentId> deliveries;
  Minutes arrival = 0;
  Minutes wait = 0;       // w_ik: queue wait plus window wait before service
  Minutes departure = 0;  // t_ik: service end
  bool operator==(const Stop&) const = default;
};

struct Route {
  TruckId truck;
  std::vector<Stop> stops;    // first and last stop are the home yard
  Minutes horizon = kDayHorizon;  // merged tours run up to kMergedHorizon

  int n_stops() const { return static_cast<int>(stops.size()); }
  bool operator==(const Route&) const = default;
};

// One placed 2D rectangle on a truck surface: a bare bin column or a loaded
// pallet stack. v increases toward the nose; loading happens across v = 0.
struct PlacedItem {
  ShipmentId shipment;
  int column_index = 0;
  double u = 0;
  double v = 0;
  double width = 0;
  double length = 0;
  int layers = 1;         // bin layers (bare column) or pallet layers (pallet stack)
  int bin_total = 1;      // bins carried by this item
  bool on_pallet = false;
  int pickup_stop = 0;
  int delivery_stop = 0;
  bool operator==(const PlacedItem&) const = default;
};

struct Placement {
  TruckId truck;
  std::vector<PlacedItem> items;
  bool operator==(const Placement&) const = default;
};

enum class Family { A1, A2, A3, B1, B2, B3, Hub, Side, Assignment, Model };

const char* to_string(Family f);

struct Violation {
  Family family;
  std::string rule;
  std::vector<std::string> entities;
};

inline constexpr int kFamilyCount = 10;

struct FeasibilityFlags {
  std::array<bool, kFamilyCount> ok;
  FeasibilityFlags() { ok.fill(true); }
  bool all_ok() const {
    for (bool b : ok)
      if (!b) return false;
    return true;
  }
  bool operator==(const FeasibilityFlags&) const = default;
};

struct Solution {
  Assignment assignment;
  std::vector<Route> routes;
  std::vector<Placement> placements;
  double total_mileage = 0;
  FeasibilityFlags feasibility;

  const Route* route_of(const TruckId& t) const {
    for (const auto& r : routes)
      if (r.truck == t) return &r;
    return nullptr;
  }
  const Placement* placement_of(const TruckId& t) const {
    for (const auto& p : placements)
      if (p.truck == t) return &p;
    return nullptr;
  }
  bool operator==(const Solution& o) const {
    return assignment == o.assignment && routes == o.routes && placements == o.placements &&
           std::abs(total_mileage - o.total_mileage) <= kMileageEps;
  }
};

// Eq-style objective: sum over trucks of cost_per_distance times leg distance.
double total_mileage(const Solution& solution, const Instance& instance);

// Whole-solution validation. Returns one Violation per breached constraint;
// empty iff feasible. Never throws on constraint breaches (only on unknown ids).
std::vector<Violation> validate_solution(const Solution& solution, const Instance& instance);

// Refreshes solution.feasibility from validate_solution output.
FeasibilityFlags classify_violations(const std::vector<Violation>& violations);

// Per-truck side constraints: single source city, dock length classes,
// per-route visit caps, must_be_first/must_be_last stop positions.
bool side_constraints_ok(const Truck& truck, const std::vector<ShipmentId>& shipments,
                         const Route& route, const Instance& instance);

// Items coexist on board iff their [pickup, delivery) stop spans intersect.
inline bool items_coexist(const PlacedItem& a, const PlacedItem& b) {
  return a.pickup_stop < b.delivery_stop && b.pickup_stop < a.delivery_stop;
}

inline bool rects_overlap(double u1, double v1, double w1, double l1, double u2, double v2,
                          double w2, double l2) {
  return u1 + w1 > u2 + kGeomEps && u2 + w2 > u1 + kGeomEps && v1 + l1 > v2 + kGeomEps &&
         v2 + l2 > v1 + kGeomEps;
}

// B3 pair rule on a static placement: for delivery(b) before delivery(a) with
// pickup(a) <= pickup(b), require u-disjoint or b fully rear-ward of a.
inline bool sequence_pair_ok(const PlacedItem& a, const PlacedItem& b) {
  if (!(b.delivery_stop < a.delivery_stop && a.pickup_stop <= b.pickup_stop)) return true;
  bool u_disjoint =
      a.u + kGeomEps >= b.u + b.width || b.u + kGeomEps >= a.u + a.width;
  bool b_rearward = b.v + b.length <= a.v + kGeomEps;
  return u_disjoint || b_rearward;
}

}  // namespace vrp2l

#pragma once

#include <cmath>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "vrp2l/model.hpp"

namespace vrp2l::test {

// Hand-built instances: explicit distances, wide defaults everywhere so a
// test only constrains what it is about.
class InstanceBuilder {
public:
  InstanceBuilder() {
    pallet_ = {2.0, 2.0, 2};
    default_distance_ = 10.0;
  }

  InstanceBuilder& yard(const std::string& id) {
    Location loc;
    loc.id = id;
    loc.kind = LocationKind::TruckYard;
    loc.working_window = {0, kMergedHorizon};
    loc.dock_count = 99;
    loc.city = "plants";
    locations_.push_back(loc);
    return *this;
  }

  InstanceBuilder& supplier(const std::string& id, const std::string& city,
                            TimeWindow window = {0, kDayHorizon}, int docks = 99,
                            Minutes handling = 0) {
    Location loc;
    loc.id = id;
    loc.kind = LocationKind::Supplier;
    loc.working_window = window;
    loc.dock_count = docks;
    loc.handling_time = handling;
    loc.city = city;
    locations_.push_back(loc);
    return *this;
  }

  InstanceBuilder& warehouse(const std::string& id, TimeWindow window = {0, kDayHorizon},
                             int docks = 99, Minutes handling = 0) {
    Location loc;
    loc.id = id;
    loc.kind = LocationKind::Warehouse;
    loc.working_window = window;
    loc.dock_count = docks;
    loc.handling_time = handling;
    loc.city = "plants";
    locations_.push_back(loc);
    return *this;
  }

  InstanceBuilder& hub(const std::string& id, TimeWindow window = {0, kDayHorizon},
                       int docks = 99, Minutes handling = 0) {
    Location loc;
    loc.id = id;
    loc.kind = LocationKind::Hub;
    loc.working_window = window;
    loc.dock_count = docks;
    loc.handling_time = handling;
    loc.city = "plants";
    locations_.push_back(loc);
    return *this;
  }

  Location& last_location() { return locations_.back(); }

  InstanceBuilder& truck(const std::string& id, double width = 10, double length = 10,
                         double cost = 1.0, const std::string& length_class = "12m") {
    Truck t;
    t.id = id;
    t.model = "test";
    t.surface_width = width;
    t.surface_length = length;
    t.length_class = length_class;
    t.cost_per_distance = cost;
    t.home_yard = locations_.front().id;
    trucks_.push_back(t);
    return *this;
  }

  InstanceBuilder& shipment(const std::string& id, const std::string& source,
                            const std::string& destination, int bins = 1,
                            BinSpec bin = {1, 1, 1, 4}, bool needs_pallet = false) {
    Shipment s;
    s.id = id;
    s.source = source;
    s.destination = destination;
    s.bin_count = bins;
    s.bin = bin;
    s.needs_pallet = needs_pallet;
    shipments_.push_back(s);
    return *this;
  }

  Shipment& last_shipment() { return shipments_.back(); }

  InstanceBuilder& hub_link(const std::string& up, const std::string& down) {
    hub_links_.push_back({up, down});
    return *this;
  }

  InstanceBuilder& pallet(PalletSpec p) {
    pallet_ = p;
    return *this;
  }

  InstanceBuilder& distance(const std::string& a, const std::string& b, double d,
                            bool symmetric = true) {
    dist_[{a, b}] = d;
    if (symmetric) dist_[{b, a}] = d;
    return *this;
  }

  InstanceBuilder& default_distance(double d) {
    default_distance_ = d;
    return *this;
  }

  Instance build() {
    Instance inst;
    inst.locations = locations_;
    inst.trucks = trucks_;
    inst.shipments = shipments_;
    inst.hub_links = hub_links_;
    inst.pallet = pallet_;
    size_t n = locations_.size();
    inst.travel.distance.assign(n, std::vector<double>(n, 0));
    inst.travel.travel_time.assign(n, std::vector<Minutes>(n, 0));
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j) {
        if (i == j) continue;
        auto stored = dist_.find({locations_[i].id, locations_[j].id});
        double d = stored != dist_.end() ? stored->second : default_distance_;
        inst.travel.distance[i][j] = d;
        inst.travel.travel_time[i][j] = static_cast<Minutes>(std::ceil(d));
      }
    inst.finalize();
    return inst;
  }

private:
  std::vector<Location> locations_;
  std::vector<Truck> trucks_;
  std::vector<Shipment> shipments_;
  std::vector<HubLink> hub_links_;
  PalletSpec pallet_;
  std::map<std::pair<std::string, std::string>, double> dist_;
  double default_distance_ = 10.0;
};

// deterministic helpers over mt19937_64
struct TestRng {
  std::mt19937_64 eng;
  explicit TestRng(std::uint64_t seed) : eng(seed) {}
  int uniform_int(int lo, int hi) {
    return lo + static_cast<int>(eng() % static_cast<std::uint64_t>(hi - lo + 1));
  }
  double uniform(double lo, double hi) {
    return lo + static_cast<double>(eng() >> 11) * 0x1p-53 * (hi - lo);
  }
  bool chance(double p) { return uniform(0, 1) < p; }
};

}  // namespace vrp2l::test

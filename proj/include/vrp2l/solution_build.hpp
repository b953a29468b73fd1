#pragma once

#include <optional>
#include <vector>

#include "vrp2l/model.hpp"
#include "vrp2l/schedule.hpp"

namespace vrp2l {

struct TruckLoad {
  TruckId truck;
  std::vector<ShipmentId> shipments;
  Route route;
  Placement placement;
};

// Assembles a Solution from per-truck loads: runs the global queue
// simulation (settling waits into the routes), recomputes mileage.
// Returns std::nullopt when the queue simulation reports infeasibility.
std::optional<Solution> assemble_solution(std::vector<TruckLoad> loads,
                                          const Instance& instance,
                                          GtwReport* report_out = nullptr);

std::map<TruckId, std::vector<ShipmentId>> loads_by_truck(const Solution& solution);

}  // namespace vrp2l
